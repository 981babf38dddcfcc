#pragma once

// Seeded generators of exact sub-Riemannian structures whose adapted frames
// stay rational, so the whole curvature pipeline runs without square roots.

#include <random>

#include "srcurv/catalog.hpp"
#include "srcurv/structure.hpp"

namespace srcurv::fixtures {

inline Rational random_rational(std::mt19937& rng, int lo, int hi, int max_den = 3) {
  std::uniform_int_distribution<int> num(lo, hi), den(1, max_den);
  return Rational(num(rng)) / Rational(den(rng));
}

// (I - A)(I + A)^{-1} for a random skew A: a rational orthogonal matrix.
inline Matrix<Rational> cayley(std::mt19937& rng, int n) {
  Matrix<Rational> a = Matrix<Rational>::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = random_rational(rng, -2, 2, 2);
      a(j, i) = -a(i, j);
    }
  Matrix<Rational> id = identity<Rational>(n);
  return Matrix<Rational>((id - a) * inverse<Rational>(Matrix<Rational>(id + a)));
}

// Upper triangular with positive diagonal. Gram-Schmidt of the standard basis
// under L^T L returns L^{-1}, which is rational.
inline Matrix<Rational> random_cholesky(std::mt19937& rng, int n) {
  Matrix<Rational> l = Matrix<Rational>::Zero(n, n);
  std::uniform_int_distribution<int> diag(1, 3);
  for (int i = 0; i < n; ++i) {
    l(i, i) = Rational(diag(rng)) / Rational(diag(rng));
    for (int j = i + 1; j < n; ++j) l(i, j) = random_rational(rng, -1, 1, 2);
  }
  return l;
}

inline Matrix<Rational> block_diag(const Matrix<Rational>& a, const Matrix<Rational>& b) {
  Matrix<Rational> out = Matrix<Rational>::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// 2-step nilpotent algebra on V1 + V2 with random brackets V1 x V1 -> V2,
// D = V1, rigging = V2 (so [g, g] lies in the rigging) and a random metric
// making V1 and V2 orthogonal.
inline SubRiemannianStructure<Rational> random_two_step(std::mt19937& rng) {
  std::uniform_int_distribution<int> pick_m(2, 4), pick_k(1, 3);
  const int m = pick_m(rng), k = pick_k(rng), n = m + k;
  std::vector<BracketTerm<Rational>> terms;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int l = 0; l < k; ++l) {
        Rational c = random_rational(rng, -2, 2);
        if (c != 0) terms.push_back({i, j, m + l, c});
      }
  LieAlgebra<Rational> a = LieAlgebra<Rational>::from_terms("random_two_step", n, terms);
  Matrix<Rational> lh = random_cholesky(rng, m), lv = random_cholesky(rng, k);
  Matrix<Rational> metric = block_diag(Matrix<Rational>(lh.transpose() * lh), Matrix<Rational>(lv.transpose() * lv));
  Matrix<Rational> id = identity<Rational>(n);
  return SubRiemannianStructure<Rational>(a, id.leftCols(m), Matrix<Rational>(id.rightCols(k)), metric);
}

// The algebra of a catalog entry with the identity metric and D, rigging
// spanned by the columns of a random rational rotation.
inline SubRiemannianStructure<Rational> random_rotation_of(const LieAlgebra<Rational>& a, int m,
                                                            std::mt19937& rng) {
  const int n = a.dim();
  Matrix<Rational> q = cayley(rng, n);
  return SubRiemannianStructure<Rational>(a, q.leftCols(m), Matrix<Rational>(q.rightCols(n - m)),
                                          identity<Rational>(n));
}

// Mix of rotated catalog algebras and random 2-step structures.
inline std::vector<SubRiemannianStructure<Rational>> random_structures(unsigned seed, int count) {
  std::mt19937 rng(seed);
  const std::vector<std::string> bases = {"so3", "sl2_elliptic", "heis3", "engel", "liu_sussman_A",
                                          "hyperbolic_plane_algebra"};
  std::vector<SubRiemannianStructure<Rational>> out;
  for (int i = 0; i < count; ++i) {
    if (i % 2 == 0) {
      out.push_back(random_two_step(rng));
    } else {
      const auto& id = bases[static_cast<std::size_t>(i / 2) % bases.size()];
      LieAlgebra<Rational> a = builtin_exact(id).algebra();
      std::uniform_int_distribution<int> pick_m(2, a.dim() - 1);
      out.push_back(random_rotation_of(a, pick_m(rng), rng));
    }
  }
  return out;
}

}  // namespace srcurv::fixtures
