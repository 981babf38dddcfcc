#pragma once

#include <vector>

#include "srcurv/solovev.hpp"

namespace srcurv {

/// Derived flag D = D_0 < D_1 < ... < D_r = g split as D_{i+1} = D_i + Theta_i.
///
/// Everything is expressed in the working basis B: an orthonormal frame of D
/// followed by bases of Theta_0, Theta_1, ... (Theta_i is the ambient-orthogonal
/// complement of D_i inside D_{i+1}). The quotient D_{i+1}/D_i is represented by
/// Theta_i coordinates, so theta_i is an identity matrix and pi_i picks the
/// Theta_i block of a D_{i+1} coordinate vector.
template <class T>
struct FlagDecomposition {
  Flag<T> flag;
  Matrix<T> basis;                       // columns of B in algebra coordinates
  std::vector<int> layers;               // dim D_0, dim D_1, ..., dim D_r = n
  std::vector<Matrix<T>> thetas;         // Theta_i bases, algebra coordinates
  std::vector<Matrix<T>> theta_maps;     // theta_i (identity in Theta_i coordinates)
  std::vector<Matrix<T>> projections;    // pi_i : D_{i+1} coords -> Theta_i coords
  std::vector<Matrix<T>> delta_maps;     // delta_i : wedge basis of D_i -> Theta_i coords
  std::vector<Matrix<T>> vertical_gram;  // {.,.} on Theta_i (after canonical_vertical_metric)
  Matrix<T> gram;                        // {.,.} on B, block diagonal
  Tensor3<T> c;                          // structure constants in B: [b_i, b_j] = sum_k c(i,j,k) b_k
  double tol = kDefaultTol;

  int r() const { return static_cast<int>(layers.size()) - 1; }
  int n() const { return layers.back(); }
  /// Index pairs (a, b), a < b < dim D_i, in the order used by delta_i and mu_i.
  std::vector<std::pair<int, int>> wedge_pairs(int i) const;
};

/// Throws PreconditionError when D is not bracket-generating or already equals g.
template <class T>
FlagDecomposition<T> flag_decomposition(const SubRiemannianStructure<T>& s);

/// Gram matrix on the wedge basis {e_a ^ e_b : a < b} of the given inner product:
/// <u1^v1, u2^v2> = <u1,u2><v1,v2> - <u1,v2><v1,u2>.
template <class T>
Matrix<T> wedge_inner_product(const Matrix<T>& gram);

/// Fills vertical_gram and gram stage by stage: {.,.}|Theta_i = (delta_i W_i^{-1} delta_i^T)^{-1},
/// W_i the wedge Gram of {.,.} on D_i.
template <class T>
FlagDecomposition<T> canonical_vertical_metric(FlagDecomposition<T> f);

/// {.,.} as a Gram matrix on the algebra basis (B^{-T} gram B^{-1}).
template <class T>
Matrix<T> canonical_metric_algebra(const FlagDecomposition<T>& f);

/// mu_i as a (#wedge pairs of D_i) x (dim D_{i+1}) matrix; zero on the D_i columns.
template <class T>
Matrix<T> mu_morphism(const FlagDecomposition<T>& f, int i);

/// K(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{H[X,Y]} Z - H[V[X,Y], Z]
/// with nabla = H(Levi-Civita), on the D-part of the adapted frame.
template <class T>
CurvatureTensor<T> schouten_tensor(const AdaptedStructure<T>& s);

template <class T>
struct WagnerOptions {
  T alternation = T(1);  // factor on the difference odot_X odot_Y - odot_Y odot_X
};

/// One stage of the recursion. Stage 0 holds the Schouten tensor. Stage k >= 1 holds
/// odot^(k)_X Y for X in D_k, Y in D_{k-1} and K^(k)(X ^ Y) Z for X, Y in D_k,
/// Z in D_{k-1}, all in B coordinates.
template <class T>
struct WagnerStage {
  int stage = 0;
  Tensor3<T> connection;  // (dim D_k, dim D_{k-1}, dim D_{k-1}); empty for stage 0
  Tensor4<T> tensor;      // (dim D_k, dim D_k, dim D_{k-1}, dim D_{k-1}); stage 0: (m, m, m, m)
  int domain_violations = 0;  // odot evaluations where K^(k-1) had to drop a component of Y
};

template <class T>
struct WagnerResult {
  FlagDecomposition<T> flag;
  std::vector<WagnerStage<T>> stages;  // 0..r
  const WagnerStage<T>& final_stage() const { return stages.back(); }
};

template <class T>
WagnerResult<T> wagner_iterate(const SubRiemannianStructure<T>& s, const WagnerOptions<T>& opts = {});

/// True when the final Wagner tensor vanishes.
template <class T>
bool absolute_parallelism(const WagnerResult<T>& w);

}  // namespace srcurv
