#pragma once

#include <optional>
#include <string>
#include <vector>

#include "srcurv/lie_algebra.hpp"

namespace srcurv {

/// Left-invariant rigged sub-Riemannian structure: distribution D, rigging
/// Dperp, and an ambient inner product g (Gram matrix in the algebra basis)
/// making D and Dperp orthogonal. The sub-Riemannian metric is g restricted to D.
template <class T>
class SubRiemannianStructure {
 public:
  /// `rigging` defaults to the g-orthogonal complement of D; `metric` to the identity.
  SubRiemannianStructure(LieAlgebra<T> algebra, Matrix<T> distribution,
                         std::optional<Matrix<T>> rigging = std::nullopt,
                         std::optional<Matrix<T>> metric = std::nullopt);

  const LieAlgebra<T>& algebra() const { return algebra_; }
  const Matrix<T>& distribution() const { return distribution_; }
  const Matrix<T>& rigging() const { return rigging_; }
  const Matrix<T>& metric() const { return metric_; }
  int dim() const { return algebra_.dim(); }
  int rank() const { return static_cast<int>(distribution_.cols()); }
  double tol() const { return algebra_.tol(); }

 private:
  LieAlgebra<T> algebra_;
  Matrix<T> distribution_;
  Matrix<T> rigging_;
  Matrix<T> metric_;
};

/// Orthonormal frame adapted to D + Dperp: the first m columns span D.
template <class T>
struct OrthonormalFrame {
  Matrix<T> vectors;
  int m = 0;
};

/// Gram-Schmidt inside D, then inside Dperp, processing the given basis
/// vectors in order. Exact mode throws InexactError when a norm is irrational.
template <class T>
OrthonormalFrame<T> adapted_frame(const SubRiemannianStructure<T>& s);

/// Rows form a basis of the covectors vanishing on span(distribution).
template <class T>
Matrix<T> annihilator(const LieAlgebra<T>& a, const Matrix<T>& distribution);

template <class T>
struct RiggingWitness {
  int condition;   // 1, 2 or 3
  Vector<T> w;     // first bracket argument
  Vector<T> x;     // second bracket argument
  int form_index;  // which annihilating form detects the violation (row index)
  T value;         // the nonzero pairing omega_i([w, x])
};

template <class T>
struct RiggingReport {
  bool cond1 = false;  // [Dperp, D] inside D
  bool cond2 = false;  // literal: [Dperp, D] inside Dperp
  bool cond3 = false;  // [g, g] inside Dperp
  bool dperp_is_ideal = false;  // [Dperp, g] inside Dperp
  bool dperp_is_subalgebra = false;
  std::vector<RiggingWitness<T>> witnesses;  // one per failing check
};

template <class T>
RiggingReport<T> rigging_conditions(const SubRiemannianStructure<T>& s);

template <class T>
struct ContactReport {
  bool is_contact = false;
  Vector<T> omega;                 // annihilating covector of the hyperplane D
  std::optional<Vector<T>> reeb;   // omega(reeb) = 1, domega(reeb, .) = 0
  Matrix<T> domega_on_d;           // domega(d_a, d_b) on the given D basis
  Matrix<T> domega;                // full skew matrix on the algebra basis
};

/// Contact test for a hyperplane distribution in odd dimension, with
/// domega(x, y) = -omega([x, y]) on left-invariant fields.
template <class T>
ContactReport<T> contact_check(const SubRiemannianStructure<T>& s);

enum class Class3d { no_nonholonomic_rank2, contact_admitting };

template <class T>
struct Classification3d {
  Class3d kind;
  std::optional<Matrix<T>> witness;  // rank-2 bracket-generating distribution
  std::string reason;
};

template <class T>
Classification3d<T> classify_3d(const LieAlgebra<T>& a);

std::string to_string(Class3d c);

/// Float copy of an exact structure (used when exact orthonormalization fails).
template <class To, class From>
SubRiemannianStructure<To> convert_structure(const SubRiemannianStructure<From>& s) {
  return SubRiemannianStructure<To>(convert_algebra<To>(s.algebra()), convert<To>(s.distribution()),
                                    convert<To>(s.rigging()), convert<To>(s.metric()));
}

}  // namespace srcurv
