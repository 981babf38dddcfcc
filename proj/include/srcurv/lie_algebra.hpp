#pragma once

#include <string>
#include <variant>
#include <vector>

#include "srcurv/linalg.hpp"
#include "srcurv/scalar.hpp"
#include "srcurv/tensor.hpp"

namespace srcurv {

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 16;

/// One structure constant: [e_i, e_j] contains coeff * e_k (0-based indices).
template <class T>
struct BracketTerm {
  int i;
  int j;
  int k;
  T coeff;
};

/// Finite-dimensional Lie algebra presented by structure constants
/// c(i, j, k), with [e_i, e_j] = sum_k c(i, j, k) e_k.
///
/// Construction checks the dimension bounds and antisymmetry; the Jacobi
/// identity is checked separately (see jacobi_defect) so that invalid inputs
/// can still be inspected and reported.
template <class T>
class LieAlgebra {
 public:
  LieAlgebra(std::string name, Tensor3<T> structure, std::vector<std::string> labels = {},
             double tol = kDefaultTol);

  /// Builds the tensor from the listed brackets and their antisymmetric completion.
  static LieAlgebra from_terms(std::string name, int n, const std::vector<BracketTerm<T>>& terms,
                               std::vector<std::string> labels = {}, double tol = kDefaultTol);

  const std::string& name() const { return name_; }
  int dim() const { return n_; }
  double tol() const { return tol_; }
  const T& c(int i, int j, int k) const { return c_(i, j, k); }
  const Tensor3<T>& structure() const { return c_; }
  const std::vector<std::string>& labels() const { return labels_; }
  Vector<T> basis_vector(int i) const;

 private:
  std::string name_;
  int n_;
  Tensor3<T> c_;
  std::vector<std::string> labels_;
  double tol_;
};

template <class T>
Vector<T> bracket(const LieAlgebra<T>& a, const Vector<T>& x, const Vector<T>& y);

/// max over basis triples of the sup-norm of the cyclic Jacobi sum.
template <class T>
T jacobi_defect(const LieAlgebra<T>& a);

/// Matrix of ad_u: v -> [u, v].
template <class T>
Matrix<T> ad_matrix(const LieAlgebra<T>& a, const Vector<T>& u);

/// Derived flag D = D_0 < D_1 < ... with D_{i+1} = D_i + [D_i, D_i].
template <class T>
struct Flag {
  std::vector<Matrix<T>> subspaces;  // nested bases, strictly increasing
  std::vector<int> growth_vector;    // dimensions; a repeated last entry marks stagnation
  int nonholonomy_order = 0;         // r
  bool bracket_generating = false;
};

template <class T>
Flag<T> derived_flag(const LieAlgebra<T>& a, const Matrix<T>& distribution);

template <class T>
struct Grading {
  std::vector<Matrix<T>> layers;  // g_1, ..., g_l as column bases
  int step() const { return static_cast<int>(layers.size()); }
};

enum class GradingFailureKind { not_nilpotent, compatibility_fails };

struct GradingFailure {
  GradingFailureKind kind;
  std::string detail;
};

/// Attempts g_k = D_{k-1} minus D_{k-2} (orthogonal complement w.r.t. `gram`) and
/// checks [g_a, g_b] inside g_{a+b}. Throws PreconditionError when `v` is not
/// bracket-generating.
template <class T>
std::variant<Grading<T>, GradingFailure> carnot_grading(const LieAlgebra<T>& a, const Matrix<T>& v,
                                                        const Matrix<T>& gram);

template <class T>
std::variant<Grading<T>, GradingFailure> carnot_grading(const LieAlgebra<T>& a, const Matrix<T>& v) {
  return carnot_grading(a, v, identity<T>(a.dim()));
}

/// Lower central series dimensions; the algebra is nilpotent iff it ends at 0.
template <class T>
std::vector<int> lower_central_series(const LieAlgebra<T>& a);

/// c_{ijk} = <[f_i, f_j], f_k> in an orthonormal frame (columns of `frame`).
/// Throws InputError when the frame is not orthonormal for `gram`.
template <class T>
Tensor3<T> structure_constants_metric(const LieAlgebra<T>& a, const Matrix<T>& frame,
                                      const Matrix<T>& gram);

/// The same algebra written in another basis (columns of `basis`, in old coordinates).
template <class T>
LieAlgebra<T> change_basis(const LieAlgebra<T>& a, const Matrix<T>& basis, std::string name);

template <class To, class From>
LieAlgebra<To> convert_algebra(const LieAlgebra<From>& a);

}  // namespace srcurv
