#include "srcurv/lie_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "srcurv/errors.hpp"

namespace srcurv {

namespace {

template <class T>
T abs_value(const T& x) {
  return x < 0 ? T(-x) : x;
}

template <class T>
Matrix<T> brackets_of(const LieAlgebra<T>& a, const Matrix<T>& left, const Matrix<T>& right) {
  Matrix<T> out(a.dim(), left.cols() * right.cols());
  Eigen::Index col = 0;
  for (Eigen::Index p = 0; p < left.cols(); ++p)
    for (Eigen::Index q = 0; q < right.cols(); ++q)
      out.col(col++) = bracket<T>(a, left.col(p), right.col(q));
  return out;
}

}  // namespace

template <class T>
LieAlgebra<T>::LieAlgebra(std::string name, Tensor3<T> structure, std::vector<std::string> labels,
                          double tol)
    : name_(std::move(name)), n_(structure.dim(0)), c_(std::move(structure)),
      labels_(std::move(labels)), tol_(tol) {
  if (n_ < kMinDim || n_ > kMaxDim)
    throw InputError("algebra '" + name_ + "': dimension " + std::to_string(n_) +
                     " outside [2, 16]");
  if (c_.dim(1) != n_ || c_.dim(2) != n_)
    throw InputError("algebra '" + name_ + "': structure tensor is not n x n x n");
  if (labels_.empty())
    for (int i = 0; i < n_; ++i) labels_.push_back("e" + std::to_string(i + 1));
  if (static_cast<int>(labels_.size()) != n_)
    throw InputError("algebra '" + name_ + "': wrong number of basis labels");
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        if constexpr (ScalarOps<T>::mode == NumericMode::floating)
          if (!std::isfinite(c_(i, j, k)))
            throw InputError("algebra '" + name_ + "': non-finite structure constant");
        if (!is_zero<T>(c_(i, j, k) + c_(j, i, k), tol_)) {
          std::ostringstream msg;
          msg << "algebra '" << name_ << "': structure constants not antisymmetric at (" << i + 1
              << "," << j + 1 << "," << k + 1 << ")";
          throw InputError(msg.str());
        }
      }
}

template <class T>
LieAlgebra<T> LieAlgebra<T>::from_terms(std::string name, int n,
                                        const std::vector<BracketTerm<T>>& terms,
                                        std::vector<std::string> labels, double tol) {
  if (n < kMinDim || n > kMaxDim)
    throw InputError("algebra '" + name + "': dimension " + std::to_string(n) + " outside [2, 16]");
  Tensor3<T> c({n, n, n});
  for (const auto& t : terms) {
    if (t.i < 0 || t.j < 0 || t.k < 0 || t.i >= n || t.j >= n || t.k >= n)
      throw InputError("algebra '" + name + "': bracket index out of range");
    if (t.i == t.j) {
      if (t.coeff != T(0)) throw InputError("algebra '" + name + "': nonzero [e_i, e_i]");
      continue;
    }
    c(t.i, t.j, t.k) += t.coeff;
    c(t.j, t.i, t.k) -= t.coeff;
  }
  return LieAlgebra(std::move(name), std::move(c), std::move(labels), tol);
}

template <class T>
Vector<T> LieAlgebra<T>::basis_vector(int i) const {
  Vector<T> v = Vector<T>::Zero(n_);
  v(i) = T(1);
  return v;
}

template <class T>
Vector<T> bracket(const LieAlgebra<T>& a, const Vector<T>& x, const Vector<T>& y) {
  const int n = a.dim();
  if (x.size() != n || y.size() != n) throw InputError("bracket: dimension mismatch");
  Vector<T> out = Vector<T>::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (x(i) == T(0)) continue;
    for (int j = 0; j < n; ++j) {
      if (y(j) == T(0)) continue;
      T xy = x(i) * y(j);
      for (int k = 0; k < n; ++k)
        if (a.c(i, j, k) != T(0)) out(k) += xy * a.c(i, j, k);
    }
  }
  return out;
}

template <class T>
T jacobi_defect(const LieAlgebra<T>& a) {
  const int n = a.dim();
  T worst(0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Vector<T> ei = a.basis_vector(i), ej = a.basis_vector(j), ek = a.basis_vector(k);
        Vector<T> s = bracket<T>(a, ei, bracket<T>(a, ej, ek)) +
                      bracket<T>(a, ej, bracket<T>(a, ek, ei)) +
                      bracket<T>(a, ek, bracket<T>(a, ei, ej));
        for (int t = 0; t < n; ++t) worst = std::max(worst, abs_value(s(t)));
      }
  return worst;
}

template <class T>
Matrix<T> ad_matrix(const LieAlgebra<T>& a, const Vector<T>& u) {
  const int n = a.dim();
  if (u.size() != n) throw InputError("ad_matrix: dimension mismatch");
  Matrix<T> m = Matrix<T>::Zero(n, n);
  for (int j = 0; j < n; ++j) m.col(j) = bracket<T>(a, u, a.basis_vector(j));
  return m;
}

template <class T>
Flag<T> derived_flag(const LieAlgebra<T>& a, const Matrix<T>& distribution) {
  if (distribution.rows() != a.dim()) throw InputError("derived_flag: dimension mismatch");
  Flag<T> flag;
  Matrix<T> current = independent_columns<T>(distribution);
  if (current.cols() == 0) throw InputError("derived_flag: empty distribution");
  flag.subspaces.push_back(current);
  flag.growth_vector.push_back(static_cast<int>(current.cols()));
  while (current.cols() < a.dim()) {
    Matrix<T> next = independent_columns<T>(hstack<T>(current, brackets_of(a, current, current)));
    flag.growth_vector.push_back(static_cast<int>(next.cols()));
    if (next.cols() == current.cols()) break;
    flag.subspaces.push_back(next);
    current = next;
  }
  flag.nonholonomy_order = static_cast<int>(flag.subspaces.size()) - 1;
  flag.bracket_generating = current.cols() == a.dim();
  return flag;
}

template <class T>
std::vector<int> lower_central_series(const LieAlgebra<T>& a) {
  Matrix<T> whole = identity<T>(a.dim());
  Matrix<T> term = whole;
  std::vector<int> dims{a.dim()};
  while (term.cols() > 0) {
    Matrix<T> next = independent_columns<T>(brackets_of(a, whole, term));
    if (next.cols() == term.cols()) break;
    dims.push_back(static_cast<int>(next.cols()));
    term = next;
  }
  return dims;
}

template <class T>
std::variant<Grading<T>, GradingFailure> carnot_grading(const LieAlgebra<T>& a, const Matrix<T>& v,
                                                        const Matrix<T>& gram) {
  Flag<T> flag = derived_flag(a, v);
  if (!flag.bracket_generating)
    throw PreconditionError("carnot_grading: subspace is not bracket-generating");
  if (lower_central_series(a).back() != 0)
    return GradingFailure{GradingFailureKind::not_nilpotent, "lower central series does not reach 0"};
  Grading<T> grading;
  grading.layers.push_back(flag.subspaces.front());
  for (std::size_t k = 1; k < flag.subspaces.size(); ++k) {
    const Matrix<T>& lower = flag.subspaces[k - 1];
    // Complement of D_{k-1} inside D_k: vectors of D_k orthogonal to D_{k-1}.
    Matrix<T> constraints = lower.transpose() * gram * flag.subspaces[k];
    Matrix<T> coeffs = null_space<T>(constraints);
    grading.layers.push_back(flag.subspaces[k] * coeffs);
  }
  const int l = grading.step();
  for (int p = 0; p < l; ++p)
    for (int q = p; q < l; ++q) {
      const int target = p + q + 1;  // 0-based index of g_{(p+1)+(q+1)}
      Matrix<T> products = brackets_of(a, grading.layers[p], grading.layers[q]);
      for (Eigen::Index c = 0; c < products.cols(); ++c) {
        Vector<T> w = products.col(c);
        bool ok = target < l ? in_span<T>(grading.layers[target], w) : vector_is_zero<T>(w, a.tol());
        if (!ok) {
          std::ostringstream msg;
          msg << "[g_" << p + 1 << ", g_" << q + 1 << "] is not contained in g_" << target + 1;
          return GradingFailure{GradingFailureKind::compatibility_fails, msg.str()};
        }
      }
    }
  return grading;
}

template <class T>
Tensor3<T> structure_constants_metric(const LieAlgebra<T>& a, const Matrix<T>& frame,
                                      const Matrix<T>& gram) {
  const int n = a.dim();
  if (frame.rows() != n || frame.cols() != n || gram.rows() != n || gram.cols() != n)
    throw InputError("structure_constants_metric: dimension mismatch");
  Matrix<T> g_frame = frame.transpose() * gram * frame;
  if (!matrix_is_zero<T>(Matrix<T>(g_frame - identity<T>(n)), a.tol()))
    throw InputError("structure_constants_metric: frame is not orthonormal");
  Tensor3<T> c({n, n, n});
  Matrix<T> dual = frame.transpose() * gram;  // rows pair a vector with each frame vector
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vector<T> b = bracket<T>(a, frame.col(i), frame.col(j));
      Vector<T> coords = dual * b;
      for (int k = 0; k < n; ++k) c(i, j, k) = coords(k);
    }
  return c;
}

template <class T>
LieAlgebra<T> change_basis(const LieAlgebra<T>& a, const Matrix<T>& basis, std::string name) {
  const int n = a.dim();
  Matrix<T> inv = inverse<T>(basis);
  Tensor3<T> c({n, n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vector<T> coords = inv * bracket<T>(a, basis.col(i), basis.col(j));
      for (int k = 0; k < n; ++k) c(i, j, k) = coords(k);
    }
  return LieAlgebra<T>(std::move(name), std::move(c), {}, a.tol());
}

template <class To, class From>
LieAlgebra<To> convert_algebra(const LieAlgebra<From>& a) {
  const int n = a.dim();
  Tensor3<To> c({n, n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if constexpr (std::is_same_v<To, double>)
          c(i, j, k) = ScalarOps<From>::to_double(a.c(i, j, k));
        else
          c(i, j, k) = To(a.c(i, j, k));
      }
  return LieAlgebra<To>(a.name(), std::move(c), a.labels(), a.tol());
}

#define SRCURV_INSTANTIATE(T)                                                                    \
  template class LieAlgebra<T>;                                                                  \
  template Vector<T> bracket<T>(const LieAlgebra<T>&, const Vector<T>&, const Vector<T>&);       \
  template T jacobi_defect<T>(const LieAlgebra<T>&);                                             \
  template Matrix<T> ad_matrix<T>(const LieAlgebra<T>&, const Vector<T>&);                       \
  template Flag<T> derived_flag<T>(const LieAlgebra<T>&, const Matrix<T>&);                      \
  template std::vector<int> lower_central_series<T>(const LieAlgebra<T>&);                       \
  template std::variant<Grading<T>, GradingFailure> carnot_grading<T>(                           \
      const LieAlgebra<T>&, const Matrix<T>&, const Matrix<T>&);                                 \
  template Tensor3<T> structure_constants_metric<T>(const LieAlgebra<T>&, const Matrix<T>&,      \
                                                    const Matrix<T>&);                           \
  template LieAlgebra<T> change_basis<T>(const LieAlgebra<T>&, const Matrix<T>&, std::string);

SRCURV_INSTANTIATE(Rational)
SRCURV_INSTANTIATE(double)
#undef SRCURV_INSTANTIATE

template LieAlgebra<double> convert_algebra<double, Rational>(const LieAlgebra<Rational>&);
template LieAlgebra<double> convert_algebra<double, double>(const LieAlgebra<double>&);
template LieAlgebra<Rational> convert_algebra<Rational, Rational>(const LieAlgebra<Rational>&);

}  // namespace srcurv
