#pragma once

#include <optional>
#include <vector>

#include "srcurv/errors.hpp"
#include "srcurv/scalar.hpp"

namespace srcurv {

template <class T>
struct Echelon {
  Matrix<T> reduced;        // reduced row echelon form
  std::vector<int> pivots;  // pivot column of each nonzero row
};

/// Gauss-Jordan elimination. Exact mode pivots on the first nonzero entry;
/// floating mode uses partial pivoting and treats |x| <= kPivotTol as zero.
template <class T>
Echelon<T> rref(Matrix<T> a) {
  Echelon<T> out;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
    Eigen::Index best = -1;
    double best_mag = 0;
    for (Eigen::Index r = row; r < rows; ++r) {
      if (!ScalarOps<T>::is_pivot(a(r, col))) continue;
      if constexpr (ScalarOps<T>::mode == NumericMode::exact) {
        best = r;
        break;
      } else {
        double mag = ScalarOps<T>::magnitude(a(r, col));
        if (mag > best_mag) best_mag = mag, best = r;
      }
    }
    if (best < 0) {
      if constexpr (ScalarOps<T>::mode == NumericMode::floating)
        for (Eigen::Index r = row; r < rows; ++r) a(r, col) = T(0);
      continue;
    }
    if (best != row) a.row(best).swap(a.row(row));
    T inv = T(1) / a(row, col);
    a.row(row) *= inv;
    a(row, col) = T(1);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (r == row || a(r, col) == T(0)) continue;
      T factor = a(r, col);
      a.row(r) -= factor * a.row(row);
      a(r, col) = T(0);
    }
    out.pivots.push_back(static_cast<int>(col));
    ++row;
  }
  out.reduced = std::move(a);
  return out;
}

template <class T>
int rank(const Matrix<T>& a) {
  if (a.size() == 0) return 0;
  return static_cast<int>(rref(a).pivots.size());
}

/// Basis (as columns) of {x : a x = 0}; one column per free variable.
template <class T>
Matrix<T> null_space(const Matrix<T>& a) {
  const int cols = static_cast<int>(a.cols());
  if (a.rows() == 0) return identity<T>(cols);
  Echelon<T> e = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (int p : e.pivots) is_pivot[p] = true;
  std::vector<int> free;
  for (int c = 0; c < cols; ++c)
    if (!is_pivot[c]) free.push_back(c);
  Matrix<T> basis = Matrix<T>::Zero(cols, static_cast<Eigen::Index>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) {
    basis(free[k], k) = T(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) basis(e.pivots[r], k) = -e.reduced(r, free[k]);
  }
  return basis;
}

/// The linearly independent columns of `a` (first occurrences, in order).
template <class T>
Matrix<T> independent_columns(const Matrix<T>& a) {
  if (a.cols() == 0) return a;
  Echelon<T> e = rref(a);
  Matrix<T> out(a.rows(), static_cast<Eigen::Index>(e.pivots.size()));
  for (std::size_t k = 0; k < e.pivots.size(); ++k) out.col(k) = a.col(e.pivots[k]);
  return out;
}

/// A solution of a x = b, or nullopt if inconsistent. Free variables are set to 0.
template <class T>
std::optional<Vector<T>> solve(const Matrix<T>& a, const Vector<T>& b) {
  Matrix<T> aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  Echelon<T> e = rref(aug);
  Vector<T> x = Vector<T>::Zero(a.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == a.cols()) return std::nullopt;
    x(e.pivots[r]) = e.reduced(r, a.cols());
  }
  if constexpr (ScalarOps<T>::mode == NumericMode::floating) {
    Vector<T> resid = a * x - b;
    double scale = 1.0 + b.cwiseAbs().maxCoeff();
    if (resid.size() > 0 && resid.cwiseAbs().maxCoeff() > 1e-8 * scale) return std::nullopt;
  }
  return x;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw InputError("inverse of a non-square matrix");
  const Eigen::Index n = a.rows();
  Matrix<T> aug(n, 2 * n);
  aug.leftCols(n) = a;
  aug.rightCols(n) = identity<T>(static_cast<int>(n));
  Echelon<T> e = rref(aug);
  for (Eigen::Index k = 0; k < n; ++k)
    if (k >= static_cast<Eigen::Index>(e.pivots.size()) || e.pivots[k] != k)
      throw NumericError("singular matrix");
  return e.reduced.rightCols(n);
}

/// Coordinates of v in the basis given by the columns of `basis`, if v lies in its span.
template <class T>
std::optional<Vector<T>> coordinates(const Matrix<T>& basis, const Vector<T>& v) {
  return solve<T>(basis, v);
}

template <class T>
bool in_span(const Matrix<T>& basis, const Vector<T>& v) {
  return coordinates(basis, v).has_value();
}

/// Columns of `a` followed by columns of `b`.
template <class T>
Matrix<T> hstack(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  Matrix<T> out(a.rows(), a.cols() + b.cols());
  out.leftCols(a.cols()) = a;
  out.rightCols(b.cols()) = b;
  return out;
}

template <class T>
T inner(const Vector<T>& u, const Matrix<T>& gram, const Vector<T>& v) {
  return (u.transpose() * gram * v)(0, 0);
}

/// Gram-Schmidt orthogonalization (no normalization, so exact arithmetic stays
/// rational). Each candidate is orthogonalized against `against` (assumed
/// mutually orthogonal) and against previously accepted candidates; candidates
/// that vanish are dropped.
template <class T>
Matrix<T> orthogonalize(const Matrix<T>& candidates, const Matrix<T>& gram,
                        const Matrix<T>& against, double tol = kDefaultTol) {
  std::vector<Vector<T>> accepted;
  std::vector<Vector<T>> base;
  for (Eigen::Index k = 0; k < against.cols(); ++k) base.push_back(against.col(k));
  for (Eigen::Index k = 0; k < candidates.cols(); ++k) {
    Vector<T> w = candidates.col(k);
    for (int pass = 0; pass < (ScalarOps<T>::mode == NumericMode::exact ? 1 : 2); ++pass) {
      for (const auto* list : {&base, &accepted})
        for (const Vector<T>& b : *list) {
          T bb = inner(b, gram, b);
          w -= (inner(b, gram, w) / bb) * b;
        }
    }
    bool zero = true;
    for (Eigen::Index i = 0; i < w.size(); ++i)
      if (!is_zero(w(i), tol * 10)) zero = false;
    if constexpr (ScalarOps<T>::mode == NumericMode::floating) {
      double norm_c = candidates.col(k).norm();
      if (w.norm() <= 1e-9 * (1.0 + norm_c)) zero = true;
    }
    if (!zero) accepted.push_back(w);
  }
  Matrix<T> out(candidates.rows(), static_cast<Eigen::Index>(accepted.size()));
  for (std::size_t k = 0; k < accepted.size(); ++k) out.col(k) = accepted[k];
  return out;
}

/// Basis of the g-orthogonal complement of span(a) in the whole space.
template <class T>
Matrix<T> orthogonal_complement(const Matrix<T>& a, const Matrix<T>& gram) {
  // v is orthogonal to span(a) iff a^T g v = 0.
  Matrix<T> constraints = a.transpose() * gram;
  return null_space<T>(constraints);
}

template <class T>
bool matrix_is_zero(const Matrix<T>& m, double tol = kDefaultTol) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!is_zero(m(i, j), tol)) return false;
  return true;
}

template <class T>
bool vector_is_zero(const Vector<T>& v, double tol = kDefaultTol) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!is_zero(v(i), tol)) return false;
  return true;
}

/// Symmetric positive definite test by pivoted-free LDL^T elimination.
template <class T>
bool is_spd(const Matrix<T>& g, double tol = kDefaultTol) {
  if (g.rows() != g.cols()) return false;
  if (!matrix_is_zero<T>(Matrix<T>(g - g.transpose()), tol)) return false;
  Matrix<T> a = g;
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if constexpr (ScalarOps<T>::mode == NumericMode::exact) {
      if (a(k, k) <= 0) return false;
    } else {
      if (a(k, k) <= tol) return false;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      T f = a(i, k) / a(k, k);
      for (Eigen::Index j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return true;
}

}  // namespace srcurv
