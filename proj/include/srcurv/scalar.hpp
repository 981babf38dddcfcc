#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace srcurv {

/// Exact rational scalar. Expression templates are disabled so that the type
/// behaves like a plain value inside Eigen kernels.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <class T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

enum class NumericMode { exact, floating };

/// Default predicate tolerance in floating mode.
inline constexpr double kDefaultTol = 1e-9;
/// Pivot threshold for rank-revealing elimination in floating mode.
inline constexpr double kPivotTol = 1e-10;

template <class T>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
  static constexpr NumericMode mode = NumericMode::exact;
  static bool is_zero(const Rational& x, double /*tol*/) { return x == 0; }
  static bool is_pivot(const Rational& x) { return x != 0; }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static double magnitude(const Rational& x) { return std::fabs(to_double(x)); }
  /// Exact square root when the value is the square of a rational.
  static std::optional<Rational> sqrt(const Rational& x);
  static std::string format(const Rational& x);
  static Rational parse(std::string_view s);
};

template <>
struct ScalarOps<double> {
  static constexpr NumericMode mode = NumericMode::floating;
  static bool is_zero(double x, double tol) { return std::fabs(x) <= tol; }
  static bool is_pivot(double x) { return std::fabs(x) > kPivotTol; }
  static double to_double(double x) { return x; }
  static double magnitude(double x) { return std::fabs(x); }
  static std::optional<double> sqrt(double x) {
    if (x < 0) return std::nullopt;
    return std::sqrt(x);
  }
  static std::string format(double x);
  static double parse(std::string_view s);
};

template <class T>
bool is_zero(const T& x, double tol = kDefaultTol) {
  return ScalarOps<T>::is_zero(x, tol);
}

template <class T>
std::string format_scalar(const T& x) {
  return ScalarOps<T>::format(x);
}

/// True when the string is an integer or a "p/q" fraction (no decimal point or
/// exponent), i.e. it can be read exactly.
bool is_rational_literal(std::string_view s);

template <class T>
Matrix<T> identity(int n) {
  return Matrix<T>::Identity(n, n);
}

template <class To, class From>
Matrix<To> convert(const Matrix<From>& m) {
  Matrix<To> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<To, double>)
        out(i, j) = ScalarOps<From>::to_double(m(i, j));
      else
        out(i, j) = To(m(i, j));
    }
  return out;
}

template <class To, class From>
Vector<To> convert(const Vector<From>& v) {
  Vector<To> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if constexpr (std::is_same_v<To, double>)
      out(i) = ScalarOps<From>::to_double(v(i));
    else
      out(i) = To(v(i));
  }
  return out;
}

}  // namespace srcurv
