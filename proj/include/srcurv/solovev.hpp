#pragma once

#include <map>
#include <string>
#include <utility>

#include "srcurv/structure.hpp"

namespace srcurv {

/// A structure together with its adapted orthonormal frame and the structure
/// constants c_{ijk} = <[f_i, f_j], f_k> in that frame. Every curvature routine
/// works in frame coordinates, where the metric is the identity, D is the span
/// of the first m coordinates and Dperp of the remaining ones.
template <class T>
struct AdaptedStructure {
  SubRiemannianStructure<T> structure;
  OrthonormalFrame<T> frame;
  Tensor3<T> c;
  int m = 0;
  int n = 0;
  double tol = kDefaultTol;

  /// Frame coordinates of an algebra vector.
  Vector<T> to_frame(const Vector<T>& v) const;
  /// Algebra coordinates of a frame-coordinate vector.
  Vector<T> from_frame(const Vector<T>& v) const { return frame.vectors * v; }
  Vector<T> bracket(const Vector<T>& x, const Vector<T>& y) const;
  Vector<T> horizontal(Vector<T> v) const;
  Vector<T> vertical(Vector<T> v) const;
  Vector<T> unit(int i) const;
};

template <class T>
AdaptedStructure<T> adapt(const SubRiemannianStructure<T>& s);

/// Left-invariant linear connection in frame coordinates:
/// nabla_{f_i} f_j = sum_k coeffs(i, j, k) f_k.
template <class T>
struct AlgebraConnection {
  Tensor3<T> coeffs;

  Vector<T> apply(const Vector<T>& x, const Vector<T>& y) const;
};

template <class T>
AlgebraConnection<T> levi_civita(const AdaptedStructure<T>& s);

/// H nabla_X HY + V nabla_X VY.
template <class T>
AlgebraConnection<T> induced_connection(const AdaptedStructure<T>& s, const AlgebraConnection<T>& lc);

template <class T>
struct SecondFundamentalForm {
  Tensor3<T> h;        // h(f_i, f_j) = sum_k h(i, j, k) f_k
  Tensor3<T> h_plus;   // symmetric part in (i, j)
  Tensor3<T> h_minus;  // skew part in (i, j)
};

template <class T>
SecondFundamentalForm<T> second_fundamental_form(const AlgebraConnection<T>& lc,
                                                 const AlgebraConnection<T>& induced);

/// T(f_a, f_b) = -V[f_a, f_b] for a, b < m, stored as (m, m, n). Checked against -2 h^-.
template <class T>
Tensor3<T> torsion_T(const AdaptedStructure<T>& s);

/// <C_X HY, Z> = <nabla-bar_X HY, HZ> - 1/2 <X, T(HY, HZ)>, and C_X VY = 0.
template <class T>
AlgebraConnection<T> connection_C(const AdaptedStructure<T>& s, const AlgebraConnection<T>& induced,
                                  const Tensor3<T>& torsion);

/// K(a, b, c, d) = <K(f_a, f_b) f_c, f_d> over the D-part of the frame.
template <class T>
struct CurvatureTensor {
  Tensor4<T> values;
  int m() const { return values.dim(0); }
};

/// Curvature of `s` assembled three ways: from the induced connection with the
/// torsion correction, from the Levi-Civita curvature with the second
/// fundamental form (Gauss-type equation), and as the curvature of C.
template <class T>
struct CurvatureRoutes {
  CurvatureTensor<T> from_induced;
  CurvatureTensor<T> from_ambient;
  CurvatureTensor<T> from_c;
};

template <class T>
CurvatureRoutes<T> curvature_routes(const AdaptedStructure<T>& s);

/// The Solov'ev curvature tensor; throws ConsistencyError if the routes disagree.
template <class T>
CurvatureTensor<T> curvature_tensor(const AdaptedStructure<T>& s);

/// <R(f_a, f_b) f_c, f_d> of the Levi-Civita connection of the ambient metric, all indices.
template <class T>
Tensor4<T> ambient_riemann(const AdaptedStructure<T>& s);

/// K_uv = <K(u, v) v, u> / |u ^ v|^2 for algebra vectors u, v in D.
template <class T>
T sectional(const CurvatureTensor<T>& k, const AdaptedStructure<T>& s, const Vector<T>& u,
            const Vector<T>& v);

template <class T>
T sectional_frame(const CurvatureTensor<T>& k, int a, int b);

template <class T>
struct RicciScalar {
  std::vector<T> ricci;  // k_{f_a}
  T scalar;
};

/// k_{f_a} = sum_{b != a} <K(f_b, f_a) f_a, f_b>; s = sum_a k_{f_a}.
template <class T>
RicciScalar<T> ricci_and_scalar(const CurvatureTensor<T>& k);

/// t_uv = |T(u, v)|^2 / |u ^ v|^2 for algebra vectors u, v in D.
template <class T>
T sectional_torsion(const AdaptedStructure<T>& s, const Vector<T>& u, const Vector<T>& v);

/// Closed-form sectional curvature from the frame structure constants, for all a != b < m.
template <class T>
std::map<std::pair<int, int>, T> milnor_closed_form(const AdaptedStructure<T>& s);

/// True when <[x, y], z> + <y, [x, z]> = 0 on the frame.
template <class T>
bool metric_is_biinvariant(const AdaptedStructure<T>& s);

/// K(X,Y)Z = 1/4 H[X,H[Y,Z]] + 1/4 H[Y,H[Z,X]] + 1/2 H[Z,H[X,Y]] + H[Z,V[X,Y]].
/// Throws PreconditionError for a metric that is not bi-invariant.
template <class T>
CurvatureTensor<T> biinvariant_tensor(const AdaptedStructure<T>& s);

template <class T>
struct SubmersionCheck {
  bool preconditions_ok = false;
  std::string diagnosis;
  T ambient{};        // K^M_uv of the ambient metric
  T vertical_term{};  // 3/4 |V[u, v]|^2 / |u ^ v|^2
  T base{};           // K^B = ambient + vertical_term
  T solovev{};        // K_uv of the distribution
  bool equal = false;
};

/// Compares the distribution's sectional curvature on span(u, v) with the
/// base curvature of the quotient by the rigging (O'Neill relation). Checks that
/// Dperp is a subalgebra, [Dperp, D] inside D, and g|_D is ad(Dperp)-invariant;
/// a failing check is reported in `diagnosis`.
template <class T>
SubmersionCheck<T> submersion_base_curvature(const AdaptedStructure<T>& s, const Vector<T>& u,
                                             const Vector<T>& v);

template <class T>
struct CurvatureReport {
  std::map<std::pair<int, int>, T> sectional;  // a < b
  std::vector<T> ricci;
  T scalar{};
  std::map<std::pair<int, int>, T> sectional_torsion;  // a < b
  CurvatureTensor<T> tensor;
};

template <class T>
CurvatureReport<T> curvature_report(const AdaptedStructure<T>& s);

template <class T>
bool report_is_zero(const CurvatureReport<T>& r, double tol = kDefaultTol);

}  // namespace srcurv
