#include "srcurv/solovev.hpp"

#include "srcurv/errors.hpp"

namespace srcurv {

template <class T>
Vector<T> AdaptedStructure<T>::to_frame(const Vector<T>& v) const {
  return frame.vectors.transpose() * structure.metric() * v;
}

template <class T>
Vector<T> AdaptedStructure<T>::bracket(const Vector<T>& x, const Vector<T>& y) const {
  Vector<T> out = Vector<T>::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (x(i) == T(0)) continue;
    for (int j = 0; j < n; ++j) {
      if (y(j) == T(0)) continue;
      T w = x(i) * y(j);
      for (int k = 0; k < n; ++k) out(k) += w * c(i, j, k);
    }
  }
  return out;
}

template <class T>
Vector<T> AdaptedStructure<T>::horizontal(Vector<T> v) const {
  for (int k = m; k < n; ++k) v(k) = T(0);
  return v;
}

template <class T>
Vector<T> AdaptedStructure<T>::vertical(Vector<T> v) const {
  for (int k = 0; k < m; ++k) v(k) = T(0);
  return v;
}

template <class T>
Vector<T> AdaptedStructure<T>::unit(int i) const {
  Vector<T> v = Vector<T>::Zero(n);
  v(i) = T(1);
  return v;
}

template <class T>
AdaptedStructure<T> adapt(const SubRiemannianStructure<T>& s) {
  OrthonormalFrame<T> frame = adapted_frame(s);
  Tensor3<T> c = structure_constants_metric(s.algebra(), frame.vectors, s.metric());
  return AdaptedStructure<T>{s, frame, c, frame.m, s.dim(), s.tol()};
}

template <class T>
Vector<T> AlgebraConnection<T>::apply(const Vector<T>& x, const Vector<T>& y) const {
  const int n = coeffs.dim(0);
  Vector<T> out = Vector<T>::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (x(i) == T(0)) continue;
    for (int j = 0; j < n; ++j) {
      if (y(j) == T(0)) continue;
      T w = x(i) * y(j);
      for (int k = 0; k < n; ++k) out(k) += w * coeffs(i, j, k);
    }
  }
  return out;
}

template <class T>
AlgebraConnection<T> levi_civita(const AdaptedStructure<T>& s) {
  const int n = s.n;
  const auto& c = s.c;
  Tensor3<T> g({n, n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) g(i, j, k) = (c(i, j, k) - c(j, k, i) + c(k, i, j)) / T(2);
  // Torsion-free and metric, as a guard against a malformed tensor.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (!is_zero(T(g(i, j, k) - g(j, i, k) - c(i, j, k)), s.tol))
          throw ConsistencyError("levi_civita: connection has torsion");
        if (!is_zero(T(g(i, j, k) + g(i, k, j)), s.tol))
          throw ConsistencyError("levi_civita: connection is not metric");
      }
  return AlgebraConnection<T>{g};
}

template <class T>
AlgebraConnection<T> induced_connection(const AdaptedStructure<T>& s, const AlgebraConnection<T>& lc) {
  const int n = s.n;
  Tensor3<T> g({n, n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if ((j < s.m) == (k < s.m)) g(i, j, k) = lc.coeffs(i, j, k);
  return AlgebraConnection<T>{g};
}

template <class T>
SecondFundamentalForm<T> second_fundamental_form(const AlgebraConnection<T>& lc,
                                                 const AlgebraConnection<T>& induced) {
  const int n = lc.coeffs.dim(0);
  SecondFundamentalForm<T> out{Tensor3<T>({n, n, n}), Tensor3<T>({n, n, n}), Tensor3<T>({n, n, n})};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out.h(i, j, k) = lc.coeffs(i, j, k) - induced.coeffs(i, j, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        out.h_plus(i, j, k) = (out.h(i, j, k) + out.h(j, i, k)) / T(2);
        out.h_minus(i, j, k) = (out.h(i, j, k) - out.h(j, i, k)) / T(2);
      }
  return out;
}

template <class T>
Tensor3<T> torsion_T(const AdaptedStructure<T>& s) {
  const int m = s.m, n = s.n;
  Tensor3<T> t({m, m, n});
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = m; k < n; ++k) t(a, b, k) = -s.c(a, b, k);
  AlgebraConnection<T> lc = levi_civita(s);
  SecondFundamentalForm<T> h = second_fundamental_form(lc, induced_connection(s, lc));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < n; ++k)
        if (!is_zero(T(t(a, b, k) + T(2) * h.h_minus(a, b, k)), s.tol))
          throw ConsistencyError("torsion_T: T differs from -2 h^-");
  return t;
}

template <class T>
AlgebraConnection<T> connection_C(const AdaptedStructure<T>& s, const AlgebraConnection<T>& induced,
                                  const Tensor3<T>& torsion) {
  const int m = s.m, n = s.n;
  Tensor3<T> g({n, n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) g(i, j, k) = induced.coeffs(i, j, k) - torsion(j, k, i) / T(2);
  return AlgebraConnection<T>{g};
}

namespace {

// <R(f_a, f_b) f_c, f_d> for indices below `r`, with the full bracket.
template <class T>
Tensor4<T> curvature_of(const AlgebraConnection<T>& conn, const AdaptedStructure<T>& s, int r) {
  const int n = s.n;
  const auto& g = conn.coeffs;
  Tensor4<T> out({r, r, r, r});
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) {
        Vector<T> v = Vector<T>::Zero(n);
        for (int j = 0; j < n; ++j) {
          const T& yb = g(b, c, j);
          const T& ya = g(a, c, j);
          const T& w = s.c(a, b, j);
          for (int k = 0; k < n; ++k) {
            if (yb != T(0)) v(k) += yb * g(a, j, k);
            if (ya != T(0)) v(k) -= ya * g(b, j, k);
            if (w != T(0)) v(k) -= w * g(j, c, k);
          }
        }
        for (int d = 0; d < r; ++d) out(a, b, c, d) = v(d);
      }
  return out;
}

template <class T>
T dot_last(const Tensor3<T>& t, int a, int b, int c, int d) {
  T sum(0);
  for (int k = 0; k < t.dim(2); ++k) sum += t(a, b, k) * t(c, d, k);
  return sum;
}

template <class T>
bool tensors_agree(const Tensor4<T>& x, const Tensor4<T>& y, double tol) {
  for (std::size_t i = 0; i < x.data().size(); ++i)
    if (!is_zero(T(x.data()[i] - y.data()[i]), tol)) return false;
  return true;
}

template <class T>
T wedge_norm_sq(const Vector<T>& u, const Vector<T>& v) {
  return u.dot(u) * v.dot(v) - u.dot(v) * u.dot(v);
}

// Frame coordinates of an algebra vector that must lie in D.
template <class T>
Vector<T> horizontal_coords(const AdaptedStructure<T>& s, const Vector<T>& u, const char* who) {
  if (u.size() != s.n) throw InputError(std::string(who) + ": vector has wrong length");
  Vector<T> f = s.to_frame(u);
  if (!vector_is_zero<T>(s.vertical(f), s.tol))
    throw PreconditionError(std::string(who) + ": vector is not in the distribution");
  return f;
}

}  // namespace

template <class T>
CurvatureRoutes<T> curvature_routes(const AdaptedStructure<T>& s) {
  const int m = s.m;
  AlgebraConnection<T> lc = levi_civita(s);
  AlgebraConnection<T> ind = induced_connection(s, lc);
  SecondFundamentalForm<T> h = second_fundamental_form(lc, ind);
  Tensor3<T> tor = torsion_T(s);
  AlgebraConnection<T> conn_c = connection_C(s, ind, tor);

  Tensor4<T> rbar = curvature_of(ind, s, m);
  Tensor4<T> ramb = curvature_of(lc, s, m);
  CurvatureRoutes<T> out{{Tensor4<T>({m, m, m, m})}, {Tensor4<T>({m, m, m, m})}, {curvature_of(conn_c, s, m)}};
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) {
          out.from_induced.values(a, b, c, d) = rbar(a, b, c, d) - dot_last(tor, a, b, c, d) / T(2);
          out.from_ambient.values(a, b, c, d) =
              ramb(a, b, c, d) - T(2) * dot_last(h.h_minus, a, b, c, d) + dot_last(h.h, a, d, b, c) -
              dot_last(h.h, b, d, a, c);
        }
  return out;
}

template <class T>
CurvatureTensor<T> curvature_tensor(const AdaptedStructure<T>& s) {
  CurvatureRoutes<T> r = curvature_routes(s);
  if (!tensors_agree(r.from_induced.values, r.from_ambient.values, s.tol))
    throw ConsistencyError("curvature_tensor: induced-connection and ambient routes disagree");
  if (!tensors_agree(r.from_induced.values, r.from_c.values, s.tol))
    throw ConsistencyError("curvature_tensor: curvature of C disagrees with the induced route");
  return r.from_induced;
}

template <class T>
Tensor4<T> ambient_riemann(const AdaptedStructure<T>& s) {
  return curvature_of(levi_civita(s), s, s.n);
}

template <class T>
T sectional(const CurvatureTensor<T>& k, const AdaptedStructure<T>& s, const Vector<T>& u,
            const Vector<T>& v) {
  const int m = s.m;
  Vector<T> fu = horizontal_coords(s, u, "sectional");
  Vector<T> fv = horizontal_coords(s, v, "sectional");
  T denom = wedge_norm_sq(fu, fv);
  if (is_zero(denom, s.tol)) throw PreconditionError("sectional: u and v are linearly dependent");
  T num(0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) num += k.values(a, b, c, d) * fu(a) * fv(b) * fv(c) * fu(d);
  return num / denom;
}

template <class T>
T sectional_frame(const CurvatureTensor<T>& k, int a, int b) {
  return k.values(a, b, b, a);
}

template <class T>
RicciScalar<T> ricci_and_scalar(const CurvatureTensor<T>& k) {
  const int m = k.m();
  RicciScalar<T> out{std::vector<T>(m, T(0)), T(0)};
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b)
      if (b != a) out.ricci[a] += k.values(b, a, a, b);
    out.scalar += out.ricci[a];
  }
  return out;
}

template <class T>
T sectional_torsion(const AdaptedStructure<T>& s, const Vector<T>& u, const Vector<T>& v) {
  Vector<T> fu = horizontal_coords(s, u, "sectional_torsion");
  Vector<T> fv = horizontal_coords(s, v, "sectional_torsion");
  T denom = wedge_norm_sq(fu, fv);
  if (is_zero(denom, s.tol)) throw PreconditionError("sectional_torsion: u and v are linearly dependent");
  Vector<T> t = s.vertical(s.bracket(fu, fv));
  return t.dot(t) / denom;
}

template <class T>
std::map<std::pair<int, int>, T> milnor_closed_form(const AdaptedStructure<T>& s) {
  const int m = s.m, n = s.n;
  const auto& c = s.c;
  std::map<std::pair<int, int>, T> out;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == b) continue;
      T k(0);
      for (int i = 0; i < n; ++i) k += c(a, b, i) * (c(b, i, a) + c(i, a, b)) / T(2);
      for (int j = 0; j < m; ++j) {
        T sym = c(j, a, b) + c(j, b, a);
        k += sym * sym / T(4) - T(3) * c(a, b, j) * c(a, b, j) / T(4) - c(j, a, a) * c(j, b, b);
      }
      out[{a, b}] = k;
    }
  return out;
}

template <class T>
bool metric_is_biinvariant(const AdaptedStructure<T>& s) {
  const int n = s.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (!is_zero(T(s.c(i, j, k) + s.c(i, k, j)), s.tol)) return false;
  return true;
}

template <class T>
CurvatureTensor<T> biinvariant_tensor(const AdaptedStructure<T>& s) {
  if (!metric_is_biinvariant(s)) throw PreconditionError("biinvariant_tensor: metric is not bi-invariant");
  const int m = s.m;
  auto H = [&](const Vector<T>& v) { return s.horizontal(v); };
  auto V = [&](const Vector<T>& v) { return s.vertical(v); };
  auto B = [&](const Vector<T>& x, const Vector<T>& y) { return s.bracket(x, y); };
  CurvatureTensor<T> out{Tensor4<T>({m, m, m, m})};
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        Vector<T> x = s.unit(a), y = s.unit(b), z = s.unit(c);
        Vector<T> r = H(B(x, H(B(y, z)))) / T(4) + H(B(y, H(B(z, x)))) / T(4) + H(B(z, H(B(x, y)))) / T(2) +
                      H(B(z, V(B(x, y))));
        for (int d = 0; d < m; ++d) out.values(a, b, c, d) = r(d);
      }
  return out;
}

template <class T>
SubmersionCheck<T> submersion_base_curvature(const AdaptedStructure<T>& s, const Vector<T>& u,
                                             const Vector<T>& v) {
  const int m = s.m, n = s.n;
  SubmersionCheck<T> out;
  Vector<T> fu = horizontal_coords(s, u, "submersion_base_curvature");
  Vector<T> fv = horizontal_coords(s, v, "submersion_base_curvature");
  T denom = wedge_norm_sq(fu, fv);
  if (is_zero(denom, s.tol)) throw PreconditionError("submersion_base_curvature: u and v are linearly dependent");

  auto fail = [&](std::string why) {
    out.preconditions_ok = false;
    out.diagnosis = std::move(why);
    return out;
  };
  for (int w = m; w < n; ++w) {
    for (int w2 = m; w2 < n; ++w2)
      for (int k = 0; k < m; ++k)
        if (!is_zero(s.c(w, w2, k), s.tol))
          return fail("rigging is not a subalgebra: [f" + std::to_string(w + 1) + ", f" + std::to_string(w2 + 1) +
                      "] has a component along D");
    for (int x = 0; x < m; ++x)
      for (int k = m; k < n; ++k)
        if (!is_zero(s.c(w, x, k), s.tol))
          return fail("[Dperp, D] is not inside D: [f" + std::to_string(w + 1) + ", f" + std::to_string(x + 1) +
                      "] has a vertical component");
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        if (!is_zero(T(s.c(w, x, y) + s.c(w, y, x)), s.tol))
          return fail("metric on D is not invariant under ad(f" + std::to_string(w + 1) + ")");
  }
  out.preconditions_ok = true;

  Tensor4<T> r = ambient_riemann(s);
  T num(0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) num += r(a, b, c, d) * fu(a) * fv(b) * fv(c) * fu(d);
  out.ambient = num / denom;
  Vector<T> vert = s.vertical(s.bracket(fu, fv));
  out.vertical_term = T(3) * vert.dot(vert) / (T(4) * denom);
  out.base = out.ambient + out.vertical_term;
  out.solovev = sectional(curvature_tensor(s), s, u, v);
  out.equal = is_zero(T(out.base - out.solovev), s.tol);
  out.diagnosis = out.equal ? "base curvature equals the distribution curvature"
                            : "base curvature differs from the distribution curvature";
  return out;
}

template <class T>
CurvatureReport<T> curvature_report(const AdaptedStructure<T>& s) {
  CurvatureReport<T> r;
  r.tensor = curvature_tensor(s);
  RicciScalar<T> rs = ricci_and_scalar(r.tensor);
  r.ricci = rs.ricci;
  r.scalar = rs.scalar;
  for (int a = 0; a < s.m; ++a)
    for (int b = a + 1; b < s.m; ++b) {
      r.sectional[{a, b}] = sectional_frame(r.tensor, a, b);
      r.sectional_torsion[{a, b}] = sectional_torsion(s, s.from_frame(s.unit(a)), s.from_frame(s.unit(b)));
    }
  return r;
}

template <class T>
bool report_is_zero(const CurvatureReport<T>& r, double tol) {
  for (const T& x : r.tensor.values.data())
    if (!is_zero(x, tol)) return false;
  return true;
}

#define SRCURV_INSTANTIATE(T)                                                                                 \
  template struct AdaptedStructure<T>;                                                                        \
  template struct AlgebraConnection<T>;                                                                       \
  template AdaptedStructure<T> adapt<T>(const SubRiemannianStructure<T>&);                                    \
  template AlgebraConnection<T> levi_civita<T>(const AdaptedStructure<T>&);                                   \
  template AlgebraConnection<T> induced_connection<T>(const AdaptedStructure<T>&, const AlgebraConnection<T>&); \
  template SecondFundamentalForm<T> second_fundamental_form<T>(const AlgebraConnection<T>&,                   \
                                                               const AlgebraConnection<T>&);                  \
  template Tensor3<T> torsion_T<T>(const AdaptedStructure<T>&);                                               \
  template AlgebraConnection<T> connection_C<T>(const AdaptedStructure<T>&, const AlgebraConnection<T>&,      \
                                                const Tensor3<T>&);                                           \
  template CurvatureRoutes<T> curvature_routes<T>(const AdaptedStructure<T>&);                                \
  template CurvatureTensor<T> curvature_tensor<T>(const AdaptedStructure<T>&);                                \
  template Tensor4<T> ambient_riemann<T>(const AdaptedStructure<T>&);                                         \
  template T sectional<T>(const CurvatureTensor<T>&, const AdaptedStructure<T>&, const Vector<T>&,            \
                          const Vector<T>&);                                                                  \
  template T sectional_frame<T>(const CurvatureTensor<T>&, int, int);                                         \
  template RicciScalar<T> ricci_and_scalar<T>(const CurvatureTensor<T>&);                                     \
  template T sectional_torsion<T>(const AdaptedStructure<T>&, const Vector<T>&, const Vector<T>&);            \
  template std::map<std::pair<int, int>, T> milnor_closed_form<T>(const AdaptedStructure<T>&);                \
  template bool metric_is_biinvariant<T>(const AdaptedStructure<T>&);                                         \
  template CurvatureTensor<T> biinvariant_tensor<T>(const AdaptedStructure<T>&);                              \
  template SubmersionCheck<T> submersion_base_curvature<T>(const AdaptedStructure<T>&, const Vector<T>&,      \
                                                           const Vector<T>&);                                 \
  template CurvatureReport<T> curvature_report<T>(const AdaptedStructure<T>&);                                \
  template bool report_is_zero<T>(const CurvatureReport<T>&, double);

SRCURV_INSTANTIATE(Rational)
SRCURV_INSTANTIATE(double)
#undef SRCURV_INSTANTIATE

}  // namespace srcurv
