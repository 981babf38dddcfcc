#include "srcurv/wagner.hpp"

#include "srcurv/errors.hpp"

namespace srcurv {

template <class T>
std::vector<std::pair<int, int>> FlagDecomposition<T>::wedge_pairs(int i) const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < layers[i]; ++a)
    for (int b = a + 1; b < layers[i]; ++b) out.emplace_back(a, b);
  return out;
}

template <class T>
FlagDecomposition<T> flag_decomposition(const SubRiemannianStructure<T>& s) {
  const LieAlgebra<T>& a = s.algebra();
  const int n = s.dim();
  FlagDecomposition<T> f;
  f.tol = s.tol();
  f.flag = derived_flag(a, s.distribution());
  if (!f.flag.bracket_generating) throw PreconditionError("flag_decomposition: D is not bracket-generating");
  if (s.rank() == n) throw PreconditionError("flag_decomposition: D is the whole algebra, the recursion is empty");

  OrthonormalFrame<T> frame = adapted_frame(s);
  Matrix<T> basis = frame.vectors.leftCols(frame.m);
  f.layers.push_back(frame.m);
  while (basis.cols() < n) {
    const Eigen::Index d = basis.cols();
    Matrix<T> candidates(n, d * (d - 1) / 2);
    Eigen::Index col = 0;
    for (Eigen::Index p = 0; p < d; ++p)
      for (Eigen::Index q = p + 1; q < d; ++q) candidates.col(col++) = bracket<T>(a, basis.col(p), basis.col(q));
    Matrix<T> theta = orthogonalize<T>(candidates, s.metric(), basis, s.tol());
    if (theta.cols() == 0) throw PreconditionError("flag_decomposition: D is not bracket-generating");
    f.thetas.push_back(theta);
    basis = hstack<T>(basis, theta);
    f.layers.push_back(static_cast<int>(basis.cols()));
  }
  f.basis = basis;

  Matrix<T> inv = inverse<T>(basis);
  f.c = Tensor3<T>({n, n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vector<T> coords = inv * bracket<T>(a, basis.col(i), basis.col(j));
      for (int k = 0; k < n; ++k) f.c(i, j, k) = coords(k);
    }

  for (int i = 0; i < f.r(); ++i) {
    const int d0 = f.layers[i], d1 = f.layers[i + 1];
    auto pairs = f.wedge_pairs(i);
    Matrix<T> delta(d1 - d0, static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t p = 0; p < pairs.size(); ++p)
      for (int t = 0; t < d1 - d0; ++t) delta(t, static_cast<Eigen::Index>(p)) = f.c(pairs[p].first, pairs[p].second, d0 + t);
    f.delta_maps.push_back(delta);
    f.theta_maps.push_back(identity<T>(d1 - d0));
    Matrix<T> proj = Matrix<T>::Zero(d1 - d0, d1);
    proj.rightCols(d1 - d0) = identity<T>(d1 - d0);
    f.projections.push_back(proj);
  }
  return f;
}

template <class T>
Matrix<T> wedge_inner_product(const Matrix<T>& gram) {
  const int d = static_cast<int>(gram.rows());
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) pairs.emplace_back(a, b);
  const auto np = static_cast<Eigen::Index>(pairs.size());
  Matrix<T> w(np, np);
  for (Eigen::Index p = 0; p < np; ++p)
    for (Eigen::Index q = 0; q < np; ++q) {
      auto [a, b] = pairs[p];
      auto [c, d2] = pairs[q];
      w(p, q) = gram(a, c) * gram(b, d2) - gram(a, d2) * gram(b, c);
    }
  return w;
}

template <class T>
FlagDecomposition<T> canonical_vertical_metric(FlagDecomposition<T> f) {
  const int n = f.n();
  const int m = f.layers[0];
  f.gram = Matrix<T>::Zero(n, n);
  f.gram.topLeftCorner(m, m) = identity<T>(m);
  f.vertical_gram.clear();
  for (int i = 0; i < f.r(); ++i) {
    const int d0 = f.layers[i], d1 = f.layers[i + 1];
    Matrix<T> w = wedge_inner_product<T>(f.gram.topLeftCorner(d0, d0));
    const Matrix<T>& delta = f.delta_maps[i];
    Matrix<T> composite = delta * inverse<T>(w) * delta.transpose();
    if (srcurv::rank<T>(composite) != composite.rows())
      throw ConsistencyError("canonical_vertical_metric: singular composite at stage " + std::to_string(i));
    Matrix<T> g_theta = inverse<T>(composite);
    if (!is_spd<T>(g_theta, f.tol))
      throw ConsistencyError("canonical_vertical_metric: vertical metric not positive definite at stage " +
                             std::to_string(i));
    f.vertical_gram.push_back(g_theta);
    f.gram.block(d0, d0, d1 - d0, d1 - d0) = g_theta;
  }
  return f;
}

template <class T>
Matrix<T> canonical_metric_algebra(const FlagDecomposition<T>& f) {
  if (f.gram.rows() != f.n()) throw InputError("canonical_metric_algebra: vertical metric not computed");
  Matrix<T> inv = inverse<T>(f.basis);
  return inv.transpose() * f.gram * inv;
}

template <class T>
Matrix<T> mu_morphism(const FlagDecomposition<T>& f, int i) {
  if (i < 0 || i >= f.r() || i >= static_cast<int>(f.vertical_gram.size()))
    throw InputError("mu_morphism: stage out of range");
  const int d0 = f.layers[i];
  Matrix<T> w = wedge_inner_product<T>(f.gram.topLeftCorner(d0, d0));
  const Matrix<T>& delta = f.delta_maps[i];
  return inverse<T>(w) * delta.transpose() * f.theta_maps[i].transpose() * f.vertical_gram[i] * f.theta_maps[i] *
         f.projections[i];
}

template <class T>
CurvatureTensor<T> schouten_tensor(const AdaptedStructure<T>& s) {
  const int m = s.m;
  AlgebraConnection<T> lc = levi_civita(s);
  auto nab = [&](const Vector<T>& x, const Vector<T>& y) { return s.horizontal(lc.apply(x, y)); };
  CurvatureTensor<T> k{Tensor4<T>({m, m, m, m})};
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        Vector<T> x = s.unit(a), y = s.unit(b), z = s.unit(c);
        Vector<T> xy = s.bracket(x, y);
        Vector<T> v = nab(x, nab(y, z)) - nab(y, nab(x, z)) - nab(s.horizontal(xy), z) -
                      s.horizontal(s.bracket(s.vertical(xy), z));
        for (int d = 0; d < m; ++d) k.values(a, b, c, d) = v(d);
      }
  return k;
}

namespace {

template <class T>
Vector<T> truncate(Vector<T> v, int d) {
  for (Eigen::Index k = d; k < v.size(); ++k) v(k) = T(0);
  return v;
}

template <class T>
Vector<T> upper(Vector<T> v, int d) {
  for (Eigen::Index k = 0; k < d && k < v.size(); ++k) v(k) = T(0);
  return v;
}

template <class T>
Vector<T> bilinear(const Tensor3<T>& t, const Vector<T>& x, const Vector<T>& y, int out_dim) {
  Vector<T> out = Vector<T>::Zero(out_dim);
  for (int i = 0; i < t.dim(0) && i < x.size(); ++i) {
    if (x(i) == T(0)) continue;
    for (int j = 0; j < t.dim(1) && j < y.size(); ++j) {
      if (y(j) == T(0)) continue;
      T w = x(i) * y(j);
      for (int k = 0; k < t.dim(2); ++k) out(k) += w * t(i, j, k);
    }
  }
  return out;
}

}  // namespace

template <class T>
WagnerResult<T> wagner_iterate(const SubRiemannianStructure<T>& s, const WagnerOptions<T>& opts) {
  WagnerResult<T> result{canonical_vertical_metric(flag_decomposition(s)), {}};
  const FlagDecomposition<T>& f = result.flag;
  const int n = f.n();

  // Levi-Civita connection of {.,.} in B: Gamma(i, j, .) = G^{-1} L(i, j, .).
  Matrix<T> ginv = inverse<T>(f.gram);
  auto pairing = [&](int i, int j, int l) {
    T sum(0);
    for (int k = 0; k < n; ++k) sum += f.c(i, j, k) * f.gram(k, l);
    return sum;
  };
  Tensor3<T> gamma({n, n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vector<T> low(n);
      for (int l = 0; l < n; ++l) low(l) = (pairing(i, j, l) - pairing(j, l, i) + pairing(l, i, j)) / T(2);
      Vector<T> up = ginv * low;
      for (int k = 0; k < n; ++k) gamma(i, j, k) = up(k);
    }
  auto bB = [&](const Vector<T>& x, const Vector<T>& y) { return bilinear(f.c, x, y, n); };
  auto nab = [&](int i, const Vector<T>& x, const Vector<T>& y) {
    return truncate<T>(bilinear(gamma, x, y, n), f.layers[i]);
  };
  auto unit = [&](int i) {
    Vector<T> v = Vector<T>::Zero(n);
    v(i) = T(1);
    return v;
  };

  // Stage 0: the Schouten tensor; B starts with the adapted D frame, so the arrays coincide.
  WagnerStage<T> s0;
  s0.tensor = schouten_tensor(adapt(s)).values;
  result.stages.push_back(s0);

  for (int i = 0; i < f.r(); ++i) {
    const int d0 = f.layers[i], d1 = f.layers[i + 1];
    const WagnerStage<T>& prev = result.stages.back();
    const int q = prev.tensor.dim(2);  // K^(i) acts on D_{i-1} (on D for i = 0)
    const Tensor4<T>& kp = prev.tensor;
    Matrix<T> mu = mu_morphism(f, i);
    auto pairs = f.wedge_pairs(i);

    WagnerStage<T> st;
    st.stage = i + 1;
    st.connection = Tensor3<T>({d1, d0, d0});
    for (int a = 0; a < d1; ++a) {
      Vector<T> x = unit(a);
      Vector<T> mux = mu * x.head(d1);
      bool mu_active = !vector_is_zero<T>(mux, f.tol);
      for (int b = 0; b < d0; ++b) {
        Vector<T> y = unit(b);
        Vector<T> v = nab(i, truncate<T>(x, d0), y) + truncate<T>(bB(upper<T>(x, d0), y), d0);
        if (mu_active) {
          if (b >= q) ++st.domain_violations;
          else
            for (std::size_t p = 0; p < pairs.size(); ++p) {
              const T& coef = mux(static_cast<Eigen::Index>(p));
              if (coef == T(0)) continue;
              for (int k = 0; k < q; ++k) v(k) += coef * kp(pairs[p].first, pairs[p].second, b, k);
            }
        }
        for (int k = 0; k < d0; ++k) st.connection(a, b, k) = v(k);
      }
    }
    auto odot = [&](const Vector<T>& x, const Vector<T>& y) {
      Vector<T> out = Vector<T>::Zero(n);
      out.head(d0) = bilinear(st.connection, x, y, d0);
      return out;
    };

    st.tensor = Tensor4<T>({d1, d1, d0, d0});
    for (int a = 0; a < d1; ++a)
      for (int b = 0; b < d1; ++b)
        for (int z = 0; z < d0; ++z) {
          Vector<T> x = unit(a), y = unit(b), zz = unit(z);
          Vector<T> xy = bB(x, y);
          Vector<T> v = opts.alternation * (odot(x, odot(y, zz)) - odot(y, odot(x, zz))) -
                        odot(truncate<T>(xy, d1), zz) - truncate<T>(bB(upper<T>(xy, d0), zz), d0);
          for (int k = 0; k < d0; ++k) st.tensor(a, b, z, k) = v(k);
        }
    result.stages.push_back(std::move(st));
  }
  return result;
}

template <class T>
bool absolute_parallelism(const WagnerResult<T>& w) {
  for (const T& x : w.final_stage().tensor.data())
    if (!is_zero(x, w.flag.tol)) return false;
  return true;
}

#define SRCURV_INSTANTIATE(T)                                                                    \
  template struct FlagDecomposition<T>;                                                          \
  template FlagDecomposition<T> flag_decomposition<T>(const SubRiemannianStructure<T>&);         \
  template Matrix<T> wedge_inner_product<T>(const Matrix<T>&);                                   \
  template FlagDecomposition<T> canonical_vertical_metric<T>(FlagDecomposition<T>);              \
  template Matrix<T> canonical_metric_algebra<T>(const FlagDecomposition<T>&);                \
  template Matrix<T> mu_morphism<T>(const FlagDecomposition<T>&, int);                           \
  template CurvatureTensor<T> schouten_tensor<T>(const AdaptedStructure<T>&);                    \
  template WagnerResult<T> wagner_iterate<T>(const SubRiemannianStructure<T>&, const WagnerOptions<T>&); \
  template bool absolute_parallelism<T>(const WagnerResult<T>&);

SRCURV_INSTANTIATE(Rational)
SRCURV_INSTANTIATE(double)
#undef SRCURV_INSTANTIATE

}  // namespace srcurv
