#include "srcurv/structure.hpp"

#include "srcurv/errors.hpp"

namespace srcurv {

template <class T>
SubRiemannianStructure<T>::SubRiemannianStructure(LieAlgebra<T> algebra, Matrix<T> distribution,
                                                  std::optional<Matrix<T>> rigging,
                                                  std::optional<Matrix<T>> metric)
    : algebra_(std::move(algebra)), distribution_(std::move(distribution)) {
  const int n = algebra_.dim();
  const double tol = algebra_.tol();
  metric_ = metric ? *metric : identity<T>(n);
  if (metric_.rows() != n || metric_.cols() != n)
    throw InputError("structure: metric must be " + std::to_string(n) + " x " + std::to_string(n));
  if (!is_spd<T>(metric_, tol)) throw InputError("structure: metric is not symmetric positive definite");
  if (distribution_.rows() != n) throw InputError("structure: distribution vectors have wrong length");
  if (srcurv::rank<T>(distribution_) != distribution_.cols())
    throw InputError("structure: distribution vectors are linearly dependent");
  if (distribution_.cols() < 2) throw InputError("structure: distribution rank must be at least 2");
  rigging_ = rigging ? *rigging : orthogonal_complement<T>(distribution_, metric_);
  if (rigging_.cols() > 0 && rigging_.rows() != n)
    throw InputError("structure: rigging vectors have wrong length");
  if (rigging_.cols() == 0) rigging_ = Matrix<T>::Zero(n, 0);
  if (distribution_.cols() + rigging_.cols() != n || srcurv::rank<T>(hstack<T>(distribution_, rigging_)) != n)
    throw InputError("structure: distribution and rigging do not span the algebra");
  if (!matrix_is_zero<T>(Matrix<T>(distribution_.transpose() * metric_ * rigging_), tol))
    throw InputError("structure: rigging is not orthogonal to the distribution");
}

namespace {

template <class T>
Matrix<T> orthonormalize(const Matrix<T>& vectors, const Matrix<T>& gram, double tol) {
  Matrix<T> orth = orthogonalize<T>(vectors, gram, Matrix<T>(gram.rows(), 0), tol);
  if (orth.cols() != vectors.cols()) throw NumericError("adapted_frame: dependent basis vectors");
  for (Eigen::Index k = 0; k < orth.cols(); ++k) {
    T sq = inner<T>(orth.col(k), gram, orth.col(k));
    auto root = ScalarOps<T>::sqrt(sq);
    if (!root) throw InexactError("adapted_frame: irrational norm; exact orthonormalization impossible");
    if (*root == T(0)) throw NumericError("adapted_frame: metric is not positive definite");
    orth.col(k) /= *root;
  }
  return orth;
}

template <class T>
void fix_sign(Vector<T>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) == T(0)) continue;
    if (v(i) < 0) v = -v;
    return;
  }
}

}  // namespace

template <class T>
OrthonormalFrame<T> adapted_frame(const SubRiemannianStructure<T>& s) {
  if (!is_spd<T>(s.metric(), s.tol())) throw NumericError("adapted_frame: metric is not positive definite");
  OrthonormalFrame<T> frame;
  frame.m = s.rank();
  Matrix<T> d = orthonormalize<T>(s.distribution(), s.metric(), s.tol());
  Matrix<T> v = s.rigging().cols() > 0 ? orthonormalize<T>(s.rigging(), s.metric(), s.tol())
                                       : Matrix<T>(s.dim(), 0);
  frame.vectors = hstack<T>(d, v);
  return frame;
}

template <class T>
Matrix<T> annihilator(const LieAlgebra<T>& a, const Matrix<T>& distribution) {
  if (distribution.rows() != a.dim()) throw InputError("annihilator: dimension mismatch");
  Matrix<T> basis = null_space<T>(Matrix<T>(distribution.transpose()));
  return basis.transpose();
}

template <class T>
RiggingReport<T> rigging_conditions(const SubRiemannianStructure<T>& s) {
  const LieAlgebra<T>& a = s.algebra();
  const double tol = s.tol();
  const int n = s.dim();
  // Forms vanishing on D detect leaving D; forms vanishing on Dperp detect D-components.
  Matrix<T> nul_d = annihilator<T>(a, s.distribution());
  Matrix<T> nul_v = annihilator<T>(a, s.rigging());
  Matrix<T> whole = identity<T>(n);

  // First violation of "forms(bracket(W, X)) == 0" over the given bases.
  auto scan = [&](int condition, const Matrix<T>& ws, const Matrix<T>& xs,
                  const Matrix<T>& forms) -> std::optional<RiggingWitness<T>> {
    for (Eigen::Index p = 0; p < ws.cols(); ++p)
      for (Eigen::Index q = 0; q < xs.cols(); ++q) {
        Vector<T> b = bracket<T>(a, ws.col(p), xs.col(q));
        Vector<T> pairing = forms * b;
        for (Eigen::Index i = 0; i < pairing.size(); ++i)
          if (!is_zero(pairing(i), tol))
            return RiggingWitness<T>{condition, ws.col(p), xs.col(q), static_cast<int>(i), pairing(i)};
      }
    return std::nullopt;
  };

  RiggingReport<T> report;
  auto record = [&](bool& flag, std::optional<RiggingWitness<T>> w) {
    flag = !w.has_value();
    if (w) report.witnesses.push_back(*w);
  };
  record(report.cond1, scan(1, s.rigging(), s.distribution(), nul_d));
  record(report.cond2, scan(2, s.rigging(), s.distribution(), nul_v));
  record(report.cond3, scan(3, whole, whole, nul_v));
  report.dperp_is_ideal = !scan(0, s.rigging(), whole, nul_v).has_value();
  report.dperp_is_subalgebra = !scan(0, s.rigging(), s.rigging(), nul_v).has_value();
  return report;
}

template <class T>
ContactReport<T> contact_check(const SubRiemannianStructure<T>& s) {
  const LieAlgebra<T>& a = s.algebra();
  const int n = s.dim();
  const int m = s.rank();
  if (n - m != 1) throw PreconditionError("contact_check: distribution must have codimension 1");
  if (n % 2 == 0) throw PreconditionError("contact_check: algebra dimension must be odd");
  ContactReport<T> report;
  Vector<T> omega = annihilator<T>(a, s.distribution()).row(0).transpose();
  fix_sign(omega);
  report.omega = omega;
  report.domega = Matrix<T>::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      report.domega(i, j) = -omega.dot(bracket<T>(a, a.basis_vector(i), a.basis_vector(j)));
  const Matrix<T>& d = s.distribution();
  report.domega_on_d = d.transpose() * report.domega * d;
  report.is_contact = rank<T>(report.domega_on_d) == m;
  if (report.is_contact) {
    // domega(w, e_j) = 0 for all j and omega(w) = 1.
    Matrix<T> system(n + 1, n);
    system.topRows(n) = report.domega.transpose();
    system.row(n) = omega.transpose();
    Vector<T> rhs = Vector<T>::Zero(n + 1);
    rhs(n) = T(1);
    auto w = solve<T>(system, rhs);
    if (!w) throw ConsistencyError("contact_check: no Reeb solution for a contact form");
    report.reeb = *w;
  }
  return report;
}

std::string to_string(Class3d c) {
  return c == Class3d::no_nonholonomic_rank2 ? "no_nonholonomic_rank2" : "contact_admitting";
}

template <class T>
Classification3d<T> classify_3d(const LieAlgebra<T>& a) {
  if (a.dim() != 3) throw InputError("classify_3d: algebra must be three-dimensional");
  const double tol = a.tol();
  Matrix<T> whole = identity<T>(3);
  Matrix<T> all_brackets(3, 3);
  all_brackets.col(0) = bracket<T>(a, whole.col(1), whole.col(2));
  all_brackets.col(1) = bracket<T>(a, whole.col(2), whole.col(0));
  all_brackets.col(2) = bracket<T>(a, whole.col(0), whole.col(1));
  Matrix<T> derived = independent_columns<T>(all_brackets);

  Classification3d<T> out;
  if (derived.cols() == 0) {
    out.kind = Class3d::no_nonholonomic_rank2;
    out.reason = "abelian";
    return out;
  }
  if (derived.cols() == 2 && vector_is_zero<T>(bracket<T>(a, derived.col(0), derived.col(1)), tol)) {
    // Any x outside the derived algebra; ad_x on it is well defined up to scale.
    Vector<T> x;
    for (int i = 0; i < 3; ++i)
      if (!in_span<T>(derived, whole.col(i))) {
        x = whole.col(i);
        break;
      }
    Matrix<T> action(2, 2);
    for (int k = 0; k < 2; ++k) {
      auto coords = coordinates<T>(derived, bracket<T>(a, x, derived.col(k)));
      if (!coords) throw ConsistencyError("classify_3d: derived algebra not invariant");
      action.col(k) = *coords;
    }
    bool scalar = is_zero(action(0, 1), tol) && is_zero(action(1, 0), tol) &&
                  is_zero(T(action(0, 0) - action(1, 1)), tol) && !is_zero(action(0, 0), tol);
    if (scalar) {
      out.kind = Class3d::no_nonholonomic_rank2;
      out.reason = "ad acts as a nonzero scalar on the two-dimensional abelian derived algebra";
      return out;
    }
  }
  std::vector<Vector<T>> candidates;
  for (int i = 0; i < 3; ++i) candidates.push_back(whole.col(i));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      candidates.push_back(whole.col(i) + whole.col(j));
      candidates.push_back(whole.col(i) - whole.col(j));
      candidates.push_back(whole.col(i) + T(2) * whole.col(j));
    }
  for (std::size_t p = 0; p < candidates.size(); ++p)
    for (std::size_t q = p + 1; q < candidates.size(); ++q) {
      Matrix<T> plane(3, 2);
      plane.col(0) = candidates[p];
      plane.col(1) = candidates[q];
      if (rank<T>(plane) != 2) continue;
      if (!derived_flag<T>(a, plane).bracket_generating) continue;
      out.kind = Class3d::contact_admitting;
      out.witness = plane;
      out.reason = "found a bracket-generating plane";
      return out;
    }
  throw ConsistencyError("classify_3d: no bracket-generating plane found for a non-exceptional algebra");
}

#define SRCURV_INSTANTIATE(T)                                                          \
  template class SubRiemannianStructure<T>;                                            \
  template OrthonormalFrame<T> adapted_frame<T>(const SubRiemannianStructure<T>&);     \
  template Matrix<T> annihilator<T>(const LieAlgebra<T>&, const Matrix<T>&);           \
  template RiggingReport<T> rigging_conditions<T>(const SubRiemannianStructure<T>&);   \
  template ContactReport<T> contact_check<T>(const SubRiemannianStructure<T>&);        \
  template Classification3d<T> classify_3d<T>(const LieAlgebra<T>&);

SRCURV_INSTANTIATE(Rational)
SRCURV_INSTANTIATE(double)
#undef SRCURV_INSTANTIATE

}  // namespace srcurv
