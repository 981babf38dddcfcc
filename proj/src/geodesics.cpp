#include "srcurv/geodesics.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "srcurv/errors.hpp"

namespace srcurv {

MatrixModel::MatrixModel(const LieAlgebra<double>& a, std::vector<MatrixXd> basis, double tol)
    : basis_(std::move(basis)) {
  if (static_cast<int>(basis_.size()) != a.dim())
    throw InputError("matrix model: need one matrix per basis vector");
  rep_dim_ = static_cast<int>(basis_.front().rows());
  stacked_.resize(rep_dim_ * rep_dim_, a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    if (basis_[i].rows() != rep_dim_ || basis_[i].cols() != rep_dim_)
      throw InputError("matrix model: matrices must be square of equal size");
    stacked_.col(i) = Eigen::Map<const VectorXd>(basis_[i].data(), rep_dim_ * rep_dim_);
  }
  qr_.compute(stacked_);
  if (qr_.rank() != a.dim()) throw InputError("matrix model: representation is not faithful");
  const int n = a.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      MatrixXd d = basis_[i] * basis_[j] - basis_[j] * basis_[i];
      for (int k = 0; k < n; ++k) d -= a.c(i, j, k) * basis_[k];
      if (d.cwiseAbs().maxCoeff() > tol)
        throw InputError("matrix model: commutators do not reproduce the structure constants");
    }
}

MatrixXd MatrixModel::embed(const VectorXd& u) const {
  MatrixXd out = MatrixXd::Zero(rep_dim_, rep_dim_);
  for (int i = 0; i < dim(); ++i) out += u(i) * basis_[i];
  return out;
}

VectorXd MatrixModel::coordinates(const MatrixXd& x) const {
  return qr_.solve(VectorXd(Eigen::Map<const VectorXd>(x.data(), x.size())));
}

MatrixXd MatrixModel::exp(const VectorXd& u) const {
  MatrixXd e = embed(u).exp();
  if (!e.allFinite()) throw NumericError("matrix model: exponential overflow");
  return e;
}

MatrixXd MatrixModel::Ad(const MatrixXd& g) const {
  Eigen::PartialPivLU<MatrixXd> lu(g);
  if (std::fabs(lu.determinant()) < 1e-300) throw NumericError("Ad: singular group element");
  MatrixXd ginv = lu.inverse();
  MatrixXd out(dim(), dim());
  for (int j = 0; j < dim(); ++j) out.col(j) = coordinates(g * basis_[j] * ginv);
  return out;
}

template <class T>
MatrixModel model_from_entry(const CatalogData<T>& e) {
  if (!e.matrix_model) throw InputError("catalog entry '" + e.id + "' has no matrix model");
  std::vector<MatrixXd> basis;
  for (const auto& b : e.matrix_model->basis) basis.push_back(convert<double>(b));
  return MatrixModel(convert_algebra<double>(e.algebra()), basis);
}

template MatrixModel model_from_entry<Rational>(const CatalogData<Rational>&);
template MatrixModel model_from_entry<double>(const CatalogData<double>&);

GeodesicProblem make_problem(const SubRiemannianStructure<double>& s, const MatrixModel& model, bool unit_speed) {
  if (model.dim() != s.dim()) throw InputError("geodesic: model dimension does not match the algebra");
  OrthonormalFrame<double> frame = adapted_frame(s);
  return GeodesicProblem{s.algebra(), frame.vectors.leftCols(frame.m), model, unit_speed};
}

double hamiltonian(const GeodesicProblem& p, const VectorXd& xi) {
  return (p.frame.transpose() * xi).norm();
}

Control normal_control(const GeodesicProblem& p, const VectorXd& xi) {
  if (xi.size() != p.algebra.dim()) throw InputError("normal_control: covector has wrong length");
  VectorXd coeffs = p.frame.transpose() * xi;
  Control c;
  c.H = coeffs.norm();
  if (c.H <= 1e-12 * (1.0 + xi.norm())) {
    c.abnormal = true;
    c.u = VectorXd::Zero(xi.size());
    return c;
  }
  c.u = p.frame * coeffs;
  if (p.unit_speed) c.u /= c.H;
  return c;
}

namespace {

VectorXd xi_rate(const LieAlgebra<double>& a, const VectorXd& u, const VectorXd& xi) {
  const int n = a.dim();
  VectorXd out = VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    VectorXd b = bracket(a, u, a.basis_vector(j));
    out(j) = xi.dot(b);
  }
  return out;
}

struct Rate {
  MatrixXd dg;
  VectorXd dxi;
};

Rate rate(const GeodesicProblem& p, const MatrixXd& g, const VectorXd& xi) {
  Control c = normal_control(p, xi);
  if (c.abnormal) throw NumericError("geodesic: covector became abnormal (vanishes on D) during integration");
  return Rate{g * p.model.embed(c.u), xi_rate(p.algebra, c.u, xi)};
}

}  // namespace

CovectorState step(const GeodesicProblem& p, const CovectorState& s, double h) {
  Rate k1 = rate(p, s.g, s.xi);
  Rate k2 = rate(p, s.g + 0.5 * h * k1.dg, s.xi + 0.5 * h * k1.dxi);
  Rate k3 = rate(p, s.g + 0.5 * h * k2.dg, s.xi + 0.5 * h * k2.dxi);
  Rate k4 = rate(p, s.g + h * k3.dg, s.xi + h * k3.dxi);
  CovectorState out;
  out.g = s.g + (h / 6.0) * (k1.dg + 2.0 * k2.dg + 2.0 * k3.dg + k4.dg);
  out.xi = s.xi + (h / 6.0) * (k1.dxi + 2.0 * k2.dxi + 2.0 * k3.dxi + k4.dxi);
  out.t = s.t + h;
  if (!out.g.allFinite() || !out.xi.allFinite()) throw NumericError("geodesic: non-finite state");
  return out;
}

Trajectory integrate(const GeodesicProblem& p, const CovectorState& state0, double T, double h) {
  if (!(h > 0) || !(T >= 0) || !std::isfinite(T) || !std::isfinite(h))
    throw InputError("integrate: need step > 0 and time >= 0");
  if (state0.g.rows() != p.model.rep_dim() || state0.xi.size() != p.algebra.dim())
    throw InputError("integrate: initial state has wrong shape");
  if (normal_control(p, state0.xi).abnormal)
    throw PreconditionError("integrate: initial covector vanishes on D (abnormal); no normal control");
  const long steps = std::max(1L, std::lround(T / h));
  const double dt = T / static_cast<double>(steps);
  Trajectory tr;
  tr.step = dt;
  tr.samples.reserve(static_cast<std::size_t>(steps) + 1);
  tr.samples.push_back(state0);
  const double h0 = hamiltonian(p, state0.xi);
  for (long k = 0; k < steps; ++k) {
    CovectorState next = step(p, tr.samples.back(), dt);
    next.t = state0.t + static_cast<double>(k + 1) * dt;
    tr.max_h_drift = std::max(tr.max_h_drift, std::fabs(hamiltonian(p, next.xi) - h0));
    tr.samples.push_back(std::move(next));
  }
  tr.max_coadjoint_residual = coadjoint_section_check(p, tr);
  return tr;
}

Trajectory integrate(const GeodesicProblem& p, const VectorXd& xi0, double T, double h) {
  CovectorState s0{MatrixXd::Identity(p.model.rep_dim(), p.model.rep_dim()), xi0, 0.0};
  return integrate(p, s0, T, h);
}

ConvergenceStudy self_convergence(const GeodesicProblem& p, const VectorXd& xi0, double T, double h0,
                                  int halvings) {
  if (halvings < 2) throw InputError("self_convergence: need at least two halvings");
  ConvergenceStudy out;
  std::vector<VectorXd> ends;
  for (int k = 0; k <= halvings; ++k) {
    const double h = h0 / std::pow(2.0, k);
    const CovectorState& last = integrate(p, xi0, T, h).samples.back();
    VectorXd y(last.g.size() + last.xi.size());
    y << Eigen::Map<const VectorXd>(last.g.data(), last.g.size()), last.xi;
    out.steps.push_back(h);
    ends.push_back(y);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < halvings; ++k) {
    const double d = (ends[k] - ends[k + 1]).cwiseAbs().maxCoeff();
    out.differences.push_back(d);
    const double x = std::log2(out.steps[k]), y = std::log2(std::max(d, 1e-300));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double n = halvings;
  out.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

VectorXd coadjoint_Ad_star(const MatrixModel& m, const MatrixXd& g, const VectorXd& xi) {
  MatrixXd ad = m.Ad(g);
  return ad.transpose().partialPivLu().solve(xi);
}

VectorXd ad_star(const LieAlgebra<double>& a, const VectorXd& u, const VectorXd& xi) {
  const int n = a.dim();
  VectorXd out(n);
  for (int j = 0; j < n; ++j) out(j) = xi.dot(bracket(a, a.basis_vector(j), u));
  return out;
}

double coadjoint_section_check(const GeodesicProblem& p, const Trajectory& tr) {
  if (tr.samples.empty()) return 0.0;
  const VectorXd& xi0 = tr.samples.front().xi;
  const MatrixXd g0inv = tr.samples.front().g.inverse();
  double worst = 0.0;
  for (const auto& s : tr.samples) {
    // (Ad*_g)^{-1} xi_0 = xi_0 o Ad(g), with g measured from the initial element.
    VectorXd expected = p.model.Ad(g0inv * s.g).transpose() * xi0;
    worst = std::max(worst, (s.xi - expected).cwiseAbs().maxCoeff());
  }
  return worst;
}

AbnormalSearch abnormal_covector_search(const GeodesicProblem& p, const VectorXd& u,
                                        const std::vector<double>& t_samples) {
  const int n = p.algebra.dim();
  const int m = static_cast<int>(p.frame.cols());
  if (u.size() != n) throw InputError("abnormal_covector_search: direction has wrong length");
  VectorXd coeffs = p.frame.colPivHouseholderQr().solve(u);
  if ((p.frame * coeffs - u).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + u.norm()))
    throw PreconditionError("abnormal_covector_search: direction is not in D");
  MatrixXd system(static_cast<Eigen::Index>(t_samples.size()) * m, n);
  for (std::size_t k = 0; k < t_samples.size(); ++k) {
    MatrixXd ad = p.model.Ad(p.model.exp(t_samples[k] * u));
    for (int a = 0; a < m; ++a) system.row(static_cast<Eigen::Index>(k) * m + a) = (ad * p.frame.col(a)).transpose();
  }
  Eigen::JacobiSVD<MatrixXd> svd(system, Eigen::ComputeFullV);
  VectorXd sv = svd.singularValues();
  const double cutoff = 1e-9 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++r;
  AbnormalSearch out;
  out.covectors = svd.matrixV().rightCols(n - r);
  out.singular_values = sv;
  out.t_samples = t_samples;
  return out;
}

std::string trajectory_jsonl(const GeodesicProblem& p, const Trajectory& tr) {
  std::ostringstream os;
  for (const auto& s : tr.samples) {
    nlohmann::json j;
    j["t"] = s.t;
    std::vector<double> g;
    for (Eigen::Index r = 0; r < s.g.rows(); ++r)
      for (Eigen::Index c = 0; c < s.g.cols(); ++c) g.push_back(s.g(r, c));
    j["g"] = g;
    j["xi"] = std::vector<double>(s.xi.data(), s.xi.data() + s.xi.size());
    j["H"] = hamiltonian(p, s.xi);
    os << j.dump() << "\n";
  }
  return os.str();
}

}  // namespace srcurv
