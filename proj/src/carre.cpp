#include "srcurv/carre.hpp"

#include <cmath>

#include <json.hpp>

#include "srcurv/errors.hpp"

namespace srcurv {

CarreSetup make_carre(const SubRiemannianStructure<double>& s, const MatrixModel& model, FDScheme scheme) {
  if (!(scheme.h1 > 0) || !(scheme.outer > 0)) throw InputError("carre: steps must be positive");
  OrthonormalFrame<double> frame = adapted_frame(s);
  return CarreSetup{model, frame.vectors.leftCols(frame.m), frame.vectors.rightCols(s.dim() - frame.m), scheme};
}

namespace {

double eval(const ScalarField& f, const MatrixXd& g) {
  double v = f(g);
  if (!std::isfinite(v)) throw NumericError("carre: field is not finite at a stencil node");
  return v;
}

}  // namespace

double lie_derivative(const MatrixModel& m, const ScalarField& f, const VectorXd& x, const MatrixXd& g0, int order,
                      double h) {
  if (order != 1 && order != 2) throw InputError("lie_derivative: order must be 1 or 2");
  if (x.isZero(0.0)) return 0.0;
  auto at = [&](double t) { return eval(f, g0 * m.exp(t * x)); };
  const double p1 = at(h), m1 = at(-h), p2 = at(2 * h), m2 = at(-2 * h);
  if (order == 1) return (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h);
  return (-p2 + 16 * p1 - 30 * eval(f, g0) + 16 * m1 - m2) / (12 * h * h);
}

double lie_derivative_2nd_order(const MatrixModel& m, const ScalarField& f, const VectorXd& x, const MatrixXd& g0,
                                int order, double h) {
  if (order != 1 && order != 2) throw InputError("lie_derivative: order must be 1 or 2");
  if (x.isZero(0.0)) return 0.0;
  auto at = [&](double t) { return eval(f, g0 * m.exp(t * x)); };
  if (order == 1) return (at(h) - at(-h)) / (2 * h);
  return (at(h) - 2 * eval(f, g0) + at(-h)) / (h * h);
}

double operator_L(const CarreSetup& c, const ScalarField& f, const MatrixXd& g0, double h) {
  double sum = 0.0;
  for (Eigen::Index a = 0; a < c.horizontal.cols(); ++a) sum += lie_derivative(c.model, f, c.horizontal.col(a), g0, 2, h);
  return sum;
}

namespace {

// sum over the frame of (X f)(X g), with separate steps for f and g.
double pair_sum(const CarreSetup& c, const MatrixXd& frame, const ScalarField& f, double hf, const ScalarField& g,
                double hg, const MatrixXd& g0) {
  double sum = 0.0;
  for (Eigen::Index a = 0; a < frame.cols(); ++a)
    sum += lie_derivative(c.model, f, frame.col(a), g0, 1, hf) * lie_derivative(c.model, g, frame.col(a), g0, 1, hg);
  return sum;
}

ScalarField L_field(const CarreSetup& c, const ScalarField& f) {
  return [c, f](const MatrixXd& g) { return operator_L(c, f, g, c.scheme.h1); };
}

ScalarField square_field(const CarreSetup& c, const MatrixXd& frame, const ScalarField& f) {
  return [c, frame, f](const MatrixXd& g) { return pair_sum(c, frame, f, c.scheme.h1, f, c.scheme.h1, g); };
}

double gamma2_at(const CarreSetup& c, const MatrixXd& frame, const ScalarField& f, const MatrixXd& g0, double outer) {
  ScalarField sq = square_field(c, frame, f);
  ScalarField lf = L_field(c, f);
  double l_sq = operator_L(c, sq, g0, outer);
  double cross = pair_sum(c, frame, f, c.scheme.h1, lf, outer, g0);
  return 0.5 * (l_sq - 2.0 * cross);
}

Gamma2Value gamma2_monitored(const CarreSetup& c, const MatrixXd& frame, const ScalarField& f, const MatrixXd& g0) {
  const double h = c.scheme.outer;
  double v = gamma2_at(c, frame, f, g0, h);
  double v_half = gamma2_at(c, frame, f, g0, h / 2);
  double v_double = gamma2_at(c, frame, f, g0, 2 * h);
  // A 4th-order stencil shrinks successive differences about 16x; allow 10x slack.
  double coarse_gap = std::abs(v_double - v);
  double fine_gap = std::abs(v - v_half);
  bool suspect = fine_gap > 1e-8 * (1.0 + std::abs(v)) && fine_gap > 10.0 * coarse_gap / 16.0;
  return Gamma2Value{v, v_half, suspect};
}

}  // namespace

GammaValue gamma(const CarreSetup& c, const ScalarField& f, const ScalarField& g, const MatrixXd& g0) {
  const double h = c.scheme.h1;
  ScalarField fg = [f, g](const MatrixXd& x) { return f(x) * g(x); };
  double bag = 0.5 * (operator_L(c, fg, g0, h) - eval(f, g0) * operator_L(c, g, g0, h) -
                      eval(g, g0) * operator_L(c, f, g0, h));
  return GammaValue{bag, pair_sum(c, c.horizontal, f, h, g, h, g0)};
}

double gammaZ(const CarreSetup& c, const ScalarField& f, const ScalarField& g, const MatrixXd& g0) {
  return pair_sum(c, c.vertical, f, c.scheme.h1, g, c.scheme.h1, g0);
}

Gamma2Value gamma2(const CarreSetup& c, const ScalarField& f, const MatrixXd& g0) {
  return gamma2_monitored(c, c.horizontal, f, g0);
}

Gamma2Value gammaZ2(const CarreSetup& c, const ScalarField& f, const MatrixXd& g0) {
  // 1/2 (L Gamma^Z(f) - 2 Gamma^Z(f, Lf)): L stays horizontal, the pairing is vertical.
  auto at = [&](double outer) {
    ScalarField sq = square_field(c, c.vertical, f);
    ScalarField lf = L_field(c, f);
    return 0.5 * (operator_L(c, sq, g0, outer) - 2.0 * pair_sum(c, c.vertical, f, c.scheme.h1, lf, outer, g0));
  };
  const double h = c.scheme.outer;
  double v = at(h), v_half = at(h / 2), v_double = at(2 * h);
  double fine_gap = std::abs(v - v_half);
  bool suspect = fine_gap > 1e-8 * (1.0 + std::abs(v)) && fine_gap > 10.0 * std::abs(v_double - v) / 16.0;
  return Gamma2Value{v, v_half, suspect};
}

double hypothesis2_check(const CarreSetup& c, const ScalarField& f, const MatrixXd& g0) {
  const double h = c.scheme.h1, outer = c.scheme.outer;
  ScalarField gz = square_field(c, c.vertical, f);
  ScalarField gh = square_field(c, c.horizontal, f);
  double lhs = pair_sum(c, c.horizontal, f, h, gz, outer, g0);
  double rhs = pair_sum(c, c.vertical, f, h, gh, outer, g0);
  return std::abs(lhs - rhs);
}

double cd_probe(const CarreSetup& c, const ScalarField& f, const MatrixXd& g0, const CDParams& p) {
  if (!(p.nu > 0) || !(p.rho2 > 0) || !(p.kappa >= 0) || !(p.r > 0))
    throw InputError("cd_probe: need nu > 0, rho2 > 0, kappa >= 0, r > 0");
  const double lf = operator_L(c, f, g0, c.scheme.h1);
  const double inv_r = std::isinf(p.r) ? 0.0 : 1.0 / p.r;
  const double g = pair_sum(c, c.horizontal, f, c.scheme.h1, f, c.scheme.h1, g0);
  const double gz = gammaZ(c, f, f, g0);
  return gamma2(c, f, g0).value + p.nu * gammaZ2(c, f, g0).value - inv_r * lf * lf - (p.rho1 - p.kappa / p.nu) * g -
         p.rho2 * gz;
}

std::vector<SweepRow> cd_sweep(const CarreSetup& c, const ScalarField& f, const std::vector<MatrixXd>& points,
                               const std::vector<CDParams>& params) {
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (const auto& p : params) rows.push_back({static_cast<int>(i), p, cd_probe(c, f, points[i], p)});
  return rows;
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json params = {{"rho1", r.params.rho1}, {"rho2", r.params.rho2}, {"kappa", r.params.kappa},
                             {"nu", r.params.nu}};
    params["r"] = std::isinf(r.params.r) ? nlohmann::json("inf") : nlohmann::json(r.params.r);
    out.push_back({{"point", r.point}, {"params", params}, {"residual", r.residual}});
  }
  return out.dump(2);
}

}  // namespace srcurv
