#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "srcurv/catalog.hpp"
#include "srcurv/errors.hpp"
#include "srcurv/geodesics.hpp"

using namespace srcurv;

namespace {

GeodesicProblem problem(const std::string& id, bool unit_speed = true) {
  auto e = builtin_exact(id);
  return make_problem(convert_structure<double>(e.structure), model_from_entry(e), unit_speed);
}

VectorXd v3(double a, double b, double c) { return (VectorXd(3) << a, b, c).finished(); }

}  // namespace

TEST(MatrixModel, ReproducesBracketsAndExp) {
  auto p = problem("so3");
  VectorXd u = v3(0, 0, M_PI / 2);
  MatrixXd r = p.model.exp(u);
  EXPECT_NEAR((r.transpose() * r - MatrixXd::Identity(3, 3)).norm(), 0.0, 1e-14);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-14);
  VectorXd x = v3(0.3, -1.2, 2.0);
  EXPECT_NEAR((p.model.coordinates(p.model.embed(x)) - x).norm(), 0.0, 1e-14);
}

TEST(MatrixModel, RejectsWrongCommutators) {
  auto a = convert_algebra<double>(builtin_exact("heis3").algebra());
  std::vector<MatrixXd> basis(3, MatrixXd::Zero(3, 3));
  basis[0](0, 1) = 1;
  basis[1](1, 2) = 1;
  basis[2](0, 2) = -1;  // wrong sign
  EXPECT_THROW(MatrixModel(a, basis), InputError);
  basis[2](0, 2) = 1;
  EXPECT_NO_THROW(MatrixModel(a, basis));
  basis[2] = basis[0];
  EXPECT_THROW(MatrixModel(a, basis), InputError);
}

TEST(MatrixModel, AdjointIsAHomomorphism) {
  auto p = problem("liu_sussman_A");
  MatrixXd g = p.model.exp((VectorXd(4) << 0.2, -0.4, 0.7, 0.1).finished());
  MatrixXd h = p.model.exp((VectorXd(4) << -0.5, 0.3, 0.2, 1.0).finished());
  EXPECT_NEAR((p.model.Ad(g * h) - p.model.Ad(g) * p.model.Ad(h)).norm(), 0.0, 1e-12);
}

TEST(Hamiltonian, ControlAndAbnormalDetection) {
  auto p = problem("heis3");
  Control c = normal_control(p, v3(3, 4, 7));
  EXPECT_DOUBLE_EQ(c.H, 5.0);
  EXPECT_NEAR((c.u - v3(0.6, 0.8, 0)).norm(), 0.0, 1e-15);
  EXPECT_TRUE(normal_control(p, v3(0, 0, 1)).abnormal);
  EXPECT_THROW(integrate(p, v3(0, 0, 1), 1.0, 0.01), PreconditionError);
}

TEST(Geodesic, ConservationOnSo3AndHeisenberg) {
  for (const auto& [id, xi] : std::vector<std::pair<std::string, VectorXd>>{
           {"so3", v3(1, 0, 0)}, {"so3", v3(0.6, 0.8, 0.5)}, {"heis3", v3(1, 0, 0.5)}, {"heis3", v3(0.3, 1, 2)}}) {
    auto tr = integrate(problem(id), xi, 1.0, 1e-2);
    EXPECT_EQ(tr.samples.size(), 101u);
    EXPECT_LE(tr.max_h_drift, 1e-6) << id;
    EXPECT_LE(tr.max_coadjoint_residual, 1e-6) << id;
  }
}

TEST(Geodesic, HeisenbergCenterComponentIsConstant) {
  auto tr = integrate(problem("heis3"), v3(1, 0, 0.5), 2.0, 1e-2);
  for (const auto& s : tr.samples) EXPECT_DOUBLE_EQ(s.xi(2), 0.5);
}

TEST(Geodesic, So3CasimirIsConserved) {
  // |xi| is a Casimir of so(3).
  auto tr = integrate(problem("so3"), v3(0.6, 0.8, 0.5), 3.0, 1e-2);
  const double c0 = tr.samples.front().xi.norm();
  for (const auto& s : tr.samples) EXPECT_NEAR(s.xi.norm(), c0, 1e-9);
}

TEST(Geodesic, FourthOrderSelfConvergence) {
  for (const auto& [id, xi] :
       std::vector<std::pair<std::string, VectorXd>>{{"so3", v3(0.6, 0.8, 0.5)}, {"heis3", v3(0.3, 1, 2)}}) {
    auto c = self_convergence(problem(id), xi, 1.0, 0.1);
    EXPECT_GE(c.order, 3.8) << id;
    EXPECT_LE(c.order, 4.3) << id;
  }
}

TEST(Geodesic, UnnormalizedFlowRunsFaster) {
  auto unit = integrate(problem("heis3"), v3(2, 0, 0), 1.0, 1e-2);
  auto raw = integrate(problem("heis3", false), v3(2, 0, 0), 1.0, 1e-2);
  EXPECT_NEAR(unit.samples.back().g(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(raw.samples.back().g(0, 1), 2.0, 1e-12);
}

TEST(Geodesic, StepIsAdjustedToHitFinalTime) {
  auto tr = integrate(problem("so3"), v3(1, 0, 0), 1.0, 0.3);
  EXPECT_DOUBLE_EQ(tr.samples.back().t, 1.0);
  EXPECT_EQ(tr.samples.size(), 4u);
  EXPECT_THROW(integrate(problem("so3"), v3(1, 0, 0), 1.0, 0.0), InputError);
}

TEST(Geodesic, TrajectoryJsonLines) {
  auto p = problem("so3");
  auto tr = integrate(p, v3(1, 0, 0), 0.1, 0.05);
  std::string text = trajectory_jsonl(p, tr);
  std::istringstream in(text);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["g"].size(), 9u);
    EXPECT_EQ(j["xi"].size(), 3u);
    ++lines;
  }
  EXPECT_EQ(lines, 3);
}

TEST(Coadjoint, InfinitesimalActionMatchesAdStar) {
  auto p = problem("liu_sussman_A");
  VectorXd u = (VectorXd(4) << 0.3, -0.1, 0.2, 0.5).finished();
  VectorXd xi = (VectorXd(4) << 1.0, 2.0, -0.5, 0.25).finished();
  const double eps = 1e-6;
  VectorXd fd = (coadjoint_Ad_star(p.model, p.model.exp(eps * u), xi) -
                 coadjoint_Ad_star(p.model, p.model.exp(-eps * u), xi)) /
                (2 * eps);
  // d/dt xi o Ad(exp(-tu)) at t = 0 is v -> xi([v, u]) = ad*_u xi.
  EXPECT_NEAR((fd - ad_star(p.algebra, u, xi)).norm(), 0.0, 1e-8);
}

TEST(Coadjoint, OrbitDimensions) {
  auto heis = builtin_exact("heis3").algebra();
  EXPECT_EQ(orbit_tangent_dim(heis, Vector<Rational>((Vector<Rational>(3) << 0, 0, 1).finished())), 2);
  EXPECT_EQ(orbit_tangent_dim(heis, Vector<Rational>((Vector<Rational>(3) << 1, 0, 0).finished())), 0);
  auto so3 = builtin_exact("so3").algebra();
  EXPECT_EQ(orbit_tangent_dim(so3, Vector<Rational>((Vector<Rational>(3) << 1, 2, 3).finished())), 2);
}

TEST(Abnormal, LiuSussmanAlongG) {
  auto p = problem("liu_sussman_A");
  auto e = builtin_exact("liu_sussman_A");
  VectorXd g = convert<double>(Matrix<Rational>(e.structure.distribution().col(1)));
  auto res = abnormal_covector_search(p, g);
  ASSERT_EQ(res.covectors.cols(), 1);
  VectorXd c = res.covectors.col(0);
  c /= c(0);
  EXPECT_NEAR((c - (VectorXd(4) << 1, 1, 0, -1).finished()).norm(), 0.0, 1e-9);
  // The covector annihilates D along the whole curve.
  for (double t : {0.0, 0.5, 2.5}) {
    MatrixXd ad = p.model.Ad(p.model.exp(t * g));
    EXPECT_NEAR((res.covectors.col(0).transpose() * ad * p.frame).norm(), 0.0, 1e-9);
  }
}

TEST(Abnormal, NoneAlongF) {
  auto p = problem("liu_sussman_A");
  auto e = builtin_exact("liu_sussman_A");
  VectorXd f = convert<double>(Matrix<Rational>(e.structure.distribution().col(0)));
  EXPECT_EQ(abnormal_covector_search(p, f).covectors.cols(), 0);
}

TEST(Abnormal, NoneOnGenericHeisenbergDirections) {
  auto p = problem("heis3");
  std::mt19937 rng(0);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int i = 0; i < 10; ++i) {
    VectorXd u = v3(d(rng), d(rng), 0);
    EXPECT_EQ(abnormal_covector_search(p, u).covectors.cols(), 0);
  }
  EXPECT_THROW(abnormal_covector_search(p, v3(0, 0, 1)), PreconditionError);
}
