#include <gtest/gtest.h>

#include <cmath>

#include "srcurv/carre.hpp"
#include "srcurv/catalog.hpp"
#include "srcurv/errors.hpp"

using namespace srcurv;

namespace {

CarreSetup setup(const std::string& id) {
  auto e = builtin_exact(id);
  return make_carre(convert_structure<double>(e.structure), model_from_entry(e));
}

// Entries of the model matrix g are polynomial in the group coordinates.
ScalarField entry(int r, int c) {
  return [r, c](const MatrixXd& g) { return g(r, c); };
}

MatrixXd heis_point() { return setup("heis3").model.exp((VectorXd(3) << 0.3, -0.2, 0.5).finished()); }

// x^2 + y z + 0.5 x z + z in Heisenberg matrix coordinates (x = g01, y = g12, z = g02).
ScalarField heis_field() {
  return [](const MatrixXd& g) {
    double x = g(0, 1), y = g(1, 2), z = g(0, 2);
    return x * x + y * z + 0.5 * x * z + z;
  };
}

}  // namespace

TEST(Carre, AbelianLaplacianOfQuadratic) {
  auto c = setup("abelian_3");
  ScalarField f = [](const MatrixXd& g) {
    double x = g(0, 0), y = g(1, 1);
    return x * x + y * y;
  };
  MatrixXd id = MatrixXd::Identity(c.model.rep_dim(), c.model.rep_dim());
  // abelian_3 is modelled by diagonal exponentials, so g00 = e^x: check against the closed form.
  const double l = operator_L(c, f, id, c.scheme.h1);
  EXPECT_NEAR(l, 8.0, 1e-6);
}

TEST(Carre, GammaRoutesAgree) {
  for (const auto& id : {"abelian_3", "heis3"}) {
    auto c = setup(id);
    MatrixXd g0 = c.model.exp(VectorXd::Constant(c.model.dim(), 0.1));
    for (auto [r, s] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 1}}) {
      auto v = gamma(c, entry(r, s), entry(r, s), g0);
      EXPECT_LE(v.discrepancy(), 1e-6) << id << " g" << r << s;
    }
  }
  // X1 = d/da, X2 = d/db + a d/dc at a = 0.3, b = -0.2, c = 0.47:
  // X1 f = 2a + c/2 = 0.835, X2 f = c + a (b + a/2 + 1) = 0.755.
  auto c = setup("heis3");
  auto v = gamma(c, heis_field(), heis_field(), heis_point());
  EXPECT_NEAR(v.sum_of_squares, 0.835 * 0.835 + 0.755 * 0.755, 1e-8);
  EXPECT_LE(v.discrepancy(), 1e-6);
}

TEST(Carre, VerticalGamma) {
  auto c = setup("heis3");
  EXPECT_NEAR(gammaZ(c, heis_field(), heis_field(), heis_point()), 0.9025, 1e-8);
  MatrixXd id = MatrixXd::Identity(3, 3);
  EXPECT_NEAR(gammaZ(c, entry(0, 2), entry(0, 2), id), 1.0, 1e-10);
  EXPECT_NEAR(gammaZ(c, entry(0, 1), entry(0, 1), id), 0.0, 1e-10);
}

TEST(Carre, Hypothesis2OnHeisenberg) {
  auto c = setup("heis3");
  EXPECT_LE(hypothesis2_check(c, heis_field(), heis_point()), 1e-4);
}

TEST(Carre, Gamma2OfHeisenbergCoordinates) {
  // For the horizontal coordinate x, Gamma(x) = 1 and L x = 0, so Gamma_2(x) = 0.
  auto c = setup("heis3");
  auto v = gamma2(c, entry(0, 1), heis_point());
  EXPECT_NEAR(v.value, 0.0, 1e-6);
  EXPECT_FALSE(v.roundoff_suspect);
}

TEST(Carre, RoundoffMonitorFlagsTinySteps) {
  auto c = setup("heis3");
  c.scheme.h1 = 1e-6;
  c.scheme.outer = 1e-5;
  auto v = gamma2(c, heis_field(), heis_point());
  EXPECT_TRUE(v.roundoff_suspect);
}

TEST(Carre, SecondOrderStencilIsLessAccurate) {
  auto c = setup("heis3");
  MatrixXd g0 = heis_point();
  VectorXd x = c.horizontal.col(0);
  ScalarField f = [](const MatrixXd& g) { return std::sin(g(0, 1)) * std::exp(g(0, 2)); };
  const double exact = std::cos(g0(0, 1)) * std::exp(g0(0, 2));  // X1 = d/da
  const double h = 1e-2;
  double e4 = std::abs(lie_derivative(c.model, f, x, g0, 1, h) - exact);
  double e2 = std::abs(lie_derivative_2nd_order(c.model, f, x, g0, 1, h) - exact);
  EXPECT_LT(e4, 1e-8);
  EXPECT_GT(e2, 1e-6);
  EXPECT_THROW(lie_derivative(c.model, f, x, g0, 3, h), InputError);
}

TEST(Carre, CurvatureDimensionProbe) {
  auto c = setup("heis3");
  CDParams p;
  double r = cd_probe(c, heis_field(), heis_point(), p);
  EXPECT_TRUE(std::isfinite(r));
  p.nu = 0;
  EXPECT_THROW(cd_probe(c, heis_field(), heis_point(), p), InputError);
}

TEST(Carre, SweepIsDeterministicJson) {
  auto c = setup("heis3");
  std::vector<MatrixXd> pts = {MatrixXd::Identity(3, 3), heis_point()};
  std::vector<CDParams> params(2);
  params[1].r = 3;
  auto rows = cd_sweep(c, heis_field(), pts, params);
  ASSERT_EQ(rows.size(), 4u);
  std::string a = sweep_json(rows), b = sweep_json(cd_sweep(c, heis_field(), pts, params));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"inf\""), std::string::npos);
}

TEST(Carre, NonFiniteFieldIsNumericError) {
  auto c = setup("heis3");
  ScalarField bad = [](const MatrixXd& g) { return std::log(g(0, 1)); };  // log 0 at the identity
  EXPECT_THROW(operator_L(c, bad, MatrixXd::Identity(3, 3), c.scheme.h1), NumericError);
}
