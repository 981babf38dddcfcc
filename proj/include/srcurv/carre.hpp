#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "srcurv/geodesics.hpp"

namespace srcurv {

/// Smooth function on the matrix model of the group; must be reentrant.
using ScalarField = std::function<double(const MatrixXd&)>;

/// Central 4th-order stencils. `h1` is the step for derivatives of the input
/// field; `outer` is used when differentiating fields that are themselves
/// finite-difference evaluations (Gamma_2, the commutation check).
struct FDScheme {
  double h1 = 1e-3;
  double outer = 1e-2;
};

struct CarreSetup {
  MatrixModel model;
  MatrixXd horizontal;  // orthonormal frame X_1..X_m of D (algebra coordinates)
  MatrixXd vertical;    // orthonormal frame Z_1..Z_l of the rigging
  FDScheme scheme;
};

CarreSetup make_carre(const SubRiemannianStructure<double>& s, const MatrixModel& model, FDScheme scheme = {});

/// d^k/dt^k f(g0 exp(t X)) at t = 0, k in {1, 2}.
double lie_derivative(const MatrixModel& m, const ScalarField& f, const VectorXd& x, const MatrixXd& g0, int order,
                      double h);

/// 2nd-order central estimate with the same step; used by the stencil-consistency monitor.
double lie_derivative_2nd_order(const MatrixModel& m, const ScalarField& f, const VectorXd& x, const MatrixXd& g0,
                                int order, double h);

/// L f = sum_a X_a^2 f.
double operator_L(const CarreSetup& c, const ScalarField& f, const MatrixXd& g0, double h);

struct GammaValue {
  double bakry_emery;   // 1/2 (L(fg) - f Lg - g Lf)
  double sum_of_squares;  // sum_a (X_a f)(X_a g)
  double discrepancy() const { return std::abs(bakry_emery - sum_of_squares); }
};

GammaValue gamma(const CarreSetup& c, const ScalarField& f, const ScalarField& g, const MatrixXd& g0);

/// sum_j (Z_j f)(Z_j g)
double gammaZ(const CarreSetup& c, const ScalarField& f, const ScalarField& g, const MatrixXd& g0);

struct Gamma2Value {
  double value;
  double value_half_step;  // same quantity with the outer step halved
  bool roundoff_suspect;   // halving did not shrink the change as a 4th-order stencil should
};

/// Gamma_2(f) = 1/2 (L Gamma(f) - 2 Gamma(f, Lf)).
Gamma2Value gamma2(const CarreSetup& c, const ScalarField& f, const MatrixXd& g0);
/// Gamma_2^Z(f) = 1/2 (L Gamma^Z(f) - 2 Gamma^Z(f, Lf)).
Gamma2Value gammaZ2(const CarreSetup& c, const ScalarField& f, const MatrixXd& g0);

/// |Gamma(f, Gamma^Z(f)) - Gamma^Z(f, Gamma(f))|
double hypothesis2_check(const CarreSetup& c, const ScalarField& f, const MatrixXd& g0);

struct CDParams {
  double rho1 = 0.0;
  double rho2 = 1.0;
  double kappa = 0.0;
  double r = std::numeric_limits<double>::infinity();
  double nu = 1.0;
};

/// Gamma_2 + nu Gamma_2^Z - (1/r)(Lf)^2 - (rho1 - kappa/nu) Gamma(f) - rho2 Gamma^Z(f).
/// Nonnegative (up to FD slack) where the inequality holds at this sample.
double cd_probe(const CarreSetup& c, const ScalarField& f, const MatrixXd& g0, const CDParams& p);

struct SweepRow {
  int point;
  CDParams params;
  double residual;
};

std::vector<SweepRow> cd_sweep(const CarreSetup& c, const ScalarField& f, const std::vector<MatrixXd>& points,
                               const std::vector<CDParams>& params);

/// JSON array of {point, params, residual}.
std::string sweep_json(const std::vector<SweepRow>& rows);

}  // namespace srcurv
