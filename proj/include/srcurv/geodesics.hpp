#pragma once

#include <string>
#include <vector>

#include "srcurv/catalog.hpp"

namespace srcurv {

using MatrixXd = Eigen::MatrixXd;
using VectorXd = Eigen::VectorXd;

/// Matrix Lie group model: e_i is represented by basis[i] (rep_dim x rep_dim).
class MatrixModel {
 public:
  /// Throws InputError when the commutators do not reproduce the brackets within `tol`.
  MatrixModel(const LieAlgebra<double>& a, std::vector<MatrixXd> basis, double tol = kDefaultTol);

  int rep_dim() const { return rep_dim_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<MatrixXd>& basis() const { return basis_; }

  /// sum_i u_i basis[i]
  MatrixXd embed(const VectorXd& u) const;
  /// Least-squares coordinates of a matrix in the model basis.
  VectorXd coordinates(const MatrixXd& x) const;
  /// exp of embed(u) (Pade scaling-and-squaring).
  MatrixXd exp(const VectorXd& u) const;
  /// Matrix of Ad(g) on the algebra basis: column j = coordinates(g basis[j] g^{-1}).
  MatrixXd Ad(const MatrixXd& g) const;

 private:
  int rep_dim_;
  std::vector<MatrixXd> basis_;
  MatrixXd stacked_;  // vec(basis[i]) as columns
  Eigen::ColPivHouseholderQR<MatrixXd> qr_;
};

template <class T>
MatrixModel model_from_entry(const CatalogData<T>& e);

/// Data for the normal Hamiltonian flow: the algebra, an orthonormal frame
/// X_1..X_m of D (algebra coordinates) and a matrix model.
struct GeodesicProblem {
  LieAlgebra<double> algebra;
  MatrixXd frame;  // n x m
  MatrixModel model;
  bool unit_speed = true;  // false: u = sum xi(X_a) X_a without normalization
};

GeodesicProblem make_problem(const SubRiemannianStructure<double>& s, const MatrixModel& model,
                             bool unit_speed = true);

struct Control {
  VectorXd u;
  double H = 0.0;
  bool abnormal = false;  // xi vanishes on D
};

/// H = |xi restricted to D|.
double hamiltonian(const GeodesicProblem& p, const VectorXd& xi);
/// u = sum_a xi(X_a) X_a / H (unit speed). Sets `abnormal` instead of throwing.
Control normal_control(const GeodesicProblem& p, const VectorXd& xi);

struct CovectorState {
  MatrixXd g;
  VectorXd xi;
  double t = 0.0;
};

struct Trajectory {
  std::vector<CovectorState> samples;
  double step = 0.0;
  double max_h_drift = 0.0;
  double max_coadjoint_residual = 0.0;
};

/// One classical RK4 step of g' = g u(xi), xi'(w) = xi([u(xi), w]).
CovectorState step(const GeodesicProblem& p, const CovectorState& s, double h);

/// Integrates from g = identity (or state0) up to time T with step about h
/// (adjusted so that T is hit exactly). Throws NumericError on NaN or an abnormal state.
Trajectory integrate(const GeodesicProblem& p, const CovectorState& state0, double T, double h);
Trajectory integrate(const GeodesicProblem& p, const VectorXd& xi0, double T, double h);

/// Ad*_g xi = xi o Ad(g)^{-1}, as a coordinate vector.
VectorXd coadjoint_Ad_star(const MatrixModel& m, const MatrixXd& g, const VectorXd& xi);
/// (ad*_u xi)(v) = xi([v, u]).
VectorXd ad_star(const LieAlgebra<double>& a, const VectorXd& u, const VectorXd& xi);

/// max over samples of |xi(t) - (Ad*_{g(t)})^{-1} xi_0|_inf.
double coadjoint_section_check(const GeodesicProblem& p, const Trajectory& tr);

/// sigma_xi(u, v) = xi([u, v]).
template <class T>
T symplectic_eval(const LieAlgebra<T>& a, const Vector<T>& xi, const Vector<T>& u, const Vector<T>& v) {
  return xi.dot(bracket(a, u, v));
}

/// Rank of the skew matrix xi([e_i, e_j]), i.e. the dimension of the coadjoint orbit through xi.
template <class T>
int orbit_tangent_dim(const LieAlgebra<T>& a, const Vector<T>& xi) {
  const int n = a.dim();
  Matrix<T> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = symplectic_eval(a, xi, a.basis_vector(i), a.basis_vector(j));
  return rank<T>(m);
}

struct ConvergenceStudy {
  std::vector<double> steps;        // h, h/2, h/4, ...
  std::vector<double> differences;  // |y(h_k) - y(h_{k+1})| at time T, state (g, xi) in max norm
  double order = 0.0;               // least-squares slope of log2 differences against log2 h
};

/// Self-convergence of the endpoint under repeated step halving from h0.
ConvergenceStudy self_convergence(const GeodesicProblem& p, const VectorXd& xi0, double T, double h0,
                                  int halvings = 4);

struct AbnormalSearch {
  MatrixXd covectors;             // n x k, orthonormal basis of the candidate family (k may be 0)
  VectorXd singular_values;       // of the stacked system
  std::vector<double> t_samples;
};

inline const std::vector<double> kAbnormalGrid{0.0, 0.3, 0.7, 1.1, 1.9};

/// Covectors xi_0 with xi_0(Ad(exp(t_k u)) X_a) = 0 for all samples t_k and D-frame vectors X_a.
/// Requires u in D.
AbnormalSearch abnormal_covector_search(const GeodesicProblem& p, const VectorXd& u,
                                        const std::vector<double>& t_samples = kAbnormalGrid);

/// One JSON object per sample: {"t", "g" (row-major), "xi", "H"}.
std::string trajectory_jsonl(const GeodesicProblem& p, const Trajectory& tr);

}  // namespace srcurv
