// Time integration: Stokes-projection initialization, semi-implicit BDF2
// stepping with extrapolated transport, and the constrained saddle-point
// solves with the zero-mean pressure multiplier.

#ifndef SVCIP_TIMELOOP_HPP
#define SVCIP_TIMELOOP_HPP

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "svcip/assembly.hpp"
#include "svcip/config.hpp"

namespace svcip {

struct DiscreteState {
  double t = 0.0;
  Eigen::VectorXd u;  // velocity coefficients, boundary dofs included (zero)
  Eigen::VectorXd p;  // pressure coefficients, zero mean
};

/// The constrained linear system
///   [ K  -B^T  0 ] [u]   [f]
///   [-B   0    m ] [p] = [g]
///   [ 0   m^T  0 ] [l]   [0]
/// with homogeneous Dirichlet velocity dofs eliminated. The multiplier row
/// pins the pressure mean; a pressure-free system (n_p = 0) degenerates to
/// K u = f.
class SaddleSystem {
 public:
  /// Structure from a discretization: B, the mean vector, boundary elimination.
  explicit SaddleSystem(const Discretization& disc);
  /// Free-form structure (tests): explicit constraint matrix and mean vector.
  SaddleSystem(SparseMat divergence, Eigen::VectorXd mean, std::vector<char> dof_is_boundary);

  /// Rebuild and refactorize with a new velocity block. Throws SolverError on
  /// a singular factorization.
  void factorize(const SparseMat& velocity_block);

  struct Solution {
    Eigen::VectorXd u;  // full-size, boundary entries zero
    Eigen::VectorXd p;
    double lambda = 0.0;
    double rel_residual = 0.0;
  };
  /// Solve for a full-size velocity right-hand side (boundary entries are
  /// ignored) and a pressure right-hand side. One step of iterative
  /// refinement; throws SolverError if the relative residual exceeds 1e-10.
  Solution solve(const Eigen::VectorXd& rhs_u_full, const Eigen::VectorXd& rhs_p) const;

  int n_free() const { return n_free_; }
  int n_pressure() const { return n_p_; }
  /// The assembled constrained matrix (column-major), for external checks.
  const Eigen::SparseMatrix<double>& matrix() const { return mat_; }
  /// The constrained right-hand side matching matrix().
  Eigen::VectorXd combined_rhs(const Eigen::VectorXd& rhs_u_full, const Eigen::VectorXd& rhs_p) const;

 private:
  SparseMat divergence_;
  Eigen::VectorXd mean_;
  std::vector<int> free_of_full_;
  std::vector<int> full_of_free_;
  int n_full_ = 0, n_free_ = 0, n_p_ = 0, n_total_ = 0;
  Eigen::SparseMatrix<double> mat_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  bool pattern_ready_ = false;
};

/// Discrete velocity matching the gradient of a target field against all
/// discretely divergence-free test functions, imposed through the full
/// saddle system: (grad s_h, grad v) - (p, div v) = (G, grad v), (div s_h, q) = 0.
Eigen::VectorXd stokes_projection(const Discretization& disc, const Matrix2dField& target_gradient);

/// Persistent operators for a transient run.
struct StepOperators {
  Scheme scheme;
  double nu;
  CipParameters cip;
  SparseMat mass;
  SparseMat stiffness;  // unscaled (grad, grad)
  SparseMat graddiv;    // gamma-scaled; empty outside ThGradDiv
  Eigen::VectorXd steady_load;  // time-independent extra load (may be empty)
  std::shared_ptr<SaddleSystem> saddle;
};
StepOperators make_step_operators(const Discretization& disc, const RunConfig& config);

/// One BDF2 step: transport extrapolated as 2 u^n - u^{n-1}, CIP/grad-div per
/// scheme, forcing evaluated at the new time level.
DiscreteState advance_bdf2(const Discretization& disc, StepOperators& ops,
                           const DiscreteState& state_n, const DiscreteState& state_nm1, double dt,
                           const VectorField& forcing_next);

/// One backward-Euler step with lagged transport (the bootstrap step).
DiscreteState advance_be(const Discretization& disc, StepOperators& ops,
                         const DiscreteState& state_n, double dt, const VectorField& forcing_next);

struct Trajectory {
  std::vector<DiscreteState> samples;  // states at t = 0, 0.1, ..., T
  double dt = 0.0;
  int n_steps = 0;
  double max_divergence = 0.0;       // max over steps of ||div u_h||_0
  double max_divergence_ratio = 0.0; // max of ||div u_h||_0 / (1 + ||u_h||_1)
};

/// Full transient run of the manufactured-solution experiment described by
/// `config`: Stokes-projection initial data, one backward-Euler bootstrap
/// step, BDF2 afterwards, states sampled every 0.1 time units.
Trajectory run_transient(const Discretization& disc, const RunConfig& config);

/// The step size the auto policy selects for a given mesh (already rounded so
/// that 0.1 is an integer multiple).
double auto_time_step(const RunConfig& config, double h);

}  // namespace svcip

#endif
