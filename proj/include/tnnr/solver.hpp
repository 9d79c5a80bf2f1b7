#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tnnr/completion.hpp"
#include "tnnr/penalty.hpp"
#include "tnnr/tensor.hpp"
#include "tnnr/weights.hpp"

namespace tnnr {

struct SolverConfig {
  double lambda = 5.0;
  double theta1 = 0.49;
  double theta2 = 0.49;
  double epsilon = 0.01;  // the slack in the stepsize rule
  double lf = LossModel::lipschitz;
  // Stepsize 1/mu. The auto rule (mu_fixed empty) is the worst-case bound
  // of the convergence analysis; at theta = 0.49 it gives mu = 51*lf and
  // the iteration crawls. A fixed mu a little above lf converges orders of
  // magnitude faster and the H-monitor still certifies every run, so a
  // calibrated fixed value is the default.
  std::optional<double> mu_fixed = 4.0;
  // Inputs are rescaled so max|X^0| hits this value before iterating
  // (undone on return). The nonconvex penalty is not scale-invariant:
  // too small a scale and the fixed point's shrinkage bias dominates,
  // too large and rank reduction stalls. Balancing the threshold against
  // the spectrum for the smoothed 2/3 penalty gives a preferred scale
  // proportional to n3^(27/37); negative selects that auto rule
  // (0.93 * n3^(27/37), calibrated on the synthetic benchmark), zero
  // disables rescaling, positive is used as given.
  double scale_target = -1.0;
  int max_iters = 500;
  double tol_rel_change = 1e-4;
  std::optional<double> tol_ground_truth;  // synthetic mode only
  PenaltyFunction penalty = PenaltyFunction::smoothed_power(2.0 / 3.0, 1e-6);
  std::uint64_t seed = 0;

  // Fixed value if set; otherwise
  // lf * max{theta2/theta1, (1-theta2)/(1-2*theta1-epsilon)}, and with
  // theta1 = 0 only theta2 = 0 is accepted, giving lf*(1-theta2)/(1-epsilon).
  double mu() const;
  void validate() const;
};

struct IterRecord {
  int iter = 0;
  double objective = 0.0;   // F(X^t)
  double h_value = 0.0;     // F(X^t) + delta ||X^t - X^{t-1}||^2
  double step_norm = 0.0;   // ||X^t - X^{t-1}||
  double rel_change = 0.0;  // step_norm / max(||X^{t-1}||, 1)
  double loss = 0.0;
  double seconds = 0.0;     // wall time since solve start
};

struct ConvergenceTrace {
  std::vector<IterRecord> records;
  double delta = 0.0;  // mu * theta1 / 2
  std::string stop_reason;

  void write_csv(const std::string& path) const;
};

struct SolveResult {
  Tensor3 x;
  ConvergenceTrace trace;
  int iterations = 0;
};

// Thrown when the objective blows past the divergence guard; carries the
// trace accumulated so far for post-mortem export.
struct SolverDivergence : DivergenceError {
  ConvergenceTrace trace;
  SolverDivergence(const std::string& what, ConvergenceTrace t)
      : DivergenceError(what), trace(std::move(t)) {}
};

struct MonitorReport {
  std::vector<int> h_increase_iters;        // H rose beyond slack
  std::vector<int> weak_decrement_iters;    // drop < (eps lf / 2) ||delta||^2 - slack
  bool step_norm_below_tol = false;
  bool ok() const { return h_increase_iters.empty() && weak_decrement_iters.empty(); }
};

// F(X) = lambda * sum_k rho(sum_i rho(rho(sigma_i^k))) + f(X).
double objective(const Tensor3& x, const SolverConfig& cfg, const LossModel& loss);
double objective_from_singular_values(const std::vector<Eigen::VectorXd>& sv,
                                      const SolverConfig& cfg, double loss_value);

// Y = X + theta1 (X - Xprev), Z = X + theta2 (X - Xprev).
std::pair<Tensor3, Tensor3> extrapolate(const Tensor3& x, const Tensor3& x_prev,
                                        const SolverConfig& cfg);

// argmin_X lambda ||X||_w + <X - Y, grad f(Z)> + mu/2 ||X - Y||^2,
// i.e. weighted_tsvt(Y - grad f(Z)/mu, lambda/mu, w).
TsvtResult prox_step(const Tensor3& y, const Tensor3& z, const SolverConfig& cfg,
                     const WeightScheme& w, const LossModel& loss);

// Static schemes keep w0 fixed; passing std::nullopt selects the
// adaptive reweighting (recomputed each iteration from sigma(X^{t+1})).
// The returned x is in the caller's units; trace objective/loss columns
// are in the internally rescaled units (see scale_target).
SolveResult solve(const Tensor3& m_init, const SolverConfig& cfg,
                  const std::optional<WeightScheme>& w0, const LossModel& loss,
                  const Tensor3* ground_truth = nullptr);

MonitorReport monitor_check(const ConvergenceTrace& trace, const SolverConfig& cfg);

}  // namespace tnnr
