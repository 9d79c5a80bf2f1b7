#pragma once

#include <limits>
#include <string>
#include <vector>

#include "tnnr/errors.hpp"

namespace tnnr {

// Scalar concave penalty rho on [0, inf).  rho(0) = 0, rho nondecreasing
// and concave.  The smoothed power variant keeps rho' finite at 0 so the
// reweighting of the solver stays well defined.
class PenaltyFunction {
 public:
  enum class Kind { Identity, Power, SmoothedPower };

  static PenaltyFunction identity();
  static PenaltyFunction power(double p);
  static PenaltyFunction smoothed_power(double p, double eps_s);

  Kind kind() const { return kind_; }
  double exponent() const { return p_; }
  double smoothing() const { return eps_s_; }
  // Lipschitz constant of rho' (infinity sentinel for raw power p < 1).
  double lipschitz_grad() const;
  bool has_finite_grad_at_zero() const;
  std::string name() const;

  double eval(double t) const;
  double grad(double t) const;

 private:
  PenaltyFunction(Kind k, double p, double eps_s) : kind_(k), p_(p), eps_s_(eps_s) {}
  Kind kind_;
  double p_;
  double eps_s_;
};

// Global minimizer of w * rho(delta) + 0.5 * (delta - sigma)^2 over
// delta >= 0.
double scalar_prox(const PenaltyFunction& p, double w, double sigma);

// True iff scalar_prox is nondecreasing along the given ascending sigma
// grid.  Admission gate for weight schemes (Theorem-1 style operators
// need a monotone prox).
bool check_prox_monotone(const PenaltyFunction& p, double w, const std::vector<double>& grid);

// Same check for an arbitrary prox map; lets tests exercise the checker
// against a deliberately broken operator.
template <class Prox>
bool check_prox_monotone_fn(Prox&& prox, const std::vector<double>& grid) {
  double prev = -std::numeric_limits<double>::infinity();
  for (double s : grid) {
    double out = prox(s);
    if (out + 1e-12 < prev) return false;
    prev = out;
  }
  return true;
}

}  // namespace tnnr
