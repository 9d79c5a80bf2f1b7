#include "tnnr/penalty.hpp"

#include <cmath>

namespace tnnr {

PenaltyFunction PenaltyFunction::identity() {
  return {Kind::Identity, 1.0, 0.0};
}

PenaltyFunction PenaltyFunction::power(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("power penalty requires 0 < p <= 1");
  return {Kind::Power, p, 0.0};
}

PenaltyFunction PenaltyFunction::smoothed_power(double p, double eps_s) {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("smoothed_power requires 0 < p <= 1");
  if (!(eps_s > 0.0)) throw ConfigError("smoothed_power requires eps_s > 0");
  return {Kind::SmoothedPower, p, eps_s};
}

double PenaltyFunction::lipschitz_grad() const {
  switch (kind_) {
    case Kind::Identity:
      return 0.0;
    case Kind::Power:
      return p_ < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
    case Kind::SmoothedPower:
      // |rho''| is maximal at 0: p(1-p) eps_s^{p-2}.
      return p_ * (1.0 - p_) * std::pow(eps_s_, p_ - 2.0);
  }
  return 0.0;
}

bool PenaltyFunction::has_finite_grad_at_zero() const {
  return kind_ != Kind::Power || p_ >= 1.0;
}

std::string PenaltyFunction::name() const {
  switch (kind_) {
    case Kind::Identity:
      return "identity";
    case Kind::Power:
      return "power(" + std::to_string(p_) + ")";
    case Kind::SmoothedPower:
      return "smoothed_power(" + std::to_string(p_) + "," + std::to_string(eps_s_) + ")";
  }
  return "?";
}

double PenaltyFunction::eval(double t) const {
  if (!(t >= 0.0)) throw ConfigError("penalty eval: t must be >= 0");
  switch (kind_) {
    case Kind::Identity:
      return t;
    case Kind::Power:
      return std::pow(t, p_);
    case Kind::SmoothedPower:
      return std::pow(t + eps_s_, p_) - std::pow(eps_s_, p_);
  }
  return 0.0;
}

double PenaltyFunction::grad(double t) const {
  if (!(t >= 0.0)) throw ConfigError("penalty grad: t must be >= 0");
  switch (kind_) {
    case Kind::Identity:
      return 1.0;
    case Kind::Power:
      if (t == 0.0 && p_ < 1.0) {
        throw NumericalError("power penalty gradient is singular at 0; use smoothed_power");
      }
      return p_ * std::pow(t, p_ - 1.0);
    case Kind::SmoothedPower:
      return p_ * std::pow(t + eps_s_, p_ - 1.0);
  }
  return 0.0;
}

namespace {

// Objective of the scalar prox subproblem.
inline double prox_objective(const PenaltyFunction& p, double w, double sigma, double d) {
  return w * p.eval(d) + 0.5 * (d - sigma) * (d - sigma);
}

}  // namespace

double scalar_prox(const PenaltyFunction& p, double w, double sigma) {
  if (!std::isfinite(w) || !std::isfinite(sigma) || w < 0.0 || sigma < 0.0) {
    throw ConfigError("scalar_prox: w and sigma must be finite and nonnegative");
  }
  if (w == 0.0 || sigma == 0.0) return sigma == 0.0 ? 0.0 : sigma;
  if (p.kind() == PenaltyFunction::Kind::Identity) {
    return std::max(sigma - w, 0.0);  // soft threshold
  }

  // Stationarity: psi(d) = d - sigma + w rho'(d) = 0.  psi is convex for
  // the power family, psi(sigma) = w rho'(sigma) > 0, and the minimizer
  // candidates are 0 and the largest root of psi in (0, sigma).
  auto psi = [&](double d) { return d - sigma + w * p.grad(d); };

  double lo = sigma;
  bool bracketed = false;
  for (int i = 0; i < 200; ++i) {
    lo *= 0.5;
    double v;
    if (p.kind() == PenaltyFunction::Kind::Power && lo == 0.0) break;
    v = psi(lo);
    if (v < 0.0) {
      bracketed = true;
      break;
    }
    if (lo < 1e-18 * sigma) break;
  }
  if (!bracketed) return 0.0;  // psi > 0 on (0, sigma]: objective increasing

  // Bisection to 1e-10 absolute, then Newton polish.
  double hi = sigma;
  while (hi - lo > 1e-12 * std::max(1.0, sigma)) {
    double mid = 0.5 * (lo + hi);
    if (psi(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double d = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    double h = 1e-7 * std::max(1.0, d);
    double dpsi = (psi(d + h) - psi(d - h)) / (2 * h);
    if (dpsi <= 0.0) break;
    double step = psi(d) / dpsi;
    double nd = d - step;
    if (!(nd > 0.0 && nd <= sigma)) break;
    d = nd;
  }

  return prox_objective(p, w, sigma, d) < prox_objective(p, w, sigma, 0.0) ? d : 0.0;
}

bool check_prox_monotone(const PenaltyFunction& p, double w, const std::vector<double>& grid) {
  return check_prox_monotone_fn([&](double s) { return scalar_prox(p, w, s); }, grid);
}

}  // namespace tnnr
