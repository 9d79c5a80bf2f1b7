#include <doctest.h>

#include <cmath>
#include <random>

#include "tnnr/penalty.hpp"

using namespace tnnr;

namespace {

// Brute-force minimizer of w*rho(d) + (d-sigma)^2/2 on a uniform grid.
double grid_prox(const PenaltyFunction& p, double w, double sigma, double step) {
  double best_d = 0.0;
  double best_v = w * p.eval(0.0) + 0.5 * sigma * sigma;
  for (double d = step; d <= sigma + step; d += step) {
    double v = w * p.eval(d) + 0.5 * (d - sigma) * (d - sigma);
    if (v < best_v) {
      best_v = v;
      best_d = d;
    }
  }
  return best_d;
}

}  // namespace

TEST_CASE("penalty values and gradients") {
  PenaltyFunction id = PenaltyFunction::identity();
  CHECK(id.eval(3.5) == 3.5);
  CHECK(id.grad(0.0) == 1.0);

  PenaltyFunction pw = PenaltyFunction::power(0.5);
  CHECK(pw.eval(4.0) == doctest::Approx(2.0));
  CHECK(pw.grad(4.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(pw.grad(0.0), NumericalError);
  CHECK(!pw.has_finite_grad_at_zero());
  CHECK(std::isinf(pw.lipschitz_grad()));

  PenaltyFunction sm = PenaltyFunction::smoothed_power(2.0 / 3.0, 1e-6);
  CHECK(sm.eval(0.0) == 0.0);
  CHECK(sm.grad(0.0) == doctest::Approx((2.0 / 3.0) * std::pow(1e-6, -1.0 / 3.0)));
  CHECK(sm.has_finite_grad_at_zero());
  CHECK(std::isfinite(sm.lipschitz_grad()));

  CHECK_THROWS_AS(PenaltyFunction::power(0.0), ConfigError);
  CHECK_THROWS_AS(PenaltyFunction::power(1.5), ConfigError);
  CHECK_THROWS_AS(PenaltyFunction::smoothed_power(0.5, 0.0), ConfigError);
  CHECK_THROWS_AS(sm.eval(-1.0), ConfigError);
}

TEST_CASE("smoothed power is concave and nondecreasing") {
  PenaltyFunction sm = PenaltyFunction::smoothed_power(2.0 / 3.0, 1e-4);
  double prev_val = 0.0, prev_grad = sm.grad(0.0);
  for (double t = 0.1; t < 20.0; t += 0.1) {
    CHECK(sm.eval(t) >= prev_val);
    CHECK(sm.grad(t) <= prev_grad + 1e-15);
    prev_val = sm.eval(t);
    prev_grad = sm.grad(t);
  }
}

TEST_CASE("identity prox is the soft threshold") {
  PenaltyFunction id = PenaltyFunction::identity();
  CHECK(scalar_prox(id, 1.0, 3.0) == doctest::Approx(2.0));
  CHECK(scalar_prox(id, 1.0, 0.5) == 0.0);
  CHECK(scalar_prox(id, 0.0, 7.0) == 7.0);
  CHECK(scalar_prox(id, 2.0, 0.0) == 0.0);
}

TEST_CASE("prox matches a fine grid search") {
  std::mt19937_64 rng(70);
  std::uniform_real_distribution<double> uw(0.01, 3.0), us(0.0, 5.0);
  for (const auto& p : {PenaltyFunction::smoothed_power(2.0 / 3.0, 1e-6),
                        PenaltyFunction::power(0.5), PenaltyFunction::identity()}) {
    for (int rep = 0; rep < 25; ++rep) {
      double w = uw(rng), sigma = us(rng);
      double fast = scalar_prox(p, w, sigma);
      double slow = grid_prox(p, w, sigma, 1e-5);
      CHECK(std::abs(fast - slow) < 1e-3);
    }
  }
}

TEST_CASE("prox rejects invalid arguments") {
  PenaltyFunction id = PenaltyFunction::identity();
  CHECK_THROWS_AS(scalar_prox(id, -1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(scalar_prox(id, 1.0, -1.0), ConfigError);
}

TEST_CASE("monotonicity gate accepts the power family") {
  std::vector<double> grid;
  for (double s = 0.0; s <= 10.0; s += 0.05) grid.push_back(s);
  CHECK(check_prox_monotone(PenaltyFunction::identity(), 1.0, grid));
  CHECK(check_prox_monotone(PenaltyFunction::smoothed_power(2.0 / 3.0, 1e-6), 1.0, grid));
  CHECK(check_prox_monotone(PenaltyFunction::power(0.5), 0.5, grid));
}

TEST_CASE("monotonicity gate catches a broken operator") {
  std::vector<double> grid{0.0, 1.0, 2.0, 3.0};
  CHECK_FALSE(check_prox_monotone_fn([](double s) { return -s; }, grid));
  CHECK(check_prox_monotone_fn([](double s) { return s * s; }, grid));
}
