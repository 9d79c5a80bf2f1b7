#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "tnnr/penalty.hpp"
#include "tnnr/tensor.hpp"

namespace tnnr {

// Per-slice weights alpha_k and per-singular-value weights beta_i^k used
// by the double weighted spectral norm and the weighted t-SVT.
struct WeightScheme {
  enum class Kind { Static, Adaptive };

  Kind kind = Kind::Static;
  std::vector<double> alpha;               // n3 entries
  std::vector<Eigen::VectorXd> beta;       // n3 vectors of length r = min(n1,n2)
  PenaltyFunction penalty = PenaltyFunction::identity();
  std::optional<std::string> preset_tag;

  // Intermediate quantities of the adaptive update, kept for the
  // convergence monitor: h_i^k = rho(sigma_i^k), g_k = sum_i rho(h_i^k).
  std::vector<Eigen::VectorXd> h;
  std::vector<double> g;

  int n3() const { return int(alpha.size()); }
  int r() const { return beta.empty() ? 0 : int(beta[0].size()); }

  // Throws ConfigError if alpha/beta violate the positivity and
  // per-slice ordering requirements.
  void validate() const;
};

struct PresetParams {
  int truncation = -1;   // N for pstnn/ttnn
  double eps = 1e-2;     // wtnn / wsp floor
  double p = 0.5;        // wsp exponent
  double c = 1.0;        // wsp numerator
};

// Static schemes of the standard relaxation table.  Tags: "tnn",
// "pstnn", "wtnn", "ttnn", "wsp".  Data-dependent rows (wtnn, wsp)
// freeze their beta from the reference tensor.
WeightScheme classic_preset(const std::string& tag, const PresetParams& params, Dims3 dims,
                           const Tensor3* reference = nullptr);

// sum_k sum_i alpha_k beta_i^k rho(sigma_i^k) over spectral singular values.
double weighted_norm(const Tensor3& x, const WeightScheme& w);

// Supergradient reweighting: alpha_k = rho'(sum_i rho(rho(sigma_i^k))),
// beta_i^k = rho'(rho(sigma_i^k)).
WeightScheme adaptive_weights(const Tensor3& x, const PenaltyFunction& p);
WeightScheme adaptive_weights_from_singular_values(const std::vector<Eigen::VectorXd>& sv,
                                                   const PenaltyFunction& p);

struct TsvtResult {
  Tensor3 x;
  // Spectral singular values of x, per slice, descending.  These are the
  // prox outputs, which are exactly sigma(x) since x is rebuilt from them.
  std::vector<Eigen::VectorXd> singular_values;
};

// Weighted tensor singular value thresholding: the minimizer of
// eta * ||X||_{rho,alpha,beta} + 1/2 ||X - Y||^2.  Each spectral singular
// value sigma_i^k is replaced by scalar_prox(rho, eta n3 alpha_k beta_i^k, sigma_i^k);
// the n3 factor comes from ||X - Y||^2 = (1/n3) * ||Xbar - Ybar||^2.
TsvtResult weighted_tsvt(const Tensor3& y, double eta, const WeightScheme& w);

}  // namespace tnnr
