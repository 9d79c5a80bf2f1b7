#include "tnnr/weights.hpp"

#include <algorithm>
#include <cmath>

#include "tnnr/tsvd.hpp"

namespace tnnr {

void WeightScheme::validate() const {
  if (alpha.empty() || beta.size() != alpha.size()) {
    throw ConfigError("WeightScheme: alpha/beta slice counts disagree");
  }
  bool any_positive = false;
  for (double a : alpha) {
    if (a < 0.0 || !std::isfinite(a)) throw ConfigError("WeightScheme: alpha_k must be >= 0");
    if (a > 0.0) any_positive = true;
    if (kind == Kind::Adaptive && a <= 0.0) {
      throw ConfigError("WeightScheme: adaptive alpha_k must be > 0");
    }
  }
  if (!any_positive) throw ConfigError("WeightScheme: at least one alpha_k must be positive");
  for (const auto& b : beta) {
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      if (b[i] < 0.0 || !std::isfinite(b[i])) throw ConfigError("WeightScheme: beta must be >= 0");
      if (i > 0 && b[i] + 1e-12 < b[i - 1]) {
        throw ConfigError("WeightScheme: beta must be nondecreasing within each slice");
      }
    }
  }
}

WeightScheme classic_preset(const std::string& tag, const PresetParams& params, Dims3 dims,
                           const Tensor3* reference) {
  const int n3 = dims.n3;
  const int r = std::min(dims.n1, dims.n2);
  WeightScheme w;
  w.kind = WeightScheme::Kind::Static;
  w.preset_tag = tag;
  w.alpha.assign(n3, 1.0 / n3);
  w.beta.assign(n3, Eigen::VectorXd::Ones(r));
  w.penalty = PenaltyFunction::identity();

  if (tag == "tnn") {
    // defaults above
  } else if (tag == "pstnn" || tag == "ttnn") {
    int N = params.truncation >= 0 ? params.truncation : int(std::ceil(0.05 * r));
    if (N < 0 || N > r) throw ConfigError(tag + ": truncation N must be in [0, r]");
    Eigen::VectorXd b = Eigen::VectorXd::Ones(r);
    b.head(N).setZero();
    w.beta.assign(n3, b);
    if (tag == "pstnn") {
      w.alpha.assign(n3, 1.0);
    } else {
      w.alpha.assign(n3, 0.0);
      w.alpha[0] = 1.0;
    }
  } else if (tag == "wtnn") {
    if (!(params.eps > 0.0)) throw ConfigError("wtnn: eps must be > 0");
    if (reference == nullptr) throw ConfigError("wtnn: needs a reference tensor");
    if (!(reference->dims() == dims)) throw ConfigError("wtnn: reference dims mismatch");
    auto sv = spectral_singular_values(*reference);
    for (int k = 0; k < n3; ++k) {
      for (int i = 0; i < r; ++i) w.beta[k][i] = 1.0 / (sv[k][i] + params.eps);
    }
  } else if (tag == "wsp") {
    if (!(params.p > 0.0 && params.p <= 1.0)) throw ConfigError("wsp: p must be in (0, 1]");
    if (!(params.c > 0.0) || !(params.eps > 0.0)) throw ConfigError("wsp: c and eps must be > 0");
    if (reference == nullptr) throw ConfigError("wsp: needs a reference tensor");
    if (!(reference->dims() == dims)) throw ConfigError("wsp: reference dims mismatch");
    w.penalty = PenaltyFunction::power(params.p);
    auto sv = spectral_singular_values(*reference);
    for (int k = 0; k < n3; ++k) {
      const double last = sv[k][r - 1];
      for (int i = 0; i < r; ++i) {
        double gap = std::max(0.0, sv[k][i] * sv[k][i] - last * last);
        w.beta[k][i] = params.c / (std::pow(gap, params.p / 2.0) + params.eps);
      }
    }
  } else {
    throw ConfigError("unknown Table-1 preset tag: " + tag);
  }

  // Data-dependent rows can produce micro-inversions against the
  // descending-sigma ordering; sort each slice to restore Lemma-3 order.
  for (auto& b : w.beta) std::sort(b.begin(), b.end());
  w.validate();
  return w;
}

double weighted_norm(const Tensor3& x, const WeightScheme& w) {
  const Dims3 d = x.dims();
  if (w.n3() != d.n3 || w.r() != std::min(d.n1, d.n2)) {
    throw ShapeError("weighted_norm: scheme dims mismatch");
  }
  auto sv = spectral_singular_values(x);
  double total = 0.0;
  for (int k = 0; k < d.n3; ++k) {
    for (Eigen::Index i = 0; i < sv[k].size(); ++i) {
      total += w.alpha[k] * w.beta[k][i] * w.penalty.eval(sv[k][i]);
    }
  }
  return total;
}

WeightScheme adaptive_weights_from_singular_values(const std::vector<Eigen::VectorXd>& sv,
                                                   const PenaltyFunction& p) {
  if (!p.has_finite_grad_at_zero()) {
    throw ConfigError("adaptive_weights: penalty gradient is singular at 0; use a smoothed variant");
  }
  WeightScheme w;
  w.kind = WeightScheme::Kind::Adaptive;
  w.penalty = p;
  const int n3 = int(sv.size());
  w.alpha.resize(n3);
  w.beta.resize(n3);
  w.h.resize(n3);
  w.g.resize(n3);
  for (int k = 0; k < n3; ++k) {
    const auto& s = sv[k];
    Eigen::VectorXd hk(s.size()), bk(s.size());
    double gk = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      hk[i] = p.eval(s[i]);
      bk[i] = p.grad(hk[i]);
      gk += p.eval(hk[i]);
    }
    w.h[k] = std::move(hk);
    w.beta[k] = std::move(bk);
    w.g[k] = gk;
    w.alpha[k] = p.grad(gk);
  }
  w.validate();
  return w;
}

WeightScheme adaptive_weights(const Tensor3& x, const PenaltyFunction& p) {
  return adaptive_weights_from_singular_values(spectral_singular_values(x), p);
}

TsvtResult weighted_tsvt(const Tensor3& y, double eta, const WeightScheme& w) {
  if (!(eta > 0.0)) throw ConfigError("weighted_tsvt: eta must be > 0");
  const Dims3 d = y.dims();
  const int n3 = d.n3;
  if (w.n3() != n3 || w.r() != std::min(d.n1, d.n2)) {
    throw ShapeError("weighted_tsvt: scheme dims mismatch");
  }
  w.validate();

  SpectralTensor fy = dft_mode3(y);
  SpectralTensor fx(d, true);
  std::vector<Eigen::VectorXd> out_sv(n3);

  for (int k : unique_slice_range(n3)) {
    Eigen::MatrixXcd uk, vk;
    Eigen::VectorXd sk;
    svd_slice(fy.slices[k], uk, sk, vk, k);

    Eigen::VectorXd dk(sk.size());
    for (Eigen::Index i = 0; i < sk.size(); ++i) {
      const double coef = eta * w.alpha[k] * w.beta[k][i] * n3;
      dk[i] = scalar_prox(w.penalty, coef, sk[i]);
    }
    // Theorem-1 ordering can be perturbed by roundoff; re-sort and make
    // sure any inversion was at noise level.
    Eigen::VectorXd sorted = dk;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double inversion = (sorted - dk).cwiseAbs().maxCoeff();
    if (inversion > 1e-9 * std::max(1.0, sorted[0])) {
      throw NumericalError("weighted_tsvt: prox output out of order beyond roundoff on slice " +
                           std::to_string(k));
    }
    fx.slices[k] = uk * sorted.asDiagonal() * vk.adjoint();
    out_sv[k] = sorted;
    int m = mirror_slice(k, n3);
    if (m != k) {
      fx.slices[m] = fx.slices[k].conjugate();
      out_sv[m] = sorted;
    }
  }

  TsvtResult res;
  res.x = idft_mode3(fx);
  res.singular_values = std::move(out_sv);
  return res;
}

}  // namespace tnnr
