#include "tnnr/completion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tnnr {

std::int64_t ObservationMask::observed_count() const {
  return std::count(indicator.begin(), indicator.end(), std::uint8_t{1});
}

double ObservationMask::sampling_ratio() const {
  return double(observed_count()) / double(dims.count());
}

void ObservationMask::validate() const {
  if (std::int64_t(indicator.size()) != dims.count()) {
    throw ShapeError("ObservationMask: indicator length != dims count");
  }
  if (observed_count() == 0) throw ConfigError("ObservationMask: no observed entries");
}

LossModel::LossModel(ObservationMask m, const Tensor3& full_data)
    : mask(std::move(m)), observed(project(mask, full_data)) {
  mask.validate();
}

Tensor3 project(const ObservationMask& mask, const Tensor3& x) {
  if (!(mask.dims == x.dims())) throw ShapeError("project: mask dims mismatch");
  Tensor3 out(x.dims());
  const double* px = x.data();
  double* po = out.data();
  for (std::int64_t i = 0; i < x.size(); ++i) po[i] = mask.indicator[i] ? px[i] : 0.0;
  return out;
}

double loss_value(const LossModel& l, const Tensor3& x) {
  if (!(x.dims() == l.observed.dims())) throw ShapeError("loss_value: dims mismatch");
  double s = 0.0;
  const double* px = x.data();
  const double* pm = l.observed.data();
  for (std::int64_t i = 0; i < x.size(); ++i) {
    if (l.mask.indicator[i]) {
      double d = px[i] - pm[i];
      s += d * d;
    }
  }
  return s;
}

Tensor3 loss_grad(const LossModel& l, const Tensor3& x) {
  if (!(x.dims() == l.observed.dims())) throw ShapeError("loss_grad: dims mismatch");
  Tensor3 g(x.dims());
  const double* px = x.data();
  const double* pm = l.observed.data();
  double* pg = g.data();
  for (std::int64_t i = 0; i < x.size(); ++i) {
    pg[i] = l.mask.indicator[i] ? 2.0 * (px[i] - pm[i]) : 0.0;
  }
  return g;
}

SynthInstance synth_instance(int n1, int n2, int n3, int r, double sr, std::uint64_t seed) {
  if (r < 1 || r > std::min(n1, n2)) throw ConfigError("synth_instance: need 1 <= r <= min(n1,n2)");
  if (!(sr > 0.0 && sr <= 1.0)) throw ConfigError("synth_instance: sr must be in (0, 1]");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Tensor3 a(n1, r, n3), b(r, n2, n3);
  for (std::int64_t i = 0; i < a.size(); ++i) a.data()[i] = gauss(rng);
  for (std::int64_t i = 0; i < b.size(); ++i) b.data()[i] = gauss(rng);

  SynthInstance inst{t_product(a, b), uniform_mask({n1, n2, n3}, sr, rng())};
  return inst;
}

ObservationMask uniform_mask(Dims3 dims, double sr, std::uint64_t seed) {
  if (!(sr > 0.0 && sr <= 1.0)) throw ConfigError("uniform_mask: sr must be in (0, 1]");
  const std::int64_t total = dims.count();
  const std::int64_t m = std::llround(sr * double(total));
  if (m < 1) throw ConfigError("uniform_mask: sampling ratio selects no entries");

  std::vector<std::int64_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);

  ObservationMask mask{dims, std::vector<std::uint8_t>(total, 0)};
  for (std::int64_t i = 0; i < m; ++i) mask.indicator[idx[i]] = 1;
  return mask;
}

ObservationMask rectangle_mask(Dims3 dims, int i0, int j0, int h, int w) {
  if (i0 < 0 || j0 < 0 || h < 0 || w < 0 || i0 + h > dims.n1 || j0 + w > dims.n2) {
    throw ConfigError("rectangle_mask: box out of bounds");
  }
  ObservationMask mask{dims, std::vector<std::uint8_t>(dims.count(), 1)};
  for (int k = 0; k < dims.n3; ++k) {
    for (int j = j0; j < j0 + w; ++j) {
      for (int i = i0; i < i0 + h; ++i) {
        mask.indicator[std::int64_t(k) * dims.n1 * dims.n2 + std::int64_t(j) * dims.n1 + i] = 0;
      }
    }
  }
  mask.validate();
  return mask;
}

ObservationMask grid_mask(Dims3 dims, int period, int thickness) {
  if (period < 1 || thickness < 0 || thickness > period) {
    throw ConfigError("grid_mask: need period >= 1 and 0 <= thickness <= period");
  }
  ObservationMask mask{dims, std::vector<std::uint8_t>(dims.count(), 1)};
  for (int k = 0; k < dims.n3; ++k) {
    for (int j = 0; j < dims.n2; ++j) {
      for (int i = 0; i < dims.n1; ++i) {
        if (i % period < thickness || j % period < thickness) {
          mask.indicator[std::int64_t(k) * dims.n1 * dims.n2 + std::int64_t(j) * dims.n1 + i] = 0;
        }
      }
    }
  }
  mask.validate();
  return mask;
}

Tensor3 demo_image() {
  // Rank-3 random part plus a rank-1 constant lift, then a pure scaling
  // into [0, 1].  An affine shift would sneak in an extra rank; the lift
  // keeps the total tubal rank at exactly 4.
  constexpr int n = 64, n3 = 3, r = 3;
  std::mt19937_64 rng(0x746E6E72u);  // fixed seed, part of the artifact
  std::normal_distribution<double> gauss(0.0, 1.0);
  Tensor3 a(n, r, n3), b(r, n, n3);
  for (std::int64_t i = 0; i < a.size(); ++i) a.data()[i] = gauss(rng);
  for (std::int64_t i = 0; i < b.size(); ++i) b.data()[i] = gauss(rng);
  Tensor3 img = t_product(a, b);

  double amp = 0.0;
  for (std::int64_t i = 0; i < img.size(); ++i) amp = std::max(amp, std::abs(img.data()[i]));
  for (std::int64_t i = 0; i < img.size(); ++i) {
    img.data()[i] = (img.data()[i] + amp) / (2.0 * amp);
  }
  return img;
}

}  // namespace tnnr
