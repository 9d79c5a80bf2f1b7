#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tnnr/tensor.hpp"

namespace tnnr {

// Set of observed entries, same layout as Tensor3 values.
struct ObservationMask {
  Dims3 dims;
  std::vector<std::uint8_t> indicator;  // 1 = observed

  std::int64_t observed_count() const;
  double sampling_ratio() const;
  void validate() const;
};

// f(X) = ||P_Omega(X - M)||^2 with grad 2 P_Omega(X - M); L_f = 2.
struct LossModel {
  ObservationMask mask;
  Tensor3 observed;  // M on Omega, zero elsewhere
  static constexpr double lipschitz = 2.0;

  LossModel(ObservationMask m, const Tensor3& full_data);
};

Tensor3 project(const ObservationMask& mask, const Tensor3& x);
double loss_value(const LossModel& l, const Tensor3& x);
Tensor3 loss_grad(const LossModel& l, const Tensor3& x);

struct SynthInstance {
  Tensor3 m_true;
  ObservationMask mask;
};

// M = A * B with standard normal factors of tubal rank r; mask sampled
// uniformly without replacement to exactly round(sr * n1*n2*n3) entries.
SynthInstance synth_instance(int n1, int n2, int n3, int r, double sr, std::uint64_t seed);

ObservationMask uniform_mask(Dims3 dims, double sr, std::uint64_t seed);
// Entries inside the box (all slices) are unobserved.
ObservationMask rectangle_mask(Dims3 dims, int i0, int j0, int h, int w);
// Rows/columns on the periodic lattice (index % period < thickness) are
// unobserved, across all slices.
ObservationMask grid_mask(Dims3 dims, int period, int thickness);

// Deterministic low-tubal-rank demo image: 64 x 64 x 3, tubal rank 4,
// affinely mapped into [0, 1].
Tensor3 demo_image();

}  // namespace tnnr
