#pragma once

#include <random>

#include "tnnr/tensor.hpp"

namespace tnnr::testing {

inline Tensor3 random_tensor(int n1, int n2, int n3, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Tensor3 t(n1, n2, n3);
  for (std::int64_t i = 0; i < t.size(); ++i) t.data()[i] = gauss(rng);
  return t;
}

inline double rel_diff(const Tensor3& a, const Tensor3& b) {
  Tensor3 d = a;
  d -= b;
  return frobenius_norm(d) / std::max(frobenius_norm(b), 1e-300);
}

}  // namespace tnnr::testing
