#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tnnr/spectral.hpp"
#include "tnnr/tensor.hpp"

namespace tnnr {

// Full t-SVD factors A = U * S * V^* with per-slice spectral singular
// values (descending within each slice of the DFT domain).
struct TsvdFactors {
  Tensor3 u;  // n1 x n1 x n3, orthogonal
  Tensor3 s;  // n1 x n2 x n3, f-diagonal
  Tensor3 v;  // n2 x n2 x n3, orthogonal
  std::vector<Eigen::VectorXd> spectral_singular_values;  // n3 vectors of length min(n1,n2)
};

struct MultiRank {
  std::vector<int> ranks;
  int tubal_rank = 0;
};

TsvdFactors t_svd(const Tensor3& a);

// Singular values of every spectral slice, descending, without forming
// U/V tensors.  The workhorse for norms, weights and rank queries.
std::vector<Eigen::VectorXd> spectral_singular_values(const Tensor3& a);

// r_k = #{ i : sigma_i^k > tol * sigma_max } with sigma_max global.
MultiRank multi_rank(const Tensor3& a, double tol = 1e-10);

// (1/n3) * sum of all spectral singular values.
double tubal_nuclear_norm(const Tensor3& a);

// Thin complex SVD with descending values; throws NumericalError with
// the slice index on failure.
void svd_slice(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& u, Eigen::VectorXd& sv,
               Eigen::MatrixXcd& v, int slice_index);

}  // namespace tnnr
