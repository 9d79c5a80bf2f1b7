#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "tnnr/tensor.hpp"

namespace tnnr {

// Complex frontal slices of the mode-3 DFT of a real tensor.
// Convention: unnormalized forward transform, 1/n3-normalized inverse
// (Matlab fft/ifft).  When origin_real, slice 1 is real and
// conj(slice i) == slice (n3 - i + 2) for i = 2..floor((n3+1)/2).
struct SpectralTensor {
  Dims3 dims;
  std::vector<Eigen::MatrixXcd> slices;
  bool origin_real = false;

  SpectralTensor() = default;
  SpectralTensor(Dims3 d, bool real_origin);
};

SpectralTensor dft_mode3(const Tensor3& a);
Tensor3 idft_mode3(const SpectralTensor& s);

// Indices 0..ceil((n3+1)/2)-1 (zero-based) whose slices determine the
// rest by conjugation.
std::vector<int> unique_slice_range(int n3);

// For a slice index in unique_slice_range, the index of its conjugate
// partner (== k when the slice is self-conjugate).
inline int mirror_slice(int k, int n3) { return k == 0 ? 0 : n3 - k; }

// bdiag of the spectral slices; diagnostic/oracle use.
Eigen::MatrixXcd block_diag(const SpectralTensor& s);

// Max over mirror pairs of ||conj(slice i) - slice(n3-i+2)||_inf,
// relative to the largest slice magnitude.
double conj_symmetry_residual(const SpectralTensor& s);

}  // namespace tnnr
