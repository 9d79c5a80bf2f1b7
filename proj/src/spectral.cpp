#include "tnnr/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <iostream>
#include <mutex>

namespace tnnr {

namespace {

// FFTW plan creation is not thread-safe; execution of a plan on its own
// buffers is.  We plan with FFTW_ESTIMATE per call under a lock.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// In-place transform along mode 3 of an n1*n2*n3 complex buffer laid out
// i-fastest, slices contiguous (tube stride n1*n2).
void transform_mode3(std::complex<double>* buf, Dims3 d, int sign) {
  const int n3 = d.n3;
  const int howmany = d.n1 * d.n2;
  auto* fbuf = reinterpret_cast<fftw_complex*>(buf);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_many_dft(1, &n3, howmany, fbuf, nullptr, howmany, 1,
                              fbuf, nullptr, howmany, 1, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace

SpectralTensor::SpectralTensor(Dims3 d, bool real_origin)
    : dims(d), slices(d.n3, Eigen::MatrixXcd::Zero(d.n1, d.n2)), origin_real(real_origin) {}

SpectralTensor dft_mode3(const Tensor3& a) {
  const Dims3 d = a.dims();
  const std::int64_t slice_sz = std::int64_t(d.n1) * d.n2;
  std::vector<std::complex<double>> buf(d.count());
  for (std::int64_t i = 0; i < d.count(); ++i) buf[i] = a.data()[i];
  transform_mode3(buf.data(), d, FFTW_FORWARD);

  SpectralTensor s(d, true);
  for (int k = 0; k < d.n3; ++k) {
    s.slices[k] = Eigen::Map<const Eigen::MatrixXcd>(buf.data() + k * slice_sz, d.n1, d.n2);
  }
  return s;
}

Tensor3 idft_mode3(const SpectralTensor& s) {
  const Dims3 d = s.dims;
  if (int(s.slices.size()) != d.n3) throw ShapeError("idft_mode3: slice count != n3");

  if (s.origin_real) {
    double res = conj_symmetry_residual(s);
    if (res > 1e-8) {
      throw SpectralConsistencyError(
          "idft_mode3: conjugate symmetry violated (residual " + std::to_string(res) + ")");
    }
  }

  const std::int64_t slice_sz = std::int64_t(d.n1) * d.n2;
  std::vector<std::complex<double>> buf(d.count());
  for (int k = 0; k < d.n3; ++k) {
    Eigen::Map<Eigen::MatrixXcd>(buf.data() + k * slice_sz, d.n1, d.n2) = s.slices[k];
  }
  transform_mode3(buf.data(), d, FFTW_BACKWARD);

  const double scale = 1.0 / d.n3;
  double max_abs = 0.0, max_imag = 0.0;
  Tensor3 out(d);
  for (std::int64_t i = 0; i < d.count(); ++i) {
    out.data()[i] = buf[i].real() * scale;
    max_abs = std::max(max_abs, std::abs(buf[i].real()) * scale);
    max_imag = std::max(max_imag, std::abs(buf[i].imag()) * scale);
  }
  if (s.origin_real) {
    const double rel = max_imag / std::max(max_abs, 1e-300);
    if (rel > 1e-8) {
      throw SpectralConsistencyError(
          "idft_mode3: imaginary residue " + std::to_string(rel) + " after inverse transform");
    }
    if (rel > 1e-10) {
      std::cerr << "tnnr: warning: idft_mode3 dropped imaginary residue " << rel << "\n";
    }
  }
  return out;
}

std::vector<int> unique_slice_range(int n3) {
  if (n3 < 1) throw ShapeError("unique_slice_range: n3 must be positive");
  std::vector<int> idx;
  for (int k = 0; k <= n3 / 2; ++k) idx.push_back(k);
  return idx;
}

Eigen::MatrixXcd block_diag(const SpectralTensor& s) {
  const Dims3 d = s.dims;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(std::int64_t(d.n1) * d.n3, std::int64_t(d.n2) * d.n3);
  for (int k = 0; k < d.n3; ++k) {
    m.block(std::int64_t(k) * d.n1, std::int64_t(k) * d.n2, d.n1, d.n2) = s.slices[k];
  }
  return m;
}

double conj_symmetry_residual(const SpectralTensor& s) {
  const int n3 = s.dims.n3;
  double scale = 0.0;
  for (const auto& sl : s.slices) scale = std::max(scale, sl.cwiseAbs().maxCoeff());
  if (scale == 0.0) return 0.0;
  double res = s.slices[0].imag().cwiseAbs().maxCoeff();
  for (int k = 1; k <= (n3 - 1) / 2; ++k) {
    res = std::max(res, (s.slices[k].conjugate() - s.slices[n3 - k]).cwiseAbs().maxCoeff());
  }
  if (n3 % 2 == 0) {
    res = std::max(res, s.slices[n3 / 2].imag().cwiseAbs().maxCoeff());
  }
  return res / scale;
}

}  // namespace tnnr
