#include "tnnr/tensor.hpp"

#include <cmath>

#include "tnnr/spectral.hpp"

namespace tnnr {

Tensor3::Tensor3(int n1, int n2, int n3) : dims_{n1, n2, n3} {
  if (n1 < 1 || n2 < 1 || n3 < 1) {
    throw ShapeError("Tensor3: dims must be positive");
  }
  data_.assign(dims_.count(), 0.0);
}

Eigen::Map<const Eigen::MatrixXd> Tensor3::slice(int k) const {
  return {data_.data() + std::int64_t(k) * dims_.n1 * dims_.n2, dims_.n1, dims_.n2};
}

Eigen::Map<Eigen::MatrixXd> Tensor3::slice(int k) {
  return {data_.data() + std::int64_t(k) * dims_.n1 * dims_.n2, dims_.n1, dims_.n2};
}

bool Tensor3::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Tensor3& Tensor3::operator+=(const Tensor3& o) {
  check_same_dims(*this, o, "operator+=");
  for (std::int64_t i = 0; i < size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& o) {
  check_same_dims(*this, o, "operator-=");
  for (std::int64_t i = 0; i < size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Tensor3& Tensor3::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

void check_same_dims(const Tensor3& a, const Tensor3& b, const char* what) {
  if (!(a.dims() == b.dims())) {
    throw ShapeError(std::string(what) + ": dimension mismatch");
  }
}

double inner_product(const Tensor3& a, const Tensor3& b) {
  check_same_dims(a, b, "inner_product");
  double s = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  for (std::int64_t i = 0; i < a.size(); ++i) s += pa[i] * pb[i];
  return s;
}

double frobenius_norm(const Tensor3& a) {
  return std::sqrt(inner_product(a, a));
}

Eigen::MatrixXd unfold(const Tensor3& a) {
  const auto [n1, n2, n3] = a.dims();
  Eigen::MatrixXd m(std::int64_t(n1) * n3, n2);
  for (int k = 0; k < n3; ++k) m.middleRows(std::int64_t(k) * n1, n1) = a.slice(k);
  return m;
}

Tensor3 fold(const Eigen::MatrixXd& m, Dims3 dims) {
  if (m.rows() != std::int64_t(dims.n1) * dims.n3 || m.cols() != dims.n2) {
    throw ShapeError("fold: matrix shape does not match target dims");
  }
  Tensor3 a(dims);
  for (int k = 0; k < dims.n3; ++k) a.slice(k) = m.middleRows(std::int64_t(k) * dims.n1, dims.n1);
  return a;
}

Eigen::MatrixXd bcirc(const Tensor3& a) {
  const auto [n1, n2, n3] = a.dims();
  Eigen::MatrixXd m(std::int64_t(n1) * n3, std::int64_t(n2) * n3);
  for (int p = 0; p < n3; ++p) {
    for (int q = 0; q < n3; ++q) {
      int k = ((p - q) % n3 + n3) % n3;
      m.block(std::int64_t(p) * n1, std::int64_t(q) * n2, n1, n2) = a.slice(k);
    }
  }
  return m;
}

Tensor3 t_product(const Tensor3& a, const Tensor3& b) {
  const Dims3 da = a.dims();
  const Dims3 db = b.dims();
  if (da.n2 != db.n1 || da.n3 != db.n3) {
    throw ShapeError("t_product: inner dimension or n3 mismatch");
  }
  SpectralTensor fa = dft_mode3(a);
  SpectralTensor fb = dft_mode3(b);
  SpectralTensor fc({da.n1, db.n2, da.n3}, true);
  const int n3 = da.n3;
  for (int k : unique_slice_range(n3)) {
    fc.slices[k] = fa.slices[k] * fb.slices[k];
    int m = mirror_slice(k, n3);
    if (m != k) fc.slices[m] = fc.slices[k].conjugate();
  }
  return idft_mode3(fc);
}

Tensor3 conj_transpose(const Tensor3& a) {
  const auto [n1, n2, n3] = a.dims();
  Tensor3 at(n2, n1, n3);
  at.slice(0) = a.slice(0).transpose();
  for (int k = 1; k < n3; ++k) at.slice(k) = a.slice(n3 - k).transpose();
  return at;
}

Tensor3 identity_tensor(int n, int n3) {
  if (n < 1 || n3 < 1) throw ShapeError("identity_tensor: dims must be positive");
  Tensor3 id(n, n, n3);
  id.slice(0) = Eigen::MatrixXd::Identity(n, n);
  return id;
}

}  // namespace tnnr
