#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "tnnr/errors.hpp"

namespace tnnr {

struct Dims3 {
  int n1 = 0;
  int n2 = 0;
  int n3 = 0;

  bool operator==(const Dims3&) const = default;
  std::int64_t count() const {
    return std::int64_t(n1) * n2 * n3;
  }
};

// Dense real order-3 tensor.  Storage is i-fastest, then j, then k:
// each frontal slice is a contiguous column-major n1 x n2 matrix and
// slices follow each other in memory.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int n1, int n2, int n3);
  explicit Tensor3(Dims3 d) : Tensor3(d.n1, d.n2, d.n3) {}

  static Tensor3 zeros(Dims3 d) { return Tensor3(d); }

  const Dims3& dims() const { return dims_; }
  std::int64_t size() const { return dims_.count(); }

  double& operator()(int i, int j, int k) {
    return data_[std::int64_t(k) * dims_.n1 * dims_.n2 + std::int64_t(j) * dims_.n1 + i];
  }
  double operator()(int i, int j, int k) const {
    return data_[std::int64_t(k) * dims_.n1 * dims_.n2 + std::int64_t(j) * dims_.n1 + i];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  // The matrix A(:,:,k), zero-copy.
  Eigen::Map<const Eigen::MatrixXd> slice(int k) const;
  Eigen::Map<Eigen::MatrixXd> slice(int k);

  bool all_finite() const;

  Tensor3& operator+=(const Tensor3& o);
  Tensor3& operator-=(const Tensor3& o);
  Tensor3& operator*=(double s);
  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

 private:
  Dims3 dims_;
  std::vector<double> data_;
};

double inner_product(const Tensor3& a, const Tensor3& b);
double frobenius_norm(const Tensor3& a);

// Vertical stack of frontal slices, (n1*n3) x n2.
Eigen::MatrixXd unfold(const Tensor3& a);
Tensor3 fold(const Eigen::MatrixXd& m, Dims3 dims);

// Block circulant matrix, (n1*n3) x (n2*n3).  Test oracle for the
// t-product; production code uses the spectral fast path.
Eigen::MatrixXd bcirc(const Tensor3& a);

// t-product via slice-wise products in the DFT domain.
Tensor3 t_product(const Tensor3& a, const Tensor3& b);

// Transpose every frontal slice, then reverse the order of slices 2..n3.
Tensor3 conj_transpose(const Tensor3& a);

Tensor3 identity_tensor(int n, int n3);

void check_same_dims(const Tensor3& a, const Tensor3& b, const char* what);

}  // namespace tnnr
