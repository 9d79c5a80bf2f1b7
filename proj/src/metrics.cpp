#include "tnnr/metrics.hpp"

#include <cmath>
#include <iostream>
#include <limits>

namespace tnnr {

double psnr(const Tensor3& x, const Tensor3& ref, double peak) {
  check_same_dims(x, ref, "psnr");
  if (!(peak > 0.0)) throw ConfigError("psnr: peak must be > 0");
  double se = 0.0;
  for (std::int64_t i = 0; i < x.size(); ++i) {
    double d = x.data()[i] - ref.data()[i];
    se += d * d;
  }
  const double mse = se / double(x.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

namespace {

Eigen::VectorXd gaussian_window(int len, double sigma) {
  Eigen::VectorXd w(len);
  const double c = (len - 1) / 2.0;
  for (int i = 0; i < len; ++i) w[i] = std::exp(-(i - c) * (i - c) / (2.0 * sigma * sigma));
  return w / w.sum();
}

// Separable valid-mode filtering: rows then columns.
Eigen::MatrixXd filter_valid(const Eigen::MatrixXd& a, const Eigen::VectorXd& w) {
  const int k = int(w.size());
  Eigen::MatrixXd rows(a.rows() - k + 1, a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i + k <= a.rows(); ++i) {
      rows(i, j) = w.dot(a.col(j).segment(i, k));
    }
  }
  Eigen::MatrixXd out(rows.rows(), a.cols() - k + 1);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j + k <= a.cols(); ++j) {
      out(i, j) = w.dot(rows.row(i).segment(j, k));
    }
  }
  return out;
}

double ssim_slice(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& w) {
  constexpr double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  Eigen::MatrixXd mu_a = filter_valid(a, w);
  Eigen::MatrixXd mu_b = filter_valid(b, w);
  Eigen::MatrixXd var_a = filter_valid(a.cwiseProduct(a), w) - mu_a.cwiseProduct(mu_a);
  Eigen::MatrixXd var_b = filter_valid(b.cwiseProduct(b), w) - mu_b.cwiseProduct(mu_b);
  Eigen::MatrixXd cov = filter_valid(a.cwiseProduct(b), w) - mu_a.cwiseProduct(mu_b);

  double acc = 0.0;
  for (Eigen::Index j = 0; j < mu_a.cols(); ++j) {
    for (Eigen::Index i = 0; i < mu_a.rows(); ++i) {
      const double num = (2.0 * mu_a(i, j) * mu_b(i, j) + c1) * (2.0 * cov(i, j) + c2);
      const double den =
          (mu_a(i, j) * mu_a(i, j) + mu_b(i, j) * mu_b(i, j) + c1) * (var_a(i, j) + var_b(i, j) + c2);
      acc += num / den;
    }
  }
  return acc / double(mu_a.size());
}

}  // namespace

double ssim(const Tensor3& x, const Tensor3& ref) {
  check_same_dims(x, ref, "ssim");
  const Dims3 d = x.dims();
  int win = 11;
  const int cap = std::min(d.n1, d.n2);
  if (cap < win) {
    win = cap % 2 == 1 ? cap : cap - 1;
    if (win < 1) throw ShapeError("ssim: slices too small for any window");
    std::cerr << "ssim: window shrunk to " << win << " for " << d.n1 << "x" << d.n2
              << " slices\n";
  }
  const Eigen::VectorXd w = gaussian_window(win, 1.5);
  double acc = 0.0;
  for (int k = 0; k < d.n3; ++k) acc += ssim_slice(x.slice(k), ref.slice(k), w);
  return acc / double(d.n3);
}

}  // namespace tnnr
