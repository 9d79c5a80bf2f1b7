#include "tnnr/tsvd.hpp"

#include <algorithm>
#include <cmath>

namespace tnnr {

void svd_slice(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& u, Eigen::VectorXd& sv,
               Eigen::MatrixXcd& v, int slice_index) {
  if (m.rows() <= 16 || m.cols() <= 16) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
      throw NumericalError("SVD failed on spectral slice " + std::to_string(slice_index));
    }
    u = svd.matrixU();
    sv = svd.singularValues();
    v = svd.matrixV();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
      throw NumericalError("SVD failed on spectral slice " + std::to_string(slice_index));
    }
    u = svd.matrixU();
    sv = svd.singularValues();
    v = svd.matrixV();
  }
}

TsvdFactors t_svd(const Tensor3& a) {
  const Dims3 d = a.dims();
  const int n3 = d.n3;
  SpectralTensor fa = dft_mode3(a);

  SpectralTensor fu({d.n1, d.n1, n3}, true);
  SpectralTensor fs({d.n1, d.n2, n3}, true);
  SpectralTensor fv({d.n2, d.n2, n3}, true);
  std::vector<Eigen::VectorXd> sing(n3);

  for (int k : unique_slice_range(n3)) {
    // Full U/V so the factors are square orthogonal tensors.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd;
    Eigen::BDCSVD<Eigen::MatrixXcd> bsvd;
    Eigen::MatrixXcd uk, vk;
    Eigen::VectorXd sk;
    if (d.n1 <= 16 || d.n2 <= 16) {
      svd.compute(fa.slices[k], Eigen::ComputeFullU | Eigen::ComputeFullV);
      if (svd.info() != Eigen::Success) {
        throw NumericalError("t_svd: SVD failed on spectral slice " + std::to_string(k));
      }
      uk = svd.matrixU();
      sk = svd.singularValues();
      vk = svd.matrixV();
    } else {
      bsvd.compute(fa.slices[k], Eigen::ComputeFullU | Eigen::ComputeFullV);
      if (bsvd.info() != Eigen::Success) {
        throw NumericalError("t_svd: SVD failed on spectral slice " + std::to_string(k));
      }
      uk = bsvd.matrixU();
      sk = bsvd.singularValues();
      vk = bsvd.matrixV();
    }
    fu.slices[k] = uk;
    fv.slices[k] = vk;
    fs.slices[k].setZero();
    fs.slices[k].diagonal().head(sk.size()) = sk.cast<std::complex<double>>();
    sing[k] = sk;
    int m = mirror_slice(k, n3);
    if (m != k) {
      fu.slices[m] = uk.conjugate();
      fv.slices[m] = vk.conjugate();
      fs.slices[m] = fs.slices[k];
      sing[m] = sk;
    }
  }

  TsvdFactors out;
  out.u = idft_mode3(fu);
  out.s = idft_mode3(fs);
  out.v = idft_mode3(fv);
  out.spectral_singular_values = std::move(sing);
  return out;
}

std::vector<Eigen::VectorXd> spectral_singular_values(const Tensor3& a) {
  const int n3 = a.dims().n3;
  SpectralTensor fa = dft_mode3(a);
  std::vector<Eigen::VectorXd> sing(n3);
  for (int k : unique_slice_range(n3)) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(fa.slices[k]);
    sing[k] = svd.singularValues();
    int m = mirror_slice(k, n3);
    if (m != k) sing[m] = sing[k];
  }
  return sing;
}

MultiRank multi_rank(const Tensor3& a, double tol) {
  if (tol < 0) throw ConfigError("multi_rank: tol must be nonnegative");
  auto sing = spectral_singular_values(a);
  double sigma_max = 0.0;
  for (const auto& s : sing) {
    if (s.size() > 0) sigma_max = std::max(sigma_max, s[0]);
  }
  MultiRank mr;
  mr.ranks.reserve(sing.size());
  for (const auto& s : sing) {
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s[i] > tol * sigma_max) ++r;
    }
    mr.ranks.push_back(r);
    mr.tubal_rank = std::max(mr.tubal_rank, r);
  }
  return mr;
}

double tubal_nuclear_norm(const Tensor3& a) {
  auto sing = spectral_singular_values(a);
  double total = 0.0;
  for (const auto& s : sing) total += s.sum();
  return total / a.dims().n3;
}

}  // namespace tnnr
