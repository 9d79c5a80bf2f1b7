#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "helpers.hpp"
#include "tnnr/io.hpp"
#include "tnnr/metrics.hpp"

using namespace tnnr;
using tnnr::testing::random_tensor;

namespace {

// Direct (non-separable) reference SSIM used only to cross-check the
// production implementation.
double ssim_reference(const Tensor3& x, const Tensor3& ref) {
  const Dims3 d = x.dims();
  const int win = 11;
  const double sigma = 1.5, c1 = 1e-4, c2 = 9e-4;
  double kernel[win][win];
  double ksum = 0.0;
  for (int a = 0; a < win; ++a) {
    for (int b = 0; b < win; ++b) {
      double da = a - 5.0, db = b - 5.0;
      kernel[a][b] = std::exp(-(da * da + db * db) / (2 * sigma * sigma));
      ksum += kernel[a][b];
    }
  }
  double total = 0.0;
  for (int k = 0; k < d.n3; ++k) {
    double acc = 0.0;
    int count = 0;
    for (int i0 = 0; i0 + win <= d.n1; ++i0) {
      for (int j0 = 0; j0 + win <= d.n2; ++j0) {
        double ma = 0, mb = 0, va = 0, vb = 0, cov = 0;
        for (int a = 0; a < win; ++a) {
          for (int b = 0; b < win; ++b) {
            double w = kernel[a][b] / ksum;
            ma += w * x(i0 + a, j0 + b, k);
            mb += w * ref(i0 + a, j0 + b, k);
          }
        }
        for (int a = 0; a < win; ++a) {
          for (int b = 0; b < win; ++b) {
            double w = kernel[a][b] / ksum;
            double xa = x(i0 + a, j0 + b, k), xb = ref(i0 + a, j0 + b, k);
            va += w * (xa - ma) * (xa - ma);
            vb += w * (xb - mb) * (xb - mb);
            cov += w * (xa - ma) * (xb - mb);
          }
        }
        acc += (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
        ++count;
      }
    }
    total += acc / count;
  }
  return total / d.n3;
}

Tensor3 unit_range(Tensor3 t) {
  double lo = t.data()[0], hi = t.data()[0];
  for (std::int64_t i = 0; i < t.size(); ++i) {
    lo = std::min(lo, t.data()[i]);
    hi = std::max(hi, t.data()[i]);
  }
  for (std::int64_t i = 0; i < t.size(); ++i) t.data()[i] = (t.data()[i] - lo) / (hi - lo);
  return t;
}

}  // namespace

TEST_CASE("psnr basics") {
  Tensor3 a = random_tensor(8, 8, 2, 130);
  CHECK(std::isinf(psnr(a, a)));
  Tensor3 b = a;
  for (std::int64_t i = 0; i < b.size(); ++i) b.data()[i] += 0.1;
  CHECK(psnr(b, a) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(psnr(b, a, 2.0) == doctest::Approx(20.0 + 20.0 * std::log10(2.0)).epsilon(1e-12));
  CHECK(psnr(a, b) == doctest::Approx(psnr(b, a)));
  CHECK_THROWS_AS(psnr(a, random_tensor(8, 8, 3, 131)), ShapeError);
  CHECK_THROWS_AS(psnr(a, a, 0.0), ConfigError);
}

TEST_CASE("ssim basics") {
  Tensor3 a = unit_range(random_tensor(20, 20, 3, 132));
  CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  Tensor3 zero(20, 20, 3);
  CHECK(ssim(zero, a) < 1.0);
  Tensor3 b = unit_range(random_tensor(20, 20, 3, 133));
  CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
  CHECK(ssim(a, b) >= -1.0);
  CHECK(ssim(a, b) <= 1.0);
}

TEST_CASE("ssim agrees with a direct reference implementation") {
  Tensor3 a = unit_range(random_tensor(24, 18, 2, 134));
  Tensor3 b = a;
  for (std::int64_t i = 0; i < b.size(); ++i) b.data()[i] = std::min(1.0, b.data()[i] + 0.05);
  CHECK(ssim(a, b) == doctest::Approx(ssim_reference(a, b)).epsilon(1e-6));
  Tensor3 c = unit_range(random_tensor(24, 18, 2, 135));
  CHECK(ssim(a, c) == doctest::Approx(ssim_reference(a, c)).epsilon(1e-6));
}

TEST_CASE("ssim shrinks the window for small slices") {
  Tensor3 a = unit_range(random_tensor(7, 9, 1, 136));
  CHECK(ssim(a, a) == doctest::Approx(1.0));
}

TEST_CASE("tensor file roundtrip is bit exact") {
  auto path = (std::filesystem::temp_directory_path() / "tnnr_io_test.tns3").string();
  Tensor3 a = random_tensor(5, 7, 3, 137);
  write_tensor_file(path, a);
  Tensor3 b = read_tensor_file(path);
  REQUIRE(b.dims() == a.dims());
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("mask file roundtrip is bit exact") {
  auto path = (std::filesystem::temp_directory_path() / "tnnr_io_test.msk3").string();
  ObservationMask m = uniform_mask({6, 5, 4}, 0.4, 9);
  write_mask_file(path, m);
  ObservationMask r = read_mask_file(path);
  CHECK(r.dims == m.dims);
  CHECK(r.indicator == m.indicator);
  std::filesystem::remove(path);
}

TEST_CASE("malformed files are rejected") {
  auto dir = std::filesystem::temp_directory_path();
  auto bad = (dir / "tnnr_bad_file").string();

  std::ofstream(bad, std::ios::binary) << "GARBAGE";
  CHECK_THROWS_AS(read_tensor_file(bad), IoError);
  CHECK_THROWS_AS(read_mask_file(bad), IoError);

  // Right magic, truncated payload.
  {
    std::ofstream out(bad, std::ios::binary);
    out.write("TNS3", 4);
    std::uint32_t dims[3] = {4, 4, 2};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    double one = 1.0;
    out.write(reinterpret_cast<const char*>(&one), sizeof one);
  }
  CHECK_THROWS_AS(read_tensor_file(bad), IoError);

  CHECK_THROWS_AS(read_tensor_file((dir / "tnnr_missing_file").string()), IoError);

  Tensor3 nonfinite(2, 2, 1);
  nonfinite(0, 0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(write_tensor_file(bad, nonfinite), IoError);
  std::filesystem::remove(bad);
}
