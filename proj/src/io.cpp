#include "tnnr/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; byte swapping not implemented");

namespace tnnr {
namespace {

struct Header {
  char magic[4];
  std::uint32_t n1, n2, n3;
};

Header read_header(std::ifstream& in, const char* expect, const std::string& path) {
  Header h{};
  in.read(h.magic, 4);
  std::uint32_t dims[3];
  in.read(reinterpret_cast<char*>(dims), sizeof dims);
  if (!in) throw IoError("truncated header in " + path);
  if (std::memcmp(h.magic, expect, 4) != 0) {
    throw IoError("bad magic in " + path + " (expected " + expect + ")");
  }
  h.n1 = dims[0];
  h.n2 = dims[1];
  h.n3 = dims[2];
  if (h.n1 == 0 || h.n2 == 0 || h.n3 == 0 || std::uint64_t(h.n1) * h.n2 * h.n3 > (1u << 30)) {
    throw IoError("implausible dims in " + path);
  }
  return h;
}

void write_header(std::ofstream& out, const char* magic, Dims3 d) {
  out.write(magic, 4);
  const std::uint32_t dims[3] = {std::uint32_t(d.n1), std::uint32_t(d.n2), std::uint32_t(d.n3)};
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
}

}  // namespace

Tensor3 read_tensor_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  Header h = read_header(in, "TNS3", path);
  Tensor3 x(int(h.n1), int(h.n2), int(h.n3));
  in.read(reinterpret_cast<char*>(x.data()), x.size() * std::int64_t(sizeof(double)));
  if (!in) throw IoError("truncated payload in " + path);
  for (std::int64_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x.data()[i])) throw IoError("non-finite value in " + path);
  }
  return x;
}

void write_tensor_file(const std::string& path, const Tensor3& x) {
  for (std::int64_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x.data()[i])) throw IoError("refusing to write non-finite value");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_header(out, "TNS3", x.dims());
  out.write(reinterpret_cast<const char*>(x.data()), x.size() * std::int64_t(sizeof(double)));
  if (!out) throw IoError("write failed: " + path);
}

ObservationMask read_mask_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  Header h = read_header(in, "MSK3", path);
  ObservationMask m{{int(h.n1), int(h.n2), int(h.n3)}, {}};
  m.indicator.resize(m.dims.count());
  in.read(reinterpret_cast<char*>(m.indicator.data()), std::int64_t(m.indicator.size()));
  if (!in) throw IoError("truncated payload in " + path);
  for (auto b : m.indicator) {
    if (b > 1) throw IoError("mask byte not 0/1 in " + path);
  }
  try {
    m.validate();
  } catch (const std::exception& e) {
    throw IoError(std::string("invalid mask in ") + path + ": " + e.what());
  }
  return m;
}

void write_mask_file(const std::string& path, const ObservationMask& mask) {
  mask.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_header(out, "MSK3", mask.dims);
  out.write(reinterpret_cast<const char*>(mask.indicator.data()),
            std::int64_t(mask.indicator.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace tnnr
