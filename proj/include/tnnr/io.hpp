#pragma once

#include <string>

#include "tnnr/completion.hpp"
#include "tnnr/tensor.hpp"

namespace tnnr {

// Binary tensor container: "TNS3", three uint32 little-endian dims,
// then n1*n2*n3 float64 little-endian values in storage order.
Tensor3 read_tensor_file(const std::string& path);
void write_tensor_file(const std::string& path, const Tensor3& x);

// Mask container: "MSK3", same dim header, one byte per entry
// (1 = observed), same order.
ObservationMask read_mask_file(const std::string& path);
void write_mask_file(const std::string& path, const ObservationMask& mask);

}  // namespace tnnr
