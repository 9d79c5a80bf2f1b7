#pragma once

#include "tnnr/tensor.hpp"

namespace tnnr {

// 10*log10(peak^2 / MSE); identical inputs give +infinity.
double psnr(const Tensor3& x, const Tensor3& ref, double peak = 1.0);

// Mean structural similarity over frontal slices: 11x11 Gaussian window
// (sigma 1.5), C1 = 0.01^2, C2 = 0.03^2 for data in [0, 1]. Slices smaller
// than the window use a shrunken window and note it on stderr.
double ssim(const Tensor3& x, const Tensor3& ref);

}  // namespace tnnr
