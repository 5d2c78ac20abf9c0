#pragma once

#include <optional>

#include "slsc/core.hpp"

namespace slsc {

/// Reported PSNR for identical inputs.
inline constexpr double kPsnrCap = 99.0;

/// 10 log10(1 / MSE) for unit peak over the masked pixels (all channels),
/// capped at kPsnrCap.
double psnr(const Image& a, const Image& b, const Mask* mask = nullptr);

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
};

/// Mean single-scale SSIM over every window position that fits inside the
/// image. RGB inputs are reduced to gray by channel mean.
double ssim(const Image& a, const Image& b, const SsimOptions& options = {});

/// Per-pixel channel mean.
Grid<double> to_gray(const Image& image);

}  // namespace slsc
