#pragma once

#include <array>

#include "slsc/core.hpp"

namespace slsc {

/// Accumulated splat weight below which a target pixel counts as a gap.
inline constexpr double kSplatWeightEpsilon = 1e-6;

struct WarpResult {
  Image image;
  Mask mask;
  /// Signed accumulated kernel weight per target pixel (scatter only; empty
  /// for gathers).
  Grid<double> weight;
};

/// Keys cubic convolution kernel with a = -0.5.
double keys_kernel(double s);

/// Tap weights for samples at integer offsets -1, 0, 1, 2 around a sample
/// position with fractional part `frac`.
std::array<double, 4> bicubic_weights(double frac);

/// Gather: out(x,y) samples `image` at (x + shift * disparity(x,y), y). A
/// pixel is invalid when any tap carrying nonzero weight falls off the row.
WarpResult backward_warp(const Image& image, const DisparityMap& disparity, double shift);

/// Scatter: every valid source pixel is spread over the 4-tap bicubic
/// footprint around x + shift * disparity(x,y). Targets hold value/weight.
///
/// The mask is driven by the positive-lobe weight a target received, so
/// that coverage only grows as sources are added; value normalization uses
/// the signed weight whenever it exceeds kSplatWeightEpsilon and falls back
/// to positive-lobe normalization otherwise.
WarpResult forward_splat(const Image& image, const DisparityMap& disparity, double shift,
                         const Mask& valid);

}  // namespace slsc
