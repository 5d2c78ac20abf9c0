#pragma once

#include "slsc/core.hpp"

namespace slsc {

struct DilationResult {
  LabelMap labels;
  int iterations = 0;
  /// False when zeros remain after max_iters.
  bool converged = false;
};

/// Fills ambiguous (0) labels by repeated window dilation: each zero pixel
/// with a known label in its window takes the largest such label, i.e. the
/// furthest local surface. Updates are simultaneous per iteration and known
/// labels never change. `max_iters` <= 0 means width + height.
DilationResult dilate_fill(const LabelMap& labels, int window = 3, int max_iters = 0);

/// Completes every masked-out pixel of `image` from the nearest valid pixel
/// with the same label. Without any same-label source the nearest valid
/// pixel of a strictly larger label is used, and failing that the nearest
/// valid pixel of any label. Distance ties go to the smallest (y, x).
Image surface_fill_rgb(const Image& image, const Mask& mask, const LabelMap& labels);

}  // namespace slsc
