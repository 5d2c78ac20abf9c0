#pragma once

#include "slsc/core.hpp"
#include "slsc/sdr.hpp"

namespace slsc {

struct SlicOptions {
  int iterations = 10;
  double compactness = 10.0;
};

/// Partition into 4-connected superpixels with ids 0..count-1.
struct SuperpixelMap {
  Grid<int> labels;
  int count = 0;
  int target_size = 0;

  int width() const noexcept { return labels.width(); }
  int height() const noexcept { return labels.height(); }
};

/// Grid-seeded SLIC in CIELAB + position space, followed by connectivity
/// enforcement: every disconnected fragment except a label's largest one is
/// merged into the largest 4-adjacent superpixel.
SuperpixelMap segment(const Image& image, int target_size, const SlicOptions& options = {});

inline constexpr double kDefaultConfidenceThreshold = 0.5;

/// Median of confident member disparities per superpixel (all members if
/// none is confident), then one smoothing pass: a superpixel whose value is
/// more than one stratification interval away from every neighbour takes
/// the median of its neighbours' values. The interval is the disparity
/// range of `disparity` divided by `layer_count`.
DisparityMap sp_disparity(const DisparityMap& disparity, const ConfidenceMap& confidence,
                          const SuperpixelMap& superpixels,
                          double conf_threshold = kDefaultConfidenceThreshold,
                          int layer_count = kDefaultLayerCount);

/// SDR of the central view driven by a superpixel-wise disparity map.
Rendering sp_render(const Image& center, const DisparityMap& sp_disparity_map, double shift,
                    int layer_count = kDefaultLayerCount);

double median(std::vector<double> values);

}  // namespace slsc
