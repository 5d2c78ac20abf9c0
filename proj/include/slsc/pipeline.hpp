#pragma once

#include <vector>

#include "slsc/features.hpp"
#include "slsc/io.hpp"
#include "slsc/labelfill.hpp"
#include "slsc/sdr.hpp"
#include "slsc/superpixel.hpp"

namespace slsc {

struct PipelineOptions {
  int layer_count = kDefaultLayerCount;
  /// Pixels per superpixel for the fine and coarse granularities.
  std::vector<int> sp_sizes{100, 400};
  AverageMode average_mode = AverageMode::kMasked;
  int dilation_window = 3;
  double conf_threshold = kDefaultConfidenceThreshold;
  SlicOptions slic{};
};

struct Granularity {
  SuperpixelMap superpixels;
  DisparityMap disparity;
  Rendering rendering;
};

/// Everything the target-view synthesis produces for one target offset.
struct PipelineResult {
  double target = 0.0;
  /// Multi-reference average in the requested mode.
  Rendering vd;
  /// Mask-aware average, the input to the classical completion.
  Rendering vd_masked;
  std::vector<Granularity> granularities;
  DisparityRendering target_disparity;
  LabelMap labels;
  DilationResult filled_labels;
  Image completed;
  FeatureTensor features;
};

/// Renders target view `target` from every reference view, the superpixel
/// granularities of the central view, the target label map and its
/// completion, the classical surface-consistent fill and the conditioning
/// tensor.
PipelineResult render_target(const Dataset& dataset, double target, const PipelineOptions& options = {});

/// Predictions of the target view from each reference view, in view order.
std::vector<Rendering> per_view_predictions(const Dataset& dataset, double target, int layer_count);

}  // namespace slsc
