#pragma once

#include <span>
#include <vector>

#include "slsc/core.hpp"
#include "slsc/warp.hpp"

namespace slsc {

inline constexpr int kDefaultLayerCount = 16;

/// Disparity range split into `layer_count` equal intervals. Layer 1 holds
/// the highest disparities (nearest), layer `layer_count` the lowest.
struct Stratification {
  int layer_count = 0;
  double d_min = 0.0;
  double d_max = 0.0;
  Grid<int> layer_index;                     // 1..L per pixel
  std::vector<DisparityMap> layered_disparity;  // [l-1]: D where in layer l, else 0
  std::vector<Mask> layer_masks;                // [l-1]

  double interval() const { return (d_max - d_min) / layer_count; }
  const DisparityMap& disparity(int layer) const;
  const Mask& mask(int layer) const;
};

/// Interval rule shared by stratify and quantize_labels:
/// l = clamp(L - floor((d - d_min) / w), 1, L), degenerate range -> 1.
int layer_of(double d, double d_min, double d_max, int layer_count);

Stratification stratify(const DisparityMap& disparity, int layer_count);

/// Splat of `image` restricted to layer `layer`, using that layer's
/// disparity slice as geometry.
WarpResult warp_layer(const Image& image, const Stratification& strat, int layer,
                      double shift);

/// One-hot per-pixel layer selection R(x, y, l), l = 1..L.
class FusionMask {
 public:
  FusionMask() = default;
  FusionMask(int width, int height, int layer_count);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int layer_count() const noexcept { return layer_count_; }

  bool operator()(int x, int y, int layer) const;
  void set(int x, int y, int layer);
  /// Selected layer at (x, y), or 0 if none.
  int selected(int x, int y) const;
  int sum(int x, int y) const;

 private:
  std::size_t index(int x, int y, int layer) const;

  int width_ = 0;
  int height_ = 0;
  int layer_count_ = 0;
  std::vector<std::uint8_t> data_;
};

struct Rendering {
  Image image;
  Mask mask;
};

struct FusedRendering {
  Image image;
  Mask mask;
  FusionMask selection;
};

/// Nearest-wins compositing: each pixel takes the smallest layer index whose
/// warp reached it. `layers[0]` is layer 1.
FusedRendering fuse(std::span<const WarpResult> layers);

/// Stratify, warp every layer, fuse.
FusedRendering sdr_render_detailed(const Image& image, const DisparityMap& disparity,
                                   double shift, int layer_count = kDefaultLayerCount);
Rendering sdr_render(const Image& image, const DisparityMap& disparity, double shift,
                     int layer_count = kDefaultLayerCount);

enum class AverageMode {
  /// Plain sum over views divided by the number of views; gaps count as 0.
  kPaper,
  /// Mean over the views that reached each pixel.
  kMasked,
};

Rendering average_predictions(std::span<const Rendering> predictions,
                              AverageMode mode = AverageMode::kMasked);

/// Disparity map rendered to view offset `shift` with the disparity itself
/// as payload.
struct DisparityRendering {
  DisparityMap disparity;
  Mask mask;
};
DisparityRendering render_target_disparity(const DisparityMap& disparity, double shift,
                                           int layer_count = kDefaultLayerCount);

/// Interval rule over the valid-pixel range of `disparity`; ambiguous
/// pixels get label 0.
LabelMap quantize_labels(const DisparityMap& disparity, const Mask& mask, int layer_count);

}  // namespace slsc
