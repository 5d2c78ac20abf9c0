#include "slsc/sdr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slsc {
namespace {

void require_layer_count(int layer_count) {
  if (layer_count < 1) {
    throw Error(ErrorCode::kInvalidLayerCount, "layer count must be >= 1, got " +
                                                   std::to_string(layer_count));
  }
}

}  // namespace

int layer_of(double d, double d_min, double d_max, int layer_count) {
  const double range = d_max - d_min;
  if (!(range > 0.0)) return 1;
  // (d - d_min) * L / range rather than (d - d_min) / w keeps exact interval
  // boundaries exact for integer-valued inputs.
  const double steps = std::floor((d - d_min) * layer_count / range);
  const double l = static_cast<double>(layer_count) - steps;
  return static_cast<int>(std::clamp(l, 1.0, static_cast<double>(layer_count)));
}

const DisparityMap& Stratification::disparity(int layer) const {
  if (layer < 1 || layer > layer_count) {
    throw Error(ErrorCode::kLayerOutOfRange, "layer " + std::to_string(layer));
  }
  return layered_disparity[static_cast<std::size_t>(layer - 1)];
}

const Mask& Stratification::mask(int layer) const {
  if (layer < 1 || layer > layer_count) {
    throw Error(ErrorCode::kLayerOutOfRange, "layer " + std::to_string(layer));
  }
  return layer_masks[static_cast<std::size_t>(layer - 1)];
}

Stratification stratify(const DisparityMap& disparity, int layer_count) {
  require_layer_count(layer_count);
  const int w = disparity.width();
  const int h = disparity.height();

  Stratification s;
  s.layer_count = layer_count;
  if (!disparity.empty()) {
    const auto [lo, hi] = std::minmax_element(disparity.values().begin(), disparity.values().end());
    s.d_min = *lo;
    s.d_max = *hi;
  }
  for (double d : disparity.values()) {
    if (!std::isfinite(d)) throw Error(ErrorCode::kNonFiniteValues, "stratify");
  }
  s.layer_index = Grid<int>(w, h);
  s.layered_disparity.assign(static_cast<std::size_t>(layer_count), DisparityMap(w, h));
  s.layer_masks.assign(static_cast<std::size_t>(layer_count), Mask(w, h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double d = disparity(x, y);
      const int l = layer_of(d, s.d_min, s.d_max, layer_count);
      s.layer_index(x, y) = l;
      s.layered_disparity[static_cast<std::size_t>(l - 1)](x, y) = d;
      s.layer_masks[static_cast<std::size_t>(l - 1)](x, y) = 1;
    }
  }
  return s;
}

WarpResult warp_layer(const Image& image, const Stratification& strat, int layer,
                      double shift) {
  return forward_splat(image, strat.disparity(layer), shift, strat.mask(layer));
}

FusionMask::FusionMask(int width, int height, int layer_count)
    : width_(width), height_(height), layer_count_(layer_count),
      data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                static_cast<std::size_t>(layer_count),
            0) {}

std::size_t FusionMask::index(int x, int y, int layer) const {
  if (layer < 1 || layer > layer_count_) {
    throw Error(ErrorCode::kLayerOutOfRange, "layer " + std::to_string(layer));
  }
  return ((static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x)) * static_cast<std::size_t>(layer_count_)) +
         static_cast<std::size_t>(layer - 1);
}

bool FusionMask::operator()(int x, int y, int layer) const { return data_[index(x, y, layer)] != 0; }

void FusionMask::set(int x, int y, int layer) { data_[index(x, y, layer)] = 1; }

int FusionMask::selected(int x, int y) const {
  for (int l = 1; l <= layer_count_; ++l) {
    if ((*this)(x, y, l)) return l;
  }
  return 0;
}

int FusionMask::sum(int x, int y) const {
  int total = 0;
  for (int l = 1; l <= layer_count_; ++l) total += (*this)(x, y, l) ? 1 : 0;
  return total;
}

FusedRendering fuse(std::span<const WarpResult> layers) {
  if (layers.empty()) throw Error(ErrorCode::kEmptyInput, "fuse: no layers");
  const Image& ref = layers.front().image;
  for (const auto& layer : layers) {
    if (!layer.image.same_shape(ref) || !ref.same_size(layer.mask)) {
      throw Error(ErrorCode::kDimensionMismatch, "fuse: layers differ in shape");
    }
  }
  const int w = ref.width();
  const int h = ref.height();
  const int nc = ref.channels();
  const int count = static_cast<int>(layers.size());

  FusedRendering out{Image(w, h, nc), Mask(w, h), FusionMask(w, h, count)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int l = 1; l <= count; ++l) {
        const WarpResult& layer = layers[static_cast<std::size_t>(l - 1)];
        if (layer.mask(x, y) == 0) continue;
        for (int c = 0; c < nc; ++c) out.image.at(x, y, c) = layer.image.at(x, y, c);
        out.mask(x, y) = 1;
        out.selection.set(x, y, l);
        break;
      }
    }
  }
  return out;
}

FusedRendering sdr_render_detailed(const Image& image, const DisparityMap& disparity,
                                   double shift, int layer_count) {
  require_same_size(image, disparity, "sdr_render: image and disparity differ in size");
  const Stratification strat = stratify(disparity, layer_count);
  std::vector<WarpResult> layers;
  layers.reserve(static_cast<std::size_t>(layer_count));
  for (int l = 1; l <= layer_count; ++l) layers.push_back(warp_layer(image, strat, l, shift));
  return fuse(layers);
}

Rendering sdr_render(const Image& image, const DisparityMap& disparity, double shift,
                     int layer_count) {
  FusedRendering fused = sdr_render_detailed(image, disparity, shift, layer_count);
  return Rendering{std::move(fused.image), std::move(fused.mask)};
}

Rendering average_predictions(std::span<const Rendering> predictions, AverageMode mode) {
  if (predictions.empty()) throw Error(ErrorCode::kEmptyInput, "average_predictions");
  const Image& ref = predictions.front().image;
  for (const auto& p : predictions) {
    if (!p.image.same_shape(ref) || !ref.same_size(p.mask)) {
      throw Error(ErrorCode::kDimensionMismatch, "average_predictions: shapes differ");
    }
  }
  const int w = ref.width();
  const int h = ref.height();
  const int nc = ref.channels();
  Rendering out{Image(w, h, nc), Mask(w, h)};
  const double n = static_cast<double>(predictions.size());

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int contributors = 0;
      for (const auto& p : predictions) contributors += p.mask(x, y) != 0 ? 1 : 0;
      if (contributors == 0) continue;
      out.mask(x, y) = 1;
      const double denom = mode == AverageMode::kPaper ? n : static_cast<double>(contributors);
      for (int c = 0; c < nc; ++c) {
        double sum = 0.0;
        for (const auto& p : predictions) {
          if (p.mask(x, y) != 0) sum += p.image.at(x, y, c);
        }
        out.image.at(x, y, c) = sum / denom;
      }
    }
  }
  return out;
}

DisparityRendering render_target_disparity(const DisparityMap& disparity, double shift,
                                           int layer_count) {
  Rendering r = sdr_render(to_image(disparity), disparity, shift, layer_count);
  return DisparityRendering{to_grid(r.image), std::move(r.mask)};
}

LabelMap quantize_labels(const DisparityMap& disparity, const Mask& mask, int layer_count) {
  require_layer_count(layer_count);
  require_same_size(disparity, mask, "quantize_labels: disparity and mask differ in size");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < disparity.size(); ++i) {
    if (mask[i] == 0) continue;
    lo = std::min(lo, disparity[i]);
    hi = std::max(hi, disparity[i]);
  }
  LabelMap out{Grid<int>(disparity.width(), disparity.height()), layer_count};
  for (std::size_t i = 0; i < disparity.size(); ++i) {
    if (mask[i] != 0) out.labels[i] = layer_of(disparity[i], lo, hi, layer_count);
  }
  return out;
}

}  // namespace slsc
