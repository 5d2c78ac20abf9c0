#include "slsc/core.hpp"

#include <algorithm>
#include <set>

namespace slsc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kNonFiniteValues: return "NonFiniteValues";
    case ErrorCode::kMissingView: return "MissingView";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidLayerCount: return "InvalidLayerCount";
    case ErrorCode::kLayerOutOfRange: return "LayerOutOfRange";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kImageTooSmall: return "ImageTooSmall";
    case ErrorCode::kNoKnownLabels: return "NoKnownLabels";
    case ErrorCode::kNoValidPixels: return "NoValidPixels";
    case ErrorCode::kUnfilledLabels: return "UnfilledLabels";
    case ErrorCode::kPatchTooLarge: return "PatchTooLarge";
    case ErrorCode::kCorruptHeader: return "CorruptHeader";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kImageSmallerThanWindow: return "ImageSmallerThanWindow";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 0 || height < 0 || channels < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad image shape");
  }
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

LightField::LightField(int radius, std::vector<View> views)
    : radius_(radius), views_(std::move(views)) {
  if (radius < 0) {
    throw Error(ErrorCode::kInvalidArgument, "baseline radius must be >= 0");
  }
  std::sort(views_.begin(), views_.end(),
            [](const View& a, const View& b) { return a.index < b.index; });
  std::set<int> seen;
  for (const auto& v : views_) seen.insert(v.index);
  for (int v = -radius; v <= radius; ++v) {
    if (!seen.contains(v)) {
      throw Error(ErrorCode::kMissingView, "view " + std::to_string(v));
    }
  }
  if (views_.size() != static_cast<std::size_t>(2 * radius + 1) ||
      seen.size() != views_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "view indices must be exactly -M..M without duplicates");
  }
  const Image& ref = views_.front().image;
  for (const auto& v : views_) {
    if (!v.image.same_shape(ref)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "view " + std::to_string(v.index) + " differs in size or channels");
    }
  }
}

const Image& LightField::view(int index) const {
  if (index < -radius_ || index > radius_) {
    throw Error(ErrorCode::kMissingView, "view " + std::to_string(index));
  }
  return views_[static_cast<std::size_t>(index + radius_)].image;
}

DisparityMap to_grid(const Image& image, int channel) {
  if (channel < 0 || channel >= image.channels()) {
    throw Error(ErrorCode::kInvalidArgument, "channel out of range");
  }
  DisparityMap out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x) out(x, y) = image.at(x, y, channel);
  return out;
}

Image to_image(const Grid<double>& grid) {
  Image out(grid.width(), grid.height(), 1);
  std::copy(grid.values().begin(), grid.values().end(), out.values().begin());
  return out;
}

Image clamped(const Image& image) {
  Image out = image;
  for (double& v : out.values()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

std::size_t count_set(const Mask& mask) {
  return static_cast<std::size_t>(
      std::count_if(mask.values().begin(), mask.values().end(),
                    [](std::uint8_t m) { return m != 0; }));
}

void require_same_size(const Image& a, const Image& b, const char* what) {
  if (!a.same_size(b)) {
    throw Error(ErrorCode::kDimensionMismatch, what);
  }
}

}  // namespace slsc
