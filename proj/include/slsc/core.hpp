#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slsc/error.hpp"

namespace slsc {

/// Dense single-valued raster, row-major.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(checked_area(width, height)), fill) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  template <typename U>
  bool same_size(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  bool operator==(const Grid&) const = default;

 private:
  static long checked_area(int width, int height) {
    if (width < 0 || height < 0) {
      throw Error(ErrorCode::kInvalidArgument, "negative raster size");
    }
    return static_cast<long>(width) * height;
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Signed disparity in pixels per unit angular step. A pixel at x in view v
/// lands at x + (t - v) * d in view t.
using DisparityMap = Grid<double>;
using ConfidenceMap = Grid<double>;
/// Nonzero = valid / known.
using Mask = Grid<std::uint8_t>;

/// H x W x C intensities, channel-interleaved. Values are nominally in [0,1]
/// but pipeline stages may carry small excursions (bicubic lobes) until export.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, double fill = 0.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  double& at(int x, int y, int c) { return data_[index(x, y, c)]; }
  double at(int x, int y, int c) const { return data_[index(x, y, c)]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  template <typename U>
  bool same_size(const Grid<U>& g) const noexcept {
    return width_ == g.width() && height_ == g.height();
  }
  bool same_size(const Image& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_;
  }
  bool same_shape(const Image& o) const noexcept {
    return same_size(o) && channels_ == o.channels_;
  }

  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Quantized disparity labels: 0 = ambiguous, 1 = nearest layer,
/// layer_count = furthest layer.
struct LabelMap {
  Grid<int> labels;
  int layer_count = 0;

  int width() const noexcept { return labels.width(); }
  int height() const noexcept { return labels.height(); }
  bool operator==(const LabelMap&) const = default;
};

struct View {
  int index = 0;
  Image image;
};

/// Horizontal array of 2M+1 sub-aperture views with indices -M..M.
class LightField {
 public:
  LightField(int radius, std::vector<View> views);

  int radius() const noexcept { return radius_; }
  int width() const noexcept { return views_.front().image.width(); }
  int height() const noexcept { return views_.front().image.height(); }
  std::span<const View> views() const noexcept { return views_; }
  const Image& view(int index) const;
  const Image& center() const { return view(0); }

 private:
  int radius_;
  std::vector<View> views_;
};

/// Copies a single-channel image into a disparity-valued raster and back.
DisparityMap to_grid(const Image& image, int channel = 0);
Image to_image(const Grid<double>& grid);

/// Clamp every sample into [0,1]; used at export boundaries only.
Image clamped(const Image& image);

std::size_t count_set(const Mask& mask);

void require_same_size(const Image& a, const Image& b, const char* what);

template <typename T, typename U>
void require_same_size(const Grid<T>& a, const Grid<U>& b, const char* what) {
  if (!a.same_size(b)) {
    throw Error(ErrorCode::kDimensionMismatch, what);
  }
}

template <typename U>
void require_same_size(const Image& a, const Grid<U>& b, const char* what) {
  if (!a.same_size(b)) {
    throw Error(ErrorCode::kDimensionMismatch, what);
  }
}

}  // namespace slsc
