#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "slsc/core.hpp"
#include "slsc/sdr.hpp"

namespace slsc {

/// Dense float32 tensor, row-major, last dimension fastest. This is the unit
/// stored in LFT1 files.
struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  std::size_t element_count() const;
  bool operator==(const Tensor&) const = default;
};

/// LFT1 layout: "LFT1", u32 ndim, ndim x u32 dims, float32 payload; all
/// little-endian.
void write_tensor(const Tensor& tensor, const std::filesystem::path& path);
Tensor read_tensor(const std::filesystem::path& path);

inline constexpr int kFeatureChannels = 7;

/// Conditioning stack for the learned corrector.
/// Channels 0-2: fine-superpixel rendering minus Vd.
/// Channels 3-5: coarse-superpixel rendering minus Vd.
/// Channel 6:    filled label / L - 0.5.
struct FeatureTensor {
  Image channels;  // width x height x 7
  /// Set where Vd and both superpixel renderings are all gaps.
  Mask gap_mask;
  /// Vd (3 channels), kept so patches can restore color.
  Image base;

  int width() const noexcept { return channels.width(); }
  int height() const noexcept { return channels.height(); }
};

/// Gap pixels enter the subtractions as 0. Single-channel renderings are
/// broadcast to three channels.
FeatureTensor assemble(const Rendering& vd, const Rendering& vsp1, const Rendering& vsp2,
                       const LabelMap& filled_labels);

Tensor to_tensor(const Image& image);
Image from_tensor(const Tensor& tensor);

struct Patch {
  int x = 0;
  int y = 0;
  Image features;
  Image ground_truth;
  Image base;
};

/// Crops of side `size` at origins 0, stride, 2*stride, ... that fit.
std::vector<Patch> extract_patches(const FeatureTensor& features, const Image& ground_truth,
                                   int size, int stride = 64);

/// Copy of the window [x, x+w) x [y, y+h).
Image crop(const Image& image, int x, int y, int w, int h);

}  // namespace slsc
