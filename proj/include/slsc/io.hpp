#pragma once

#include <filesystem>
#include <vector>

#include "slsc/core.hpp"

namespace slsc {

namespace fs = std::filesystem;

/// Reads an 8- or 16-bit grayscale or RGB PNG (palette and low-bit gray are
/// expanded, alpha is dropped) and scales intensities into [0,1].
Image load_image(const fs::path& path);

/// Writes a clamped, rounded 8- or 16-bit PNG with 1 or 3 channels.
void save_image(const Image& image, const fs::path& path, int bit_depth = 8);

/// Mask as 8-bit gray, 0 / 255.
void save_mask(const Mask& mask, const fs::path& path);
Mask load_mask(const fs::path& path);

/// Raw label values as 8-bit gray. With `scale` > 1 each label is multiplied
/// for visualization.
void save_labels(const LabelMap& labels, const fs::path& path, int scale = 1);
LabelMap load_labels(const fs::path& path, int layer_count);

/// Arbitrary non-negative integer ids (e.g. superpixel labels) as 16-bit gray.
void save_id_map(const Grid<int>& ids, const fs::path& path);

/// Portable float map. Single channel only; byte order follows the sign of
/// the scale field. Rows are stored bottom-to-top as the format prescribes.
DisparityMap load_disparity(const fs::path& path);
void write_disparity(const DisparityMap& map, const fs::path& path);

/// PFM whose values must lie in [0,1].
ConfidenceMap load_confidence(const fs::path& path);

/// Expects view_{v}.png for v = -M..M in `dir`.
LightField load_lightfield(const fs::path& dir, int radius);

/// Light field plus per-view disparity and confidence, in view order -M..M.
struct Dataset {
  LightField lightfield;
  std::vector<DisparityMap> disparities;
  std::vector<ConfidenceMap> confidences;

  const DisparityMap& disparity(int view) const {
    return disparities[static_cast<std::size_t>(view + lightfield.radius())];
  }
  const ConfidenceMap& confidence(int view) const {
    return confidences[static_cast<std::size_t>(view + lightfield.radius())];
  }
};

/// Largest |v| among view_{v}.png files in `dir`, or -1 if there are none.
int detect_radius(const fs::path& dir);

/// Loads view_{v}.png, disp_{v}.pfm and (optionally) conf_{v}.pfm. Missing
/// confidence files default to full confidence.
Dataset load_dataset(const fs::path& dir, int radius);
void write_dataset(const Dataset& dataset, const fs::path& dir, int bit_depth = 8);

fs::path view_path(const fs::path& dir, int view);
fs::path disparity_path(const fs::path& dir, int view);
fs::path confidence_path(const fs::path& dir, int view);

}  // namespace slsc
