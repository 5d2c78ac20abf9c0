#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "slsc/core.hpp"
#include "slsc/io.hpp"

namespace slsc {

using Rgb = std::array<double, 3>;

struct ConstantTexture {
  Rgb color{};
};

/// Alternates two colors on a square grid of side `period`.
struct CheckerTexture {
  double period = 4.0;
  Rgb first{};
  Rgb second{};
};

/// Independent per-cell hash noise, one cell per unit square.
struct NoiseTexture {
  std::uint64_t seed = 0;
};

using Texture = std::variant<ConstantTexture, CheckerTexture, NoiseTexture>;

/// Texture value at reference-frame coordinates (x, y); defined everywhere.
Rgb evaluate(const Texture& texture, double x, double y);

/// Half-open rectangle [x, x+w) x [y, y+h) in reference-view pixels.
struct Rect {
  double x = 0, y = 0, w = 0, h = 0;
  bool contains(double px, double py) const { return px >= x && px < x + w && py >= y && py < y + h; }
};

/// Fronto-parallel plane. No region means the whole reference frame.
struct Plane {
  double disparity = 0.0;
  std::optional<Rect> region;
  Texture texture;
};

struct SceneSpec {
  int width = 64;
  int height = 64;
  std::vector<Plane> planes;

  /// Throws InvalidArgument unless there is a full-frame plane and all
  /// plane disparities are distinct.
  void validate() const;
};

SceneSpec scene_from_json(const std::string& text);
SceneSpec load_scene(const std::filesystem::path& path);
std::string scene_to_json(const SceneSpec& spec);

struct OracleView {
  Image image;
  DisparityMap disparity;
  Mask mask;
};

/// Brute-force z-buffer: for each pixel of view `view`, the plane of largest
/// disparity whose source point (x - view * d, y) lies in its region wins and
/// its texture is evaluated at that source point. Pixels no plane covers
/// (background source outside the frame) are masked out with value 0 and
/// carry the disparity of the nearest full-frame plane.
OracleView oracle_render(const SceneSpec& spec, double view);

/// Views -M..M from the oracle with exact disparity and unit confidence.
Dataset generate_lightfield(const SceneSpec& spec, int radius);

struct RandomSceneOptions {
  int width = 64;
  int height = 64;
  int min_planes = 2;
  int max_planes = 4;
  /// Integer disparities are drawn without replacement from [0, max_disparity].
  int max_disparity = 3;
};

/// Random scene: a full-frame background at the smallest drawn disparity and
/// foreground rectangles that do not overlap one another in the reference
/// frame.
SceneSpec random_scene(std::mt19937_64& rng, const RandomSceneOptions& options = {});

}  // namespace slsc
