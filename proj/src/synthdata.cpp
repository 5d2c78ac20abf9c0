#include "slsc/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace slsc {
namespace {

using nlohmann::json;

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double unit_hash(std::uint64_t seed, std::int64_t cx, std::int64_t cy, int channel) {
  std::uint64_t h = mix(seed);
  h = mix(h ^ static_cast<std::uint64_t>(cx));
  h = mix(h ^ static_cast<std::uint64_t>(cy));
  h = mix(h ^ static_cast<std::uint64_t>(channel));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Rgb read_rgb(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::kInvalidArgument, "color must be [r, g, b]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Texture read_texture(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") return ConstantTexture{read_rgb(j.at("color"))};
  if (type == "checker") {
    const json& colors = j.at("colors");
    if (!colors.is_array() || colors.size() != 2) {
      throw Error(ErrorCode::kInvalidArgument, "checker needs two colors");
    }
    CheckerTexture t{j.at("period").get<double>(), read_rgb(colors[0]), read_rgb(colors[1])};
    if (!(t.period > 0.0)) throw Error(ErrorCode::kInvalidArgument, "checker period must be > 0");
    return t;
  }
  if (type == "noise") return NoiseTexture{j.at("seed").get<std::uint64_t>()};
  throw Error(ErrorCode::kInvalidArgument, "unknown texture type '" + type + "'");
}

json write_texture(const Texture& texture) {
  return std::visit(
      [](const auto& t) -> json {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ConstantTexture>) {
          return {{"type", "constant"}, {"color", t.color}};
        } else if constexpr (std::is_same_v<T, CheckerTexture>) {
          return {{"type", "checker"}, {"period", t.period}, {"colors", {t.first, t.second}}};
        } else {
          return {{"type", "noise"}, {"seed", t.seed}};
        }
      },
      texture);
}

Rgb random_color(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  return {u(rng), u(rng), u(rng)};
}

Texture random_texture(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  switch (kind(rng)) {
    case 0: return ConstantTexture{random_color(rng)};
    case 1: {
      std::uniform_int_distribution<int> period(2, 8);
      return CheckerTexture{static_cast<double>(period(rng)), random_color(rng), random_color(rng)};
    }
    default: return NoiseTexture{rng()};
  }
}

bool overlaps(const Rect& a, const Rect& b) {
  return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

}  // namespace

Rgb evaluate(const Texture& texture, double x, double y) {
  return std::visit(
      [x, y](const auto& t) -> Rgb {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ConstantTexture>) {
          return t.color;
        } else if constexpr (std::is_same_v<T, CheckerTexture>) {
          const auto cx = static_cast<std::int64_t>(std::floor(x / t.period));
          const auto cy = static_cast<std::int64_t>(std::floor(y / t.period));
          return ((cx + cy) % 2 == 0) ? t.first : t.second;
        } else {
          const auto cx = static_cast<std::int64_t>(std::floor(x));
          const auto cy = static_cast<std::int64_t>(std::floor(y));
          return {unit_hash(t.seed, cx, cy, 0), unit_hash(t.seed, cx, cy, 1),
                  unit_hash(t.seed, cx, cy, 2)};
        }
      },
      texture);
}

void SceneSpec::validate() const {
  if (width < 1 || height < 1) throw Error(ErrorCode::kInvalidArgument, "scene size must be positive");
  if (std::none_of(planes.begin(), planes.end(), [](const Plane& p) { return !p.region; })) {
    throw Error(ErrorCode::kInvalidArgument, "scene needs a full-frame background plane");
  }
  std::set<double> seen;
  for (const auto& p : planes) {
    if (!std::isfinite(p.disparity)) throw Error(ErrorCode::kNonFiniteValues, "plane disparity");
    if (!seen.insert(p.disparity).second) {
      throw Error(ErrorCode::kInvalidArgument, "plane disparities must be distinct");
    }
  }
}

SceneSpec scene_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kUnsupportedFormat, std::string("scene JSON parse error: ") + e.what());
  }
  SceneSpec spec;
  try {
    spec.width = j.value("width", 64);
    spec.height = j.value("height", 64);
    for (const json& p : j.at("planes")) {
      Plane plane;
      plane.disparity = p.at("disparity").get<double>();
      if (p.contains("region") && !(p["region"].is_string() && p["region"] == "full")) {
        const json& r = p["region"];
        plane.region = Rect{r.at("x").get<double>(), r.at("y").get<double>(), r.at("w").get<double>(),
                            r.at("h").get<double>()};
      }
      plane.texture = read_texture(p.at("texture"));
      spec.planes.push_back(std::move(plane));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kUnsupportedFormat, std::string("scene JSON: ") + e.what());
  }
  spec.validate();
  return spec;
}

SceneSpec load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return scene_from_json(ss.str());
}

std::string scene_to_json(const SceneSpec& spec) {
  json planes = json::array();
  for (const auto& p : spec.planes) {
    json jp{{"disparity", p.disparity}, {"texture", write_texture(p.texture)}};
    if (p.region) {
      jp["region"] = {{"x", p.region->x}, {"y", p.region->y}, {"w", p.region->w}, {"h", p.region->h}};
    } else {
      jp["region"] = "full";
    }
    planes.push_back(std::move(jp));
  }
  return json{{"width", spec.width}, {"height", spec.height}, {"planes", planes}}.dump(2);
}

OracleView oracle_render(const SceneSpec& spec, double view) {
  spec.validate();
  const int w = spec.width;
  const int h = spec.height;
  const Rect frame{0.0, 0.0, static_cast<double>(w), static_cast<double>(h)};
  // Uncovered pixels keep the nearest full-frame plane's disparity so that
  // a rendered view's empty border moves with the background.
  double background = -std::numeric_limits<double>::infinity();
  for (const auto& plane : spec.planes) {
    if (!plane.region) background = std::max(background, plane.disparity);
  }
  OracleView out{Image(w, h, 3), DisparityMap(w, h, background), Mask(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Plane* winner = nullptr;
      double winner_source = 0.0;
      for (const auto& plane : spec.planes) {
        const double sx = x - view * plane.disparity;
        const Rect& region = plane.region ? *plane.region : frame;
        if (!region.contains(sx, y)) continue;
        if (winner == nullptr || plane.disparity > winner->disparity) {
          winner = &plane;
          winner_source = sx;
        }
      }
      if (winner == nullptr) continue;
      const Rgb c = evaluate(winner->texture, winner_source, y);
      for (int ch = 0; ch < 3; ++ch) out.image.at(x, y, ch) = c[static_cast<std::size_t>(ch)];
      out.disparity(x, y) = winner->disparity;
      out.mask(x, y) = 1;
    }
  }
  return out;
}

Dataset generate_lightfield(const SceneSpec& spec, int radius) {
  if (radius < 0) throw Error(ErrorCode::kInvalidArgument, "radius must be >= 0");
  std::vector<View> views;
  std::vector<DisparityMap> disparities;
  std::vector<ConfidenceMap> confidences;
  for (int v = -radius; v <= radius; ++v) {
    OracleView o = oracle_render(spec, v);
    views.push_back(View{v, std::move(o.image)});
    disparities.push_back(std::move(o.disparity));
    confidences.emplace_back(spec.width, spec.height, 1.0);
  }
  return Dataset{LightField(radius, std::move(views)), std::move(disparities), std::move(confidences)};
}

SceneSpec random_scene(std::mt19937_64& rng, const RandomSceneOptions& options) {
  if (options.min_planes < 1 || options.max_planes < options.min_planes ||
      options.max_planes > options.max_disparity + 1) {
    throw Error(ErrorCode::kInvalidArgument, "random_scene: inconsistent plane bounds");
  }
  SceneSpec spec;
  spec.width = options.width;
  spec.height = options.height;

  std::uniform_int_distribution<int> plane_count(options.min_planes, options.max_planes);
  const int count = plane_count(rng);
  std::vector<int> pool(static_cast<std::size_t>(options.max_disparity) + 1);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<int> disparities(pool.begin(), pool.begin() + count);
  std::sort(disparities.begin(), disparities.end());

  spec.planes.push_back(Plane{static_cast<double>(disparities.front()), std::nullopt, random_texture(rng)});

  const int min_side = std::max(4, std::min(options.width, options.height) / 6);
  const int max_side = std::max(min_side, std::min(options.width, options.height) / 2);
  std::uniform_int_distribution<int> side(min_side, max_side);
  std::vector<Rect> placed;
  for (std::size_t i = 1; i < disparities.size(); ++i) {
    Rect rect;
    bool ok = false;
    for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
      const int rw = side(rng);
      const int rh = side(rng);
      std::uniform_int_distribution<int> px(0, options.width - rw);
      std::uniform_int_distribution<int> py(0, options.height - rh);
      rect = Rect{static_cast<double>(px(rng)), static_cast<double>(py(rng)), static_cast<double>(rw),
                  static_cast<double>(rh)};
      ok = std::none_of(placed.begin(), placed.end(), [&](const Rect& r) { return overlaps(r, rect); });
    }
    if (!ok) break;
    placed.push_back(rect);
    spec.planes.push_back(Plane{static_cast<double>(disparities[i]), rect, random_texture(rng)});
  }
  return spec;
}

}  // namespace slsc
