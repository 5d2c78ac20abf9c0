#include "slsc/superpixel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace slsc {
namespace {

struct Lab {
  double l, a, b;
};

double srgb_to_linear(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double kDelta = 6.0 / 29.0;
  return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

// D65 reference white.
Lab rgb_to_lab(double r, double g, double b) {
  r = srgb_to_linear(r);
  g = srgb_to_linear(g);
  b = srgb_to_linear(b);
  const double x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883;
  const double fx = lab_f(x);
  const double fy = lab_f(y);
  const double fz = lab_f(z);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::vector<Lab> to_lab(const Image& image) {
  std::vector<Lab> out(image.pixel_count());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(image.width()) +
                            static_cast<std::size_t>(x);
      if (image.channels() >= 3) {
        out[i] = rgb_to_lab(image.at(x, y, 0), image.at(x, y, 1), image.at(x, y, 2));
      } else {
        const double v = image.at(x, y, 0);
        out[i] = rgb_to_lab(v, v, v);
      }
    }
  }
  return out;
}

struct Center {
  double l, a, b, x, y;
};

struct DisjointSet {
  std::vector<int> parent;
  std::vector<long> size;

  int find(int i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  }
  // `into` keeps its identity as root.
  void absorb(int into, int from) {
    into = find(into);
    from = find(from);
    if (into == from) return;
    parent[static_cast<std::size_t>(from)] = into;
    size[static_cast<std::size_t>(into)] += size[static_cast<std::size_t>(from)];
  }
};

constexpr std::array<std::array<int, 2>, 4> kNeighbours{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

// Labels 4-connected components; returns component id per pixel.
Grid<int> connected_components(const Grid<int>& labels, int& count) {
  const int w = labels.width();
  const int h = labels.height();
  Grid<int> comp(w, h, -1);
  count = 0;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (comp(x, y) >= 0) continue;
      const int label = labels(x, y);
      comp(x, y) = count;
      stack.assign(1, {x, y});
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        for (const auto& [dx, dy] : kNeighbours) {
          const int nx = cx + dx;
          const int ny = cy + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (comp(nx, ny) >= 0 || labels(nx, ny) != label) continue;
          comp(nx, ny) = count;
          stack.emplace_back(nx, ny);
        }
      }
      ++count;
    }
  }
  return comp;
}

Grid<int> enforce_connectivity(const Grid<int>& labels) {
  const int w = labels.width();
  const int h = labels.height();
  int count = 0;
  const Grid<int> comp = connected_components(labels, count);

  std::vector<long> comp_size(static_cast<std::size_t>(count), 0);
  std::vector<int> comp_label(static_cast<std::size_t>(count), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      ++comp_size[static_cast<std::size_t>(comp(x, y))];
      comp_label[static_cast<std::size_t>(comp(x, y))] = labels(x, y);
    }
  }
  // Largest component per label (first in scan order on ties) is kept.
  std::vector<int> keeper;
  {
    int max_label = 0;
    for (int l : comp_label) max_label = std::max(max_label, l);
    keeper.assign(static_cast<std::size_t>(max_label) + 1, -1);
    for (int c = 0; c < count; ++c) {
      int& k = keeper[static_cast<std::size_t>(comp_label[static_cast<std::size_t>(c)])];
      if (k < 0 || comp_size[static_cast<std::size_t>(c)] > comp_size[static_cast<std::size_t>(k)]) k = c;
    }
  }

  std::vector<std::set<int>> adjacency(static_cast<std::size_t>(count));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int c = comp(x, y);
      if (x + 1 < w && comp(x + 1, y) != c) {
        adjacency[static_cast<std::size_t>(c)].insert(comp(x + 1, y));
        adjacency[static_cast<std::size_t>(comp(x + 1, y))].insert(c);
      }
      if (y + 1 < h && comp(x, y + 1) != c) {
        adjacency[static_cast<std::size_t>(c)].insert(comp(x, y + 1));
        adjacency[static_cast<std::size_t>(comp(x, y + 1))].insert(c);
      }
    }
  }

  DisjointSet sets{std::vector<int>(static_cast<std::size_t>(count)), comp_size};
  std::iota(sets.parent.begin(), sets.parent.end(), 0);
  // Component ids follow scan order of their first pixel, so iterating ids
  // is deterministic.
  for (int c = 0; c < count; ++c) {
    if (keeper[static_cast<std::size_t>(comp_label[static_cast<std::size_t>(c)])] == c) continue;
    int best = -1;
    long best_size = -1;
    for (int n : adjacency[static_cast<std::size_t>(c)]) {
      const int root = sets.find(n);
      if (root == sets.find(c)) continue;
      const long s = sets.size[static_cast<std::size_t>(root)];
      if (s > best_size) {
        best = root;
        best_size = s;
      }
    }
    if (best >= 0) sets.absorb(best, c);
  }

  std::vector<int> compact(static_cast<std::size_t>(count), -1);
  int next = 0;
  Grid<int> out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int root = sets.find(comp(x, y));
      int& id = compact[static_cast<std::size_t>(root)];
      if (id < 0) id = next++;
      out(x, y) = id;
    }
  }
  return out;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "median of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

SuperpixelMap segment(const Image& image, int target_size, const SlicOptions& options) {
  if (target_size < 4) {
    throw Error(ErrorCode::kInvalidArgument, "superpixel target size must be >= 4");
  }
  const int w = image.width();
  const int h = image.height();
  if (static_cast<long>(w) * h < target_size) {
    throw Error(ErrorCode::kImageTooSmall, "image has fewer pixels than one superpixel");
  }

  const std::vector<Lab> lab = to_lab(image);
  const double spacing = std::sqrt(static_cast<double>(target_size));
  const int nx = std::max(1, static_cast<int>(std::lround(w / spacing)));
  const int ny = std::max(1, static_cast<int>(std::lround(h / spacing)));
  const double step_x = static_cast<double>(w) / nx;
  const double step_y = static_cast<double>(h) / ny;

  auto at = [&](int x, int y) -> const Lab& {
    return lab[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)];
  };

  // Centres and pixel positions are both in continuous coordinates: pixel
  // (x, y) sits at (x + 0.5, y + 0.5).
  std::vector<Center> centers;
  centers.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double cx = (i + 0.5) * step_x;
      const double cy = (j + 0.5) * step_y;
      const Lab& c = at(std::min(w - 1, static_cast<int>(cx)), std::min(h - 1, static_cast<int>(cy)));
      centers.push_back({c.l, c.a, c.b, cx, cy});
    }
  }

  Grid<int> labels(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int i = std::min(nx - 1, static_cast<int>(x / step_x));
      const int j = std::min(ny - 1, static_cast<int>(y / step_y));
      labels(x, y) = j * nx + i;
    }
  }

  const double spatial_weight = (options.compactness * options.compactness) / (spacing * spacing);
  const int reach_x = static_cast<int>(std::ceil(step_x));
  const int reach_y = static_cast<int>(std::ceil(step_y));
  Grid<double> best(w, h);
  for (int iter = 0; iter < options.iterations; ++iter) {
    std::fill(best.values().begin(), best.values().end(), std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const Center& c = centers[k];
      const int x_lo = std::max(0, static_cast<int>(std::floor(c.x)) - reach_x);
      const int x_hi = std::min(w - 1, static_cast<int>(std::floor(c.x)) + reach_x);
      const int y_lo = std::max(0, static_cast<int>(std::floor(c.y)) - reach_y);
      const int y_hi = std::min(h - 1, static_cast<int>(std::floor(c.y)) + reach_y);
      for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
          const Lab& p = at(x, y);
          const double dl = p.l - c.l;
          const double da = p.a - c.a;
          const double db = p.b - c.b;
          const double dx = x + 0.5 - c.x;
          const double dy = y + 0.5 - c.y;
          const double dist = dl * dl + da * da + db * db + spatial_weight * (dx * dx + dy * dy);
          if (dist < best(x, y)) {
            best(x, y) = dist;
            labels(x, y) = static_cast<int>(k);
          }
        }
      }
    }

    std::vector<std::array<double, 5>> sums(centers.size(), {0, 0, 0, 0, 0});
    std::vector<long> counts(centers.size(), 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto k = static_cast<std::size_t>(labels(x, y));
        const Lab& p = at(x, y);
        sums[k][0] += p.l;
        sums[k][1] += p.a;
        sums[k][2] += p.b;
        sums[k][3] += x + 0.5;
        sums[k][4] += y + 0.5;
        ++counts[k];
      }
    }
    for (std::size_t k = 0; k < centers.size(); ++k) {
      if (counts[k] == 0) continue;
      const double n = static_cast<double>(counts[k]);
      centers[k] = {sums[k][0] / n, sums[k][1] / n, sums[k][2] / n, sums[k][3] / n, sums[k][4] / n};
    }
  }

  SuperpixelMap out;
  out.labels = enforce_connectivity(labels);
  out.count = 0;
  for (int id : out.labels.values()) out.count = std::max(out.count, id + 1);
  out.target_size = target_size;
  return out;
}

DisparityMap sp_disparity(const DisparityMap& disparity, const ConfidenceMap& confidence,
                          const SuperpixelMap& superpixels, double conf_threshold,
                          int layer_count) {
  require_same_size(disparity, confidence, "sp_disparity: confidence size");
  require_same_size(disparity, superpixels.labels, "sp_disparity: superpixel size");
  if (layer_count < 1) throw Error(ErrorCode::kInvalidLayerCount, "sp_disparity");
  const int w = disparity.width();
  const int h = disparity.height();
  const auto k = static_cast<std::size_t>(superpixels.count);

  std::vector<std::vector<double>> confident(k);
  std::vector<std::vector<double>> all(k);
  std::vector<std::set<int>> neighbours(k);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int id = superpixels.labels(x, y);
      const auto s = static_cast<std::size_t>(id);
      all[s].push_back(disparity(x, y));
      if (confidence(x, y) >= conf_threshold) confident[s].push_back(disparity(x, y));
      if (x + 1 < w && superpixels.labels(x + 1, y) != id) {
        neighbours[s].insert(superpixels.labels(x + 1, y));
        neighbours[static_cast<std::size_t>(superpixels.labels(x + 1, y))].insert(id);
      }
      if (y + 1 < h && superpixels.labels(x, y + 1) != id) {
        neighbours[s].insert(superpixels.labels(x, y + 1));
        neighbours[static_cast<std::size_t>(superpixels.labels(x, y + 1))].insert(id);
      }
    }
  }

  std::vector<double> value(k, 0.0);
  for (std::size_t s = 0; s < k; ++s) {
    if (!confident[s].empty()) {
      value[s] = median(std::move(confident[s]));
    } else if (!all[s].empty()) {
      value[s] = median(std::move(all[s]));
    }
  }

  double d_min = 0.0;
  double d_max = 0.0;
  if (!disparity.empty()) {
    const auto [lo, hi] = std::minmax_element(disparity.values().begin(), disparity.values().end());
    d_min = *lo;
    d_max = *hi;
  }
  const double interval = (d_max - d_min) / layer_count;

  std::vector<double> smoothed = value;
  for (std::size_t s = 0; s < k; ++s) {
    if (neighbours[s].empty()) continue;
    bool isolated = true;
    std::vector<double> around;
    for (int n : neighbours[s]) {
      const double v = value[static_cast<std::size_t>(n)];
      around.push_back(v);
      if (std::abs(value[s] - v) <= interval) isolated = false;
    }
    if (isolated) smoothed[s] = median(std::move(around));
  }

  DisparityMap out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out(x, y) = smoothed[static_cast<std::size_t>(superpixels.labels(x, y))];
  return out;
}

Rendering sp_render(const Image& center, const DisparityMap& sp_disparity_map, double shift,
                    int layer_count) {
  return sdr_render(center, sp_disparity_map, shift, layer_count);
}

}  // namespace slsc
