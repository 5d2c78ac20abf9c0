#include "slsc/labelfill.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace slsc {

DilationResult dilate_fill(const LabelMap& labels, int window, int max_iters) {
  if (window < 3 || window % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "dilation window must be odd and >= 3");
  }
  const int w = labels.width();
  const int h = labels.height();
  if (std::none_of(labels.labels.values().begin(), labels.labels.values().end(),
                   [](int l) { return l != 0; })) {
    throw Error(ErrorCode::kNoKnownLabels, "label map has no known labels");
  }
  if (max_iters <= 0) max_iters = w + h;
  const int radius = window / 2;

  DilationResult result{labels, 0, false};
  Grid<int> current = labels.labels;
  Grid<int> next = current;
  long zeros = std::count(current.values().begin(), current.values().end(), 0);
  while (zeros > 0 && result.iterations < max_iters) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (current(x, y) != 0) continue;
        int best = 0;
        for (int yy = std::max(0, y - radius); yy <= std::min(h - 1, y + radius); ++yy)
          for (int xx = std::max(0, x - radius); xx <= std::min(w - 1, x + radius); ++xx)
            best = std::max(best, current(xx, yy));
        next(x, y) = best;
      }
    }
    current = next;
    ++result.iterations;
    const long remaining = std::count(current.values().begin(), current.values().end(), 0);
    if (remaining == zeros) break;  // nothing reachable is left
    zeros = remaining;
  }
  result.labels.labels = std::move(current);
  result.converged = zeros == 0;
  return result;
}

Image surface_fill_rgb(const Image& image, const Mask& mask, const LabelMap& labels) {
  require_same_size(image, mask, "surface_fill_rgb: mask size");
  require_same_size(image, labels.labels, "surface_fill_rgb: label size");
  const int w = image.width();
  const int h = image.height();
  int max_label = 0;
  for (int l : labels.labels.values()) {
    if (l <= 0) throw Error(ErrorCode::kUnfilledLabels, "surface_fill_rgb needs a filled label map");
    max_label = std::max(max_label, l);
  }
  if (count_set(mask) == 0) throw Error(ErrorCode::kNoValidPixels, "surface_fill_rgb");

  std::vector<long> valid_per_label(static_cast<std::size_t>(max_label) + 2, 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] != 0) ++valid_per_label[static_cast<std::size_t>(labels.labels[i])];
  }
  // valid_above[l]: any valid pixel with label > l.
  std::vector<bool> valid_above(static_cast<std::size_t>(max_label) + 1, false);
  for (int l = max_label - 1; l >= 0; --l) {
    valid_above[static_cast<std::size_t>(l)] =
        valid_above[static_cast<std::size_t>(l) + 1] || valid_per_label[static_cast<std::size_t>(l) + 1] > 0;
  }

  Image out = image;
  const int max_radius = std::max(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask(x, y) != 0) continue;
      const int own = labels.labels(x, y);
      enum class Rule { kSame, kFurther, kAny };
      const Rule rule = valid_per_label[static_cast<std::size_t>(own)] > 0 ? Rule::kSame
                        : valid_above[static_cast<std::size_t>(own)]      ? Rule::kFurther
                                                                          : Rule::kAny;
      auto eligible = [&](int sx, int sy) {
        if (mask(sx, sy) == 0) return false;
        const int l = labels.labels(sx, sy);
        switch (rule) {
          case Rule::kSame: return l == own;
          case Rule::kFurther: return l > own;
          case Rule::kAny: return true;
        }
        return false;
      };

      std::tuple<long, int, int> best{std::numeric_limits<long>::max(), 0, 0};
      bool found = false;
      auto consider = [&](int dx, int dy) {
        const int sx = x + dx;
        const int sy = y + dy;
        if (sx < 0 || sy < 0 || sx >= w || sy >= h || !eligible(sx, sy)) return;
        const std::tuple<long, int, int> cand{static_cast<long>(dx) * dx + static_cast<long>(dy) * dy, sy, sx};
        if (cand < best) {
          best = cand;
          found = true;
        }
      };
      // Chebyshev rings: every pixel on ring r is at squared distance >= r^2.
      for (int r = 1; r <= max_radius; ++r) {
        if (found && static_cast<long>(r) * r > std::get<0>(best)) break;
        for (int dx = -r; dx <= r; ++dx) {
          consider(dx, -r);
          consider(dx, r);
        }
        for (int dy = -r + 1; dy <= r - 1; ++dy) {
          consider(-r, dy);
          consider(r, dy);
        }
      }
      const int sx = std::get<2>(best);
      const int sy = std::get<1>(best);
      for (int c = 0; c < image.channels(); ++c) out.at(x, y, c) = image.at(sx, sy, c);
    }
  }
  return out;
}

}  // namespace slsc
