#include "slsc/warp.hpp"

#include <cmath>

namespace slsc {
namespace {

constexpr double kKeysA = -0.5;

}  // namespace

double keys_kernel(double s) {
  const double a = std::abs(s);
  if (a <= 1.0) return ((kKeysA + 2.0) * a - (kKeysA + 3.0)) * a * a + 1.0;
  if (a < 2.0) return ((kKeysA * a - 5.0 * kKeysA) * a + 8.0 * kKeysA) * a - 4.0 * kKeysA;
  return 0.0;
}

std::array<double, 4> bicubic_weights(double frac) {
  return {keys_kernel(-1.0 - frac), keys_kernel(-frac), keys_kernel(1.0 - frac),
          keys_kernel(2.0 - frac)};
}

WarpResult backward_warp(const Image& image, const DisparityMap& disparity, double shift) {
  require_same_size(image, disparity, "backward_warp: image and disparity differ in size");
  const int w = image.width();
  const int h = image.height();
  const int nc = image.channels();
  WarpResult out{Image(w, h, nc), Mask(w, h), {}};

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double xs = x + shift * disparity(x, y);
      const double base = std::floor(xs);
      const auto taps = bicubic_weights(xs - base);
      const int x0 = static_cast<int>(base);
      bool inside = true;
      for (int k = 0; k < 4; ++k) {
        const int xi = x0 - 1 + k;
        if (taps[static_cast<std::size_t>(k)] != 0.0 && (xi < 0 || xi >= w)) inside = false;
      }
      if (!inside) continue;
      for (int c = 0; c < nc; ++c) {
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) {
          const double wk = taps[static_cast<std::size_t>(k)];
          if (wk != 0.0) acc += wk * image.at(x0 - 1 + k, y, c);
        }
        out.image.at(x, y, c) = acc;
      }
      out.mask(x, y) = 1;
    }
  }
  return out;
}

WarpResult forward_splat(const Image& image, const DisparityMap& disparity, double shift,
                         const Mask& valid) {
  require_same_size(image, disparity, "forward_splat: image and disparity differ in size");
  require_same_size(image, valid, "forward_splat: image and mask differ in size");
  const int w = image.width();
  const int h = image.height();
  const int nc = image.channels();

  Grid<double> signed_weight(w, h);
  Grid<double> positive_weight(w, h);
  Image signed_acc(w, h, nc);
  Image positive_acc(w, h, nc);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (valid(x, y) == 0) continue;
      const double xt = x + shift * disparity(x, y);
      const double base = std::floor(xt);
      const auto taps = bicubic_weights(xt - base);
      const int x0 = static_cast<int>(base);
      for (int k = 0; k < 4; ++k) {
        const double wk = taps[static_cast<std::size_t>(k)];
        const int xi = x0 - 1 + k;
        if (wk == 0.0 || xi < 0 || xi >= w) continue;
        signed_weight(xi, y) += wk;
        for (int c = 0; c < nc; ++c) signed_acc.at(xi, y, c) += wk * image.at(x, y, c);
        if (wk > 0.0) {
          positive_weight(xi, y) += wk;
          for (int c = 0; c < nc; ++c) positive_acc.at(xi, y, c) += wk * image.at(x, y, c);
        }
      }
    }
  }

  WarpResult out{Image(w, h, nc), Mask(w, h), std::move(signed_weight)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (positive_weight(x, y) <= kSplatWeightEpsilon) continue;
      out.mask(x, y) = 1;
      const double sw = out.weight(x, y);
      for (int c = 0; c < nc; ++c) {
        out.image.at(x, y, c) = sw > kSplatWeightEpsilon
                                    ? signed_acc.at(x, y, c) / sw
                                    : positive_acc.at(x, y, c) / positive_weight(x, y);
      }
    }
  }
  return out;
}

}  // namespace slsc
