#include "slsc/metrics.hpp"

#include <cmath>
#include <vector>

namespace slsc {
namespace {

std::vector<double> gaussian_taps(int size, double sigma) {
  std::vector<double> taps(static_cast<std::size_t>(size));
  const double center = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - center;
    taps[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += taps[static_cast<std::size_t>(i)];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Separable "valid" filtering: output is (w - n + 1) x (h - n + 1).
Grid<double> filter_valid(const Grid<double>& in, const std::vector<double>& taps) {
  const int n = static_cast<int>(taps.size());
  const int ow = in.width() - n + 1;
  const int oh = in.height() - n + 1;
  Grid<double> rows(ow, in.height());
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += taps[static_cast<std::size_t>(k)] * in(x + k, y);
      rows(x, y) = acc;
    }
  }
  Grid<double> out(ow, oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += taps[static_cast<std::size_t>(k)] * rows(x, y + k);
      out(x, y) = acc;
    }
  }
  return out;
}

}  // namespace

double psnr(const Image& a, const Image& b, const Mask* mask) {
  if (!a.same_shape(b)) throw Error(ErrorCode::kDimensionMismatch, "psnr: image shapes differ");
  if (mask != nullptr) require_same_size(a, *mask, "psnr: mask size");
  double sum = 0.0;
  std::size_t count = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (mask != nullptr && (*mask)(x, y) == 0) continue;
      for (int c = 0; c < a.channels(); ++c) {
        const double d = a.at(x, y, c) - b.at(x, y, c);
        sum += d * d;
        ++count;
      }
    }
  }
  if (count == 0) throw Error(ErrorCode::kEmptyMask, "psnr: no pixels selected");
  const double mse = sum / static_cast<double>(count);
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

Grid<double> to_gray(const Image& image) {
  Grid<double> out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      double s = 0.0;
      for (int c = 0; c < image.channels(); ++c) s += image.at(x, y, c);
      out(x, y) = s / image.channels();
    }
  }
  return out;
}

double ssim(const Image& a, const Image& b, const SsimOptions& options) {
  if (!a.same_size(b)) throw Error(ErrorCode::kDimensionMismatch, "ssim: image sizes differ");
  if (a.width() < options.window || a.height() < options.window) {
    throw Error(ErrorCode::kImageSmallerThanWindow, "ssim: image smaller than window");
  }
  const Grid<double> x = to_gray(a);
  const Grid<double> y = to_gray(b);
  Grid<double> xx(x.width(), x.height());
  Grid<double> yy(x.width(), x.height());
  Grid<double> xy(x.width(), x.height());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto taps = gaussian_taps(options.window, options.sigma);
  const Grid<double> mx = filter_valid(x, taps);
  const Grid<double> my = filter_valid(y, taps);
  const Grid<double> exx = filter_valid(xx, taps);
  const Grid<double> eyy = filter_valid(yy, taps);
  const Grid<double> exy = filter_valid(xy, taps);

  const double c1 = options.k1 * options.k1;
  const double c2 = options.k2 * options.k2;
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double sx = exx[i] - mx[i] * mx[i];
    const double sy = eyy[i] - my[i] * my[i];
    const double sxy = exy[i] - mx[i] * my[i];
    const double num = (2.0 * mx[i] * my[i] + c1) * (2.0 * sxy + c2);
    const double den = (mx[i] * mx[i] + my[i] * my[i] + c1) * (sx + sy + c2);
    total += num / den;
  }
  return total / static_cast<double>(mx.size());
}

}  // namespace slsc
