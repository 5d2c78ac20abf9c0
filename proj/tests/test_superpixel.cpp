#include <map>
#include <set>

#include "doctest.h"
#include "slsc/superpixel.hpp"
#include "slsc/synthdata.hpp"
#include "test_support.hpp"

using namespace slsc;

namespace {

// Number of 4-connected pieces of each id, by flood fill.
std::map<int, int> pieces_per_id(const Grid<int>& labels) {
  const int w = labels.width();
  const int h = labels.height();
  Grid<int> seen(w, h);
  std::map<int, int> pieces;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (seen(x, y)) continue;
      const int id = labels(x, y);
      ++pieces[id];
      std::vector<std::pair<int, int>> todo{{x, y}};
      seen(x, y) = 1;
      while (!todo.empty()) {
        auto [cx, cy] = todo.back();
        todo.pop_back();
        const int nbr[4][2] = {{cx + 1, cy}, {cx - 1, cy}, {cx, cy + 1}, {cx, cy - 1}};
        for (const auto& n : nbr) {
          if (n[0] < 0 || n[1] < 0 || n[0] >= w || n[1] >= h) continue;
          if (seen(n[0], n[1]) || labels(n[0], n[1]) != id) continue;
          seen(n[0], n[1]) = 1;
          todo.emplace_back(n[0], n[1]);
        }
      }
    }
  }
  return pieces;
}

Image scene_image(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle_render(random_scene(rng), 0.0).image;
}

SuperpixelMap one_pixel_superpixels(int w, int h) {
  SuperpixelMap sp;
  sp.labels = Grid<int>(w, h);
  for (std::size_t i = 0; i < sp.labels.size(); ++i) sp.labels[i] = static_cast<int>(i);
  sp.count = w * h;
  sp.target_size = 1;
  return sp;
}

}  // namespace

TEST_CASE("uniform image splits into quadrants") {
  const SuperpixelMap sp = segment(Image(20, 20, 3, 0.5), 100);
  REQUIRE(sp.count == 4);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) CHECK(sp.labels(x, y) == (y >= 10 ? 2 : 0) + (x >= 10 ? 1 : 0));
}

TEST_CASE("no superpixel straddles a strong colour edge") {
  Image img(32, 32, 3);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      img.at(x, y, 0) = x < 13 ? 0.9 : 0.1;
      img.at(x, y, 2) = x < 13 ? 0.1 : 0.9;
    }
  }
  const SuperpixelMap sp = segment(img, 64);
  std::map<int, std::set<bool>> sides;
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) sides[sp.labels(x, y)].insert(x < 13);
  for (const auto& [id, s] : sides) CHECK(s.size() == 1);
}

TEST_CASE("segmentation is a partition into connected superpixels of roughly the target size") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Image img = scene_image(seed);
    for (int ts : {100, 400}) {
      const SuperpixelMap sp = segment(img, ts);
      const auto pieces = pieces_per_id(sp.labels);
      CHECK(static_cast<int>(pieces.size()) == sp.count);
      CHECK(pieces.begin()->first == 0);
      CHECK(pieces.rbegin()->first == sp.count - 1);
      for (const auto& [id, n] : pieces) CHECK(n == 1);
      const double expected = 64.0 * 64.0 / ts;
      CHECK(sp.count >= 0.8 * expected);
      CHECK(sp.count <= 1.2 * expected);
    }
  }
}

TEST_CASE("segment is deterministic") {
  const Image img = scene_image(9);
  CHECK(segment(img, 100).labels == segment(img, 100).labels);
}

TEST_CASE("segment argument checks") {
  try {
    segment(Image(8, 8, 3), 3);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
  try {
    segment(Image(5, 5, 3), 100);
    FAIL("expected ImageTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kImageTooSmall);
  }
}

TEST_CASE("median") {
  CHECK(median({1, 1, 2, 9}) == 1.5);
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4}) == 4.0);
  CHECK_THROWS_AS(median({}), Error);
}

TEST_CASE("sp_disparity uses confident members and falls back to all of them") {
  SuperpixelMap sp;
  sp.labels = Grid<int>(6, 1);
  for (int x = 3; x < 6; ++x) sp.labels(x, 0) = 1;
  sp.count = 2;
  DisparityMap d(6, 1);
  ConfidenceMap c(6, 1, 1.0);
  // SP 0: {1, 1, 100} with the outlier unconfident. SP 1: {2, 3, 7} all unconfident.
  d(0, 0) = 1;
  d(1, 0) = 1;
  d(2, 0) = 100;
  c(2, 0) = 0.0;
  d(3, 0) = 2;
  d(4, 0) = 3;
  d(5, 0) = 7;
  c(3, 0) = c(4, 0) = c(5, 0) = 0.1;
  const DisparityMap out = sp_disparity(d, c, sp, 0.5, 1);
  for (int x = 0; x < 3; ++x) CHECK(out(x, 0) == 1.0);
  for (int x = 3; x < 6; ++x) CHECK(out(x, 0) == 3.0);
}

TEST_CASE("sp_disparity replaces a superpixel isolated from all its neighbours") {
  const SuperpixelMap sp = one_pixel_superpixels(3, 3);
  DisparityMap d(3, 3, 0.0);
  d(1, 1) = 10.0;
  const DisparityMap out = sp_disparity(d, ConfidenceMap(3, 3, 1.0), sp, 0.5, 16);
  for (double v : out.values()) CHECK(v == 0.0);

  // With one layer the interval spans the whole range and nothing is isolated.
  CHECK(sp_disparity(d, ConfidenceMap(3, 3, 1.0), sp, 0.5, 1) == d);
}

TEST_CASE("sp_disparity is constant inside every superpixel") {
  std::mt19937_64 rng(44);
  const Image img = scene_image(44);
  const SuperpixelMap sp = segment(img, 100);
  DisparityMap d(64, 64);
  ConfidenceMap c(64, 64);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (double& v : d.values()) v = u(rng);
  for (double& v : c.values()) v = u(rng) / 3.0;
  const DisparityMap out = sp_disparity(d, c, sp);
  std::map<int, double> value;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto [it, fresh] = value.emplace(sp.labels[i], out[i]);
    if (!fresh) CHECK(it->second == out[i]);
  }
}

TEST_CASE("sp_render with constant disparity is a rigid translation") {
  std::mt19937_64 rng(6);
  const Image center = slsc::testing::random_image(rng, 24, 8, 3);
  const DisparityMap p(24, 8, 1.0);
  const Rendering r = sp_render(center, p, 3.0);
  const Rendering s = sdr_render(center, p, 3.0);
  CHECK(r.image == s.image);
  CHECK(r.mask == s.mask);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 24; ++x) {
      CHECK(r.mask(x, y) == (x >= 3 ? 1 : 0));
      if (x >= 3) CHECK(r.image.at(x, y, 1) == doctest::Approx(center.at(x - 3, y, 1)));
    }
  }
}
