#include "slsc/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <regex>
#include <sstream>

namespace slsc {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct RawPng {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> bytes;  // big-endian samples for 16-bit
  std::vector<png_bytep> rows;
};

void png_warning_sink(png_structp, png_const_charp) {}

[[noreturn]] void png_error_jump(png_structp png, png_const_charp) { png_longjmp(png, 1); }

// libpng reports errors via longjmp. Everything with a destructor lives in
// heap state allocated before setjmp so nothing is skipped on unwind.
RawPng read_png(const fs::path& path) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kMissingFile, path.string());
  }
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(ErrorCode::kMissingFile, path.string());

  png_byte header[8] = {};
  if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
    throw Error(ErrorCode::kUnsupportedFormat, path.string() + " is not a PNG");
  }

  auto raw = std::make_unique<RawPng>();
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_jump,
                                           png_warning_sink);
  if (png == nullptr) throw Error(ErrorCode::kUnsupportedFormat, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::kUnsupportedFormat, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::kUnsupportedFormat, path.string() + " is corrupt or truncated");
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if ((color_type & PNG_COLOR_MASK_ALPHA) != 0) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  raw->width = static_cast<int>(png_get_image_width(png, info));
  raw->height = static_cast<int>(png_get_image_height(png, info));
  raw->channels = png_get_channels(png, info);
  raw->bit_depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  raw->bytes.resize(stride * static_cast<std::size_t>(raw->height));
  raw->rows.resize(static_cast<std::size_t>(raw->height));
  for (int y = 0; y < raw->height; ++y) {
    raw->rows[static_cast<std::size_t>(y)] = raw->bytes.data() + stride * static_cast<std::size_t>(y);
  }
  png_read_image(png, raw->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (raw->channels != 1 && raw->channels != 3) {
    throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": unexpected channel count");
  }
  if (raw->bit_depth != 8 && raw->bit_depth != 16) {
    throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": unsupported bit depth");
  }
  return std::move(*raw);
}

void write_png(const fs::path& path, int width, int height, int channels, int bit_depth,
               const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error(ErrorCode::kMissingFile, "cannot write " + path.string());

  const std::size_t stride = static_cast<std::size_t>(width) *
                             static_cast<std::size_t>(channels) *
                             static_cast<std::size_t>(bit_depth / 8);
  auto rows = std::make_unique<std::vector<png_bytep>>(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    (*rows)[static_cast<std::size_t>(y)] =
        const_cast<png_bytep>(bytes.data()) + stride * static_cast<std::size_t>(y);
  }

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_jump,
                                            png_warning_sink);
  if (png == nullptr) throw Error(ErrorCode::kUnsupportedFormat, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::kUnsupportedFormat, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kUnsupportedFormat, "failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows->data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::uint16_t read_be16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

void write_be16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v >> 8);
  p[1] = static_cast<std::uint8_t>(v & 0xff);
}

std::vector<int> read_gray_ints(const fs::path& path, int& width, int& height) {
  RawPng raw = read_png(path);
  if (raw.channels != 1) {
    throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": expected grayscale");
  }
  width = raw.width;
  height = raw.height;
  std::vector<int> out(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = raw.bit_depth == 8 ? raw.bytes[i] : read_be16(&raw.bytes[2 * i]);
  }
  return out;
}

float swap_float(float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  bits = ((bits & 0x000000ffu) << 24) | ((bits & 0x0000ff00u) << 8) |
         ((bits & 0x00ff0000u) >> 8) | ((bits & 0xff000000u) >> 24);
  std::memcpy(&v, &bits, 4);
  return v;
}

Grid<double> read_pfm(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw Error(ErrorCode::kMissingFile, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());

  std::string magic;
  long width = 0;
  long height = 0;
  double scale = 0.0;
  if (!(in >> magic >> width >> height >> scale)) {
    throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": bad PFM header");
  }
  if (magic == "PF") {
    throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": 3-channel PFM not supported");
  }
  if (magic != "Pf" || width <= 0 || height <= 0 || scale == 0.0 ||
      width > (1 << 20) || height > (1 << 20)) {
    throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": bad PFM header");
  }
  in.get();  // single whitespace byte terminates the header

  const bool file_little = scale < 0.0;
  const bool host_little = std::endian::native == std::endian::little;
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<float> buffer(count);
  in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(count * 4));
  if (static_cast<std::size_t>(in.gcount()) != count * 4) {
    throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": truncated PFM payload");
  }

  Grid<double> out(static_cast<int>(width), static_cast<int>(height));
  for (int row = 0; row < out.height(); ++row) {
    const int y = out.height() - 1 - row;
    for (int x = 0; x < out.width(); ++x) {
      float v = buffer[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                       static_cast<std::size_t>(x)];
      if (file_little != host_little) v = swap_float(v);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteValues, path.string());
      }
      out(x, y) = v;
    }
  }
  return out;
}

}  // namespace

Image load_image(const fs::path& path) {
  RawPng raw = read_png(path);
  Image out(raw.width, raw.height, raw.channels);
  auto values = out.values();
  if (raw.bit_depth == 8) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = raw.bytes[i] / 255.0;
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = read_be16(&raw.bytes[2 * i]) / 65535.0;
    }
  }
  return out;
}

void save_image(const Image& image, const fs::path& path, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw Error(ErrorCode::kUnsupportedFormat, "bit depth must be 8 or 16");
  }
  if (image.channels() != 1 && image.channels() != 3) {
    throw Error(ErrorCode::kUnsupportedFormat, "PNG export needs 1 or 3 channels");
  }
  const auto values = image.values();
  const double peak = bit_depth == 8 ? 255.0 : 65535.0;
  std::vector<std::uint8_t> bytes(values.size() * static_cast<std::size_t>(bit_depth / 8));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::isfinite(values[i]) ? std::clamp(values[i], 0.0, 1.0) : 0.0;
    const auto q = static_cast<std::uint16_t>(std::lround(v * peak));
    if (bit_depth == 8) {
      bytes[i] = static_cast<std::uint8_t>(q);
    } else {
      write_be16(&bytes[2 * i], q);
    }
  }
  write_png(path, image.width(), image.height(), image.channels(), bit_depth, bytes);
}

void save_mask(const Mask& mask, const fs::path& path) {
  std::vector<std::uint8_t> bytes(mask.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask[i] != 0 ? 255 : 0;
  write_png(path, mask.width(), mask.height(), 1, 8, bytes);
}

Mask load_mask(const fs::path& path) {
  int w = 0;
  int h = 0;
  const auto ints = read_gray_ints(path, w, h);
  Mask out(w, h);
  for (std::size_t i = 0; i < ints.size(); ++i) out[i] = ints[i] != 0 ? 1 : 0;
  return out;
}

void save_labels(const LabelMap& labels, const fs::path& path, int scale) {
  std::vector<std::uint8_t> bytes(labels.labels.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = static_cast<std::uint8_t>(std::clamp(labels.labels[i] * scale, 0, 255));
  }
  write_png(path, labels.width(), labels.height(), 1, 8, bytes);
}

LabelMap load_labels(const fs::path& path, int layer_count) {
  int w = 0;
  int h = 0;
  const auto ints = read_gray_ints(path, w, h);
  LabelMap out{Grid<int>(w, h), layer_count};
  for (std::size_t i = 0; i < ints.size(); ++i) {
    if (ints[i] > layer_count) {
      throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": label exceeds layer count");
    }
    out.labels[i] = ints[i];
  }
  return out;
}

void save_id_map(const Grid<int>& ids, const fs::path& path) {
  std::vector<std::uint8_t> bytes(ids.size() * 2);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    write_be16(&bytes[2 * i], static_cast<std::uint16_t>(std::clamp(ids[i], 0, 65535)));
  }
  write_png(path, ids.width(), ids.height(), 1, 16, bytes);
}

DisparityMap load_disparity(const fs::path& path) { return read_pfm(path); }

void write_disparity(const DisparityMap& map, const fs::path& path) {
  for (double v : map.values()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValues, path.string());
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kMissingFile, "cannot write " + path.string());
  out << "Pf\n" << map.width() << ' ' << map.height() << '\n'
      << (std::endian::native == std::endian::little ? "-1.0" : "1.0") << '\n';
  std::vector<float> row(static_cast<std::size_t>(map.width()));
  for (int y = map.height() - 1; y >= 0; --y) {
    for (int x = 0; x < map.width(); ++x) row[static_cast<std::size_t>(x)] = static_cast<float>(map(x, y));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
}

ConfidenceMap load_confidence(const fs::path& path) {
  ConfidenceMap map = read_pfm(path);
  for (double v : map.values()) {
    if (v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": confidence outside [0,1]");
    }
  }
  return map;
}

fs::path view_path(const fs::path& dir, int view) {
  return dir / ("view_" + std::to_string(view) + ".png");
}
fs::path disparity_path(const fs::path& dir, int view) {
  return dir / ("disp_" + std::to_string(view) + ".pfm");
}
fs::path confidence_path(const fs::path& dir, int view) {
  return dir / ("conf_" + std::to_string(view) + ".pfm");
}

LightField load_lightfield(const fs::path& dir, int radius) {
  if (radius < 0) throw Error(ErrorCode::kInvalidArgument, "radius must be >= 0");
  std::vector<View> views;
  for (int v = -radius; v <= radius; ++v) {
    const fs::path p = view_path(dir, v);
    if (!fs::is_regular_file(p)) {
      throw Error(ErrorCode::kMissingView, "view " + std::to_string(v) + " (" + p.string() + ")");
    }
    views.push_back(View{v, load_image(p)});
  }
  return LightField(radius, std::move(views));
}

int detect_radius(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kMissingFile, dir.string());
  static const std::regex pattern(R"(view_(-?\d+)\.png)");
  int radius = -1;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) {
      radius = std::max(radius, std::abs(std::stoi(m[1].str())));
    }
  }
  return radius;
}

Dataset load_dataset(const fs::path& dir, int radius) {
  LightField lf = load_lightfield(dir, radius);
  std::vector<DisparityMap> disparities;
  std::vector<ConfidenceMap> confidences;
  for (int v = -radius; v <= radius; ++v) {
    DisparityMap d = load_disparity(disparity_path(dir, v));
    if (d.width() != lf.width() || d.height() != lf.height()) {
      throw Error(ErrorCode::kDimensionMismatch, "disparity for view " + std::to_string(v));
    }
    disparities.push_back(std::move(d));
    const fs::path cp = confidence_path(dir, v);
    ConfidenceMap c = fs::exists(cp) ? load_confidence(cp)
                                     : ConfidenceMap(lf.width(), lf.height(), 1.0);
    if (c.width() != lf.width() || c.height() != lf.height()) {
      throw Error(ErrorCode::kDimensionMismatch, "confidence for view " + std::to_string(v));
    }
    confidences.push_back(std::move(c));
  }
  return Dataset{std::move(lf), std::move(disparities), std::move(confidences)};
}

void write_dataset(const Dataset& dataset, const fs::path& dir, int bit_depth) {
  fs::create_directories(dir);
  for (const auto& view : dataset.lightfield.views()) {
    save_image(view.image, view_path(dir, view.index), bit_depth);
    write_disparity(dataset.disparity(view.index), disparity_path(dir, view.index));
    write_disparity(dataset.confidence(view.index), confidence_path(dir, view.index));
  }
}

}  // namespace slsc
