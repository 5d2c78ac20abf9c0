#include "slsc/features.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

namespace slsc {
namespace {

constexpr std::array<char, 4> kMagic{'L', 'F', 'T', '1'};
constexpr std::uint32_t kMaxDims = 8;

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<unsigned char, 4> b{static_cast<unsigned char>(v & 0xff),
                                       static_cast<unsigned char>((v >> 8) & 0xff),
                                       static_cast<unsigned char>((v >> 16) & 0xff),
                                       static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b.data()), 4);
}

bool get_u32(std::istream& in, std::uint32_t& v) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) return false;
  v = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
      (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  return true;
}

double gap_zero(const Rendering& r, int x, int y, int c) {
  if (r.mask(x, y) == 0) return 0.0;
  return r.image.at(x, y, r.image.channels() == 1 ? 0 : c);
}

}  // namespace

std::size_t Tensor::element_count() const {
  std::size_t n = dims.empty() ? 0 : 1;
  for (auto d : dims) n *= d;
  return n;
}

void write_tensor(const Tensor& tensor, const std::filesystem::path& path) {
  if (tensor.element_count() != tensor.data.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "tensor dims do not match payload");
  }
  for (float v : tensor.data) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValues, path.string());
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kMissingFile, "cannot write " + path.string());
  out.write(kMagic.data(), 4);
  put_u32(out, static_cast<std::uint32_t>(tensor.dims.size()));
  for (auto d : tensor.dims) put_u32(out, d);
  for (float v : tensor.data) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
  }
}

Tensor read_tensor(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw Error(ErrorCode::kMissingFile, path.string());
  std::ifstream in(path, std::ios::binary);
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || magic != kMagic) {
    throw Error(ErrorCode::kCorruptHeader, path.string() + ": bad magic");
  }
  std::uint32_t ndim = 0;
  if (!get_u32(in, ndim) || ndim == 0 || ndim > kMaxDims) {
    throw Error(ErrorCode::kCorruptHeader, path.string() + ": bad rank");
  }
  Tensor t;
  t.dims.resize(ndim);
  for (auto& d : t.dims) {
    if (!get_u32(in, d)) throw Error(ErrorCode::kCorruptHeader, path.string() + ": truncated dims");
  }
  const auto header_end = in.tellg();
  in.seekg(0, std::ios::end);
  const auto payload = static_cast<std::uint64_t>(in.tellg() - header_end);
  in.seekg(header_end);
  std::uint64_t expected = 4;
  for (auto d : t.dims) expected *= d;
  if (payload != expected) {
    throw Error(ErrorCode::kCorruptHeader, path.string() + ": dims disagree with payload length");
  }
  t.data.resize(expected / 4);
  for (float& v : t.data) {
    std::uint32_t bits = 0;
    get_u32(in, bits);
    std::memcpy(&v, &bits, 4);
  }
  return t;
}

Tensor to_tensor(const Image& image) {
  Tensor t;
  t.dims = {static_cast<std::uint32_t>(image.height()), static_cast<std::uint32_t>(image.width()),
            static_cast<std::uint32_t>(image.channels())};
  t.data.reserve(image.values().size());
  for (double v : image.values()) t.data.push_back(static_cast<float>(v));
  return t;
}

Image from_tensor(const Tensor& tensor) {
  if (tensor.dims.size() != 3) throw Error(ErrorCode::kUnsupportedFormat, "expected H x W x C tensor");
  Image out(static_cast<int>(tensor.dims[1]), static_cast<int>(tensor.dims[0]),
            static_cast<int>(tensor.dims[2]));
  auto values = out.values();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = tensor.data[i];
  return out;
}

FeatureTensor assemble(const Rendering& vd, const Rendering& vsp1, const Rendering& vsp2,
                       const LabelMap& filled_labels) {
  const Image& ref = vd.image;
  for (const Rendering* r : {&vd, &vsp1, &vsp2}) {
    if (!r->image.same_size(ref) || !ref.same_size(r->mask)) {
      throw Error(ErrorCode::kDimensionMismatch, "assemble: rendering sizes differ");
    }
  }
  require_same_size(ref, filled_labels.labels, "assemble: label map size");
  const int layers = filled_labels.layer_count;
  if (layers < 1) throw Error(ErrorCode::kInvalidLayerCount, "assemble");
  for (int l : filled_labels.labels.values()) {
    if (l <= 0) throw Error(ErrorCode::kUnfilledLabels, "assemble needs a filled label map");
  }

  const int w = ref.width();
  const int h = ref.height();
  FeatureTensor out{Image(w, h, kFeatureChannels), Mask(w, h), Image(w, h, 3)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        const double base = gap_zero(vd, x, y, c);
        out.base.at(x, y, c) = base;
        out.channels.at(x, y, c) = gap_zero(vsp1, x, y, c) - base;
        out.channels.at(x, y, 3 + c) = gap_zero(vsp2, x, y, c) - base;
      }
      out.channels.at(x, y, 6) = static_cast<double>(filled_labels.labels(x, y)) / layers - 0.5;
      out.gap_mask(x, y) = vd.mask(x, y) == 0 && vsp1.mask(x, y) == 0 && vsp2.mask(x, y) == 0;
    }
  }
  return out;
}

Image crop(const Image& image, int x, int y, int w, int h) {
  if (x < 0 || y < 0 || x + w > image.width() || y + h > image.height()) {
    throw Error(ErrorCode::kPatchTooLarge, "crop window leaves the image");
  }
  Image out(w, h, image.channels());
  for (int yy = 0; yy < h; ++yy)
    for (int xx = 0; xx < w; ++xx)
      for (int c = 0; c < image.channels(); ++c) out.at(xx, yy, c) = image.at(x + xx, y + yy, c);
  return out;
}

std::vector<Patch> extract_patches(const FeatureTensor& features, const Image& ground_truth,
                                   int size, int stride) {
  if (size < 1 || stride < 1) throw Error(ErrorCode::kInvalidArgument, "patch size and stride must be >= 1");
  require_same_size(features.channels, ground_truth, "extract_patches: ground truth size");
  if (size > features.width() || size > features.height()) {
    throw Error(ErrorCode::kPatchTooLarge, "patch of " + std::to_string(size) + " exceeds " +
                                                std::to_string(features.width()) + "x" +
                                                std::to_string(features.height()));
  }
  std::vector<Patch> out;
  for (int y = 0; y + size <= features.height(); y += stride) {
    for (int x = 0; x + size <= features.width(); x += stride) {
      out.push_back(Patch{x, y, crop(features.channels, x, y, size, size),
                          crop(ground_truth, x, y, size, size), crop(features.base, x, y, size, size)});
    }
  }
  return out;
}

}  // namespace slsc
