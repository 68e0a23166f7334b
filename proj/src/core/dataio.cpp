#include "core/dataio.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace vf {

namespace {

constexpr float kFloMagic = 202021.25f;
constexpr float kFloSentinel = 1e9f;
constexpr float kFloInvalidThreshold = 1e8f;
constexpr int kMaxDim = 32768;

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) fail(Errc::io, "cannot open '" + path + "'");
  return f;
}

[[noreturn]] void format_fail(const std::string& path, long offset, const std::string& what) {
  fail(Errc::format, path + ": " + what + " at byte offset " + std::to_string(offset));
}

}  // namespace

void write_flow(const std::string& path, const FlowField& f) {
  FilePtr fp = open_file(path, "wb");
  const std::int32_t w = f.width(), h = f.height();
  std::fwrite(&kFloMagic, sizeof(float), 1, fp.get());
  std::fwrite(&w, sizeof(std::int32_t), 1, fp.get());
  std::fwrite(&h, sizeof(std::int32_t), 1, fp.get());
  std::vector<float> row(static_cast<std::size_t>(w) * 2);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool valid = f.valid_at(x, y);
      row[2 * x] = valid ? f.u_at(x, y) : kFloSentinel;
      row[2 * x + 1] = valid ? f.v_at(x, y) : kFloSentinel;
    }
    if (std::fwrite(row.data(), sizeof(float), row.size(), fp.get()) != row.size())
      fail(Errc::io, "short write to '" + path + "'");
  }
}

FlowField read_flow(const std::string& path, FlowDirection direction) {
  FilePtr fp = open_file(path, "rb");
  float magic = 0.f;
  if (std::fread(&magic, sizeof(float), 1, fp.get()) != 1) format_fail(path, 0, "truncated header");
  if (magic != kFloMagic) format_fail(path, 0, "bad magic (expected 202021.25 / \"PIEH\")");
  std::int32_t w = 0, h = 0;
  if (std::fread(&w, sizeof(std::int32_t), 1, fp.get()) != 1) format_fail(path, 4, "truncated header");
  if (std::fread(&h, sizeof(std::int32_t), 1, fp.get()) != 1) format_fail(path, 8, "truncated header");
  if (w <= 0 || h <= 0 || w > kMaxDim || h > kMaxDim) format_fail(path, 4, "unreasonable dimensions");

  FlowField f(w, h, direction);
  std::vector<float> row(static_cast<std::size_t>(w) * 2);
  for (int y = 0; y < h; ++y) {
    const std::size_t got = std::fread(row.data(), sizeof(float), row.size(), fp.get());
    if (got != row.size())
      format_fail(path, 12 + (static_cast<long>(y) * w * 2 + static_cast<long>(got)) * 4,
                  "truncated payload");
    for (int x = 0; x < w; ++x) {
      const float u = row[2 * x], v = row[2 * x + 1];
      if (std::abs(u) > kFloInvalidThreshold || std::abs(v) > kFloInvalidThreshold)
        f.set(x, y, 0.f, 0.f, false);
      else
        f.set(x, y, u, v, true);
    }
  }
  return f;
}

namespace {

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  const char* path = static_cast<const char*>(png_get_error_ptr(png));
  fail(Errc::format, std::string(path ? path : "png") + ": " + (msg ? msg : "libpng error"));
}

void png_warning_fn(png_structp, png_const_charp) {}

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

void write_png(const std::string& path, int width, int height, int bit_depth, int color_type,
               const std::vector<png_bytep>& rows) {
  FilePtr fp = open_file(path, "wb");
  PngWriter ctx;
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, const_cast<char*>(path.c_str()),
                                    png_error_fn, png_warning_fn);
  if (!ctx.png) fail(Errc::io, "png_create_write_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) fail(Errc::io, "png_create_info_struct failed");
  png_init_io(ctx.png, fp.get());
  png_set_IHDR(ctx.png, ctx.info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  if (bit_depth == 16) png_set_swap(ctx.png);  // rows are little-endian uint16
  png_write_image(ctx.png, const_cast<png_bytepp>(rows.data()));
  png_write_end(ctx.png, nullptr);
}

struct PngImage {
  int width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  std::vector<std::uint8_t> bytes;  // tightly packed rows
  std::size_t stride = 0;
};

PngImage read_png(const std::string& path, int want_color_type, int want_bit_depth) {
  FilePtr fp = open_file(path, "rb");
  PngReader ctx;
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, const_cast<char*>(path.c_str()),
                                   png_error_fn, png_warning_fn);
  if (!ctx.png) fail(Errc::io, "png_create_read_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) fail(Errc::io, "png_create_info_struct failed");
  png_init_io(ctx.png, fp.get());
  png_read_info(ctx.png, ctx.info);

  PngImage img;
  img.width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
  img.height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
  img.bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  img.color_type = png_get_color_type(ctx.png, ctx.info);
  if (img.color_type != want_color_type || img.bit_depth != want_bit_depth)
    fail(Errc::validation, path + ": expected " + (want_color_type == PNG_COLOR_TYPE_RGB ? "8-bit RGB" : want_bit_depth == 16 ? "16-bit grayscale" : "8-bit grayscale") + " PNG");
  if (img.width <= 0 || img.height <= 0 || img.width > kMaxDim || img.height > kMaxDim)
    fail(Errc::format, path + ": unreasonable dimensions");
  if (img.bit_depth == 16) png_set_swap(ctx.png);

  img.stride = png_get_rowbytes(ctx.png, ctx.info);
  img.bytes.resize(img.stride * img.height);
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) rows[y] = img.bytes.data() + img.stride * y;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);
  return img;
}

}  // namespace

void write_depth(const std::string& path, const DepthImage& d, double scale) {
  if (!(scale > 0)) fail(Errc::invalid_argument, "write_depth: scale must be positive");
  const int w = d.width(), h = d.height();
  std::vector<std::uint16_t> buf(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const double q = std::round(d.data()[i] / scale);
    if (q < 0 || q > 65535.0) fail(Errc::invalid_argument, "write_depth: depth out of 16-bit range at this scale");
    buf[i] = static_cast<std::uint16_t>(q);
  }
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = reinterpret_cast<png_bytep>(buf.data() + static_cast<std::size_t>(y) * w);
  write_png(path, w, h, 16, PNG_COLOR_TYPE_GRAY, rows);

  nlohmann::json meta{{"depth_scale", scale}};
  std::ofstream ms(path + ".meta");
  if (!ms) fail(Errc::io, "cannot write '" + path + ".meta'");
  ms << meta.dump(2) << "\n";
}

DepthImage read_depth(const std::string& path) {
  std::ifstream ms(path + ".meta");
  if (!ms) fail(Errc::io, "missing depth sidecar '" + path + ".meta'");
  nlohmann::json meta;
  try {
    ms >> meta;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::format, path + ".meta: " + e.what());
  }
  if (!meta.contains("depth_scale") || !meta["depth_scale"].is_number())
    fail(Errc::format, path + ".meta: missing depth_scale");
  return read_depth(path, meta["depth_scale"].get<double>());
}

DepthImage read_depth(const std::string& path, double scale) {
  if (!(scale > 0)) fail(Errc::invalid_argument, "read_depth: scale must be positive");
  const PngImage png = read_png(path, PNG_COLOR_TYPE_GRAY, 16);
  DepthImage d(png.width, png.height);
  for (int y = 0; y < png.height; ++y) {
    const std::uint16_t* row = reinterpret_cast<const std::uint16_t*>(png.bytes.data() + png.stride * y);
    for (int x = 0; x < png.width; ++x) d.at(x, y) = row[x] * scale;
  }
  return d;
}

void write_camera(const std::string& path, const CameraIntrinsics& k, const RigidTransform& pose) {
  k.validate();
  pose.validate();
  std::ofstream os(path);
  if (!os) fail(Errc::io, "cannot write '" + path + "'");
  char buf[512];
  std::snprintf(buf, sizeof(buf), "fx %.17g\nfy %.17g\ncx %.17g\ncy %.17g\nwidth %d\nheight %d\n",
                k.fx, k.fy, k.cx, k.cy, k.width, k.height);
  os << buf;
  os << "extrinsic";
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      std::snprintf(buf, sizeof(buf), " %.17g", pose.rotation(r, c));
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), " %.17g", pose.translation(r));
    os << buf;
  }
  os << "\n";
}

void read_camera(const std::string& path, CameraIntrinsics& k, RigidTransform& pose) {
  std::ifstream is(path);
  if (!is) fail(Errc::io, "cannot open '" + path + "'");
  CameraIntrinsics kk;
  RigidTransform pp;
  bool have_extrinsic = false;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    const auto want = [&](auto& dst) {
      if (!(ls >> dst)) fail(Errc::format, path + ":" + std::to_string(lineno) + ": malformed value for " + key);
    };
    if (key == "fx") want(kk.fx);
    else if (key == "fy") want(kk.fy);
    else if (key == "cx") want(kk.cx);
    else if (key == "cy") want(kk.cy);
    else if (key == "width") want(kk.width);
    else if (key == "height") want(kk.height);
    else if (key == "extrinsic") {
      double m[12];
      for (double& v : m) {
        if (!(ls >> v)) fail(Errc::format, path + ":" + std::to_string(lineno) + ": extrinsic needs 12 values");
      }
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) pp.rotation(r, c) = m[r * 4 + c];
        pp.translation(r) = m[r * 4 + 3];
      }
      have_extrinsic = true;
    } else {
      fail(Errc::format, path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_extrinsic) fail(Errc::format, path + ": missing extrinsic");
  kk.validate();
  pp.validate();
  k = kk;
  pose = pp;
}

void write_mask(const std::string& path, const BinaryMask& m) {
  const int w = m.width(), h = m.height();
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = m.data()[i] ? 255 : 0;
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<std::size_t>(y) * w;
  write_png(path, w, h, 8, PNG_COLOR_TYPE_GRAY, rows);
}

BinaryMask read_mask(const std::string& path) {
  const PngImage png = read_png(path, PNG_COLOR_TYPE_GRAY, 8);
  BinaryMask m(png.width, png.height);
  for (int y = 0; y < png.height; ++y) {
    const std::uint8_t* row = png.bytes.data() + png.stride * y;
    for (int x = 0; x < png.width; ++x) {
      if (row[x] != 0 && row[x] != 255)
        fail(Errc::validation, path + ": mask value " + std::to_string(row[x]) + " is not 0 or 255");
      m.set(x, y, row[x] == 255);
    }
  }
  return m;
}

void write_rgb(const std::string& path, const ImageRGB& img) {
  const int w = img.width(), h = img.height();
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const float v = std::round(img.data()[i]);
    buf[i] = static_cast<std::uint8_t>(v < 0.f ? 0.f : (v > 255.f ? 255.f : v));
  }
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<std::size_t>(y) * w * 3;
  write_png(path, w, h, 8, PNG_COLOR_TYPE_RGB, rows);
}

ImageRGB read_rgb(const std::string& path) {
  const PngImage png = read_png(path, PNG_COLOR_TYPE_RGB, 8);
  ImageRGB img(png.width, png.height);
  for (int y = 0; y < png.height; ++y) {
    const std::uint8_t* row = png.bytes.data() + png.stride * y;
    for (int x = 0; x < png.width; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<float>(row[3 * x + c]);
  }
  return img;
}

}  // namespace vf
