#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vf {

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  behind_camera,
  cannot_complete,
  io,
  format,
  validation,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

/// RGB image, row-major interleaved, one float per channel in [0, 255].
/// Values stay floating point through the pipeline and are quantized only
/// when written to 8-bit PNG.
class ImageRGB {
 public:
  ImageRGB() = default;
  ImageRGB(int width, int height, float fill = 0.f);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }

  float& at(int x, int y, int c) { return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c]; }
  float at(int x, int y, int c) const { return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c]; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// Per-pixel depth in world units; 0 is the background sentinel.
class DepthImage {
 public:
  DepthImage() = default;
  DepthImage(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Binary foreground mask, 1 = foreground.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  std::uint8_t* data() { return bits_.data(); }
  const std::uint8_t* data() const { return bits_.data(); }

  void set(int x, int y, bool v) { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }
  bool get(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }

  std::size_t count() const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

enum class FlowDirection { forward, backward };

/// Two-channel pixel displacement field with a per-pixel validity mask.
/// Displacements are stored as float32, the interchange precision; the
/// direction tag is fixed at construction.
class FlowField {
 public:
  FlowField() = default;
  FlowField(int width, int height, FlowDirection direction);

  int width() const { return width_; }
  int height() const { return height_; }
  FlowDirection direction() const { return direction_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  float* u() { return u_.data(); }
  const float* u() const { return u_.data(); }
  float* v() { return v_.data(); }
  const float* v() const { return v_.data(); }
  std::uint8_t* valid() { return valid_.data(); }
  const std::uint8_t* valid() const { return valid_.data(); }

  float u_at(int x, int y) const { return u_[static_cast<std::size_t>(y) * width_ + x]; }
  float v_at(int x, int y) const { return v_[static_cast<std::size_t>(y) * width_ + x]; }
  bool valid_at(int x, int y) const { return valid_[static_cast<std::size_t>(y) * width_ + x] != 0; }

  void set(int x, int y, float u, float v, bool valid = true);
  std::size_t valid_count() const;

 private:
  int width_ = 0;
  int height_ = 0;
  FlowDirection direction_ = FlowDirection::forward;
  std::vector<float> u_, v_;
  std::vector<std::uint8_t> valid_;
};

void require_same_size(int wa, int ha, int wb, int hb, const char* what);

}  // namespace vf
