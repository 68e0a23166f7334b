#include "core/types.hpp"

#include <algorithm>
#include <numeric>

namespace vf {

void fail(Errc code, const std::string& what) { throw Error(code, what); }

static void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) fail(Errc::invalid_argument, "image dimensions must be positive");
}

ImageRGB::ImageRGB(int width, int height, float fill)
    : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height * 3, fill) {
  check_dims(width, height);
}

DepthImage::DepthImage(int width, int height, double fill)
    : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height, fill) {
  check_dims(width, height);
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {
  check_dims(width, height);
}

std::size_t BinaryMask::count() const {
  return std::count_if(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
}

FlowField::FlowField(int width, int height, FlowDirection direction)
    : width_(width),
      height_(height),
      direction_(direction),
      u_(static_cast<std::size_t>(width) * height, 0.f),
      v_(static_cast<std::size_t>(width) * height, 0.f),
      valid_(static_cast<std::size_t>(width) * height, 0) {
  check_dims(width, height);
}

void FlowField::set(int x, int y, float u, float v, bool valid) {
  const std::size_t i = static_cast<std::size_t>(y) * width_ + x;
  u_[i] = u;
  v_[i] = v;
  valid_[i] = valid ? 1 : 0;
}

std::size_t FlowField::valid_count() const {
  return std::count_if(valid_.begin(), valid_.end(), [](std::uint8_t b) { return b != 0; });
}

void require_same_size(int wa, int ha, int wb, int hb, const char* what) {
  if (wa != wb || ha != hb) {
    fail(Errc::dimension_mismatch, std::string(what) + ": got " + std::to_string(wa) + "x" +
                                       std::to_string(ha) + " vs " + std::to_string(wb) + "x" +
                                       std::to_string(hb));
  }
}

}  // namespace vf
