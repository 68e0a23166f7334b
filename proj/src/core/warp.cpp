#include "core/warp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace vf {

namespace {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

double sample_bilinear(const ImageRGB& img, double x, double y, int c) {
  const int x0 = clampi(static_cast<int>(std::floor(x)), 0, img.width() - 1);
  const int y0 = clampi(static_cast<int>(std::floor(y)), 0, img.height() - 1);
  const int x1 = clampi(x0 + 1, 0, img.width() - 1);
  const int y1 = clampi(y0 + 1, 0, img.height() - 1);
  const double fx = std::clamp(x - x0, 0.0, 1.0);
  const double fy = std::clamp(y - y0, 0.0, 1.0);
  const double top = (1.0 - fx) * img.at(x0, y0, c) + fx * img.at(x1, y0, c);
  const double bot = (1.0 - fx) * img.at(x0, y1, c) + fx * img.at(x1, y1, c);
  return (1.0 - fy) * top + fy * bot;
}

// Catmull-Rom weights, a = -0.5.
inline double cubic_weight(double t) {
  const double a = -0.5;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

template <typename Fetch>
double sample_bicubic(Fetch&& fetch, int w, int h, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  double acc = 0.0, wsum = 0.0;
  for (int j = -1; j <= 2; ++j) {
    const double wy = cubic_weight(y - (y0 + j));
    const int yy = clampi(y0 + j, 0, h - 1);
    for (int i = -1; i <= 2; ++i) {
      const double wx = cubic_weight(x - (x0 + i));
      const int xx = clampi(x0 + i, 0, w - 1);
      acc += wx * wy * fetch(xx, yy);
      wsum += wx * wy;
    }
  }
  return acc / wsum;
}

}  // namespace

ImageRGB warp_image(const ImageRGB& src, const FlowField& bwd, const BinaryMask& out_mask,
                    SamplingKernel kernel) {
  if (bwd.direction() != FlowDirection::backward)
    fail(Errc::invalid_argument, "warp_image: flow must be backward");
  require_same_size(bwd.width(), bwd.height(), out_mask.width(), out_mask.height(),
                    "warp_image: flow vs output mask");

  ImageRGB out(out_mask.width(), out_mask.height(), 0.f);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (!out_mask.get(x, y) || !bwd.valid_at(x, y)) continue;
      const double sx = x + static_cast<double>(bwd.u_at(x, y));
      const double sy = y + static_cast<double>(bwd.v_at(x, y));
      for (int c = 0; c < 3; ++c) {
        double v;
        if (kernel == SamplingKernel::bilinear) {
          v = sample_bilinear(src, sx, sy, c);
        } else {
          v = sample_bicubic([&](int xx, int yy) { return static_cast<double>(src.at(xx, yy, c)); },
                             src.width(), src.height(), sx, sy);
        }
        out.at(x, y, c) = static_cast<float>(v);
      }
    }
  }
  return out;
}

namespace {

// Copies each invalid pixel's channels from its nearest valid pixel
// (multi-source BFS, deterministic order) so bicubic taps near the validity
// boundary read plausible values instead of zeros.
void extend_into_invalid(FlowField& f) {
  const int w = f.width(), h = f.height();
  std::deque<std::size_t> queue;
  std::vector<std::uint8_t> known(f.pixel_count(), 0);
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    if (f.valid()[i]) {
      known[i] = 1;
      queue.push_back(i);
    }
  }
  if (queue.empty() || queue.size() == f.pixel_count()) return;
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    const auto visit = [&](int xx, int yy) {
      const std::size_t j = static_cast<std::size_t>(yy) * w + xx;
      if (known[j]) return;
      known[j] = 1;
      f.u()[j] = f.u()[i];
      f.v()[j] = f.v()[i];
      queue.push_back(j);
    };
    if (x > 0) visit(x - 1, y);
    if (x + 1 < w) visit(x + 1, y);
    if (y > 0) visit(x, y - 1);
    if (y + 1 < h) visit(x, y + 1);
  }
}

}  // namespace

FlowField upsample_flow(const FlowField& bwd, double scale) {
  if (bwd.direction() != FlowDirection::backward)
    fail(Errc::invalid_argument, "upsample_flow: flow must be backward");
  if (!(scale > 0)) fail(Errc::invalid_argument, "upsample_flow: scale must be positive");
  const double ow = bwd.width() * scale, oh = bwd.height() * scale;
  const int w = static_cast<int>(std::lround(ow)), h = static_cast<int>(std::lround(oh));
  if (std::abs(ow - w) > 1e-9 || std::abs(oh - h) > 1e-9)
    fail(Errc::invalid_argument, "upsample_flow: scale must yield integer dimensions");

  FlowField padded = bwd;
  extend_into_invalid(padded);

  FlowField out(w, h, FlowDirection::backward);
  const int sw = bwd.width(), sh = bwd.height();
  for (int y = 0; y < h; ++y) {
    const double syc = y / scale;
    const int ny = clampi(static_cast<int>(std::lround(syc)), 0, sh - 1);
    for (int x = 0; x < w; ++x) {
      const double sxc = x / scale;
      const int nx = clampi(static_cast<int>(std::lround(sxc)), 0, sw - 1);
      if (!bwd.valid_at(nx, ny)) continue;
      const double u = sample_bicubic([&](int xx, int yy) { return static_cast<double>(padded.u_at(xx, yy)); },
                                      sw, sh, sxc, syc);
      const double v = sample_bicubic([&](int xx, int yy) { return static_cast<double>(padded.v_at(xx, yy)); },
                                      sw, sh, sxc, syc);
      out.set(x, y, static_cast<float>(scale * u), static_cast<float>(scale * v));
    }
  }
  return out;
}

}  // namespace vf
