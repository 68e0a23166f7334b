#include "core/mask_ops.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace vf {

BinaryMask transformed_mask(const TransformedFlow& tflow) {
  const int w = tflow.width(), h = tflow.height();
  BinaryMask m(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) m.set(x, y, tflow.valid_at(x, y));
  return m;
}

BinaryMask residual_mask(const BinaryMask& m_tgt, const BinaryMask& m_tran) {
  require_same_size(m_tgt.width(), m_tgt.height(), m_tran.width(), m_tran.height(), "residual_mask");
  BinaryMask out(m_tgt.width(), m_tgt.height());
  for (std::size_t i = 0; i < out.pixel_count(); ++i)
    out.data()[i] = (m_tgt.data()[i] && !m_tran.data()[i]) ? 1 : 0;
  return out;
}

BinaryMask compose_final_mask(const BinaryMask& m_pred, const BinaryMask& m_tran) {
  require_same_size(m_pred.width(), m_pred.height(), m_tran.width(), m_tran.height(), "compose_final_mask");
  BinaryMask out(m_pred.width(), m_pred.height());
  for (std::size_t i = 0; i < out.pixel_count(); ++i)
    out.data()[i] = (m_pred.data()[i] || m_tran.data()[i]) ? 1 : 0;
  return out;
}

namespace {

std::vector<std::pair<int, int>> disc_offsets(int radius) {
  std::vector<std::pair<int, int>> off;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius) off.emplace_back(dx, dy);
  return off;
}

}  // namespace

BinaryMask morphological_close(const BinaryMask& m, int radius) {
  if (radius < 0) fail(Errc::invalid_argument, "morphological_close: radius must be >= 0");
  if (radius == 0) return m;

  const int w = m.width(), h = m.height();
  const int pw = w + 2 * radius, ph = h + 2 * radius;
  const auto off = disc_offsets(radius);

  BinaryMask dilated(pw, ph);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!m.get(x, y)) continue;
      for (const auto& [dx, dy] : off) dilated.set(x + radius + dx, y + radius + dy, true);
    }
  }

  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool all = true;
      for (const auto& [dx, dy] : off) {
        const int px = x + radius + dx, py = y + radius + dy;
        if (!dilated.get(px, py)) {
          all = false;
          break;
        }
      }
      out.set(x, y, all);
    }
  }
  return out;
}

BinaryMask standin_predict_residual(const BinaryMask& m_tran, int close_radius) {
  return residual_mask(morphological_close(m_tran, close_radius), m_tran);
}

BinaryMask scale_mask_nearest(const BinaryMask& m, double scale) {
  if (!(scale > 0)) fail(Errc::invalid_argument, "scale_mask_nearest: scale must be positive");
  const double ow = m.width() * scale, oh = m.height() * scale;
  const int w = static_cast<int>(std::lround(ow)), h = static_cast<int>(std::lround(oh));
  if (std::abs(ow - w) > 1e-9 || std::abs(oh - h) > 1e-9)
    fail(Errc::invalid_argument, "scale_mask_nearest: scale must yield integer dimensions");
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y) {
    const int sy = std::clamp(static_cast<int>(std::lround(y / scale)), 0, m.height() - 1);
    for (int x = 0; x < w; ++x) {
      const int sx = std::clamp(static_cast<int>(std::lround(x / scale)), 0, m.width() - 1);
      out.set(x, y, m.get(sx, sy));
    }
  }
  return out;
}

}  // namespace vf
