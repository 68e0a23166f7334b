#include "core/flow_transform.hpp"

#include <algorithm>
#include <cmath>

namespace vf {

TransformedFlow forward_to_backward(const FlowField& fwd, const DepthImage& target_depth,
                                    int target_width, int target_height) {
  if (fwd.direction() != FlowDirection::forward)
    fail(Errc::invalid_argument, "forward_to_backward: input flow must be forward");
  require_same_size(fwd.width(), fwd.height(), target_depth.width(), target_depth.height(),
                    "forward_to_backward: flow vs target depth");
  if (target_width <= 0 || target_height <= 0)
    fail(Errc::invalid_argument, "forward_to_backward: target size must be positive");

  const double inf = std::numeric_limits<double>::infinity();
  TransformedFlow out;
  out.flow = FlowField(target_width, target_height, FlowDirection::backward);
  out.depth.assign(static_cast<std::size_t>(target_width) * target_height, inf);
  out.source_index.assign(static_cast<std::size_t>(target_width) * target_height, -1);

  const int sw = fwd.width(), sh = fwd.height();
  for (int y = 0; y < sh; ++y) {
    for (int x = 0; x < sw; ++x) {
      if (!fwd.valid_at(x, y)) continue;
      const double tx = x + static_cast<double>(fwd.u_at(x, y));
      const double ty = y + static_cast<double>(fwd.v_at(x, y));
      const double z = target_depth.at(x, y);
      const std::int64_t src = static_cast<std::int64_t>(y) * sw + x;

      const int ax[2] = {static_cast<int>(std::floor(tx)), static_cast<int>(std::ceil(tx))};
      const int ay[2] = {static_cast<int>(std::floor(ty)), static_cast<int>(std::ceil(ty))};
      for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 2; ++i) {
          // floor == ceil at integer positions; skip the duplicate corner.
          if (i == 1 && ax[1] == ax[0]) continue;
          if (j == 1 && ay[1] == ay[0]) continue;
          const int a = ax[i], b = ay[j];
          if (a < 0 || a >= target_width || b < 0 || b >= target_height) {
            ++out.dropped_splats;
            continue;
          }
          const std::size_t ti = static_cast<std::size_t>(b) * target_width + a;
          const double cur = out.depth[ti];
          if (z < cur || (z == cur && src < out.source_index[ti])) {
            out.depth[ti] = z;
            out.source_index[ti] = src;
            out.flow.set(a, b, static_cast<float>(x - a), static_cast<float>(y - b));
          }
        }
      }
    }
  }
  return out;
}

FlowField NullRefiner::complete(const TransformedFlow& tflow, const BinaryMask& region) const {
  require_same_size(tflow.width(), tflow.height(), region.width(), region.height(),
                    "complete: transformed flow vs target mask");
  return tflow.flow;
}

FlowField complete_backward_flow(const TransformedFlow& tflow, const BinaryMask& region,
                                 const DiffusionParams& params) {
  require_same_size(tflow.width(), tflow.height(), region.width(), region.height(),
                    "complete_backward_flow: transformed flow vs target mask");

  const int w = tflow.width(), h = tflow.height();
  FlowField out = tflow.flow;

  std::vector<std::size_t> holes;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (region.get(x, y) && !tflow.valid_at(x, y)) holes.push_back(static_cast<std::size_t>(y) * w + x);
  if (holes.empty()) return out;
  if (out.valid_count() == 0)
    fail(Errc::cannot_complete, "complete_backward_flow: target mask has foreground but no valid seed pixels");

  // Jacobi sweeps over the hole set in double precision; `set` marks holes
  // that already carry a value.
  std::vector<double> cu(static_cast<std::size_t>(w) * h, 0.0), cv(cu), nu(cu), nv(cu);
  std::vector<std::uint8_t> set(cu.size(), 0), nset(cu.size(), 0);
  for (std::size_t i = 0; i < cu.size(); ++i) {
    if (out.valid()[i]) {
      cu[i] = out.u()[i];
      cv[i] = out.v()[i];
      set[i] = 1;
    }
  }

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    double max_change = 0.0;
    bool grew = false;
    std::copy(set.begin(), set.end(), nset.begin());
    for (const std::size_t idx : holes) {
      const int x = static_cast<int>(idx % w), y = static_cast<int>(idx / w);
      double su = 0, sv = 0;
      int n = 0;
      const auto tap = [&](int xx, int yy) {
        const std::size_t j = static_cast<std::size_t>(yy) * w + xx;
        if (set[j]) {
          su += cu[j];
          sv += cv[j];
          ++n;
        }
      };
      if (x > 0) tap(x - 1, y);
      if (x + 1 < w) tap(x + 1, y);
      if (y > 0) tap(x, y - 1);
      if (y + 1 < h) tap(x, y + 1);
      if (n == 0) continue;
      const double au = su / n, av = sv / n;
      if (set[idx]) {
        max_change = std::max({max_change, std::abs(au - cu[idx]), std::abs(av - cv[idx])});
      } else {
        grew = true;
        nset[idx] = 1;
      }
      nu[idx] = au;
      nv[idx] = av;
    }
    for (const std::size_t idx : holes) {
      if (nset[idx]) {
        cu[idx] = nu[idx];
        cv[idx] = nv[idx];
      }
    }
    set.swap(nset);
    if (!grew && max_change < params.tolerance) break;
  }

  for (const std::size_t idx : holes) {
    if (set[idx]) {
      out.u()[idx] = static_cast<float>(cu[idx]);
      out.v()[idx] = static_cast<float>(cv[idx]);
      out.valid()[idx] = 1;
    }
  }
  return out;
}

}  // namespace vf
