#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "core/types.hpp"

namespace vf {

/// Backward flow obtained by splatting a forward flow into the target grid.
/// A target pixel is valid iff some source pixel claimed it; the depth buffer
/// holds the winning target-view depth (infinity where unclaimed).
struct TransformedFlow {
  FlowField flow;             // backward, registered to the target image
  std::vector<double> depth;  // winning target-view depth per pixel
  std::vector<std::int64_t> source_index;  // row-major source index of the winner, -1 if none
  int dropped_splats = 0;     // candidates that fell outside the target image

  int width() const { return flow.width(); }
  int height() const { return flow.height(); }
  bool valid_at(int x, int y) const { return flow.valid_at(x, y); }
};

/// Splat every valid source pixel onto the four integer target pixels of the
/// unit cell containing its continuous target position (floor/ceil in each
/// axis), keeping per target pixel the candidate with minimal target-view
/// depth; depth ties go to the smaller source row-major index.
TransformedFlow forward_to_backward(const FlowField& fwd, const DepthImage& target_depth,
                                    int target_width, int target_height);

struct DiffusionParams {
  double tolerance = 1e-4;  // px, max change per sweep
  int max_iterations = 1000;
};

/// Fill hole pixels inside `region` by repeated averaging of valid
/// 4-neighbors (Jacobi sweeps) until the largest change drops below the
/// tolerance. Valid input pixels are never modified; hole pixels with no
/// 4-connected path to a seed stay invalid.
FlowField complete_backward_flow(const TransformedFlow& tflow, const BinaryMask& region,
                                 const DiffusionParams& params = {});

/// Completion strategy slot. Implementations fill missing flow inside the
/// region; they never overwrite pixels that are valid in the input, so a
/// trained model can be dropped in behind the same contract.
class FlowRefiner {
 public:
  virtual ~FlowRefiner() = default;
  virtual FlowField complete(const TransformedFlow& tflow, const BinaryMask& region) const = 0;
};

class DiffusionRefiner final : public FlowRefiner {
 public:
  explicit DiffusionRefiner(DiffusionParams params = {}) : params_(params) {}
  FlowField complete(const TransformedFlow& tflow, const BinaryMask& region) const override {
    return complete_backward_flow(tflow, region, params_);
  }

 private:
  DiffusionParams params_;
};

/// Leaves holes untouched; the output is the splatted flow as-is.
class NullRefiner final : public FlowRefiner {
 public:
  FlowField complete(const TransformedFlow& tflow, const BinaryMask& region) const override;
};

}  // namespace vf
