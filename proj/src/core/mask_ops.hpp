#pragma once

#include <memory>

#include "core/flow_transform.hpp"
#include "core/types.hpp"

namespace vf {

/// Foreground exactly where the transformed flow is valid.
BinaryMask transformed_mask(const TransformedFlow& tflow);

/// M_R = m_tgt AND NOT m_tran.
BinaryMask residual_mask(const BinaryMask& m_tgt, const BinaryMask& m_tran);

/// M_final = m_pred OR m_tran.
BinaryMask compose_final_mask(const BinaryMask& m_pred, const BinaryMask& m_tran);

/// Dilation followed by erosion with a disc structuring element. Computed on
/// a canvas padded by the radius, which matches the unbounded-plane closing:
/// the result is extensive and idempotent, and never spills outside the
/// image rectangle.
BinaryMask morphological_close(const BinaryMask& m, int radius);

/// Deterministic stand-in for a learned residual-mask predictor: proposes
/// only the small gaps a morphological close of the transformed mask would
/// fill, i.e. close(m_tran, r) AND NOT m_tran.
BinaryMask standin_predict_residual(const BinaryMask& m_tran, int close_radius);

/// Nearest-neighbor rescale; scale must yield integer output dimensions.
BinaryMask scale_mask_nearest(const BinaryMask& m, double scale);

/// Residual-mask predictor slot, signature-compatible with a trained model.
class MaskPredictor {
 public:
  virtual ~MaskPredictor() = default;
  virtual BinaryMask predict_residual(const BinaryMask& m_tran) const = 0;
};

class ClosingMaskPredictor final : public MaskPredictor {
 public:
  explicit ClosingMaskPredictor(int close_radius) : radius_(close_radius) {}
  BinaryMask predict_residual(const BinaryMask& m_tran) const override {
    return standin_predict_residual(m_tran, radius_);
  }

 private:
  int radius_;
};

/// Predicts an empty residual; the final mask reduces to the transformed mask.
class NullMaskPredictor final : public MaskPredictor {
 public:
  BinaryMask predict_residual(const BinaryMask& m_tran) const override {
    return BinaryMask(m_tran.width(), m_tran.height(), false);
  }
};

}  // namespace vf
