#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "core/types.hpp"

namespace vf {

struct LossWeights {
  double eta_y = 1e-6;  // image term
  double eta_f = 1.0;   // flow term
};

/// Mean squared per-channel difference over the region, in 8-bit intensity
/// units squared.
double image_mse(const ImageRGB& pred, const ImageRGB& gt, const BinaryMask& region);

/// Mean SSIM, 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03,
/// dynamic range 255, averaged over channels. Windows must fit entirely
/// inside the image, so inputs are at least 11x11.
double ssim(const ImageRGB& pred, const ImageRGB& gt);

/// Mean of (du^2 + dv^2) / 2 over pixels valid in gt, in px^2.
double flow_mse(const FlowField& pred, const FlowField& gt);

/// Mean endpoint error sqrt(du^2 + dv^2) over pixels valid in gt, in px.
double flow_epe(const FlowField& pred, const FlowField& gt);

/// Fraction of gt-valid pixels whose magnitude ratio max(|p|/|g|, |g|/|p|)
/// stays below delta; pixels where both magnitudes are below 1e-3 px count
/// as correct.
double delta_threshold(const FlowField& pred, const FlowField& gt, double delta = 1.25);

/// Zero-mean normalized cross-correlation over the concatenated (u, v)
/// samples of gt-valid pixels.
double ncc(const FlowField& pred, const FlowField& gt);

/// Mean per-pixel cosine similarity of the flow vectors (diagnostic
/// companion to ncc; skips pixels where either magnitude is below 1e-3 px).
double flow_cosine(const FlowField& pred, const FlowField& gt);

/// Intersection over union; 1 when both masks are empty.
double iou(const BinaryMask& pred, const BinaryMask& gt);

/// PSNR in dB over the region, dynamic range 255; infinity for identical
/// inputs.
double psnr(const ImageRGB& pred, const ImageRGB& gt, const BinaryMask& region);

/// Weighted sum of L1 image error over foreground pixels and L1 flow error
/// over gt-valid pixels (sums, not means).
double combined_loss(const ImageRGB& pred_img, const ImageRGB& gt_img, const BinaryMask& fg,
                     const FlowField& pred_flow, const FlowField& gt_flow,
                     const LossWeights& w = {});

/// One row of a quantitative comparison table; absent fields were not
/// evaluated (their inputs were not supplied).
struct EvalReport {
  std::optional<double> image_mse;
  std::optional<double> ssim;
  std::optional<double> image_psnr;
  std::optional<double> flow_mse;
  std::optional<double> flow_epe;
  std::optional<double> delta_1_25;
  std::optional<double> ncc;
  std::optional<double> flow_cos;
  std::optional<double> iou;
  std::uint64_t image_pixels = 0;  // pixels entering the image measures
  std::uint64_t flow_pixels = 0;   // gt-valid pixels entering the flow measures
  std::uint64_t mask_pixels = 0;   // pixels of the mask union

  std::string to_text() const;
  std::string to_json() const;
};

enum class MseRegion { full_frame, mask_union };

struct EvalOptions {
  MseRegion mse_region = MseRegion::full_frame;
  double delta = 1.25;
};

/// Evaluate whichever prediction/ground-truth pairs are supplied. Image
/// metrics need both images; flow metrics both flows; iou both masks. The
/// mask_union MSE region additionally needs both masks.
EvalReport evaluate(const ImageRGB* pred_img, const ImageRGB* gt_img, const FlowField* pred_flow,
                    const FlowField* gt_flow, const BinaryMask* pred_mask, const BinaryMask* gt_mask,
                    const EvalOptions& opts = {});

/// Arithmetic mean of per-report metric values (absent fields are skipped);
/// pixel counts are summed.
EvalReport aggregate_reports(const std::vector<EvalReport>& reports);

}  // namespace vf
