#pragma once

#include "core/types.hpp"

namespace vf {

enum class SamplingKernel { bilinear, bicubic };

/// Remap the source image through a backward flow: every foreground pixel of
/// `out_mask` with valid flow samples the source at (x + u, y + v), clamped
/// at the borders; everything else is background black.
ImageRGB warp_image(const ImageRGB& src, const FlowField& bwd, const BinaryMask& out_mask,
                    SamplingKernel kernel = SamplingKernel::bilinear);

/// Resample a backward flow onto a grid scaled by `scale` (must yield integer
/// dimensions). Channels are interpolated with a Catmull-Rom bicubic kernel
/// (a = -0.5) and multiplied by `scale` so displacements stay in output-pixel
/// units; validity is taken from the nearest input pixel. Grid alignment
/// follows the intrinsics convention u_out = scale * u_in, i.e. output pixel
/// X reads input coordinate X / scale.
FlowField upsample_flow(const FlowField& bwd, double scale);

}  // namespace vf
