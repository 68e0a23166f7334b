#pragma once

#include <string>

#include "core/geometry.hpp"
#include "core/types.hpp"

namespace vf {

/// Middlebury .flo: magic float 202021.25 LE ("PIEH"), int32 width, int32
/// height, then row-major interleaved float32 (u, v). Invalid pixels are
/// stored as the 1e9 sentinel; on read a pixel is invalid when either
/// component exceeds 1e8 in magnitude. Valid values round-trip bit-exactly.
void write_flow(const std::string& path, const FlowField& f);
FlowField read_flow(const std::string& path, FlowDirection direction);

/// 16-bit grayscale PNG, stored value = round(depth / scale), 0 = background.
/// The scale goes into a JSON sidecar at `path + ".meta"`.
void write_depth(const std::string& path, const DepthImage& d, double scale = 1e-3);
DepthImage read_depth(const std::string& path);                // scale from sidecar
DepthImage read_depth(const std::string& path, double scale);  // explicit scale

/// Key/value text file with fx fy cx cy width height and a row-major 3x4
/// [R|t] extrinsic (world-to-camera). Reading validates the rotation.
void write_camera(const std::string& path, const CameraIntrinsics& k, const RigidTransform& pose);
void read_camera(const std::string& path, CameraIntrinsics& k, RigidTransform& pose);

/// 8-bit grayscale PNG, foreground = 255. Reading rejects values outside
/// {0, 255}.
void write_mask(const std::string& path, const BinaryMask& m);
BinaryMask read_mask(const std::string& path);

/// 8-bit RGB PNG; float channels are rounded and clamped on write.
void write_rgb(const std::string& path, const ImageRGB& img);
ImageRGB read_rgb(const std::string& path);

}  // namespace vf
