#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "core/types.hpp"

namespace vf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Pinhole intrinsics. Pixel (x, y) addresses the pixel center, x rightward,
/// y downward, origin at the top-left pixel center.
struct CameraIntrinsics {
  double fx = 0, fy = 0;
  double cx = 0, cy = 0;
  int width = 0, height = 0;

  void validate() const;
  CameraIntrinsics scaled(double s) const;
};

/// Proper rigid motion p -> rotation * p + translation.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  void validate(double tol = 1e-9) const;
  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  /// this ∘ other: applies `other` first.
  RigidTransform compose(const RigidTransform& other) const;
};

RigidTransform invert_transform(const RigidTransform& t);

Vec3 unproject(double x, double y, double depth, const CameraIntrinsics& k);

struct Projected {
  double u, v;
  double z;
};

Projected project_point(const Vec3& p, const CameraIntrinsics& k);

struct ForwardFlowResult {
  FlowField flow;           // forward, registered to the source image
  DepthImage target_depth;  // z in the target camera frame, > 0 exactly where flow is valid
  int behind_camera = 0;    // foreground pixels that mapped to z <= 0
};

/// Projection layer: per-pixel unproject -> rigid transform -> reproject,
/// emitting displacement (u - x, v - y) for every foreground pixel.
/// The arithmetic is arranged so the pixel term cancels exactly: an identity
/// transform with equal intrinsics yields bitwise-zero flow.
ForwardFlowResult depth_to_forward_flow(const DepthImage& depth, const BinaryMask& mask,
                                        const CameraIntrinsics& k_src, const CameraIntrinsics& k_tgt,
                                        const RigidTransform& t_src_to_tgt);

/// Convenience for inputs given in the target-to-source convention.
inline RigidTransform source_to_target_from_inverse(const RigidTransform& t_tgt_to_src) {
  return invert_transform(t_tgt_to_src);
}

}  // namespace vf
