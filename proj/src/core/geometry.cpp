#include "core/geometry.hpp"

#include <cmath>

namespace vf {

void CameraIntrinsics::validate() const {
  if (!(fx > 0) || !(fy > 0)) fail(Errc::validation, "focal lengths must be positive");
  if (width <= 0 || height <= 0) fail(Errc::validation, "image size must be positive");
  if (!(cx >= 0 && cx < width) || !(cy >= 0 && cy < height))
    fail(Errc::validation, "principal point must lie inside the image");
}

CameraIntrinsics CameraIntrinsics::scaled(double s) const {
  CameraIntrinsics k = *this;
  k.fx *= s;
  k.fy *= s;
  k.cx *= s;
  k.cy *= s;
  k.width = static_cast<int>(std::lround(width * s));
  k.height = static_cast<int>(std::lround(height * s));
  return k;
}

void RigidTransform::validate(double tol) const {
  const Mat3 gram = rotation.transpose() * rotation;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > tol)
    fail(Errc::validation, "rotation is not orthonormal");
  if (std::abs(rotation.determinant() - 1.0) > tol)
    fail(Errc::validation, "rotation determinant is not +1");
  if (!translation.allFinite()) fail(Errc::validation, "translation is not finite");
}

RigidTransform RigidTransform::compose(const RigidTransform& other) const {
  return {rotation * other.rotation, rotation * other.translation + translation};
}

RigidTransform invert_transform(const RigidTransform& t) {
  const Mat3 rt = t.rotation.transpose();
  return {rt, -(rt * t.translation)};
}

Vec3 unproject(double x, double y, double depth, const CameraIntrinsics& k) {
  if (!(depth > 0)) fail(Errc::invalid_argument, "unproject: depth must be positive");
  if (x < 0 || x >= k.width || y < 0 || y >= k.height)
    fail(Errc::invalid_argument, "unproject: pixel out of image bounds");
  return {(x - k.cx) / k.fx * depth, (y - k.cy) / k.fy * depth, depth};
}

Projected project_point(const Vec3& p, const CameraIntrinsics& k) {
  if (!(p.z() > 0)) fail(Errc::behind_camera, "project_point: point is behind the camera");
  return {k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy, p.z()};
}

ForwardFlowResult depth_to_forward_flow(const DepthImage& depth, const BinaryMask& mask,
                                        const CameraIntrinsics& k_src, const CameraIntrinsics& k_tgt,
                                        const RigidTransform& t_src_to_tgt) {
  require_same_size(depth.width(), depth.height(), mask.width(), mask.height(),
                    "depth_to_forward_flow: depth vs mask");
  k_src.validate();
  k_tgt.validate();

  const int w = depth.width(), h = depth.height();
  ForwardFlowResult out{FlowField(w, h, FlowDirection::forward), DepthImage(w, h), 0};

  const Mat3& R = t_src_to_tgt.rotation;
  const Vec3& t = t_src_to_tgt.translation;

  // flow_u = fx_t*(mx/mz) + cx_t - x is evaluated as
  //   fx_t*(mx - nx*mz)/mz + (fx_t*nx - (x - cx_t))
  // so that mx == nx, mz == 1 cancels bitwise and the identity transform
  // yields exactly zero flow. The trailing term is mathematically zero when
  // the intrinsics match and is dropped there rather than evaluated as
  // rounding noise.
  const bool same_x = k_src.fx == k_tgt.fx && k_src.cx == k_tgt.cx;
  const bool same_y = k_src.fy == k_tgt.fy && k_src.cy == k_tgt.cy;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.get(x, y)) continue;
      const double d = depth.at(x, y);
      if (!(d > 0)) fail(Errc::invalid_argument, "depth_to_forward_flow: foreground pixel with non-positive depth");

      // Normalized source ray; the depth is factored out of the transform so
      // the homogeneous division never computes (n*d)/d.
      const double nx = (x - k_src.cx) / k_src.fx;
      const double ny = (y - k_src.cy) / k_src.fy;
      const Vec3 m = R * Vec3(nx, ny, 1.0);
      const double mx = m.x() + t.x() / d;
      const double my = m.y() + t.y() / d;
      const double mz = m.z() + t.z() / d;
      if (!(mz > 0)) {
        ++out.behind_camera;
        continue;
      }

      const double corr_u = same_x ? 0.0 : k_tgt.fx * nx - (x - k_tgt.cx);
      const double corr_v = same_y ? 0.0 : k_tgt.fy * ny - (y - k_tgt.cy);
      const double flow_u = k_tgt.fx * (mx - nx * mz) / mz + corr_u;
      const double flow_v = k_tgt.fy * (my - ny * mz) / mz + corr_v;

      out.flow.set(x, y, static_cast<float>(flow_u), static_cast<float>(flow_v));
      out.target_depth.at(x, y) = d * mz;
    }
  }
  return out;
}

}  // namespace vf
