#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gkt/mat4.hpp"

namespace gkt {

/// Behind-camera / near-plane culling threshold in meters.
constexpr double kDepthEpsilon = 1e-3;

struct CameraIntrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    double skew = 0.0;

    /// Throws Error(Config) unless fx > 0, fy > 0 and all values are finite.
    void validate() const;
};

/// Rigid ego-to-camera transform. Rotation block must be orthonormal within
/// 1e-6, determinant within 1e-6 of 1, bottom row exactly [0,0,0,1].
struct CameraExtrinsics {
    Mat4 matrix = Mat4::identity();

    void validate() const;
};

struct CameraView {
    std::string name;
    CameraIntrinsics intrinsics; // at full image resolution
    CameraExtrinsics extrinsics;
    int image_height = 0;
    int image_width = 0;

    void validate() const;
};

struct CameraRig {
    std::vector<CameraView> views;
    std::vector<int> scale_strides; // strictly increasing, one per feature scale

    void validate() const;
    int num_views() const { return static_cast<int>(views.size()); }
    int num_scales() const { return static_cast<int>(scale_strides.size()); }
    /// Feature-map dims at `scale`: ceil(image_size / stride).
    int feature_height(int view, int scale) const;
    int feature_width(int view, int scale) const;
};

/// Continuous pixel coordinate at a given scale. When `valid` is false the
/// point is behind the camera and u/v carry no meaning (they are zeroed so
/// downstream hashing stays deterministic).
struct PixelCoord {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;
    bool valid = false;
};

struct RoundedPixel {
    int64_t row = 0;
    int64_t col = 0;
    bool valid = false;
};

/// Projects an ego-frame point into the view's feature map at `stride`.
/// The point is projected at full resolution and the coordinates divided by
/// the stride, so per-scale results are exact multiples of each other.
PixelCoord project_point(const Vec3& point, const CameraView& view, int stride);

/// Rounds half away from zero; row comes from v, col from u.
RoundedPixel round_pixel(const PixelCoord& coord);

} // namespace gkt
