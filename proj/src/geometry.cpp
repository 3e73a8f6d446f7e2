#include "gkt/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "gkt/error.hpp"

namespace gkt {

void CameraIntrinsics::validate() const {
    for (double v : {fx, fy, cx, cy, skew}) {
        if (!std::isfinite(v)) throw Error(ErrorKind::Config, "intrinsics must be finite");
    }
    if (fx <= 0.0 || fy <= 0.0) {
        throw Error(ErrorKind::Config, "focal lengths must be positive");
    }
}

void CameraExtrinsics::validate() const {
    if (!all_finite(matrix)) throw Error(ErrorKind::Config, "extrinsics must be finite");
    if (matrix.at(3, 0) != 0.0 || matrix.at(3, 1) != 0.0 || matrix.at(3, 2) != 0.0 ||
        matrix.at(3, 3) != 1.0) {
        throw Error(ErrorKind::Config, "extrinsics bottom row must be [0,0,0,1]");
    }
    // ||R^T R - I||_inf < 1e-6
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 3; ++k) {
                dot += matrix.at(k, i) * matrix.at(k, j);
            }
            double expect = (i == j) ? 1.0 : 0.0;
            if (std::abs(dot - expect) >= 1e-6) {
                throw Error(ErrorKind::Config, "extrinsics rotation block is not orthonormal");
            }
        }
    }
    double det =
        matrix.at(0, 0) * (matrix.at(1, 1) * matrix.at(2, 2) - matrix.at(1, 2) * matrix.at(2, 1)) -
        matrix.at(0, 1) * (matrix.at(1, 0) * matrix.at(2, 2) - matrix.at(1, 2) * matrix.at(2, 0)) +
        matrix.at(0, 2) * (matrix.at(1, 0) * matrix.at(2, 1) - matrix.at(1, 1) * matrix.at(2, 0));
    if (std::abs(det - 1.0) > 1e-6) {
        throw Error(ErrorKind::Config, "extrinsics rotation determinant must be 1");
    }
}

void CameraView::validate() const {
    intrinsics.validate();
    extrinsics.validate();
    if (image_height <= 0 || image_width <= 0) {
        throw Error(ErrorKind::Config, "image size must be positive for view '" + name + "'");
    }
}

void CameraRig::validate() const {
    if (views.empty()) throw Error(ErrorKind::Config, "rig has no views");
    if (scale_strides.empty()) throw Error(ErrorKind::Config, "rig has no scale strides");
    int prev = 0;
    for (int s : scale_strides) {
        if (s <= prev) {
            throw Error(ErrorKind::Config, "scale strides must be positive and strictly increasing");
        }
        prev = s;
    }
    for (const CameraView& view : views) view.validate();
}

int CameraRig::feature_height(int view, int scale) const {
    int s = scale_strides[scale];
    return (views[view].image_height + s - 1) / s;
}

int CameraRig::feature_width(int view, int scale) const {
    int s = scale_strides[scale];
    return (views[view].image_width + s - 1) / s;
}

PixelCoord project_point(const Vec3& point, const CameraView& view, int stride) {
    Vec3 cam = transform_point(view.extrinsics.matrix, point);
    if (cam.z <= kDepthEpsilon) {
        return PixelCoord{0.0, 0.0, 0.0, false};
    }
    const CameraIntrinsics& k = view.intrinsics;
    double inv_z = 1.0 / cam.z;
    // Full-resolution coordinates first, then the stride division, so the
    // per-scale coordinates are exact quotients of the full-resolution ones.
    double u_full = k.fx * cam.x * inv_z + k.skew * cam.y * inv_z + k.cx;
    double v_full = k.fy * cam.y * inv_z + k.cy;
    return PixelCoord{u_full / stride, v_full / stride, cam.z, true};
}

RoundedPixel round_pixel(const PixelCoord& coord) {
    if (!coord.valid) return RoundedPixel{0, 0, false};
    // Saturate far outside any plausible feature map so llround cannot
    // overflow; such priors are off-map either way.
    constexpr double kRoundLimit = 4.0e18;
    double u = std::clamp(coord.u, -kRoundLimit, kRoundLimit);
    double v = std::clamp(coord.v, -kRoundLimit, kRoundLimit);
    // std::llround rounds halfway cases away from zero.
    return RoundedPixel{std::llround(v), std::llround(u), true};
}

} // namespace gkt
