#pragma once

#include <cstdint>
#include <vector>

#include "gkt/geometry.hpp"
#include "gkt/mat4.hpp"

namespace gkt {

struct DeviationConfig {
    double sigma_t = 0.0; // std-dev of dx/dy/dz, meters
    double sigma_r = 0.0; // std-dev of theta_x/y/z, radians
    uint64_t seed = 0;

    void validate() const;
};

struct ViewDeviation {
    double dx = 0.0, dy = 0.0, dz = 0.0;          // meters
    double theta_x = 0.0, theta_y = 0.0, theta_z = 0.0; // radians
};

struct DeviationSample {
    std::vector<ViewDeviation> views;
};

/// Six independent normal draws per view. Pure in (config, num_views,
/// draw_index): the same inputs always produce the same sample, on any
/// platform and under any threading.
DeviationSample sample_deviation(const DeviationConfig& config, int num_views,
                                 uint64_t draw_index);

/// Identity with last column [dx, dy, dz, 1].
Mat4 translation_matrix(double dx, double dy, double dz);

/// Product R(theta_x) * R(theta_y) * R(theta_z) of the three axis rotations.
Mat4 rotation_matrix(double theta_x, double theta_y, double theta_z);

/// Applies a per-view deviation in the camera frame: R_devi * T_devi * Rt.
/// Throws Error(Internal) if the result no longer satisfies the extrinsics
/// invariants.
CameraExtrinsics deviated_extrinsics(const CameraExtrinsics& extrinsics,
                                     const ViewDeviation& deviation);

/// Rig with every view's extrinsics deviated by the matching sample entry.
CameraRig deviated_rig(const CameraRig& rig, const DeviationSample& sample);

} // namespace gkt
