#include "gkt/synthetic.hpp"

#include <cmath>

#include "gkt/deviation.hpp"
#include "gkt/error.hpp"
#include "gkt/rng.hpp"

namespace gkt {

void SyntheticSpec::validate() const {
    if (views < 1 || grid_rows < 1 || grid_cols < 1 || channels < 1 || image_height < 1 ||
        image_width < 1) {
        throw Error(ErrorKind::Config, "synthetic dims must be positive");
    }
    if (scale_strides.empty()) throw Error(ErrorKind::Config, "at least one scale stride");
    if (!(extent > 0.0)) throw Error(ErrorKind::Config, "extent must be positive");
}

SceneConfig make_synthetic_scene(const SyntheticSpec& spec) {
    spec.validate();
    SceneConfig scene;
    scene.rig.scale_strides = spec.scale_strides;
    scene.grid = BevGridSpec{spec.grid_rows, spec.grid_cols, -spec.extent, spec.extent,
                             -spec.extent, spec.extent, spec.height_z};
    scene.kernel = KernelSpec{spec.k_h, spec.k_w, KernelLayout::Full, 1};

    // Yaw-distributed surround cameras on a ring, each tipped slightly toward
    // the ground. Ego frame: x forward, y left, z up. Camera frame: x right,
    // y down, z along the optical axis.
    const double ring_radius = 1.2;
    const double camera_height = 1.6;
    const double pitch_down = 0.06;
    for (int v = 0; v < spec.views; ++v) {
        double yaw = 2.0 * M_PI * v / spec.views;
        double fwd_x = std::cos(yaw), fwd_y = std::sin(yaw);

        Mat4 ego_to_cam = Mat4::identity();
        // rows: right, down, forward
        ego_to_cam.at(0, 0) = fwd_y;
        ego_to_cam.at(0, 1) = -fwd_x;
        ego_to_cam.at(0, 2) = 0.0;
        ego_to_cam.at(1, 0) = 0.0;
        ego_to_cam.at(1, 1) = 0.0;
        ego_to_cam.at(1, 2) = -1.0;
        ego_to_cam.at(2, 0) = fwd_x;
        ego_to_cam.at(2, 1) = fwd_y;
        ego_to_cam.at(2, 2) = 0.0;
        Vec3 center{ring_radius * fwd_x, ring_radius * fwd_y, camera_height};
        for (int i = 0; i < 3; ++i) {
            double t = 0.0;
            t -= ego_to_cam.at(i, 0) * center.x;
            t -= ego_to_cam.at(i, 1) * center.y;
            t -= ego_to_cam.at(i, 2) * center.z;
            ego_to_cam.at(i, 3) = t;
        }
        CameraView view;
        view.name = "cam" + std::to_string(v);
        view.extrinsics.matrix = compose(rotation_matrix(pitch_down, 0.0, 0.0), ego_to_cam);
        view.intrinsics.fx = 0.6 * spec.image_width;
        view.intrinsics.fy = 0.6 * spec.image_width;
        view.intrinsics.cx = 0.5 * spec.image_width;
        view.intrinsics.cy = 0.5 * spec.image_height;
        view.intrinsics.skew = 0.0;
        view.image_height = spec.image_height;
        view.image_width = spec.image_width;
        scene.rig.views.push_back(view);
    }
    scene.rig.validate();
    return scene;
}

FeaturePyramid make_synthetic_features(const SceneConfig& scene, int channels, uint64_t seed) {
    if (channels < 1) throw Error(ErrorKind::Config, "channels must be positive");
    const CameraRig& rig = scene.rig;
    FeaturePyramid pyramid;
    pyramid.num_views = rig.num_views();
    pyramid.num_scales = rig.num_scales();
    pyramid.channels = channels;
    for (int v = 0; v < pyramid.num_views; ++v) {
        for (int s = 0; s < pyramid.num_scales; ++s) {
            FeatureMap map;
            map.view = v;
            map.scale = s;
            map.channels = channels;
            map.height = rig.feature_height(v, s);
            map.width = rig.feature_width(v, s);
            map.data.resize(static_cast<size_t>(channels) * map.plane_size());
            uint64_t map_key = static_cast<uint64_t>(v) * pyramid.num_scales + s;
            for (size_t i = 0; i < map.data.size(); ++i) {
                map.data[i] = static_cast<float>(
                    rng::uniform_range(rng::hash(seed, 0xFEA7, map_key, i), -1.0, 1.0));
            }
            pyramid.maps.push_back(std::move(map));
        }
    }
    return pyramid;
}

} // namespace gkt
