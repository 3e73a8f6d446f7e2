#include "gkt/deviation.hpp"

#include <cmath>

#include "gkt/error.hpp"
#include "gkt/rng.hpp"

namespace gkt {

namespace {

// Axis slots inside one view's draw block; translation first.
enum Axis : uint64_t { kDx = 0, kDy, kDz, kThetaX, kThetaY, kThetaZ };

} // namespace

void DeviationConfig::validate() const {
    if (!(sigma_t >= 0.0) || !(sigma_r >= 0.0)) {
        throw Error(ErrorKind::Config, "deviation sigmas must be non-negative");
    }
}

DeviationSample sample_deviation(const DeviationConfig& config, int num_views,
                                 uint64_t draw_index) {
    config.validate();
    if (num_views < 1) throw Error(ErrorKind::Config, "num_views must be >= 1");
    DeviationSample sample;
    sample.views.resize(static_cast<size_t>(num_views));
    for (int v = 0; v < num_views; ++v) {
        ViewDeviation& d = sample.views[static_cast<size_t>(v)];
        uint64_t view = static_cast<uint64_t>(v);
        d.dx = rng::normal(config.seed, config.sigma_t, draw_index, view, kDx);
        d.dy = rng::normal(config.seed, config.sigma_t, draw_index, view, kDy);
        d.dz = rng::normal(config.seed, config.sigma_t, draw_index, view, kDz);
        d.theta_x = rng::normal(config.seed, config.sigma_r, draw_index, view, kThetaX);
        d.theta_y = rng::normal(config.seed, config.sigma_r, draw_index, view, kThetaY);
        d.theta_z = rng::normal(config.seed, config.sigma_r, draw_index, view, kThetaZ);
    }
    return sample;
}

Mat4 translation_matrix(double dx, double dy, double dz) {
    Mat4 out = Mat4::identity();
    out.at(0, 3) = dx;
    out.at(1, 3) = dy;
    out.at(2, 3) = dz;
    return out;
}

Mat4 rotation_matrix(double theta_x, double theta_y, double theta_z) {
    double cx = std::cos(theta_x), sx = std::sin(theta_x);
    double cy = std::cos(theta_y), sy = std::sin(theta_y);
    double cz = std::cos(theta_z), sz = std::sin(theta_z);

    Mat4 rx = Mat4::identity();
    rx.at(1, 1) = cx;
    rx.at(1, 2) = sx;
    rx.at(2, 1) = -sx;
    rx.at(2, 2) = cx;

    Mat4 ry = Mat4::identity();
    ry.at(0, 0) = cy;
    ry.at(0, 2) = -sy;
    ry.at(2, 0) = sy;
    ry.at(2, 2) = cy;

    Mat4 rz = Mat4::identity();
    rz.at(0, 0) = cz;
    rz.at(0, 1) = sz;
    rz.at(1, 0) = -sz;
    rz.at(1, 1) = cz;

    return compose(compose(rx, ry), rz);
}

CameraExtrinsics deviated_extrinsics(const CameraExtrinsics& extrinsics,
                                     const ViewDeviation& deviation) {
    Mat4 r_devi = rotation_matrix(deviation.theta_x, deviation.theta_y, deviation.theta_z);
    Mat4 t_devi = translation_matrix(deviation.dx, deviation.dy, deviation.dz);
    CameraExtrinsics out;
    out.matrix = compose(compose(r_devi, t_devi), extrinsics.matrix);
    try {
        out.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::Internal,
                    std::string("deviated extrinsics lost rigidity: ") + e.what());
    }
    return out;
}

CameraRig deviated_rig(const CameraRig& rig, const DeviationSample& sample) {
    if (sample.views.size() != rig.views.size()) {
        throw Error(ErrorKind::ShapeMismatch, "deviation sample does not match rig view count");
    }
    CameraRig out = rig;
    for (size_t v = 0; v < out.views.size(); ++v) {
        out.views[v].extrinsics = deviated_extrinsics(rig.views[v].extrinsics, sample.views[v]);
    }
    return out;
}

} // namespace gkt
