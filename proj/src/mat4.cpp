#include "gkt/mat4.hpp"

namespace gkt {

Mat4 compose(const Mat4& a, const Mat4& b) {
    Mat4 out;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            double sum = 0.0;
            for (int k = 0; k < 4; ++k) {
                sum += a.at(i, k) * b.at(k, j);
            }
            out.at(i, j) = sum;
        }
    }
    return out;
}

Vec3 transform_point(const Mat4& m, const Vec3& p) {
    Vec3 out;
    out.x = m.at(0, 0) * p.x + m.at(0, 1) * p.y + m.at(0, 2) * p.z + m.at(0, 3);
    out.y = m.at(1, 0) * p.x + m.at(1, 1) * p.y + m.at(1, 2) * p.z + m.at(1, 3);
    out.z = m.at(2, 0) * p.x + m.at(2, 1) * p.y + m.at(2, 2) * p.z + m.at(2, 3);
    return out;
}

Mat4 rigid_inverse(const Mat4& m) {
    Mat4 out = Mat4::identity();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out.at(i, j) = m.at(j, i);
        }
    }
    for (int i = 0; i < 3; ++i) {
        double t = 0.0;
        for (int j = 0; j < 3; ++j) {
            t -= m.at(j, i) * m.at(j, 3);
        }
        out.at(i, 3) = t;
    }
    return out;
}

bool all_finite(const Mat4& m) {
    for (double v : m.m) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

} // namespace gkt
