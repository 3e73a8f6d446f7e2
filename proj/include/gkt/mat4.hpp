#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace gkt {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// 4x4 row-major homogeneous transform.
struct Mat4 {
    std::array<double, 16> m{};

    double& at(int row, int col) { return m[static_cast<size_t>(row) * 4 + col]; }
    double at(int row, int col) const { return m[static_cast<size_t>(row) * 4 + col]; }

    static Mat4 identity() {
        Mat4 out;
        out.m = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
        return out;
    }

    bool operator==(const Mat4&) const = default;
};

/// Standard matrix product a*b.
Mat4 compose(const Mat4& a, const Mat4& b);

/// Applies the top three rows of m to [p, 1].
Vec3 transform_point(const Mat4& m, const Vec3& p);

/// Inverse of a rigid transform [R t; 0 1], computed as [R^T -R^T t; 0 1].
Mat4 rigid_inverse(const Mat4& m);

bool all_finite(const Mat4& m);

} // namespace gkt
