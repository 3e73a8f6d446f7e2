#include "gkt/grid.hpp"

#include <cmath>

#include "gkt/error.hpp"

namespace gkt {

void BevGridSpec::validate() const {
    if (rows <= 0 || cols <= 0) throw Error(ErrorKind::Config, "grid dims must be positive");
    if (!(x_max > x_min) || !(y_max > y_min)) {
        throw Error(ErrorKind::Config, "grid extent must have positive area");
    }
    for (double v : {x_min, x_max, y_min, y_max, height_z}) {
        if (!std::isfinite(v)) throw Error(ErrorKind::Config, "grid extent must be finite");
    }
}

const char* to_string(KernelLayout layout) {
    switch (layout) {
        case KernelLayout::Full: return "full";
        case KernelLayout::Cross: return "cross";
        case KernelLayout::Dilated: return "dilated";
    }
    return "?";
}

KernelLayout kernel_layout_from_string(const std::string& s) {
    if (s == "full") return KernelLayout::Full;
    if (s == "cross") return KernelLayout::Cross;
    if (s == "dilated") return KernelLayout::Dilated;
    throw Error(ErrorKind::Config, "unknown kernel layout '" + s + "'");
}

void KernelSpec::validate() const {
    if (k_h < 1 || k_w < 1 || k_h % 2 == 0 || k_w % 2 == 0) {
        throw Error(ErrorKind::Config, "kernel extents must be odd and >= 1");
    }
    if (dilation < 1) throw Error(ErrorKind::Config, "dilation must be >= 1");
}

int KernelSpec::num_positions() const {
    return layout == KernelLayout::Cross ? k_h + k_w - 1 : k_h * k_w;
}

Vec3 cell_center(const BevGridSpec& spec, int row, int col) {
    if (row < 0 || row >= spec.rows || col < 0 || col >= spec.cols) {
        throw Error(ErrorKind::OutOfRange, "cell (" + std::to_string(row) + "," +
                                               std::to_string(col) + ") outside grid");
    }
    Vec3 center;
    center.x = spec.x_min + (col + 0.5) * (spec.x_max - spec.x_min) / spec.cols;
    center.y = spec.y_min + (row + 0.5) * (spec.y_max - spec.y_min) / spec.rows;
    center.z = spec.height_z;
    return center;
}

std::vector<KernelOffset> kernel_offsets(const KernelSpec& spec) {
    spec.validate();
    std::vector<KernelOffset> offsets;
    offsets.reserve(static_cast<size_t>(spec.num_positions()));
    int h2 = spec.k_h / 2;
    int w2 = spec.k_w / 2;
    if (spec.layout == KernelLayout::Cross) {
        for (int r = -h2; r <= h2; ++r) offsets.push_back({r, 0});
        for (int c = -w2; c <= w2; ++c) {
            if (c != 0) offsets.push_back({0, c});
        }
        return offsets;
    }
    int step = spec.layout == KernelLayout::Dilated ? spec.dilation : 1;
    for (int r = -h2; r <= h2; ++r) {
        for (int c = -w2; c <= w2; ++c) {
            offsets.push_back({r * step, c * step});
        }
    }
    return offsets;
}

KernelSpec parse_kernel_spec(const std::string& text) {
    KernelSpec spec;
    size_t x = text.find('x');
    if (x == std::string::npos) {
        throw Error(ErrorKind::Config, "kernel spec '" + text + "' must look like HxW[:layout[:dilation]]");
    }
    try {
        size_t rest = 0;
        spec.k_h = std::stoi(text.substr(0, x));
        std::string tail = text.substr(x + 1);
        size_t colon = tail.find(':');
        spec.k_w = std::stoi(tail.substr(0, colon), &rest);
        if (colon != std::string::npos) {
            std::string layout_part = tail.substr(colon + 1);
            size_t colon2 = layout_part.find(':');
            spec.layout = kernel_layout_from_string(layout_part.substr(0, colon2));
            if (colon2 != std::string::npos) {
                spec.dilation = std::stoi(layout_part.substr(colon2 + 1));
            }
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(ErrorKind::Config, "kernel spec '" + text + "' has malformed numbers");
    }
    spec.validate();
    return spec;
}

std::string format_kernel_spec(const KernelSpec& spec) {
    std::string out = std::to_string(spec.k_h) + "x" + std::to_string(spec.k_w);
    if (spec.layout != KernelLayout::Full) {
        out += std::string(":") + to_string(spec.layout);
        if (spec.layout == KernelLayout::Dilated) out += ":" + std::to_string(spec.dilation);
    }
    return out;
}

} // namespace gkt
