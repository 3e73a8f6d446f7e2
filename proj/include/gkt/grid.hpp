#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gkt/mat4.hpp"

namespace gkt {

/// Evenly divided BEV plane. Cell (row, col) covers a rectangle of the
/// extent; x varies along columns, y along rows, z is the shared plane height.
struct BevGridSpec {
    int rows = 0;
    int cols = 0;
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
    double height_z = 0.0;

    void validate() const;
    int num_queries() const { return rows * cols; }
};

enum class KernelLayout : uint8_t { Full = 0, Cross = 1, Dilated = 2 };

const char* to_string(KernelLayout layout);
KernelLayout kernel_layout_from_string(const std::string& s);

struct KernelSpec {
    int k_h = 3;
    int k_w = 3;
    KernelLayout layout = KernelLayout::Full;
    int dilation = 1;

    void validate() const; // k_h, k_w odd and >= 1; dilation >= 1
    int num_positions() const;
};

struct KernelOffset {
    int d_row = 0;
    int d_col = 0;
    bool operator==(const KernelOffset&) const = default;
};

/// Center of cell (row, col); throws Error(OutOfRange) outside the grid.
Vec3 cell_center(const BevGridSpec& spec, int row, int col);

/// Deterministic offset list. Full/dilated: row-major over the
/// dilation-stepped square, k_h*k_w entries. Cross: the k_h vertical offsets
/// at d_col=0, then the k_w-1 horizontal offsets at d_row=0 with (0,0)
/// listed once.
std::vector<KernelOffset> kernel_offsets(const KernelSpec& spec);

/// Parses "7x3", "7x3:cross" or "3x3:dilated:2".
KernelSpec parse_kernel_spec(const std::string& text);
std::string format_kernel_spec(const KernelSpec& spec);

} // namespace gkt
