#include "gkt/lut.hpp"

#include <fstream>
#include <sstream>

#include "gkt/error.hpp"
#include "gkt/parallel.hpp"
#include "wire.hpp"

namespace gkt {

uint64_t input_fingerprint(const CameraRig& rig, const BevGridSpec& grid,
                           const KernelSpec& kernel) {
    wire::Fnv1a h;
    h.u32(static_cast<uint32_t>(rig.views.size()));
    for (const CameraView& view : rig.views) {
        h.str(view.name);
        h.f64(view.intrinsics.fx);
        h.f64(view.intrinsics.fy);
        h.f64(view.intrinsics.cx);
        h.f64(view.intrinsics.cy);
        h.f64(view.intrinsics.skew);
        for (double v : view.extrinsics.matrix.m) h.f64(v);
        h.u32(static_cast<uint32_t>(view.image_height));
        h.u32(static_cast<uint32_t>(view.image_width));
    }
    h.u32(static_cast<uint32_t>(rig.scale_strides.size()));
    for (int s : rig.scale_strides) h.u32(static_cast<uint32_t>(s));
    h.u32(static_cast<uint32_t>(grid.rows));
    h.u32(static_cast<uint32_t>(grid.cols));
    h.f64(grid.x_min);
    h.f64(grid.x_max);
    h.f64(grid.y_min);
    h.f64(grid.y_max);
    h.f64(grid.height_z);
    h.u32(static_cast<uint32_t>(kernel.k_h));
    h.u32(static_cast<uint32_t>(kernel.k_w));
    h.u32(static_cast<uint32_t>(kernel.layout));
    h.u32(static_cast<uint32_t>(kernel.dilation));
    return h.state;
}

Lut build_lut(const CameraRig& rig, const BevGridSpec& grid, const KernelSpec& kernel,
              std::optional<double> height_override, int threads) {
    rig.validate();
    BevGridSpec effective = grid;
    if (height_override) effective.height_z = *height_override;
    effective.validate();
    kernel.validate();

    const std::vector<KernelOffset> offsets = kernel_offsets(kernel);
    const int num_views = rig.num_views();
    const int num_scales = rig.num_scales();
    const int positions = static_cast<int>(offsets.size());

    Lut lut;
    lut.num_queries = static_cast<uint32_t>(effective.num_queries());
    lut.num_views = static_cast<uint32_t>(num_views);
    lut.num_scales = static_cast<uint32_t>(num_scales);
    lut.positions_per_kernel = static_cast<uint32_t>(positions);
    lut.fingerprint = input_fingerprint(rig, effective, kernel);
    for (int v = 0; v < num_views; ++v) {
        for (int s = 0; s < num_scales; ++s) {
            lut.plane_heights.push_back(static_cast<uint32_t>(rig.feature_height(v, s)));
            lut.plane_widths.push_back(static_cast<uint32_t>(rig.feature_width(v, s)));
        }
    }
    lut.indices.assign(lut.num_entries(), 0);
    lut.valid.assign(lut.num_entries(), 0);

    parallel_for(effective.num_queries(), threads, [&](int64_t begin, int64_t end) {
        for (int64_t q = begin; q < end; ++q) {
            int row = static_cast<int>(q) / effective.cols;
            int col = static_cast<int>(q) % effective.cols;
            Vec3 center = cell_center(effective, row, col);
            size_t base = static_cast<size_t>(q) * lut.entries_per_query();
            for (int v = 0; v < num_views; ++v) {
                for (int s = 0; s < num_scales; ++s) {
                    PixelCoord pc = project_point(center, rig.views[static_cast<size_t>(v)],
                                                  rig.scale_strides[static_cast<size_t>(s)]);
                    RoundedPixel rp = round_pixel(pc);
                    int64_t height = rig.feature_height(v, s);
                    int64_t width = rig.feature_width(v, s);
                    for (int p = 0; p < positions; ++p) {
                        size_t entry = base + (static_cast<size_t>(v) * num_scales + s) *
                                                  positions +
                                       p;
                        if (!rp.valid) continue; // stays index 0 / invalid
                        int64_t r = rp.row + offsets[static_cast<size_t>(p)].d_row;
                        int64_t c = rp.col + offsets[static_cast<size_t>(p)].d_col;
                        if (r < 0 || r >= height || c < 0 || c >= width) continue;
                        lut.indices[entry] = static_cast<uint32_t>(r * width + c);
                        lut.valid[entry] = 1;
                    }
                }
            }
        }
    });
    return lut;
}

LutSlice lookup(const Lut& lut, int query_index) {
    if (query_index < 0 || static_cast<uint32_t>(query_index) >= lut.num_queries) {
        throw Error(ErrorKind::OutOfRange,
                    "query " + std::to_string(query_index) + " of " +
                        std::to_string(lut.num_queries));
    }
    size_t block = lut.entries_per_query();
    size_t offset = static_cast<size_t>(query_index) * block;
    return LutSlice{
        std::span<const uint32_t>(lut.indices.data() + offset, block),
        std::span<const uint8_t>(lut.valid.data() + offset, block),
        lut.num_views,
        lut.num_scales,
        lut.positions_per_kernel,
    };
}

void serialize_lut(const Lut& lut, std::ostream& out) {
    wire::write_magic(out, "GKTL");
    wire::write_le<uint16_t>(out, kLutFormatVersion);
    wire::write_le<uint64_t>(out, lut.fingerprint);
    wire::write_le<uint32_t>(out, lut.num_queries);
    wire::write_le<uint32_t>(out, lut.num_views);
    wire::write_le<uint32_t>(out, lut.num_scales);
    wire::write_le<uint32_t>(out, lut.positions_per_kernel);
    for (size_t i = 0; i < lut.plane_heights.size(); ++i) {
        wire::write_le<uint32_t>(out, lut.plane_heights[i]);
        wire::write_le<uint32_t>(out, lut.plane_widths[i]);
    }
    for (uint32_t idx : lut.indices) wire::write_le<uint32_t>(out, idx);
    out.write(reinterpret_cast<const char*>(lut.valid.data()),
              static_cast<std::streamsize>(lut.valid.size()));
    if (!out) throw Error(ErrorKind::Io, "failed writing LUT stream");
}

Lut deserialize_lut(std::istream& in) {
    wire::expect_magic(in, "GKTL");
    uint16_t version = wire::read_le<uint16_t>(in, "version");
    if (version != kLutFormatVersion) {
        throw Error(ErrorKind::BadVersion, "LUT version " + std::to_string(version));
    }
    Lut lut;
    lut.fingerprint = wire::read_le<uint64_t>(in, "fingerprint");
    lut.num_queries = wire::read_le<uint32_t>(in, "num_queries");
    lut.num_views = wire::read_le<uint32_t>(in, "num_views");
    lut.num_scales = wire::read_le<uint32_t>(in, "num_scales");
    lut.positions_per_kernel = wire::read_le<uint32_t>(in, "positions_per_kernel");
    if (lut.num_views == 0 || lut.num_scales == 0 || lut.positions_per_kernel == 0) {
        throw Error(ErrorKind::Inconsistent, "LUT shape metadata has zero dimension");
    }
    size_t num_planes = static_cast<size_t>(lut.num_views) * lut.num_scales;
    lut.plane_heights.resize(num_planes);
    lut.plane_widths.resize(num_planes);
    for (size_t i = 0; i < num_planes; ++i) {
        lut.plane_heights[i] = wire::read_le<uint32_t>(in, "plane height");
        lut.plane_widths[i] = wire::read_le<uint32_t>(in, "plane width");
        if (lut.plane_heights[i] == 0 || lut.plane_widths[i] == 0) {
            throw Error(ErrorKind::Inconsistent, "LUT plane has zero dimension");
        }
    }
    size_t entries = lut.num_entries();
    if (entries == 0 || entries > (size_t{1} << 31)) {
        throw Error(ErrorKind::Inconsistent, "LUT entry count implausible");
    }
    lut.indices.resize(entries);
    for (size_t i = 0; i < entries; ++i) {
        lut.indices[i] = wire::read_le<uint32_t>(in, "entry index");
    }
    lut.valid.resize(entries);
    in.read(reinterpret_cast<char*>(lut.valid.data()), static_cast<std::streamsize>(entries));
    if (!in || in.gcount() != static_cast<std::streamsize>(entries)) {
        throw Error(ErrorKind::Truncated, "while reading validity bits");
    }
    // Cross-check payload against the header before handing the table out.
    for (size_t i = 0; i < entries; ++i) {
        if (lut.valid[i] > 1) {
            throw Error(ErrorKind::Inconsistent, "validity byte out of {0,1}");
        }
        if (lut.valid[i]) {
            size_t plane = (i / lut.positions_per_kernel) % num_planes;
            uint64_t plane_size =
                static_cast<uint64_t>(lut.plane_heights[plane]) * lut.plane_widths[plane];
            if (lut.indices[i] >= plane_size) {
                throw Error(ErrorKind::Inconsistent, "valid entry indexes past its plane");
            }
        }
    }
    return lut;
}

std::vector<uint8_t> serialize_lut_bytes(const Lut& lut) {
    std::ostringstream out(std::ios::binary);
    serialize_lut(lut, out);
    std::string s = out.str();
    return std::vector<uint8_t>(s.begin(), s.end());
}

Lut deserialize_lut_bytes(std::span<const uint8_t> bytes) {
    std::istringstream in(std::string(bytes.begin(), bytes.end()), std::ios::binary);
    return deserialize_lut(in);
}

void save_lut(const Lut& lut, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    serialize_lut(lut, out);
    if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

Lut load_lut(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    return deserialize_lut(in);
}

} // namespace gkt
