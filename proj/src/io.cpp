#include "gkt/io.hpp"

#include <algorithm>
#include <fstream>

#include "wire.hpp"

namespace gkt {

void serialize_features(const FeaturePyramid& pyramid, std::ostream& out) {
    pyramid.validate();
    wire::write_magic(out, "GKTF");
    wire::write_le<uint16_t>(out, kFeatureFormatVersion);
    wire::write_le<uint32_t>(out, static_cast<uint32_t>(pyramid.num_views));
    wire::write_le<uint32_t>(out, static_cast<uint32_t>(pyramid.num_scales));
    wire::write_le<uint32_t>(out, static_cast<uint32_t>(pyramid.channels));
    for (int v = 0; v < pyramid.num_views; ++v) {
        for (int s = 0; s < pyramid.num_scales; ++s) {
            const FeatureMap& m = pyramid.map(v, s);
            wire::write_le<uint32_t>(out, static_cast<uint32_t>(m.height));
            wire::write_le<uint32_t>(out, static_cast<uint32_t>(m.width));
            wire::write_f32_array(out, m.data);
        }
    }
    if (!out) throw Error(ErrorKind::Io, "failed writing feature stream");
}

FeaturePyramid deserialize_features(std::istream& in) {
    wire::expect_magic(in, "GKTF");
    uint16_t version = wire::read_le<uint16_t>(in, "version");
    if (version != kFeatureFormatVersion) {
        throw Error(ErrorKind::BadVersion, "feature version " + std::to_string(version));
    }
    FeaturePyramid pyramid;
    pyramid.num_views = static_cast<int>(wire::read_le<uint32_t>(in, "num_views"));
    pyramid.num_scales = static_cast<int>(wire::read_le<uint32_t>(in, "num_scales"));
    pyramid.channels = static_cast<int>(wire::read_le<uint32_t>(in, "channels"));
    if (pyramid.num_views <= 0 || pyramid.num_scales <= 0 || pyramid.channels <= 0) {
        throw Error(ErrorKind::Inconsistent, "feature header has zero dimension");
    }
    for (int v = 0; v < pyramid.num_views; ++v) {
        for (int s = 0; s < pyramid.num_scales; ++s) {
            FeatureMap m;
            m.view = v;
            m.scale = s;
            m.channels = pyramid.channels;
            m.height = static_cast<int>(wire::read_le<uint32_t>(in, "map height"));
            m.width = static_cast<int>(wire::read_le<uint32_t>(in, "map width"));
            if (m.height <= 0 || m.width <= 0) {
                throw Error(ErrorKind::Inconsistent, "feature map has zero dimension");
            }
            size_t count = static_cast<size_t>(m.channels) * m.height * m.width;
            if (count > (size_t{1} << 31)) {
                throw Error(ErrorKind::Inconsistent, "feature map size implausible");
            }
            m.data.resize(count);
            wire::read_f32_array(in, m.data, "feature values");
            pyramid.maps.push_back(std::move(m));
        }
    }
    return pyramid;
}

void save_features(const FeaturePyramid& pyramid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    serialize_features(pyramid, out);
    if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

FeaturePyramid load_features(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    return deserialize_features(in);
}

void serialize_weights(const AttentionWeights& weights, std::ostream& out) {
    weights.validate();
    wire::write_magic(out, "GKTW");
    wire::write_le<uint16_t>(out, kWeightsFormatVersion);
    wire::write_le<uint32_t>(out, static_cast<uint32_t>(weights.channels));
    wire::write_le<uint32_t>(out, static_cast<uint32_t>(weights.d_model));
    wire::write_f32_array(out, weights.w_q);
    wire::write_f32_array(out, weights.w_k);
    wire::write_f32_array(out, weights.w_v);
    wire::write_f32_array(out, weights.w_o);
    wire::write_f32_array(out, weights.b_k);
    wire::write_f32_array(out, weights.b_v);
    wire::write_f32_array(out, weights.b_o);
    if (!out) throw Error(ErrorKind::Io, "failed writing weights stream");
}

AttentionWeights deserialize_weights(std::istream& in) {
    wire::expect_magic(in, "GKTW");
    uint16_t version = wire::read_le<uint16_t>(in, "version");
    if (version != kWeightsFormatVersion) {
        throw Error(ErrorKind::BadVersion, "weights version " + std::to_string(version));
    }
    AttentionWeights w;
    w.channels = static_cast<int>(wire::read_le<uint32_t>(in, "channels"));
    w.d_model = static_cast<int>(wire::read_le<uint32_t>(in, "d_model"));
    if (w.channels <= 0 || w.d_model <= 0 || w.channels > (1 << 20) || w.d_model > (1 << 20)) {
        throw Error(ErrorKind::Inconsistent, "weights header dims implausible");
    }
    size_t d = static_cast<size_t>(w.d_model);
    size_t c = static_cast<size_t>(w.channels);
    w.w_q.resize(d * d);
    w.w_k.resize(c * d);
    w.w_v.resize(c * d);
    w.w_o.resize(d * d);
    w.b_k.resize(d);
    w.b_v.resize(d);
    w.b_o.resize(d);
    wire::read_f32_array(in, w.w_q, "w_q");
    wire::read_f32_array(in, w.w_k, "w_k");
    wire::read_f32_array(in, w.w_v, "w_v");
    wire::read_f32_array(in, w.w_o, "w_o");
    wire::read_f32_array(in, w.b_k, "b_k");
    wire::read_f32_array(in, w.b_v, "b_v");
    wire::read_f32_array(in, w.b_o, "b_o");
    return w;
}

void save_weights(const AttentionWeights& weights, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    serialize_weights(weights, out);
    if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

AttentionWeights load_weights(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    return deserialize_weights(in);
}

FeaturePyramid bev_as_pyramid(const BevFeatureMap& bev) {
    FeaturePyramid out;
    out.num_views = 1;
    out.num_scales = 1;
    out.channels = bev.d_model;
    FeatureMap m;
    m.channels = bev.d_model;
    m.height = bev.rows;
    m.width = bev.cols;
    m.data.resize(static_cast<size_t>(bev.d_model) * bev.rows * bev.cols);
    // BEV storage is query-major; the tensor format wants channel planes.
    for (int q = 0; q < bev.num_queries(); ++q) {
        for (int c = 0; c < bev.d_model; ++c) {
            m.data[static_cast<size_t>(c) * bev.num_queries() + q] =
                bev.data[static_cast<size_t>(q) * bev.d_model + c];
        }
    }
    out.maps.push_back(std::move(m));
    return out;
}

void write_pgm(const std::string& path, int height, int width, std::span<const float> values) {
    if (height <= 0 || width <= 0 ||
        values.size() != static_cast<size_t>(height) * static_cast<size_t>(width)) {
        throw Error(ErrorKind::ShapeMismatch, "pgm dims do not match value count");
    }
    float max_value = 0.0f;
    for (float v : values) max_value = std::max(max_value, v);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    out << "P5\n" << width << " " << height << "\n255\n";
    for (float v : values) {
        float scaled = max_value > 0.0f ? v / max_value * 255.0f : 0.0f;
        int byte = std::clamp(static_cast<int>(std::lround(scaled)), 0, 255);
        out.put(static_cast<char>(byte));
    }
    if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

} // namespace gkt
