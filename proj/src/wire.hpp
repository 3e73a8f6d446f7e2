#pragma once

// Little-endian primitives shared by the GKTL/GKTF/GKTW readers and writers.

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "gkt/error.hpp"

namespace gkt::wire {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
T to_le(T value) {
    if constexpr (std::endian::native == std::endian::big) {
        T out;
        auto* src = reinterpret_cast<const uint8_t*>(&value);
        auto* dst = reinterpret_cast<uint8_t*>(&out);
        for (size_t i = 0; i < sizeof(T); ++i) dst[i] = src[sizeof(T) - 1 - i];
        return out;
    }
    return value;
}

template <typename T>
void write_le(std::ostream& out, T value) {
    T le = to_le(value);
    out.write(reinterpret_cast<const char*>(&le), sizeof(T));
}

inline void write_f32(std::ostream& out, float value) {
    uint32_t bits;
    std::memcpy(&bits, &value, sizeof(bits));
    write_le(out, bits);
}

inline void write_f32_array(std::ostream& out, std::span<const float> values) {
    for (float v : values) write_f32(out, v);
}

template <typename T>
T read_le(std::istream& in, const char* what) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in || in.gcount() != static_cast<std::streamsize>(sizeof(T))) {
        throw Error(ErrorKind::Truncated, std::string("while reading ") + what);
    }
    return to_le(value);
}

inline float read_f32(std::istream& in, const char* what) {
    uint32_t bits = read_le<uint32_t>(in, what);
    float value;
    std::memcpy(&value, &bits, sizeof(value));
    return value;
}

inline void read_f32_array(std::istream& in, std::span<float> out, const char* what) {
    for (float& v : out) v = read_f32(in, what);
}

inline void expect_magic(std::istream& in, const char (&magic)[5]) {
    char buf[4];
    in.read(buf, 4);
    if (!in || in.gcount() != 4) {
        throw Error(ErrorKind::Truncated, "while reading magic");
    }
    if (std::memcmp(buf, magic, 4) != 0) {
        throw Error(ErrorKind::BadMagic,
                    std::string("expected '") + magic + "', got '" + std::string(buf, 4) + "'");
    }
}

inline void write_magic(std::ostream& out, const char (&magic)[5]) {
    out.write(magic, 4);
}

/// FNV-1a 64, fed with canonical little-endian bytes.
struct Fnv1a {
    uint64_t state = 0xcbf29ce484222325ULL;

    void bytes(const void* data, size_t n) {
        const auto* p = static_cast<const uint8_t*>(data);
        for (size_t i = 0; i < n; ++i) {
            state ^= p[i];
            state *= 0x100000001b3ULL;
        }
    }
    void u32(uint32_t v) {
        uint32_t le = to_le(v);
        bytes(&le, sizeof(le));
    }
    void u64(uint64_t v) {
        uint64_t le = to_le(v);
        bytes(&le, sizeof(le));
    }
    void f64(double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        u64(bits);
    }
    void str(const std::string& s) {
        u64(s.size());
        bytes(s.data(), s.size());
    }
};

} // namespace gkt::wire
