#include "gkt/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "gkt/error.hpp"

namespace gkt::simd {

const char* to_string(IsaLevel level) {
    switch (level) {
        case IsaLevel::Scalar: return "scalar";
        case IsaLevel::Avx2: return "avx2";
        case IsaLevel::Neon: return "neon";
    }
    return "?";
}

bool supported(IsaLevel level) {
    switch (level) {
        case IsaLevel::Scalar:
            return true;
        case IsaLevel::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case IsaLevel::Neon:
#if defined(__aarch64__) || defined(_M_ARM64)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(IsaLevel level) {
    if (!supported(level)) {
        throw Error(ErrorKind::Config,
                    std::string("simd level '") + to_string(level) + "' not supported here");
    }
    switch (level) {
#if defined(__x86_64__) || defined(_M_X64)
        case IsaLevel::Avx2: return detail::avx2_table;
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
        case IsaLevel::Neon: return detail::neon_table;
#endif
        default: return detail::scalar_table;
    }
}

IsaLevel detect() {
    if (const char* env = std::getenv("GKT_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return IsaLevel::Scalar;
        if (std::strcmp(env, "avx2") == 0 && supported(IsaLevel::Avx2)) return IsaLevel::Avx2;
        if (std::strcmp(env, "neon") == 0 && supported(IsaLevel::Neon)) return IsaLevel::Neon;
    }
    if (supported(IsaLevel::Avx2)) return IsaLevel::Avx2;
    if (supported(IsaLevel::Neon)) return IsaLevel::Neon;
    return IsaLevel::Scalar;
}

namespace {
std::atomic<int> g_active_level{-1};
}

IsaLevel active_level() {
    int level = g_active_level.load(std::memory_order_acquire);
    if (level < 0) {
        IsaLevel detected = detect();
        g_active_level.store(static_cast<int>(detected), std::memory_order_release);
        return detected;
    }
    return static_cast<IsaLevel>(level);
}

void set_active(IsaLevel level) {
    table(level); // validates support
    g_active_level.store(static_cast<int>(level), std::memory_order_release);
}

const KernelTable& active() {
    return table(active_level());
}

} // namespace gkt::simd
