#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gkt/gather.hpp"
#include "gkt/lut.hpp"
#include "gkt/synthetic.hpp"

namespace gkt {

/// One timed instance of the strategy comparison. The workload is the
/// 2D-to-BEV unfolding stage only: cross-attention is identical across
/// strategies and is excluded, and the LUT build is reported separately
/// because it happens offline.
struct BenchConfig {
    SyntheticSpec instance;
    KernelSpec kernel;
    std::vector<GatherStrategy> strategies = {GatherStrategy::Im2col, GatherStrategy::Sample,
                                              GatherStrategy::Lut};
    int warmup_iters = 10;
    int measured_iters = 200;
    int repetitions = 5;
    int threads = 1;

    void validate() const; // measured_iters >= 1, repetitions >= 3, nonzero dims
};

struct BenchRow {
    GatherStrategy strategy;
    double median_ms = 0.0;
    double min_ms = 0.0;
    double transforms_per_sec = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    bool equivalence_ok = false;
    int64_t first_difference = -1; // flat float index of the first mismatch, -1 if none
    double lut_build_ms = 0.0;
    std::string environment; // ISA path, thread count, iteration counts
    bool valid() const { return equivalence_ok; }
};

/// Times each strategy over identical inputs. Outputs are cross-checked
/// bit-exact before any timing is accepted; median over repetitions of the
/// per-iteration mean, monotonic clock.
BenchReport run_bench(const BenchConfig& config, const FeaturePyramid& pyramid,
                      const SceneConfig& scene, const Lut& lut);

struct DeviationLevelStats {
    char noise_kind = 't'; // 't' translation, 'r' rotation
    double sigma = 0.0;
    KernelSpec kernel;
    double unchanged_prior_fraction = 0.0; // rounded prior identical under deviation
    double coverage_fraction = 0.0;        // undeviated prior inside the deviated kernel region
    double mean_shift_px = 0.0;            // mean projected pixel shift at feature scale
};

struct HeightOverlapStats {
    double height_z = 0.0;
    double lut_overlap_fraction = 0.0; // entries identical to the baseline-height LUT
};

struct RobustnessConfig {
    std::vector<double> sigma_t_levels;
    std::vector<double> sigma_r_levels;
    std::vector<KernelSpec> kernels;
    std::vector<double> heights;
    double baseline_height = 0.0;
    int draws = 1000;
    uint64_t seed = 0;
    int threads = 1;

    void validate() const; // draws >= 100 when any sigma level is present
};

struct RobustnessReport {
    std::vector<DeviationLevelStats> deviation;
    std::vector<HeightOverlapStats> heights;
    uint64_t seed = 0;
    int draws = 0;
};

/// Deviation statistics over N seeded draws per level, every kernel
/// evaluated on the same draws, plus LUT overlap across plane heights.
/// Deterministic in (config, rig, grid).
RobustnessReport run_robustness(const CameraRig& rig, const BevGridSpec& grid,
                                const RobustnessConfig& config);

// CSV emission with a fixed column order, plus a structured-text twin next
// to it (same path, .txt extension). Floats are printed round-trip exact.
void emit_report(const BenchReport& report, const std::string& csv_path);
void emit_report(const RobustnessReport& report, const std::string& csv_path);
void write_bench_csv(const BenchReport& report, std::ostream& out);
void write_robustness_csv(const RobustnessReport& report, std::ostream& out);
BenchReport parse_bench_csv(std::istream& in);
RobustnessReport parse_robustness_csv(std::istream& in);

} // namespace gkt
