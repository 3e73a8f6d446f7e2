#include "gkt/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gkt/deviation.hpp"
#include "gkt/error.hpp"
#include "gkt/simd.hpp"

namespace gkt {

namespace {

void do_not_optimize(const void* p) {
    asm volatile("" : : "g"(p) : "memory");
}

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string format_double(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    size_t n = values.size();
    if (n == 0) return 0.0;
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

/// O(1) membership test for the kernel region around a prior pixel.
struct RegionMask {
    int max_row = 0;
    int max_col = 0;
    std::vector<uint8_t> mask;

    explicit RegionMask(const KernelSpec& kernel) {
        for (const KernelOffset& off : kernel_offsets(kernel)) {
            max_row = std::max(max_row, std::abs(off.d_row));
            max_col = std::max(max_col, std::abs(off.d_col));
        }
        mask.assign(static_cast<size_t>(2 * max_row + 1) * (2 * max_col + 1), 0);
        for (const KernelOffset& off : kernel_offsets(kernel)) {
            mask[static_cast<size_t>(off.d_row + max_row) * (2 * max_col + 1) +
                 (off.d_col + max_col)] = 1;
        }
    }

    bool contains(int64_t d_row, int64_t d_col) const {
        if (std::abs(d_row) > max_row || std::abs(d_col) > max_col) return false;
        return mask[static_cast<size_t>(d_row + max_row) * (2 * max_col + 1) +
                    (d_col + max_col)] != 0;
    }
};

} // namespace

void BenchConfig::validate() const {
    instance.validate();
    kernel.validate();
    if (strategies.empty()) throw Error(ErrorKind::Config, "no strategies to benchmark");
    if (measured_iters < 1) throw Error(ErrorKind::Config, "measured_iters must be >= 1");
    if (repetitions < 3) throw Error(ErrorKind::Config, "repetitions must be >= 3");
    if (warmup_iters < 0) throw Error(ErrorKind::Config, "warmup_iters must be >= 0");
    if (threads < 1) throw Error(ErrorKind::Config, "threads must be >= 1");
}

BenchReport run_bench(const BenchConfig& config, const FeaturePyramid& pyramid,
                      const SceneConfig& scene, const Lut& lut) {
    config.validate();
    pyramid.validate_against(scene.rig);

    GatherOptions options;
    options.threads = config.threads;

    auto run_strategy = [&](GatherStrategy strategy, UnfoldedFeatures& out) {
        switch (strategy) {
            case GatherStrategy::Im2col:
                gather_im2col_into(out, pyramid, scene.rig, scene.grid, config.kernel, options);
                break;
            case GatherStrategy::Sample:
                gather_sample_into(out, pyramid, scene.rig, scene.grid, config.kernel, options);
                break;
            case GatherStrategy::Lut:
                gather_lut_into(out, pyramid, lut, options);
                break;
        }
    };

    BenchReport report;
    {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "isa=%s threads=%d warmup=%d iters=%d reps=%d scope=unfold-stage",
                      simd::to_string(simd::active_level()), config.threads, config.warmup_iters,
                      config.measured_iters, config.repetitions);
        report.environment = buf;
    }

    // Equivalence gate: all strategies must produce bit-identical output on
    // the benchmark inputs before any timing counts.
    {
        UnfoldedFeatures reference;
        bool have_reference = false;
        report.equivalence_ok = true;
        for (GatherStrategy strategy : config.strategies) {
            UnfoldedFeatures out;
            run_strategy(strategy, out);
            if (!have_reference) {
                reference = std::move(out);
                have_reference = true;
            } else if (!out.bit_identical(reference)) {
                report.equivalence_ok = false;
                report.first_difference = out.first_difference(reference);
                break;
            }
        }
    }

    {
        double t0 = now_ms();
        Lut rebuilt = build_lut(scene.rig, scene.grid, config.kernel, std::nullopt,
                                config.threads);
        report.lut_build_ms = now_ms() - t0;
        do_not_optimize(&rebuilt);
    }

    if (!report.equivalence_ok) return report;

    // Repetitions are interleaved across strategies so clock drift and
    // scheduler noise hit every strategy alike; the median is taken over
    // matched conditions.
    const size_t num_strategies = config.strategies.size();
    std::vector<UnfoldedFeatures> buffers(num_strategies);
    std::vector<std::vector<double>> per_iter_ms(num_strategies);
    for (size_t s = 0; s < num_strategies; ++s) {
        for (int i = 0; i < config.warmup_iters; ++i) {
            run_strategy(config.strategies[s], buffers[s]);
            do_not_optimize(buffers[s].data.data());
        }
    }
    for (int rep = 0; rep < config.repetitions; ++rep) {
        for (size_t s = 0; s < num_strategies; ++s) {
            double t0 = now_ms();
            for (int i = 0; i < config.measured_iters; ++i) {
                run_strategy(config.strategies[s], buffers[s]);
                do_not_optimize(buffers[s].data.data());
            }
            per_iter_ms[s].push_back((now_ms() - t0) / config.measured_iters);
        }
    }
    for (size_t s = 0; s < num_strategies; ++s) {
        BenchRow row;
        row.strategy = config.strategies[s];
        row.median_ms = median(per_iter_ms[s]);
        row.min_ms = *std::min_element(per_iter_ms[s].begin(), per_iter_ms[s].end());
        row.transforms_per_sec = row.median_ms > 0.0 ? 1000.0 / row.median_ms : 0.0;
        report.rows.push_back(row);
    }
    return report;
}

void RobustnessConfig::validate() const {
    bool has_levels = !sigma_t_levels.empty() || !sigma_r_levels.empty();
    if (has_levels) {
        if (draws < 100) throw Error(ErrorKind::Config, "robustness needs draws >= 100");
        if (kernels.empty()) throw Error(ErrorKind::Config, "robustness needs a kernel list");
    }
    for (double s : sigma_t_levels) {
        if (!(s >= 0.0)) throw Error(ErrorKind::Config, "sigma_t levels must be >= 0");
    }
    for (double s : sigma_r_levels) {
        if (!(s >= 0.0)) throw Error(ErrorKind::Config, "sigma_r levels must be >= 0");
    }
    for (const KernelSpec& k : kernels) k.validate();
    if (threads < 1) throw Error(ErrorKind::Config, "threads must be >= 1");
}

RobustnessReport run_robustness(const CameraRig& rig, const BevGridSpec& grid,
                                const RobustnessConfig& config) {
    rig.validate();
    grid.validate();
    config.validate();

    RobustnessReport report;
    report.seed = config.seed;
    report.draws = config.draws;

    const int num_views = rig.num_views();
    const int num_scales = rig.num_scales();
    const int num_queries = grid.num_queries();
    const size_t triples = static_cast<size_t>(num_queries) * num_views * num_scales;

    // Undeviated priors, shared by every level and draw.
    std::vector<PixelCoord> base_coords(triples);
    std::vector<RoundedPixel> base_rounded(triples);
    std::vector<Vec3> centers(static_cast<size_t>(num_queries));
    for (int q = 0; q < num_queries; ++q) {
        centers[static_cast<size_t>(q)] = cell_center(grid, q / grid.cols, q % grid.cols);
    }
    for (int q = 0; q < num_queries; ++q) {
        for (int v = 0; v < num_views; ++v) {
            for (int s = 0; s < num_scales; ++s) {
                size_t i = (static_cast<size_t>(q) * num_views + v) * num_scales + s;
                base_coords[i] = project_point(centers[static_cast<size_t>(q)],
                                               rig.views[static_cast<size_t>(v)],
                                               rig.scale_strides[static_cast<size_t>(s)]);
                base_rounded[i] = round_pixel(base_coords[i]);
            }
        }
    }

    struct LevelAccumulator {
        int64_t denom = 0;     // undeviated prior valid
        int64_t unchanged = 0; // rounded prior identical and still valid
        std::vector<int64_t> covered; // per kernel
        double shift_sum = 0.0;
        int64_t shift_count = 0;
    };

    std::vector<RegionMask> masks;
    masks.reserve(config.kernels.size());
    for (const KernelSpec& k : config.kernels) masks.emplace_back(k);

    auto run_level = [&](char kind, double sigma) {
        DeviationConfig dev_config;
        dev_config.seed = config.seed;
        dev_config.sigma_t = kind == 't' ? sigma : 0.0;
        dev_config.sigma_r = kind == 'r' ? sigma : 0.0;

        LevelAccumulator acc;
        acc.covered.assign(config.kernels.size(), 0);
        for (int draw = 0; draw < config.draws; ++draw) {
            DeviationSample sample =
                sample_deviation(dev_config, num_views, static_cast<uint64_t>(draw));
            CameraRig moved = deviated_rig(rig, sample);
            for (int q = 0; q < num_queries; ++q) {
                for (int v = 0; v < num_views; ++v) {
                    for (int s = 0; s < num_scales; ++s) {
                        size_t i = (static_cast<size_t>(q) * num_views + v) * num_scales + s;
                        if (!base_coords[i].valid) continue;
                        ++acc.denom;
                        PixelCoord moved_coord =
                            project_point(centers[static_cast<size_t>(q)],
                                          moved.views[static_cast<size_t>(v)],
                                          moved.scale_strides[static_cast<size_t>(s)]);
                        if (!moved_coord.valid) continue;
                        RoundedPixel moved_rounded = round_pixel(moved_coord);
                        if (moved_rounded.row == base_rounded[i].row &&
                            moved_rounded.col == base_rounded[i].col) {
                            ++acc.unchanged;
                        }
                        int64_t d_row = base_rounded[i].row - moved_rounded.row;
                        int64_t d_col = base_rounded[i].col - moved_rounded.col;
                        for (size_t k = 0; k < masks.size(); ++k) {
                            if (masks[k].contains(d_row, d_col)) ++acc.covered[k];
                        }
                        acc.shift_sum += std::hypot(moved_coord.u - base_coords[i].u,
                                                    moved_coord.v - base_coords[i].v);
                        ++acc.shift_count;
                    }
                }
            }
        }
        for (size_t k = 0; k < config.kernels.size(); ++k) {
            DeviationLevelStats stats;
            stats.noise_kind = kind;
            stats.sigma = sigma;
            stats.kernel = config.kernels[k];
            stats.unchanged_prior_fraction =
                acc.denom ? static_cast<double>(acc.unchanged) / acc.denom : 0.0;
            stats.coverage_fraction =
                acc.denom ? static_cast<double>(acc.covered[k]) / acc.denom : 0.0;
            stats.mean_shift_px = acc.shift_count ? acc.shift_sum / acc.shift_count : 0.0;
            report.deviation.push_back(stats);
        }
    };

    for (double sigma : config.sigma_t_levels) run_level('t', sigma);
    for (double sigma : config.sigma_r_levels) run_level('r', sigma);

    if (!config.heights.empty()) {
        KernelSpec kernel = config.kernels.empty() ? KernelSpec{} : config.kernels.front();
        Lut baseline = build_lut(rig, grid, kernel, config.baseline_height, config.threads);
        for (double z : config.heights) {
            Lut shifted = build_lut(rig, grid, kernel, z, config.threads);
            int64_t equal = 0;
            for (size_t i = 0; i < baseline.indices.size(); ++i) {
                if (baseline.indices[i] == shifted.indices[i] &&
                    baseline.valid[i] == shifted.valid[i]) {
                    ++equal;
                }
            }
            HeightOverlapStats stats;
            stats.height_z = z;
            stats.lut_overlap_fraction = baseline.indices.empty()
                                             ? 0.0
                                             : static_cast<double>(equal) /
                                                   static_cast<double>(baseline.indices.size());
            report.heights.push_back(stats);
        }
    }
    return report;
}

namespace {

const char* kBenchHeader =
    "strategy,median_ms,min_ms,transforms_per_sec,equivalence_ok,first_difference,"
    "lut_build_ms,environment";
const char* kRobustnessHeader =
    "kind,noise,sigma,kernel,unchanged_prior_fraction,coverage_fraction,mean_shift_px,"
    "height_z,lut_overlap_fraction,seed,draws";

} // namespace

void write_bench_csv(const BenchReport& report, std::ostream& out) {
    out << kBenchHeader << "\n";
    for (const BenchRow& row : report.rows) {
        out << to_string(row.strategy) << "," << format_double(row.median_ms) << ","
            << format_double(row.min_ms) << "," << format_double(row.transforms_per_sec) << ","
            << (report.equivalence_ok ? 1 : 0) << "," << report.first_difference << ","
            << format_double(report.lut_build_ms) << "," << report.environment << "\n";
    }
}

BenchReport parse_bench_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kBenchHeader) {
        throw Error(ErrorKind::Config, "bench csv header mismatch");
    }
    BenchReport report;
    report.equivalence_ok = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 8) throw Error(ErrorKind::Config, "bench csv row needs 8 fields");
        BenchRow row;
        row.strategy = gather_strategy_from_string(fields[0]);
        row.median_ms = std::stod(fields[1]);
        row.min_ms = std::stod(fields[2]);
        row.transforms_per_sec = std::stod(fields[3]);
        report.equivalence_ok = fields[4] == "1";
        report.first_difference = std::stoll(fields[5]);
        report.lut_build_ms = std::stod(fields[6]);
        report.environment = fields[7];
        report.rows.push_back(row);
    }
    return report;
}

void write_robustness_csv(const RobustnessReport& report, std::ostream& out) {
    out << kRobustnessHeader << "\n";
    for (const DeviationLevelStats& s : report.deviation) {
        out << "deviation," << s.noise_kind << "," << format_double(s.sigma) << ","
            << format_kernel_spec(s.kernel) << "," << format_double(s.unchanged_prior_fraction)
            << "," << format_double(s.coverage_fraction) << ","
            << format_double(s.mean_shift_px) << ",,," << report.seed << "," << report.draws
            << "\n";
    }
    for (const HeightOverlapStats& s : report.heights) {
        out << "height,,,,,,," << format_double(s.height_z) << ","
            << format_double(s.lut_overlap_fraction) << "," << report.seed << ","
            << report.draws << "\n";
    }
}

RobustnessReport parse_robustness_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kRobustnessHeader) {
        throw Error(ErrorKind::Config, "robustness csv header mismatch");
    }
    RobustnessReport report;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 11) {
            throw Error(ErrorKind::Config, "robustness csv row needs 11 fields");
        }
        report.seed = std::stoull(fields[9]);
        report.draws = std::stoi(fields[10]);
        if (fields[0] == "deviation") {
            DeviationLevelStats s;
            s.noise_kind = fields[1].at(0);
            s.sigma = std::stod(fields[2]);
            s.kernel = parse_kernel_spec(fields[3]);
            s.unchanged_prior_fraction = std::stod(fields[4]);
            s.coverage_fraction = std::stod(fields[5]);
            s.mean_shift_px = std::stod(fields[6]);
            report.deviation.push_back(s);
        } else if (fields[0] == "height") {
            HeightOverlapStats s;
            s.height_z = std::stod(fields[7]);
            s.lut_overlap_fraction = std::stod(fields[8]);
            report.heights.push_back(s);
        } else {
            throw Error(ErrorKind::Config, "unknown robustness row kind '" + fields[0] + "'");
        }
    }
    return report;
}

namespace {

std::string twin_path(const std::string& csv_path) {
    if (csv_path.size() >= 4 && csv_path.substr(csv_path.size() - 4) == ".csv") {
        return csv_path.substr(0, csv_path.size() - 4) + ".txt";
    }
    return csv_path + ".txt";
}

template <typename Report, typename CsvWriter, typename TextWriter>
void emit_pair(const Report& report, const std::string& csv_path, CsvWriter write_csv,
               TextWriter write_text) {
    {
        std::ofstream out(csv_path);
        if (!out) throw Error(ErrorKind::Io, "cannot open '" + csv_path + "' for writing");
        write_csv(report, out);
        if (!out) throw Error(ErrorKind::Io, "failed writing '" + csv_path + "'");
    }
    std::string text = twin_path(csv_path);
    std::ofstream out(text);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + text + "' for writing");
    write_text(report, out);
    if (!out) throw Error(ErrorKind::Io, "failed writing '" + text + "'");
}

void write_bench_text(const BenchReport& report, std::ostream& out) {
    out << "gkt bench report (scope: 2D-to-BEV unfolding stage only)\n";
    out << "environment: " << report.environment << "\n";
    out << "equivalence: " << (report.equivalence_ok ? "ok (bit-identical outputs)" : "FAILED")
        << "\n";
    if (!report.equivalence_ok) {
        out << "first differing float index: " << report.first_difference << "\n";
    }
    out << "lut build (offline): " << format_double(report.lut_build_ms) << " ms\n";
    for (const BenchRow& row : report.rows) {
        out << "  " << to_string(row.strategy) << ": median " << format_double(row.median_ms)
            << " ms, min " << format_double(row.min_ms) << " ms, "
            << format_double(row.transforms_per_sec) << " transforms/s\n";
    }
}

void write_robustness_text(const RobustnessReport& report, std::ostream& out) {
    out << "gkt robustness report (seed " << report.seed << ", " << report.draws
        << " draws per level)\n";
    for (const DeviationLevelStats& s : report.deviation) {
        out << "  " << (s.noise_kind == 't' ? "translation" : "rotation") << " sigma "
            << format_double(s.sigma) << " kernel " << format_kernel_spec(s.kernel)
            << ": unchanged-prior " << format_double(s.unchanged_prior_fraction)
            << ", coverage " << format_double(s.coverage_fraction) << ", mean shift "
            << format_double(s.mean_shift_px) << " px\n";
    }
    for (const HeightOverlapStats& s : report.heights) {
        out << "  height z " << format_double(s.height_z) << ": lut overlap "
            << format_double(s.lut_overlap_fraction) << "\n";
    }
}

} // namespace

void emit_report(const BenchReport& report, const std::string& csv_path) {
    emit_pair(report, csv_path,
              [](const BenchReport& r, std::ostream& o) { write_bench_csv(r, o); },
              [](const BenchReport& r, std::ostream& o) { write_bench_text(r, o); });
}

void emit_report(const RobustnessReport& report, const std::string& csv_path) {
    emit_pair(report, csv_path,
              [](const RobustnessReport& r, std::ostream& o) { write_robustness_csv(r, o); },
              [](const RobustnessReport& r, std::ostream& o) { write_robustness_text(r, o); });
}

} // namespace gkt
