// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. Run a single criterion by passing its number.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gkt/attention.hpp"
#include "gkt/bench.hpp"
#include "gkt/config.hpp"
#include "gkt/deviation.hpp"
#include "gkt/error.hpp"
#include "gkt/gather.hpp"
#include "gkt/io.hpp"
#include "gkt/lut.hpp"
#include "gkt/synthetic.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace gkt;

namespace {

struct CheckFailure {
    std::string message;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw CheckFailure{message};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ------------------------------------------------------------ criterion 1

void criterion_strategy_equivalence() {
    std::mt19937_64 rng(1001);
    const std::vector<KernelSpec> kernel_pool = {
        {3, 3, KernelLayout::Full, 1},   {5, 5, KernelLayout::Full, 1},
        {7, 3, KernelLayout::Full, 1},   {3, 3, KernelLayout::Cross, 1},
        {3, 3, KernelLayout::Dilated, 2}};
    std::uniform_real_distribution<float> feature(-2.0f, 2.0f);

    for (int instance = 0; instance < 100; ++instance) {
        CameraRig rig;
        int views = 1 + static_cast<int>(rng() % 6);
        int scales = 1 + static_cast<int>(rng() % 2);
        for (int v = 0; v < views; ++v) {
            CameraView view = oracle::random_view(rng, 32);
            rig.views.push_back(view);
        }
        int stride = 2 + static_cast<int>(rng() % 3);
        for (int s = 0; s < scales; ++s) {
            rig.scale_strides.push_back(stride);
            stride += 2 + static_cast<int>(rng() % 3);
        }
        BevGridSpec grid = oracle::random_grid(rng, 25);
        KernelSpec kernel = kernel_pool[rng() % kernel_pool.size()];
        int channels = 1 + static_cast<int>(rng() % 128);

        FeaturePyramid pyramid;
        pyramid.num_views = views;
        pyramid.num_scales = scales;
        pyramid.channels = channels;
        for (int v = 0; v < views; ++v) {
            for (int s = 0; s < scales; ++s) {
                FeatureMap map;
                map.view = v;
                map.scale = s;
                map.channels = channels;
                map.height = rig.feature_height(v, s);
                map.width = rig.feature_width(v, s);
                map.data.resize(static_cast<size_t>(channels) * map.plane_size());
                for (float& f : map.data) f = feature(rng);
                pyramid.maps.push_back(std::move(map));
            }
        }

        Lut lut = build_lut(rig, grid, kernel);
        UnfoldedFeatures a = gather_im2col(pyramid, rig, grid, kernel);
        UnfoldedFeatures b = gather_sample(pyramid, rig, grid, kernel);
        UnfoldedFeatures c = gather_lut(pyramid, lut);
        require(b.bit_identical(a), "sample != im2col on instance " + std::to_string(instance));
        require(c.bit_identical(a), "lut != im2col on instance " + std::to_string(instance));
    }
}

// ------------------------------------------------------------ criterion 2

void criterion_projection_oracle() {
    std::mt19937_64 rng(1002);
    std::uniform_real_distribution<double> coord(-30.0, 30.0);
    std::uniform_int_distribution<int> stride_dist(1, 16);
    int invalid_seen = 0;
    for (int i = 0; i < 10000; ++i) {
        CameraView view = oracle::random_view(rng);
        Vec3 point{coord(rng), coord(rng), coord(rng)};
        int stride = stride_dist(rng);
        PixelCoord got = project_point(point, view, stride);
        oracle::ProjectedPixel expect = oracle::project(point, view, stride);
        require(got.valid == expect.valid, "validity mismatch at pair " + std::to_string(i));
        if (!got.valid) {
            ++invalid_seen;
            continue;
        }
        auto close = [](double a, double b) {
            return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
        };
        require(close(got.u, expect.u) && close(got.v, expect.v) &&
                    close(got.depth, expect.depth),
                "coordinate mismatch at pair " + std::to_string(i));
    }
    require(invalid_seen > 1000, "behind-camera points under-sampled");
}

// ------------------------------------------------------------ criterion 3

void criterion_benchmark_ordering() {
    BenchConfig config;
    config.instance.views = 6;
    config.instance.scale_strides = {8, 16};
    config.instance.grid_rows = 25;
    config.instance.grid_cols = 25;
    config.instance.channels = 128;
    config.instance.image_height = 112;
    config.instance.image_width = 240;
    config.kernel = KernelSpec{3, 3, KernelLayout::Full, 1};
    config.warmup_iters = 10;
    config.measured_iters = 200;
    config.repetitions = 5;

    SceneConfig scene = make_synthetic_scene(config.instance);
    scene.kernel = config.kernel;
    FeaturePyramid pyramid = make_synthetic_features(scene, 128, 2024);
    Lut lut = build_lut(scene.rig, scene.grid, config.kernel);

    BenchReport report = run_bench(config, pyramid, scene, lut);
    require(report.equivalence_ok, "equivalence gate failed");

    auto throughput = [&](GatherStrategy s) {
        for (const BenchRow& row : report.rows) {
            if (row.strategy == s) return row.transforms_per_sec;
        }
        throw CheckFailure{"missing strategy row"};
    };
    double lut_tps = throughput(GatherStrategy::Lut);
    double sample_tps = throughput(GatherStrategy::Sample);
    double im2col_tps = throughput(GatherStrategy::Im2col);
    std::ostringstream summary;
    summary << "im2col " << im2col_tps << " t/s, sample " << sample_tps << " t/s, lut "
            << lut_tps << " t/s";
    require(lut_tps >= sample_tps, "lut slower than sample: " + summary.str());
    require(lut_tps >= 1.05 * im2col_tps, "lut under 1.05x im2col: " + summary.str());
    std::cout << "    " << summary.str() << "\n";
}

// ------------------------------------------------------------ criterion 4

SceneConfig small_scene() {
    SyntheticSpec spec;
    spec.views = 6;
    spec.channels = 16;
    spec.image_height = 64;
    spec.image_width = 128;
    return make_synthetic_scene(spec);
}

std::vector<uint8_t> transform_bytes(const SceneConfig& scene, const FeaturePyramid& pyramid,
                                     const Lut& lut) {
    UnfoldedFeatures unfolded = gather_lut(pyramid, lut);
    QueryEmbeddings queries = init_embeddings(scene.grid.num_queries(), 16, 7);
    AttentionWeights weights = init_weights(pyramid.channels, 16, 8);
    BevFeatureMap bev = attend(queries, unfolded, weights, scene.grid.rows, scene.grid.cols);
    std::ostringstream out(std::ios::binary);
    serialize_features(bev_as_pyramid(bev), out);
    std::string s = out.str();
    return std::vector<uint8_t>(s.begin(), s.end());
}

void criterion_zero_noise_identity() {
    SceneConfig scene = small_scene();
    FeaturePyramid pyramid = make_synthetic_features(scene, 16, 5);

    DeviationSample zero = sample_deviation({0.0, 0.0, 99}, scene.rig.num_views(), 0);
    CameraRig deviated = deviated_rig(scene.rig, zero);

    Lut base = build_lut(scene.rig, scene.grid, scene.kernel);
    Lut moved = build_lut(deviated, scene.grid, scene.kernel);
    require(serialize_lut_bytes(base) == serialize_lut_bytes(moved),
            "zero-noise LUT differs from the undeviated build");
    require(transform_bytes(scene, pyramid, base) == transform_bytes(scene, pyramid, moved),
            "zero-noise transform output differs");
}

// ------------------------------------------------------------ criterion 5

void criterion_rounding_anti_noise() {
    SceneConfig scene = small_scene();
    FeaturePyramid pyramid = make_synthetic_features(scene, 16, 6);
    Lut base = build_lut(scene.rig, scene.grid, scene.kernel);

    // Constructed deviation: a uniform sub-millimeter translation, shrunk
    // until no query's projection crosses a half-integer boundary.
    double epsilon = 1e-4;
    for (int attempt = 0; attempt < 60; ++attempt) {
        DeviationSample sample;
        sample.views.resize(static_cast<size_t>(scene.rig.num_views()));
        for (ViewDeviation& d : sample.views) {
            d.dx = epsilon;
            d.dy = -epsilon;
            d.dz = epsilon;
        }
        CameraRig deviated = deviated_rig(scene.rig, sample);

        double max_shift = 0.0;
        bool crossed = false;
        for (int q = 0; q < scene.grid.num_queries() && !crossed; ++q) {
            Vec3 center = cell_center(scene.grid, q / scene.grid.cols, q % scene.grid.cols);
            for (int v = 0; v < scene.rig.num_views() && !crossed; ++v) {
                for (int s = 0; s < scene.rig.num_scales(); ++s) {
                    PixelCoord before = project_point(center, scene.rig.views[v],
                                                      scene.rig.scale_strides[s]);
                    PixelCoord after = project_point(center, deviated.views[v],
                                                     deviated.scale_strides[s]);
                    if (before.valid != after.valid) {
                        crossed = true;
                        break;
                    }
                    if (!before.valid) continue;
                    max_shift = std::max({max_shift, std::abs(after.u - before.u),
                                          std::abs(after.v - before.v)});
                    RoundedPixel rb = round_pixel(before);
                    RoundedPixel ra = round_pixel(after);
                    if (rb.row != ra.row || rb.col != ra.col) {
                        crossed = true;
                        break;
                    }
                }
            }
        }
        if (crossed || max_shift >= 0.5) {
            epsilon /= 4.0;
            continue;
        }
        require(max_shift > 0.0, "constructed deviation moved nothing");
        Lut moved = build_lut(deviated, scene.grid, scene.kernel);
        // The fingerprint hashes the rig and so differs for any nonzero
        // deviation; the anti-noise property is about the correspondence.
        // Everything else in the stream must match byte for byte.
        Lut base_content = base;
        Lut moved_content = moved;
        base_content.fingerprint = 0;
        moved_content.fingerprint = 0;
        require(serialize_lut_bytes(base_content) == serialize_lut_bytes(moved_content),
                "sub-half-pixel deviation changed the LUT entries");
        require(transform_bytes(scene, pyramid, base) ==
                    transform_bytes(scene, pyramid, moved),
                "sub-half-pixel deviation changed the transform output");
        return;
    }
    throw CheckFailure{"could not construct a non-crossing deviation"};
}

// ------------------------------------------------------------ criterion 6

void criterion_kernel_coverage_monotonicity() {
    SceneConfig scene = small_scene();
    RobustnessConfig config;
    config.sigma_t_levels = {0.05, 0.1, 0.5, 1.0};
    config.sigma_r_levels = {0.005, 0.01, 0.02, 0.05};
    config.kernels = {KernelSpec{3, 3, KernelLayout::Full, 1},
                      KernelSpec{5, 5, KernelLayout::Full, 1},
                      KernelSpec{7, 3, KernelLayout::Full, 1}};
    config.draws = 1000;
    config.seed = 31337;

    RobustnessReport report = run_robustness(scene.rig, scene.grid, config);
    require(report.deviation.size() == 8 * 3, "unexpected report shape");
    for (size_t level = 0; level < 8; ++level) {
        const DeviationLevelStats& k3 = report.deviation[level * 3 + 0];
        const DeviationLevelStats& k5 = report.deviation[level * 3 + 1];
        const DeviationLevelStats& k73 = report.deviation[level * 3 + 2];
        std::ostringstream tag;
        tag << k3.noise_kind << "=" << k3.sigma;
        require(k5.coverage_fraction >= k3.coverage_fraction,
                "coverage(5x5) < coverage(3x3) at " + tag.str());
        require(k73.coverage_fraction >= k3.coverage_fraction,
                "coverage(7x3) < coverage(3x3) at " + tag.str());
    }
}

// ------------------------------------------------------------ criterion 7

void criterion_attention_properties() {
    std::mt19937_64 rng(1007);
    std::uniform_real_distribution<float> feature(-1.5f, 1.5f);
    for (int trial = 0; trial < 20; ++trial) {
        int queries = 1 + static_cast<int>(rng() % 8);
        int views = 1 + static_cast<int>(rng() % 2);
        int scales = 1 + static_cast<int>(rng() % 2);
        int channels = 1 + static_cast<int>(rng() % 6);
        int positions = 1 + static_cast<int>(rng() % (16 / (views * scales)));
        int d = 2 + static_cast<int>(rng() % 7);
        int total = views * scales * positions;

        UnfoldedFeatures u;
        u.num_queries = queries;
        u.num_views = views;
        u.num_scales = scales;
        u.channels = channels;
        u.positions = positions;
        u.data.resize(static_cast<size_t>(queries) * u.block_size());
        for (float& f : u.data) f = feature(rng);

        QueryEmbeddings q = init_embeddings(queries, d, rng());
        AttentionWeights w = init_weights(channels, d, rng());
        BevFeatureMap bev = attend(q, u, w, 1, queries);

        for (int query = 0; query < queries; ++query) {
            std::vector<float> alpha = attention_map(q, u, w, query);
            double sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
            require(std::abs(sum - 1.0) < 1e-6, "softmax sum off by " + std::to_string(sum - 1.0));

            std::vector<double> alpha_oracle;
            std::vector<double> expect = oracle::attend_query(q, u, w, query, &alpha_oracle);
            for (int m = 0; m < d; ++m) {
                double got = bev.data[static_cast<size_t>(query) * d + m];
                require(std::abs(got - expect[static_cast<size_t>(m)]) <=
                            1e-5 * std::max(1.0, std::abs(expect[static_cast<size_t>(m)])),
                        "oracle mismatch");
            }
            for (int j = 0; j < total; ++j) {
                require(std::abs(alpha[static_cast<size_t>(j)] -
                                 alpha_oracle[static_cast<size_t>(j)]) <= 1e-5,
                        "alpha oracle mismatch");
            }
        }

        // permute the flattened position set of query 0
        std::vector<int> perm(static_cast<size_t>(total));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        UnfoldedFeatures shuffled = u;
        const float* src = u.block(0);
        float* dst = shuffled.block(0);
        for (int j = 0; j < total; ++j) {
            int jp = perm[static_cast<size_t>(j)];
            for (int c = 0; c < channels; ++c) {
                dst[(static_cast<size_t>(jp / positions) * channels + c) * positions +
                    jp % positions] =
                    src[(static_cast<size_t>(j / positions) * channels + c) * positions +
                        j % positions];
            }
        }
        BevFeatureMap permuted = attend(q, shuffled, w, 1, queries);
        for (int m = 0; m < d; ++m) {
            double a = permuted.data[static_cast<size_t>(m)];
            double b = bev.data[static_cast<size_t>(m)];
            require(std::abs(a - b) <= 1e-5 * std::max(1.0, std::abs(b)),
                    "permutation changed the output");
        }
    }
}

// ------------------------------------------------------------ criterion 8

void criterion_sampler_statistics() {
    auto empirical_std = [](double sigma_t, double sigma_r, bool translations) {
        DeviationConfig config{sigma_t, sigma_r, 777};
        double sum = 0.0, sumsq = 0.0;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            DeviationSample s = sample_deviation(config, 1, static_cast<uint64_t>(i));
            const ViewDeviation& d = s.views[0];
            double values[3];
            if (translations) {
                values[0] = d.dx;
                values[1] = d.dy;
                values[2] = d.dz;
            } else {
                values[0] = d.theta_x;
                values[1] = d.theta_y;
                values[2] = d.theta_z;
            }
            for (double v : values) {
                sum += v;
                sumsq += v * v;
            }
        }
        double n = 3.0 * draws;
        return std::sqrt(sumsq / n - (sum / n) * (sum / n));
    };

    double std_t = empirical_std(0.5, 0.0, true);
    require(std_t >= 0.49 && std_t <= 0.51,
            "translation std " + std::to_string(std_t) + " outside [0.49, 0.51]");
    double std_r = empirical_std(0.0, 0.02, false);
    require(std_r >= 0.0196 && std_r <= 0.0204,
            "rotation std " + std::to_string(std_r) + " outside the scaled band");
}

// ------------------------------------------------------------ criterion 9

void criterion_serialization() {
    std::mt19937_64 rng(1009);

    // GKTL
    Lut lut = build_lut(oracle::random_rig(rng), oracle::random_grid(rng, 8),
                        oracle::random_kernel(rng));
    std::vector<uint8_t> lut_bytes = serialize_lut_bytes(lut);
    require(deserialize_lut_bytes(lut_bytes) == lut, "LUT round-trip differs");
    require(serialize_lut_bytes(deserialize_lut_bytes(lut_bytes)) == lut_bytes,
            "LUT re-serialization differs");

    auto expect_kind = [](std::function<void()> fn, ErrorKind kind, const char* what) {
        try {
            fn();
        } catch (const Error& e) {
            require(e.kind() == kind,
                    std::string(what) + ": got '" + to_string(e.kind()) + "'");
            return;
        }
        throw CheckFailure{std::string(what) + ": no error raised"};
    };

    std::vector<uint8_t> bad = lut_bytes;
    bad[0] = 'x';
    expect_kind([&] { deserialize_lut_bytes(bad); }, ErrorKind::BadMagic, "LUT magic");
    bad = lut_bytes;
    bad[5] = 9;
    expect_kind([&] { deserialize_lut_bytes(bad); }, ErrorKind::BadVersion, "LUT version");
    bad.assign(lut_bytes.begin(), lut_bytes.end() - 3);
    expect_kind([&] { deserialize_lut_bytes(bad); }, ErrorKind::Truncated, "LUT truncation");

    // GKTF
    CameraRig rig = oracle::random_rig(rng, 3, 2);
    FeaturePyramid pyramid = oracle::random_pyramid(rng, rig);
    std::ostringstream fo(std::ios::binary);
    serialize_features(pyramid, fo);
    std::string f_bytes = fo.str();
    {
        std::istringstream in(f_bytes, std::ios::binary);
        FeaturePyramid back = deserialize_features(in);
        std::ostringstream out2(std::ios::binary);
        serialize_features(back, out2);
        require(out2.str() == f_bytes, "feature round-trip differs");
    }
    expect_kind(
        [&] {
            std::string b = f_bytes;
            b[1] = 'q';
            std::istringstream in(b, std::ios::binary);
            deserialize_features(in);
        },
        ErrorKind::BadMagic, "feature magic");
    expect_kind(
        [&] {
            std::istringstream in(f_bytes.substr(0, f_bytes.size() / 2), std::ios::binary);
            deserialize_features(in);
        },
        ErrorKind::Truncated, "feature truncation");

    // GKTW
    AttentionWeights weights = init_weights(9, 12, 4);
    std::ostringstream wo(std::ios::binary);
    serialize_weights(weights, wo);
    std::string w_bytes = wo.str();
    {
        std::istringstream in(w_bytes, std::ios::binary);
        AttentionWeights back = deserialize_weights(in);
        std::ostringstream out2(std::ios::binary);
        serialize_weights(back, out2);
        require(out2.str() == w_bytes, "weights round-trip differs");
    }
    expect_kind(
        [&] {
            std::string b = w_bytes;
            b[4] = '\x2a';
            std::istringstream in(b, std::ios::binary);
            deserialize_weights(in);
        },
        ErrorKind::BadVersion, "weights version");
    expect_kind(
        [&] {
            std::istringstream in(w_bytes.substr(0, w_bytes.size() - 1), std::ios::binary);
            deserialize_weights(in);
        },
        ErrorKind::Truncated, "weights truncation");
}

// ----------------------------------------------------------- criterion 10

std::string g_self_path; // argv[0], for locating the gkt binary without env

std::string find_cli() {
    if (const char* env = std::getenv("GKT_CLI")) return env;
    std::error_code ec;
    fs::path self = fs::canonical(g_self_path, ec);
    if (!ec) {
        fs::path guess = self.parent_path().parent_path() / "tools" / "gkt";
        if (fs::exists(guess)) return guess.string();
    }
    throw CheckFailure{"set GKT_CLI to the gkt binary path"};
}

void criterion_end_to_end_determinism() {
    std::string cli = find_cli();

    fs::path dir = fs::temp_directory_path() / "gkt_acceptance_e2e";
    fs::remove_all(dir);
    fs::create_directories(dir);

    auto slurp = [](const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        require(in.good(), "missing output " + path.string());
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };

    auto pipeline = [&](const std::string& tag) {
        fs::path rig = dir / ("rig" + tag + ".cfg");
        fs::path features = dir / ("features" + tag + ".gktf");
        fs::path lut = dir / ("table" + tag + ".gktl");
        fs::path bev = dir / ("bev" + tag + ".gktf");
        const std::string& base = cli;
        auto run = [&](const std::string& args) {
            int status = std::system((base + " " + args + " >/dev/null 2>&1").c_str());
            require(status != -1 && WEXITSTATUS(status) == 0, "cli step failed: " + args);
        };
        run("gen-synthetic --views 6 --rows 25 --cols 25 --channels 32 --image-h 64 "
            "--image-w 128 --seed 12 --out-rig " + rig.string() + " --out-features " +
            features.string());
        run("build-lut --rig " + rig.string() + " --out " + lut.string());
        run("transform --rig " + rig.string() + " --features " + features.string() + " --lut " +
            lut.string() + " --strategy lut --d-model 16 --weights-seed 5 --query-seed 6 "
            "--out " + bev.string());
        return std::make_tuple(slurp(rig), slurp(features), slurp(lut), slurp(bev));
    };

    auto first = pipeline("_run1");
    auto second = pipeline("_run2");
    require(std::get<0>(first) == std::get<0>(second), "rig config differs across runs");
    require(std::get<1>(first) == std::get<1>(second), "features differ across runs");
    require(std::get<2>(first) == std::get<2>(second), "LUT differs across runs");
    require(std::get<3>(first) == std::get<3>(second), "BEV tensor differs across runs");

    // shape: (625, d_model)
    std::istringstream in(std::get<3>(first), std::ios::binary);
    FeaturePyramid bev = deserialize_features(in);
    require(bev.maps.size() == 1, "BEV tensor is not a single map");
    require(bev.maps[0].height * bev.maps[0].width == 625, "BEV tensor is not 625 queries");
    require(bev.channels == 16, "BEV tensor d_model mismatch");
    fs::remove_all(dir);
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void()> run;
};

} // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria = {
        {1, "strategy equivalence on randomized instances", 60, criterion_strategy_equivalence},
        {2, "projection matches the brute-force oracle", 5, criterion_projection_oracle},
        {3, "benchmark ordering lut >= sample, lut >= 1.05x im2col", 120,
         criterion_benchmark_ordering},
        {4, "zero-noise deviation is a byte-identical no-op", 5, criterion_zero_noise_identity},
        {5, "sub-half-pixel deviation rounds away", 10, criterion_rounding_anti_noise},
        {6, "kernel coverage is monotone in kernel size", 60,
         criterion_kernel_coverage_monotonicity},
        {7, "attention normalization, permutation, oracle", 10, criterion_attention_properties},
        {8, "deviation sampler statistics", 5, criterion_sampler_statistics},
        {9, "serialization round-trips and error kinds", 5, criterion_serialization},
        {10, "end-to-end determinism through the CLI", 30, criterion_end_to_end_determinism},
    };

    g_self_path = argv[0];
    int only = argc > 1 ? std::atoi(argv[1]) : 0;
    int failures = 0;
    for (const Criterion& criterion : criteria) {
        if (only != 0 && criterion.id != only) continue;
        auto start = std::chrono::steady_clock::now();
        std::string failure;
        try {
            criterion.run();
        } catch (const CheckFailure& f) {
            failure = f.message;
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        double elapsed = seconds_since(start);
        if (failure.empty() && elapsed > criterion.budget_seconds) {
            failure = "runtime " + std::to_string(elapsed) + " s exceeds budget of " +
                      std::to_string(criterion.budget_seconds) + " s";
        }
        if (failure.empty()) {
            std::printf("[PASS] criterion %2d: %s (%.1f s)\n", criterion.id, criterion.name,
                        elapsed);
        } else {
            std::printf("[FAIL] criterion %2d: %s (%.1f s)\n       %s\n", criterion.id,
                        criterion.name, elapsed, failure.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criteria failed\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
