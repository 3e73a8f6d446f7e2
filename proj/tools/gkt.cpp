// gkt: geometry-guided 2D-to-BEV transformation toolkit.
//
// Subcommands: gen-synthetic, build-lut, transform, bench, robustness,
// inspect. All randomness flows from explicit --seed flags; every output is
// byte-reproducible given the same arguments.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gkt/attention.hpp"
#include "gkt/bench.hpp"
#include "gkt/config.hpp"
#include "gkt/error.hpp"
#include "gkt/gather.hpp"
#include "gkt/io.hpp"
#include "gkt/lut.hpp"
#include "gkt/simd.hpp"
#include "gkt/synthetic.hpp"

namespace {

// Exit codes: 0 ok, 2 usage, 3 config error, 4 I/O or file-format error,
// 5 equivalence failure, 10 internal error.
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitIo = 4;
constexpr int kExitEquivalence = 5;
constexpr int kExitInternal = 10;

int exit_code_for(const gkt::Error& error) {
    switch (error.kind()) {
        case gkt::ErrorKind::Config:
        case gkt::ErrorKind::ShapeMismatch:
        case gkt::ErrorKind::OutOfRange:
        case gkt::ErrorKind::MemoryCap:
            return kExitConfig;
        case gkt::ErrorKind::Io:
        case gkt::ErrorKind::BadMagic:
        case gkt::ErrorKind::BadVersion:
        case gkt::ErrorKind::Truncated:
        case gkt::ErrorKind::Inconsistent:
            return kExitIo;
        case gkt::ErrorKind::Equivalence:
            return kExitEquivalence;
        case gkt::ErrorKind::Internal:
            return kExitInternal;
    }
    return kExitInternal;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        try {
            out.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw gkt::Error(gkt::ErrorKind::Config,
                             std::string(what) + ": '" + token + "' is not a number");
        }
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    for (double v : parse_double_list(text, what)) out.push_back(static_cast<int>(v));
    return out;
}

std::vector<gkt::KernelSpec> parse_kernel_list(const std::string& text) {
    std::vector<gkt::KernelSpec> out;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (!token.empty()) out.push_back(gkt::parse_kernel_spec(token));
    }
    return out;
}

struct CommonFlags {
    int threads = 1;
    std::string simd;

    void attach(CLI::App* cmd) {
        cmd->add_option("--threads", threads, "worker threads for parallel stages");
        cmd->add_option("--simd", simd, "force kernel ISA: scalar, avx2 or neon");
    }

    void apply() const {
        if (simd.empty()) return;
        if (simd == "scalar") gkt::simd::set_active(gkt::simd::IsaLevel::Scalar);
        else if (simd == "avx2") gkt::simd::set_active(gkt::simd::IsaLevel::Avx2);
        else if (simd == "neon") gkt::simd::set_active(gkt::simd::IsaLevel::Neon);
        else throw gkt::Error(gkt::ErrorKind::Config, "unknown --simd value '" + simd + "'");
    }
};

// Missing referenced inputs are a configuration problem: they are checked
// before any computation starts.
void require_readable(const std::string& path, const char* what) {
    std::ifstream probe(path);
    if (!probe) {
        throw gkt::Error(gkt::ErrorKind::Config,
                         std::string(what) + " '" + path + "' does not exist or is unreadable");
    }
}

// ---------------------------------------------------------------- commands

int cmd_gen_synthetic(const gkt::SyntheticSpec& spec, const std::string& strides,
                      const std::string& kernel, const std::string& out_rig,
                      const std::string& out_features, const CommonFlags& common) {
    common.apply();
    gkt::SyntheticSpec effective = spec;
    if (!strides.empty()) effective.scale_strides = parse_int_list(strides, "--strides");
    if (!kernel.empty()) {
        gkt::KernelSpec k = gkt::parse_kernel_spec(kernel);
        effective.k_h = k.k_h;
        effective.k_w = k.k_w;
    }
    gkt::SceneConfig scene = gkt::make_synthetic_scene(effective);
    if (!kernel.empty()) scene.kernel = gkt::parse_kernel_spec(kernel);
    gkt::save_scene_config(scene, out_rig);
    gkt::FeaturePyramid pyramid =
        gkt::make_synthetic_features(scene, effective.channels, effective.seed);
    gkt::save_features(pyramid, out_features);
    std::printf("wrote %s (%d views, %d scales) and %s (C=%d)\n", out_rig.c_str(),
                scene.rig.num_views(), scene.rig.num_scales(), out_features.c_str(),
                effective.channels);
    return 0;
}

int cmd_build_lut(const std::string& rig_path, const std::string& out_path,
                  std::optional<double> height_override, const std::string& kernel_override,
                  const CommonFlags& common) {
    common.apply();
    require_readable(rig_path, "rig config");
    gkt::SceneConfig scene = gkt::load_scene_config(rig_path);
    gkt::KernelSpec kernel =
        kernel_override.empty() ? scene.kernel : gkt::parse_kernel_spec(kernel_override);
    gkt::Lut lut = gkt::build_lut(scene.rig, scene.grid, kernel, height_override,
                                  common.threads);
    gkt::save_lut(lut, out_path);
    std::printf("wrote %s: %u queries x %u views x %u scales x %u positions, fingerprint %016llx\n",
                out_path.c_str(), lut.num_queries, lut.num_views, lut.num_scales,
                lut.positions_per_kernel, static_cast<unsigned long long>(lut.fingerprint));
    return 0;
}

struct TransformArgs {
    std::string rig_path;
    std::string features_path;
    std::string lut_path;
    std::string strategy = "lut";
    std::string weights_path;
    std::string out_path;
    std::string heatmap_path;
    int heatmap_query = -1;
    int d_model = 64;
    uint64_t weights_seed = 1;
    uint64_t query_seed = 2;
    bool mask_invalid = false;
    std::optional<double> height_override;
    size_t im2col_cap = size_t{2} * 1024 * 1024 * 1024;
};

int cmd_transform(const TransformArgs& args, const CommonFlags& common) {
    common.apply();
    require_readable(args.rig_path, "rig config");
    require_readable(args.features_path, "feature tensor");

    gkt::SceneConfig scene = gkt::load_scene_config(args.rig_path);
    gkt::FeaturePyramid pyramid = gkt::load_features(args.features_path);
    pyramid.validate_against(scene.rig);
    gkt::GatherStrategy strategy = gkt::gather_strategy_from_string(args.strategy);

    gkt::BevGridSpec grid = scene.grid;
    if (args.height_override) grid.height_z = *args.height_override;

    std::optional<gkt::Lut> lut;
    if (!args.lut_path.empty()) {
        require_readable(args.lut_path, "LUT");
        lut = gkt::load_lut(args.lut_path);
        uint64_t expected = gkt::input_fingerprint(scene.rig, grid, scene.kernel);
        if (lut->fingerprint != expected) {
            throw gkt::Error(gkt::ErrorKind::Inconsistent,
                             "LUT fingerprint does not match the rig/grid/kernel config");
        }
    }
    if (strategy == gkt::GatherStrategy::Lut && !lut) {
        throw gkt::Error(gkt::ErrorKind::Config, "--strategy lut requires --lut FILE");
    }
    if (args.mask_invalid && !lut) {
        throw gkt::Error(gkt::ErrorKind::Config, "--mask-invalid requires --lut FILE");
    }

    gkt::GatherOptions options;
    options.threads = common.threads;
    options.im2col_memory_cap_bytes = args.im2col_cap;

    gkt::UnfoldedFeatures unfolded;
    switch (strategy) {
        case gkt::GatherStrategy::Im2col:
            gkt::gather_im2col_into(unfolded, pyramid, scene.rig, grid, scene.kernel, options);
            break;
        case gkt::GatherStrategy::Sample:
            gkt::gather_sample_into(unfolded, pyramid, scene.rig, grid, scene.kernel, options);
            break;
        case gkt::GatherStrategy::Lut:
            gkt::gather_lut_into(unfolded, pyramid, *lut, options);
            break;
    }

    gkt::AttentionWeights weights =
        args.weights_path.empty()
            ? gkt::init_weights(pyramid.channels, args.d_model, args.weights_seed)
            : gkt::load_weights(args.weights_path);
    gkt::QueryEmbeddings queries =
        gkt::init_embeddings(grid.num_queries(), weights.d_model, args.query_seed);

    gkt::AttendOptions attend_options;
    attend_options.threads = common.threads;
    attend_options.mask_invalid = args.mask_invalid;
    if (args.mask_invalid) {
        attend_options.validity = std::span<const uint8_t>(lut->valid);
    }
    gkt::BevFeatureMap bev =
        gkt::attend(queries, unfolded, weights, grid.rows, grid.cols, attend_options);
    gkt::save_features(gkt::bev_as_pyramid(bev), args.out_path);
    std::printf("wrote %s: BEV tensor (%d, %d) d_model=%d via %s\n", args.out_path.c_str(),
                bev.rows * bev.cols, bev.d_model, bev.d_model, gkt::to_string(strategy));

    if (!args.heatmap_path.empty()) {
        int query = args.heatmap_query >= 0 ? args.heatmap_query : grid.num_queries() / 2;
        std::vector<float> alpha =
            gkt::attention_map(queries, unfolded, weights, query, attend_options);
        int rows = unfolded.num_views * unfolded.num_scales;
        gkt::write_pgm(args.heatmap_path, rows, unfolded.positions, alpha);
        std::printf("wrote %s: attention heatmap for query %d (%d x %d)\n",
                    args.heatmap_path.c_str(), query, rows, unfolded.positions);
    }
    return 0;
}

struct BenchArgs {
    gkt::SyntheticSpec instance;
    std::string strides;
    std::string kernel = "3x3";
    std::string strategies = "im2col,sample,lut";
    int warmup = 10;
    int iters = 200;
    int reps = 5;
    std::string out_csv;
};

int cmd_bench(const BenchArgs& args, const CommonFlags& common) {
    common.apply();
    gkt::BenchConfig config;
    config.instance = args.instance;
    if (!args.strides.empty()) {
        config.instance.scale_strides = parse_int_list(args.strides, "--strides");
    }
    config.kernel = gkt::parse_kernel_spec(args.kernel);
    config.instance.k_h = config.kernel.k_h;
    config.instance.k_w = config.kernel.k_w;
    config.strategies.clear();
    {
        std::stringstream in(args.strategies);
        std::string token;
        while (std::getline(in, token, ',')) {
            if (!token.empty()) config.strategies.push_back(gkt::gather_strategy_from_string(token));
        }
    }
    config.warmup_iters = args.warmup;
    config.measured_iters = args.iters;
    config.repetitions = args.reps;
    config.threads = common.threads;

    gkt::SceneConfig scene = gkt::make_synthetic_scene(config.instance);
    scene.kernel = config.kernel;
    gkt::FeaturePyramid pyramid =
        gkt::make_synthetic_features(scene, config.instance.channels, config.instance.seed);
    gkt::Lut lut = gkt::build_lut(scene.rig, scene.grid, config.kernel, std::nullopt,
                                  config.threads);

    gkt::BenchReport report = gkt::run_bench(config, pyramid, scene, lut);
    std::ostringstream text;
    gkt::write_bench_csv(report, text);
    std::fputs(text.str().c_str(), stdout);
    if (!args.out_csv.empty()) gkt::emit_report(report, args.out_csv);
    if (!report.equivalence_ok) {
        std::fprintf(stderr, "equivalence failure: first differing float index %lld\n",
                     static_cast<long long>(report.first_difference));
        return kExitEquivalence;
    }
    return 0;
}

struct RobustnessArgs {
    std::string rig_path;
    std::string sigma_t;
    std::string sigma_r;
    std::string kernels = "3x3,5x5,7x3";
    std::string heights;
    double baseline_height = 0.0;
    int draws = 1000;
    uint64_t seed = 0;
    std::string out_csv;
};

int cmd_robustness(const RobustnessArgs& args, const CommonFlags& common) {
    common.apply();
    require_readable(args.rig_path, "rig config");
    gkt::SceneConfig scene = gkt::load_scene_config(args.rig_path);

    gkt::RobustnessConfig config;
    config.sigma_t_levels = parse_double_list(args.sigma_t, "--sigma-t");
    config.sigma_r_levels = parse_double_list(args.sigma_r, "--sigma-r");
    config.kernels = parse_kernel_list(args.kernels);
    config.heights = parse_double_list(args.heights, "--heights");
    config.baseline_height = args.baseline_height;
    config.draws = args.draws;
    config.seed = args.seed;
    config.threads = common.threads;

    gkt::RobustnessReport report = gkt::run_robustness(scene.rig, scene.grid, config);
    std::ostringstream text;
    gkt::write_robustness_csv(report, text);
    std::fputs(text.str().c_str(), stdout);
    if (!args.out_csv.empty()) gkt::emit_report(report, args.out_csv);
    return 0;
}

int cmd_inspect(const std::string& path) {
    require_readable(path, "file");
    std::ifstream in(path, std::ios::binary);
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() != 4) throw gkt::Error(gkt::ErrorKind::Truncated, "file shorter than 4 bytes");
    in.seekg(0);
    std::string tag(magic, 4);
    if (tag == "GKTL") {
        gkt::Lut lut = gkt::deserialize_lut(in);
        std::printf("GKTL v%u: %u queries, %u views, %u scales, %u positions/kernel, "
                    "fingerprint %016llx\n",
                    gkt::kLutFormatVersion, lut.num_queries, lut.num_views, lut.num_scales,
                    lut.positions_per_kernel, static_cast<unsigned long long>(lut.fingerprint));
        for (size_t i = 0; i < lut.plane_heights.size(); ++i) {
            std::printf("  plane %zu: %u x %u\n", i, lut.plane_heights[i], lut.plane_widths[i]);
        }
    } else if (tag == "GKTF") {
        gkt::FeaturePyramid pyramid = gkt::deserialize_features(in);
        std::printf("GKTF v%u: %d views, %d scales, %d channels\n", gkt::kFeatureFormatVersion,
                    pyramid.num_views, pyramid.num_scales, pyramid.channels);
        for (const gkt::FeatureMap& m : pyramid.maps) {
            std::printf("  view %d scale %d: %d x %d\n", m.view, m.scale, m.height, m.width);
        }
    } else if (tag == "GKTW") {
        gkt::AttentionWeights weights = gkt::deserialize_weights(in);
        std::printf("GKTW v%u: channels=%d d_model=%d\n", gkt::kWeightsFormatVersion,
                    weights.channels, weights.d_model);
    } else {
        throw gkt::Error(gkt::ErrorKind::BadMagic, "unrecognized magic '" + tag + "'");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geometry-guided kernel-transformer 2D-to-BEV toolkit"};
    app.require_subcommand(1);

    CommonFlags common;

    // gen-synthetic
    auto* gen = app.add_subcommand("gen-synthetic", "emit a synthetic rig config and features");
    gkt::SyntheticSpec gen_spec;
    std::string gen_strides, gen_kernel;
    std::string gen_out_rig = "rig.cfg", gen_out_features = "features.gktf";
    gen->add_option("--views", gen_spec.views, "camera count");
    gen->add_option("--strides", gen_strides, "comma list of feature strides (default 8,16)");
    gen->add_option("--rows", gen_spec.grid_rows, "BEV grid rows");
    gen->add_option("--cols", gen_spec.grid_cols, "BEV grid cols");
    gen->add_option("--extent", gen_spec.extent, "half-extent of the BEV square in meters");
    gen->add_option("--height-z", gen_spec.height_z, "BEV plane height in meters");
    gen->add_option("--channels", gen_spec.channels, "feature channels");
    gen->add_option("--image-h", gen_spec.image_height, "full-resolution image height");
    gen->add_option("--image-w", gen_spec.image_width, "full-resolution image width");
    gen->add_option("--kernel", gen_kernel, "kernel spec, e.g. 3x3, 7x3:cross, 3x3:dilated:2");
    gen->add_option("--seed", gen_spec.seed, "feature RNG seed");
    gen->add_option("--out-rig", gen_out_rig, "output scene config path");
    gen->add_option("--out-features", gen_out_features, "output GKTF path");
    common.attach(gen);

    // build-lut
    auto* build = app.add_subcommand("build-lut", "precompute the query -> pixel index table");
    std::string build_rig, build_out = "table.gktl", build_kernel;
    double build_height = 0.0;
    bool build_has_height = false;
    build->add_option("--rig", build_rig, "scene config")->required();
    build->add_option("--out", build_out, "output GKTL path");
    build->add_option("--height-z", build_height, "override the BEV plane height")
        ->each([&](const std::string&) { build_has_height = true; });
    build->add_option("--kernel", build_kernel, "override the config's kernel spec");
    common.attach(build);

    // transform
    auto* transform = app.add_subcommand("transform", "unfold kernel features and attend");
    TransformArgs t_args;
    double t_height = 0.0;
    bool t_has_height = false;
    transform->add_option("--rig", t_args.rig_path, "scene config")->required();
    transform->add_option("--features", t_args.features_path, "GKTF feature tensor")->required();
    transform->add_option("--lut", t_args.lut_path, "GKTL table (required for --strategy lut)");
    transform->add_option("--strategy", t_args.strategy, "im2col, sample or lut");
    transform->add_option("--weights", t_args.weights_path, "GKTW weights (default: seeded init)");
    transform->add_option("--weights-seed", t_args.weights_seed, "weight init seed");
    transform->add_option("--query-seed", t_args.query_seed, "query embedding init seed");
    transform->add_option("--d-model", t_args.d_model, "model width for seeded init");
    transform->add_option("--out", t_args.out_path, "output BEV tensor (GKTF)")->required();
    transform->add_option("--heatmap", t_args.heatmap_path, "attention heatmap PGM path");
    transform->add_option("--heatmap-query", t_args.heatmap_query,
                          "query index for the heatmap (default: center)");
    transform->add_flag("--mask-invalid", t_args.mask_invalid,
                        "exclude LUT-invalid positions from the softmax");
    transform->add_option("--height-z", t_height, "override the BEV plane height")
        ->each([&](const std::string&) { t_has_height = true; });
    transform->add_option("--im2col-cap", t_args.im2col_cap,
                          "im2col materialization cap in bytes");
    common.attach(transform);

    // bench
    auto* bench = app.add_subcommand("bench", "time the unfolding strategies");
    BenchArgs b_args;
    bench->add_option("--views", b_args.instance.views, "camera count");
    bench->add_option("--strides", b_args.strides, "comma list of feature strides");
    bench->add_option("--rows", b_args.instance.grid_rows, "BEV grid rows");
    bench->add_option("--cols", b_args.instance.grid_cols, "BEV grid cols");
    bench->add_option("--channels", b_args.instance.channels, "feature channels");
    bench->add_option("--image-h", b_args.instance.image_height, "image height");
    bench->add_option("--image-w", b_args.instance.image_width, "image width");
    bench->add_option("--kernel", b_args.kernel, "kernel spec");
    bench->add_option("--strategies", b_args.strategies, "comma list to time");
    bench->add_option("--warmup", b_args.warmup, "warmup iterations");
    bench->add_option("--iters", b_args.iters, "measured iterations per repetition");
    bench->add_option("--reps", b_args.reps, "repetitions (median reported)");
    bench->add_option("--seed", b_args.instance.seed, "feature RNG seed");
    bench->add_option("--out", b_args.out_csv, "CSV report path (plus .txt twin)");
    common.attach(bench);

    // robustness
    auto* robust = app.add_subcommand("robustness", "deviation and height sweep statistics");
    RobustnessArgs r_args;
    robust->add_option("--rig", r_args.rig_path, "scene config")->required();
    robust->add_option("--sigma-t", r_args.sigma_t, "comma list of translation sigmas (m)");
    robust->add_option("--sigma-r", r_args.sigma_r, "comma list of rotation sigmas (rad)");
    robust->add_option("--kernels", r_args.kernels, "comma list of kernel specs");
    robust->add_option("--heights", r_args.heights, "comma list of BEV plane heights (m)");
    robust->add_option("--baseline-height", r_args.baseline_height,
                       "height the LUT-overlap column compares against");
    robust->add_option("--draws", r_args.draws, "deviation draws per level");
    robust->add_option("--seed", r_args.seed, "deviation RNG seed");
    robust->add_option("--out", r_args.out_csv, "CSV report path (plus .txt twin)");
    common.attach(robust);

    // inspect
    auto* inspect = app.add_subcommand("inspect", "print a GKTL/GKTF/GKTW header");
    std::string inspect_path;
    inspect->add_option("file", inspect_path, "binary file to inspect")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen_synthetic(gen_spec, gen_strides, gen_kernel, gen_out_rig,
                                     gen_out_features, common);
        }
        if (build->parsed()) {
            return cmd_build_lut(build_rig, build_out,
                                 build_has_height ? std::optional<double>(build_height)
                                                  : std::nullopt,
                                 build_kernel, common);
        }
        if (transform->parsed()) {
            if (t_has_height) t_args.height_override = t_height;
            return cmd_transform(t_args, common);
        }
        if (bench->parsed()) return cmd_bench(b_args, common);
        if (robust->parsed()) return cmd_robustness(r_args, common);
        if (inspect->parsed()) return cmd_inspect(inspect_path);
    } catch (const gkt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
