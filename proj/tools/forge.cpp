// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// forge: command-line front end.
//
//   forge generate     --config C --manifest M --out DIR [--threads N] [--seed S]
//   forge sample-poses [--config C] [-n N] [--hfov-deg D] [--seed S] [scene source]
//   forge eval         --pred DIR --gt DIR [--scale-sweep CMD] [--grid LIST]
//   forge oracle-check [--trials N] [--seed S]
//
// Exit status: 0 success, 1 a run-time failure (failed entries, metric
// mismatches, oracle disagreement), 2 usage or configuration errors.

#include "forge/forge.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage   = 2;

using forge::json;

struct GenerateArgs {
    std::string config_path;
    std::string manifest_path;
    std::string out_dir;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
};

int
resolve_threads(const std::optional<int> &flag, int from_config) {
    if (flag) {
        return *flag;
    }
    if (const char *env = std::getenv("FORGE_THREADS"); env && *env) {
        try {
            std::size_t used = 0;
            const int n      = std::stoi(env, &used);
            if (used == std::string(env).size() && n >= 1) {
                return n;
            }
        } catch (const std::exception &) {
        }
        throw forge::Error(forge::ErrorCode::InvalidConfig,
                           std::string("FORGE_THREADS must be a positive integer, got '") + env + "'");
    }
    return from_config;
}

int
run_generate(const GenerateArgs &args) {
    forge::RunConfig cfg;
    std::vector<forge::ManifestEntry> entries;
    int threads = 1;
    std::string out_dir;
    try {
        cfg = forge::load_run_config(args.config_path);
        if (args.seed) {
            cfg.seed = *args.seed;
        }
        threads = resolve_threads(args.threads, cfg.threads);
        out_dir = args.out_dir.empty() ? cfg.output_dir : args.out_dir;
        if (out_dir.empty()) {
            throw forge::Error(forge::ErrorCode::InvalidConfig,
                               "no output directory (pass --out or set output_dir)");
        }
        entries = forge::load_manifest(args.manifest_path);
    } catch (const forge::Error &e) {
        std::cerr << "forge generate: " << e.what() << "\n";
        return kExitUsage;
    }

    const auto summary = forge::generate(cfg, entries, out_dir, threads, &std::cerr);
    std::cerr << "forge generate: " << summary.views_written << " views from "
              << entries.size() - summary.failures.size() << "/" << entries.size()
              << " entries written to " << out_dir << "\n";
    return summary.ok() ? 0 : kExitFailure;
}

struct SampleArgs {
    std::string config_path;
    std::size_t n     = 1000;
    double hfov_deg   = 60.0;
    std::optional<std::uint64_t> seed;
    std::string scene = "slanted";
    int size          = 64;
    std::string depth_path;
    std::string normal_path;
};

forge::PointCloud
sample_source_cloud(const SampleArgs &args, double hfov) {
    using namespace forge::synthetic;
    if (!args.depth_path.empty()) {
        const auto depth   = forge::io::read_depth_pfm(args.depth_path);
        const auto normals = forge::io::read_normal_pfm(args.normal_path);
        const auto k       = forge::intrinsics_from_hfov(depth.width(), depth.height(), hfov);
        return forge::unproject(forge::RgbImage(depth.width(), depth.height()), depth, normals, k);
    }
    const auto k = forge::intrinsics_from_hfov(args.size, args.size, hfov);
    AnalyticScene scene;
    if (args.scene == "fronto") {
        scene.kind = FrontoPlane{2.0};
    } else if (args.scene == "sphere") {
        scene.kind = Sphere{{0.0, 0.0, 4.0}, 1.5};
    } else {
        const forge::Vec3 n{0.3, 0.2, -1.0};
        scene.kind = SlantedPlane{{0.0, 0.0, 3.0}, n / forge::norm(n)};
    }
    const auto real = realize(scene, k);
    return forge::unproject(real.image, real.depth, real.normals, k);
}

int
run_sample_poses(const SampleArgs &args) {
    forge::RunConfig cfg;
    forge::PointCloud cloud;
    double hfov = 0.0;
    try {
        if (!args.config_path.empty()) {
            cfg = forge::load_run_config(args.config_path);
        }
        if (args.seed) {
            cfg.seed = *args.seed;
        }
        if ((args.depth_path.empty()) != (args.normal_path.empty())) {
            throw forge::Error(forge::ErrorCode::InvalidConfig,
                               "--depth and --normals must be given together");
        }
        hfov  = forge::deg_to_rad(args.hfov_deg);
        cloud = sample_source_cloud(args, hfov);
    } catch (const forge::Error &e) {
        std::cerr << "forge sample-poses: " << e.what() << "\n";
        return kExitUsage;
    }
    const auto poses = forge::sample_poses(cloud, hfov, cfg.sampler, cfg.seed, args.n);
    for (std::size_t i = 0; i < poses.size(); ++i) {
        std::cout << forge::pose_record(i, poses[i]).dump() << "\n";
    }
    return 0;
}

struct EvalArgs {
    std::string pred_dir;
    std::string gt_dir;
    std::string sweep_command;
    std::vector<double> grid;
    std::string objective = "psnr";
    std::string work_dir;
};

json
frame_json(const forge::FrameScore &f) {
    return {{"frame", f.frame_id}, {"psnr", f.psnr}, {"ssim", f.ssim}};
}

int
run_eval(const EvalArgs &args) {
    forge::EvalResult result;
    try {
        if (args.sweep_command.empty()) {
            result = forge::evaluate_directories(args.pred_dir, args.gt_dir);
        } else {
            const auto grid = args.grid.empty() ? forge::default_scale_grid() : args.grid;
            const auto objective =
                args.objective == "ssim" ? forge::SweepObjective::Ssim : forge::SweepObjective::Psnr;
            const std::filesystem::path work =
                args.work_dir.empty()
                    ? std::filesystem::temp_directory_path() / "forge-eval-sweep"
                    : std::filesystem::path(args.work_dir);
            const auto sweep =
                forge::sweep_render_command(args.sweep_command, grid, args.gt_dir, work, objective);
            if (sweep.at_best.report.per_frame.empty()) {
                std::cerr << "forge eval: no scale produced comparable frames\n";
                return kExitFailure;
            }
            result = sweep.at_best;
        }
    } catch (const forge::Error &e) {
        std::cerr << "forge eval: " << e.what() << "\n";
        return kExitFailure;
    }
    for (const auto &f : result.report.per_frame) {
        std::cout << frame_json(f).dump() << "\n";
    }
    const json aggregate{{"aggregate", true},
                         {"frames", result.report.per_frame.size()},
                         {"psnr", result.report.psnr},
                         {"ssim", result.report.ssim},
                         {"best_scale", result.report.best_scale}};
    std::cout << aggregate.dump() << "\n";
    for (const auto &name : result.missing) {
        std::cerr << "forge eval: MissingCounterpart: " << name << "\n";
    }
    return result.missing.empty() ? 0 : kExitFailure;
}

int
run_oracle_check(std::uint64_t trials, std::uint64_t seed) {
    const auto mismatch = forge::synthetic::run_oracle_check(trials, seed);
    if (mismatch) {
        std::cerr << "forge oracle-check: mismatch at trial " << mismatch->trial << " (seed "
                  << mismatch->seed << "): " << mismatch->detail << "\n"
                  << "reproduce with: forge oracle-check --seed " << mismatch->seed
                  << " --trials " << mismatch->trial + 1 << "\n";
        return kExitFailure;
    }
    std::cout << "oracle-check: " << trials << " trials bit-identical (seed " << seed << ")\n";
    return 0;
}

} // namespace

int
main(int argc, char **argv) {
    CLI::App app{"Pseudo novel-view pair generation from single images with metric depth"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto *generate = app.add_subcommand("generate", "Render pseudo-target/mask/meta triples");
    generate->add_option("--config", gen.config_path, "Run configuration (JSON)")->required();
    generate->add_option("--manifest", gen.manifest_path, "Manifest (JSON lines)")->required();
    generate->add_option("--out", gen.out_dir, "Output directory");
    generate->add_option("--threads", gen.threads, "Worker threads (env FORGE_THREADS)")
        ->check(CLI::PositiveNumber);
    generate->add_option("--seed", gen.seed, "Override the configured seed");

    SampleArgs sample;
    auto *sample_cmd = app.add_subcommand("sample-poses", "Emit sampled relative poses as JSON lines");
    sample_cmd->add_option("--config", sample.config_path, "Run configuration (JSON)");
    sample_cmd->add_option("-n,--count", sample.n, "Number of poses")->check(CLI::PositiveNumber);
    sample_cmd->add_option("--hfov-deg", sample.hfov_deg, "Horizontal field of view, degrees")
        ->check(CLI::Range(0.0, 180.0));
    sample_cmd->add_option("--seed", sample.seed, "Override the configured seed");
    sample_cmd->add_option("--scene", sample.scene, "Synthetic scene for scene statistics")
        ->check(CLI::IsMember({"fronto", "slanted", "sphere"}));
    sample_cmd->add_option("--size", sample.size, "Synthetic scene side length, pixels")
        ->check(CLI::Range(1, 4096));
    sample_cmd->add_option("--depth", sample.depth_path, "Depth PFM to sample against");
    sample_cmd->add_option("--normals", sample.normal_path, "Normal PFM to sample against");

    EvalArgs eval;
    auto *eval_cmd = app.add_subcommand("eval", "PSNR/SSIM of predicted frames against references");
    eval_cmd->add_option("--pred", eval.pred_dir, "Predicted frames (PNG)")->required();
    eval_cmd->add_option("--gt", eval.gt_dir, "Reference frames (PNG)")->required();
    eval_cmd->add_option("--scale-sweep", eval.sweep_command,
                         "Render command run per scale; {scale} and {out} are substituted");
    eval_cmd->add_option("--grid", eval.grid, "Scales for the sweep")->delimiter(',');
    eval_cmd->add_option("--objective", eval.objective, "Sweep objective")
        ->check(CLI::IsMember({"psnr", "ssim"}));
    eval_cmd->add_option("--work-dir", eval.work_dir, "Scratch directory for sweep renders");

    std::uint64_t trials      = 200;
    std::uint64_t oracle_seed = 0;
    auto *oracle = app.add_subcommand("oracle-check", "Compare the renderer with the brute-force reference");
    oracle->add_option("--trials", trials, "Number of randomized trials")->check(CLI::PositiveNumber);
    oracle->add_option("--seed", oracle_seed, "Suite seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (*generate) {
            return run_generate(gen);
        }
        if (*sample_cmd) {
            return run_sample_poses(sample);
        }
        if (*eval_cmd) {
            return run_eval(eval);
        }
        if (*oracle) {
            return run_oracle_check(trials, oracle_seed);
        }
    } catch (const std::exception &e) {
        std::cerr << "forge: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
