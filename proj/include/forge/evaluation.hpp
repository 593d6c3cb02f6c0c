// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// Directory-level evaluation: pairs frames by filename, scores them with
// PSNR/SSIM, and optionally sweeps a pose scale through an external renderer.

#pragma once

#include "forge/error.hpp"
#include "forge/io/png.hpp"
#include "forge/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace forge {

struct EvalResult {
    MetricReport report;
    std::vector<std::string> missing; ///< frames present on only one side
};

inline std::set<std::string>
list_png_frames(const std::filesystem::path &dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw Error(ErrorCode::Io, dir.string() + " is not a directory");
    }
    std::set<std::string> names;
    for (const auto &e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".png") {
            names.insert(e.path().filename().string());
        }
    }
    return names;
}

/// Scores every filename present in both directories. Frames found on only
/// one side are listed in `missing` and excluded from the aggregates.
inline EvalResult
evaluate_directories(const std::filesystem::path &pred_dir, const std::filesystem::path &gt_dir) {
    const auto gt   = list_png_frames(gt_dir);
    const auto pred = list_png_frames(pred_dir);
    if (gt.empty()) {
        throw Error(ErrorCode::Io, "no PNG frames in " + gt_dir.string());
    }
    EvalResult result;
    std::vector<FrameScore> frames;
    for (const auto &name : gt) {
        if (!pred.count(name)) {
            result.missing.push_back(name);
            continue;
        }
        const RgbImage a = io::read_rgb_png((pred_dir / name).string());
        const RgbImage b = io::read_rgb_png((gt_dir / name).string());
        frames.push_back({name, psnr(a, b, 1.0), ssim(a, b)});
    }
    for (const auto &name : pred) {
        if (!gt.count(name)) {
            result.missing.push_back(name);
        }
    }
    std::sort(result.missing.begin(), result.missing.end());
    result.report = summarize(std::move(frames));
    return result;
}

enum class SweepObjective { Psnr, Ssim };

inline std::string
substitute(std::string text, const std::string &key, const std::string &value) {
    for (std::size_t pos = text.find(key); pos != std::string::npos;
         pos             = text.find(key, pos + value.size())) {
        text.replace(pos, key.size(), value);
    }
    return text;
}

struct CommandSweep {
    SweepResult sweep;
    EvalResult at_best;
};

/// For each scale, runs `command_template` with "{scale}" and "{out}"
/// substituted (out is a fresh directory under work_dir), evaluates the
/// rendered frames against gt_dir and keeps the best-scoring scale. A scale
/// whose command fails or produces no comparable frame scores NaN and cannot
/// win.
inline CommandSweep
sweep_render_command(const std::string &command_template, const std::vector<double> &grid,
                     const std::filesystem::path &gt_dir, const std::filesystem::path &work_dir,
                     SweepObjective objective = SweepObjective::Psnr) {
    std::map<double, EvalResult> results;
    std::size_t counter = 0;
    auto evaluate       = [&](double scale) {
        const auto out = work_dir / ("scale_" + std::to_string(counter++));
        std::filesystem::create_directories(out);
        char scale_text[64];
        std::snprintf(scale_text, sizeof(scale_text), "%.17g", scale);
        std::string cmd = substitute(command_template, "{scale}", scale_text);
        cmd             = substitute(cmd, "{out}", out.string());
        if (std::system(cmd.c_str()) != 0) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        try {
            EvalResult r = evaluate_directories(out, gt_dir);
            if (r.report.per_frame.empty()) {
                return std::numeric_limits<double>::quiet_NaN();
            }
            const double score =
                objective == SweepObjective::Psnr ? r.report.psnr : r.report.ssim;
            results[scale] = std::move(r);
            return score;
        } catch (const Error &) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    CommandSweep out;
    out.sweep = scale_sweep(evaluate, grid);
    if (auto it = results.find(out.sweep.best_scale); it != results.end()) {
        out.at_best                   = it->second;
        out.at_best.report.best_scale = out.sweep.best_scale;
    }
    return out;
}

} // namespace forge
