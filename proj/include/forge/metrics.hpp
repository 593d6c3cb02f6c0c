// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "forge/error.hpp"
#include "forge/raster.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace forge {

inline constexpr double kPsnrCapDb = 99.0;

/// Peak signal-to-noise ratio over all channels. Zero MSE (and anything above
/// the cap) reports kPsnrCapDb.
template <typename Raster>
double
psnr(const Raster &a, const Raster &b, double max_val = 1.0) {
    require_same_extent(a, b, "psnr");
    if (!(max_val > 0.0)) {
        throw Error(ErrorCode::InvalidRange, "psnr max_val must be positive");
    }
    const auto va = a.values();
    const auto vb = b.values();
    if (va.empty()) {
        throw Error(ErrorCode::TooSmall, "psnr of an empty image");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const double d = static_cast<double>(va[i]) - static_cast<double>(vb[i]);
        sum += d * d;
    }
    const double mse = sum / static_cast<double>(va.size());
    if (mse == 0.0) {
        return kPsnrCapDb;
    }
    return std::min(kPsnrCapDb, 10.0 * std::log10(max_val * max_val / mse));
}

struct SsimParams {
    int window     = 11;
    double sigma   = 1.5;
    double k1      = 0.01;
    double k2      = 0.03;
    double range   = 1.0;
};

/// Normalized 1D Gaussian taps; the 2D window is their outer product.
inline std::vector<double>
gaussian_taps(int size, double sigma) {
    std::vector<double> taps(size);
    const double center = (size - 1) / 2.0;
    double total        = 0.0;
    for (int i = 0; i < size; ++i) {
        const double x = i - center;
        taps[i]        = std::exp(-(x * x) / (2.0 * sigma * sigma));
        total += taps[i];
    }
    for (double &t : taps) {
        t /= total;
    }
    return taps;
}

namespace detail {

/// Separable 'valid' Gaussian filtering of one channel: output is
/// (h - w + 1) x (w_img - w + 1).
inline std::vector<double>
filter_valid(const std::vector<double> &plane, int width, int height,
             const std::vector<double> &taps) {
    const int w  = static_cast<int>(taps.size());
    const int ow = width - w + 1;
    const int oh = height - w + 1;
    std::vector<double> horiz(static_cast<std::size_t>(height) * ow);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int k = 0; k < w; ++k) {
                acc += taps[k] * plane[static_cast<std::size_t>(r) * width + c + k];
            }
            horiz[static_cast<std::size_t>(r) * ow + c] = acc;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(oh) * ow);
    for (int r = 0; r < oh; ++r) {
        for (int c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int k = 0; k < w; ++k) {
                acc += taps[k] * horiz[static_cast<std::size_t>(r + k) * ow + c];
            }
            out[static_cast<std::size_t>(r) * ow + c] = acc;
        }
    }
    return out;
}

} // namespace detail

/// Mean structural similarity over all fully contained Gaussian windows,
/// computed per channel and averaged across channels.
template <typename Raster>
double
ssim(const Raster &a, const Raster &b, const SsimParams &params = {}) {
    require_same_extent(a, b, "ssim");
    const int width  = a.width();
    const int height = a.height();
    if (width < params.window || height < params.window) {
        throw Error(ErrorCode::TooSmall, "image smaller than the SSIM window");
    }
    const auto taps = gaussian_taps(params.window, params.sigma);
    const double c1 = (params.k1 * params.range) * (params.k1 * params.range);
    const double c2 = (params.k2 * params.range) * (params.k2 * params.range);
    constexpr int channels = Raster::kChannels;

    const std::size_t n = static_cast<std::size_t>(width) * height;
    double channel_sum  = 0.0;
    for (int ch = 0; ch < channels; ++ch) {
        std::vector<double> pa(n), pb(n), paa(n), pbb(n), pab(n);
        for (int r = 0; r < height; ++r) {
            for (int c = 0; c < width; ++c) {
                const std::size_t i = static_cast<std::size_t>(r) * width + c;
                pa[i]               = static_cast<double>(a(r, c, ch));
                pb[i]               = static_cast<double>(b(r, c, ch));
                paa[i]              = pa[i] * pa[i];
                pbb[i]              = pb[i] * pb[i];
                pab[i]              = pa[i] * pb[i];
            }
        }
        const auto mu_a  = detail::filter_valid(pa, width, height, taps);
        const auto mu_b  = detail::filter_valid(pb, width, height, taps);
        const auto e_aa  = detail::filter_valid(paa, width, height, taps);
        const auto e_bb  = detail::filter_valid(pbb, width, height, taps);
        const auto e_ab  = detail::filter_valid(pab, width, height, taps);
        double total     = 0.0;
        for (std::size_t i = 0; i < mu_a.size(); ++i) {
            const double var_a  = e_aa[i] - mu_a[i] * mu_a[i];
            const double var_b  = e_bb[i] - mu_b[i] * mu_b[i];
            const double cov    = e_ab[i] - mu_a[i] * mu_b[i];
            const double num    = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
            const double den    = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (var_a + var_b + c2);
            total += num / den;
        }
        channel_sum += total / static_cast<double>(mu_a.size());
    }
    return channel_sum / channels;
}

struct FrameScore {
    std::string frame_id;
    double psnr = 0.0;
    double ssim = 0.0;
};

struct MetricReport {
    double psnr       = 0.0;
    double ssim       = 0.0;
    double best_scale = 1.0;
    std::vector<FrameScore> per_frame;
};

/// Aggregates are plain means of the per-frame entries.
inline MetricReport
summarize(std::vector<FrameScore> frames, double best_scale = 1.0) {
    MetricReport report;
    report.best_scale = best_scale;
    for (const auto &f : frames) {
        report.psnr += f.psnr;
        report.ssim += f.ssim;
    }
    if (!frames.empty()) {
        report.psnr /= static_cast<double>(frames.size());
        report.ssim /= static_cast<double>(frames.size());
    }
    report.per_frame = std::move(frames);
    return report;
}

struct SweepResult {
    double best_scale = 1.0;
    double best_score = 0.0;
};

/// Grid argmax of `evaluate`. Among equal scores the smallest scale wins; NaN
/// scores never win.
inline SweepResult
scale_sweep(const std::function<double(double)> &evaluate, const std::vector<double> &grid) {
    if (grid.empty()) {
        throw Error(ErrorCode::EmptyGrid, "scale sweep needs at least one scale");
    }
    SweepResult best{grid.front(), -std::numeric_limits<double>::infinity()};
    bool found = false;
    for (double scale : grid) {
        const double score = evaluate(scale);
        if (std::isnan(score)) {
            continue;
        }
        if (!found || score > best.best_score ||
            (score == best.best_score && scale < best.best_scale)) {
            best  = {scale, score};
            found = true;
        }
    }
    if (!found) {
        best.best_score = std::numeric_limits<double>::quiet_NaN();
    }
    return best;
}

/// `count` geometrically spaced scales from lo to hi inclusive.
inline std::vector<double>
geometric_grid(double lo, double hi, int count) {
    if (!(lo > 0.0 && lo <= hi) || count < 1) {
        throw Error(ErrorCode::InvalidRange, "geometric grid needs 0 < lo <= hi and count >= 1");
    }
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i) {
        grid[i] = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    }
    return grid;
}

/// 25 scales from 0.25 to 4, with 1.0 exactly at the middle.
inline std::vector<double>
default_scale_grid() {
    return geometric_grid(0.25, 4.0, 25);
}

} // namespace forge
