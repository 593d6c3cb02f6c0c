// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// Masked reconstruction losses and the masked feature-cosine loss.
//
// All reconstruction variants share one normalization: the per-element penalty
// is summed over the three channels of every mask-on pixel and divided by
// 3 * (mask-on pixel count) + epsilon, so a full mask gives the element mean.
// Mask-off pixels are never read.

#pragma once

#include "forge/error.hpp"
#include "forge/raster.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <vector>

namespace forge {

inline constexpr double kDefaultLossEpsilon = 1e-6;
inline constexpr double kDefaultCharbonnierEpsilon = 1e-3;

struct MaskedImagePair {
    const RgbImage &prediction;
    const RgbImage &target;
    const Mask &mask;

    void
    validate() const {
        require_same_extent(prediction, target, "prediction vs target");
        require_same_extent(prediction, mask, "prediction vs mask");
    }
};

namespace detail {

template <typename Penalty>
double
masked_mean(const MaskedImagePair &pair, double epsilon, Penalty penalty) {
    pair.validate();
    if (!(epsilon > 0.0)) {
        throw Error(ErrorCode::InvalidRange, "loss epsilon must be positive");
    }
    double sum          = 0.0;
    std::size_t on      = 0;
    const int width     = pair.mask.width();
    const int height    = pair.mask.height();
    for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
            if (!pair.mask(row, col)) {
                continue;
            }
            ++on;
            for (int c = 0; c < 3; ++c) {
                sum += penalty(pair.prediction(row, col, c) - pair.target(row, col, c));
            }
        }
    }
    return sum / (3.0 * static_cast<double>(on) + epsilon);
}

} // namespace detail

inline double
masked_mse(const MaskedImagePair &pair, double epsilon = kDefaultLossEpsilon) {
    return detail::masked_mean(pair, epsilon, [](double d) { return d * d; });
}

inline double
masked_l1(const MaskedImagePair &pair, double epsilon = kDefaultLossEpsilon) {
    return detail::masked_mean(pair, epsilon, [](double d) { return std::abs(d); });
}

/// sqrt(d^2 + eps_c^2) - eps_c, evaluated as d^2 / (sqrt(d^2 + eps_c^2) + eps_c)
/// to avoid cancellation for |d| << eps_c.
inline double
masked_charbonnier(const MaskedImagePair &pair, double epsilon = kDefaultLossEpsilon,
                   double eps_c = kDefaultCharbonnierEpsilon) {
    if (!(eps_c > 0.0)) {
        throw Error(ErrorCode::InvalidRange, "Charbonnier epsilon must be positive");
    }
    return detail::masked_mean(pair, epsilon, [eps_c](double d) {
        const double d2 = d * d;
        return d2 / (std::sqrt(d2 + eps_c * eps_c) + eps_c);
    });
}

/// d masked_mse / d prediction = 2 M (pred - target) / (3 |M| + epsilon).
inline RgbImage
masked_mse_gradient(const MaskedImagePair &pair, double epsilon = kDefaultLossEpsilon) {
    pair.validate();
    std::size_t on = 0;
    for (std::uint8_t m : pair.mask.values()) {
        on += m ? 1 : 0;
    }
    const double denom = 3.0 * static_cast<double>(on) + epsilon;
    RgbImage grad(pair.prediction.width(), pair.prediction.height(), 0.0);
    for (int row = 0; row < grad.height(); ++row) {
        for (int col = 0; col < grad.width(); ++col) {
            if (!pair.mask(row, col)) {
                continue;
            }
            for (int c = 0; c < 3; ++c) {
                grad(row, col, c) =
                    2.0 * (pair.prediction(row, col, c) - pair.target(row, col, c)) / denom;
            }
        }
    }
    return grad;
}

/// Maps an RGB raster to a fixed-length feature vector. Implementations must
/// be deterministic and safe to call concurrently.
template <typename F>
concept FeatureExtractor = requires(const F &f, const RgbImage &image) {
    { f(image) } -> std::convertible_to<std::vector<double>>;
};

/// Flattens the raster; the simplest extractor, mostly for tests.
struct FlattenExtractor {
    std::vector<double>
    operator()(const RgbImage &image) const {
        return {image.values().begin(), image.values().end()};
    }
};

/// Average pooling over non-overlapping square patches, one value per patch
/// and channel. Partial patches at the border are averaged over what exists.
struct PatchMeanExtractor {
    int patch = 8;

    std::vector<double>
    operator()(const RgbImage &image) const {
        std::vector<double> out;
        for (int r0 = 0; r0 < image.height(); r0 += patch) {
            for (int c0 = 0; c0 < image.width(); c0 += patch) {
                const int r1 = std::min(r0 + patch, image.height());
                const int c1 = std::min(c0 + patch, image.width());
                const double count = static_cast<double>((r1 - r0) * (c1 - c0));
                for (int ch = 0; ch < 3; ++ch) {
                    double sum = 0.0;
                    for (int r = r0; r < r1; ++r) {
                        for (int c = c0; c < c1; ++c) {
                            sum += image(r, c, ch);
                        }
                    }
                    out.push_back(sum / count);
                }
            }
        }
        return out;
    }
};

/// Zeroes every mask-off pixel across all channels.
inline RgbImage
apply_mask(const RgbImage &image, const Mask &mask) {
    require_same_extent(image, mask, "image vs mask");
    RgbImage out(image.width(), image.height(), 0.0);
    for (int row = 0; row < image.height(); ++row) {
        for (int col = 0; col < image.width(); ++col) {
            if (mask(row, col)) {
                for (int c = 0; c < 3; ++c) {
                    out(row, col, c) = image(row, col, c);
                }
            }
        }
    }
    return out;
}

/// 1 - cos(F(M * pred), F(M * target)). Masking happens at native resolution
/// before the extractor sees the images.
template <FeatureExtractor F>
double
masked_feature_cosine(const MaskedImagePair &pair, const F &extractor) {
    pair.validate();
    const std::vector<double> a = extractor(apply_mask(pair.prediction, pair.mask));
    const std::vector<double> b = extractor(apply_mask(pair.target, pair.mask));
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "feature vectors differ in length");
    }
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (std::sqrt(aa) < 1e-12 || std::sqrt(bb) < 1e-12) {
        throw Error(ErrorCode::ZeroFeature, "feature vector norm below 1e-12");
    }
    // sqrt(aa * bb) rather than sqrt(aa) * sqrt(bb): exactly 1 when the features are equal.
    const double cosine = std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
    return 1.0 - cosine;
}

} // namespace forge
