// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// Relative camera pose sampling from a six-strategy mixture. Every strategy
// returns a world-to-camera extrinsic expressed in the source camera frame, in
// meters, so displacements scale with the metric geometry of the scene.

#pragma once

#include "forge/error.hpp"
#include "forge/geometry.hpp"
#include "forge/random.hpp"
#include "forge/scene_lift.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace forge {

enum class Strategy {
    Identity,
    Translation,
    Rotation,
    Combined,
    NormalDerived,
    FrontalHemisphere,
};

inline constexpr std::array<Strategy, 6> kAllStrategies = {
    Strategy::Identity,      Strategy::Translation,       Strategy::Rotation,
    Strategy::Combined,      Strategy::NormalDerived,     Strategy::FrontalHemisphere,
};

constexpr std::string_view
to_string(Strategy s) {
    switch (s) {
    case Strategy::Identity: return "identity";
    case Strategy::Translation: return "translation";
    case Strategy::Rotation: return "rotation";
    case Strategy::Combined: return "combined";
    case Strategy::NormalDerived: return "normal_derived";
    case Strategy::FrontalHemisphere: return "frontal_hemisphere";
    }
    return "unknown";
}

inline std::optional<Strategy>
strategy_from_string(std::string_view name) {
    for (Strategy s : kAllStrategies) {
        if (to_string(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

/// Mixture weights and hyperparameters. Defaults are the published training
/// values; tau and eps_near have no published value.
struct SamplerConfig {
    double prob_identity       = 0.15;
    double prob_translation    = 0.10;
    double prob_rotation       = 0.10;
    double prob_combined       = 0.35;
    double prob_normal_derived = 0.05;
    double prob_frontal        = 0.25;

    double alpha_t      = 1.0;  ///< translation scaling factor
    double alpha_r      = 1.0;  ///< rotation scaling factor (fraction of the horizontal FOV)
    double d_min        = 0.75; ///< distance multiplier range
    double d_max        = 1.5;
    double delta        = 25.0 * std::numbers::pi / 180.0; ///< max perturbation angle, radians
    double sigma_anchor = 0.02; ///< anchor jitter scale, relative to the anchor distance
    double tau          = 0.5;  ///< keep anchors with |n_y| < tau
    double eps_near     = 1e-3; ///< meters

    std::array<double, 6>
    probabilities() const {
        return {prob_identity, prob_translation,    prob_rotation,
                prob_combined, prob_normal_derived, prob_frontal};
    }

    void
    validate() const {
        auto fail = [](const std::string &msg) { throw Error(ErrorCode::InvalidConfig, msg); };
        double sum = 0.0;
        for (double p : probabilities()) {
            if (!(p >= 0.0) || !std::isfinite(p)) {
                fail("sampling probabilities must be non-negative");
            }
            sum += p;
        }
        if (!(std::abs(sum - 1.0) <= 1e-6)) {
            fail("sampling probabilities must sum to 1, got " + std::to_string(sum));
        }
        if (!(alpha_t >= 0.0) || !std::isfinite(alpha_t)) {
            fail("alpha_t must be non-negative");
        }
        if (!(alpha_r >= 0.0) || !std::isfinite(alpha_r)) {
            fail("alpha_r must be non-negative");
        }
        if (!(d_min > 0.0 && d_min <= d_max) || !std::isfinite(d_max)) {
            fail("distance range must satisfy 0 < d_min <= d_max");
        }
        if (!(delta >= 0.0 && delta < std::numbers::pi / 2.0)) {
            fail("delta must lie in [0, pi/2)");
        }
        if (!(sigma_anchor >= 0.0) || !std::isfinite(sigma_anchor)) {
            fail("sigma_anchor must be non-negative");
        }
        if (!(tau > 0.0 && tau <= 1.0)) {
            fail("tau must lie in (0, 1]");
        }
        if (!(eps_near > 0.0) || !std::isfinite(eps_near)) {
            fail("eps_near must be positive");
        }
    }
};

struct SampledPose {
    RigidTransform transform;
    Strategy strategy = Strategy::Identity;
    bool fell_back    = false;
};

inline constexpr int kMaxResampleAttempts = 16;

/// exp(U[ln a, ln b]), clamped to [a, b] against rounding in exp/log.
inline double
log_uniform(RandomStream &rng, double a, double b) {
    if (!(a > 0.0 && a <= b) || !std::isfinite(b)) {
        throw Error(ErrorCode::InvalidRange, "log-uniform bounds must satisfy 0 < a <= b");
    }
    if (a == b) {
        return a;
    }
    const double la = std::log(a);
    const double lb = std::log(b);
    return std::clamp(std::exp(la + (lb - la) * rng.uniform()), a, b);
}

/// Draws an index with probability proportional to 1/||p|| among points with
/// ||p|| >= eps_near that satisfy `keep`. Returns nullopt when none qualify.
template <typename Keep>
std::optional<std::size_t>
sample_anchor_if(RandomStream &rng, const PointCloud &cloud, double eps_near, Keep keep) {
    double total = 0.0;
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double r = norm(cloud.points[i]);
        if (r >= eps_near && keep(i)) {
            total += 1.0 / r;
            last = i;
        }
    }
    if (!last) {
        return std::nullopt;
    }
    const double target = rng.uniform() * total;
    double cumulative   = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double r = norm(cloud.points[i]);
        if (r >= eps_near && keep(i)) {
            cumulative += 1.0 / r;
            if (target < cumulative) {
                return i;
            }
        }
    }
    return last;
}

inline std::size_t
sample_anchor(RandomStream &rng, const PointCloud &cloud, double eps_near) {
    auto idx = sample_anchor_if(rng, cloud, eps_near, [](std::size_t) { return true; });
    if (!idx) {
        throw Error(ErrorCode::EmptyCloud, "no anchor candidate farther than eps_near");
    }
    return *idx;
}

/// Pure translation. A camera-center displacement d ~ U[-a_t sigma, a_t sigma]
/// is drawn per axis; d.z is clamped so that the nearest point stays at least
/// eps_near in front of the moved camera. The extrinsic translation is -d.
inline RigidTransform
sample_translation(RandomStream &rng, const SceneStats &stats, const SamplerConfig &cfg) {
    auto draw = [&](double spread) {
        const double half = cfg.alpha_t * spread;
        return rng.uniform(-half, half);
    };
    Vec3 d{draw(stats.sigma.x), draw(stats.sigma.y), draw(stats.sigma.z)};

    // Largest limit with min_z - limit >= eps_near after rounding.
    double limit = stats.min_z - cfg.eps_near;
    while (stats.min_z - limit < cfg.eps_near) {
        limit = std::nextafter(limit, -std::numeric_limits<double>::infinity());
    }
    d.z = std::min(d.z, limit);
    return {Mat3::identity(), Vec3{} - d};
}

/// Pure rotation about the camera center. The new forward axis is +z tilted by
/// a polar angle in [0, alpha_r * hfov) at a uniform azimuth, then completed to
/// a basis with the look-at construction.
inline RigidTransform
sample_rotation(RandomStream &rng, double hfov, const SamplerConfig &cfg) {
    if (!(hfov > 0.0 && hfov < std::numbers::pi)) {
        throw Error(ErrorCode::InvalidFov, "horizontal field of view must lie in (0, pi)");
    }
    const double max_polar = cfg.alpha_r * hfov;
    for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
        const double theta = rng.uniform() * max_polar;
        const double phi   = rng.uniform() * 2.0 * std::numbers::pi;
        const double s     = std::sin(theta);
        const Vec3 forward{s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
        try {
            return {look_at(Vec3{}, forward).rotation, Vec3{}};
        } catch (const Error &e) {
            if (e.code() != ErrorCode::DegenerateLookAt) {
                throw;
            }
        }
    }
    return RigidTransform::identity();
}

/// Rotation and translation drawn independently and chained: [R_r | R_r t_t].
inline RigidTransform
sample_combined(RandomStream &rng, const SceneStats &stats, double hfov,
                const SamplerConfig &cfg) {
    const RigidTransform rot   = sample_rotation(rng, hfov, cfg);
    const RigidTransform trans = sample_translation(rng, stats, cfg);
    return {rot.rotation, rot.rotation * trans.translation};
}

/// Camera placed along the surface normal of an anchor point, looking back at
/// it. Anchors are restricted to |n_y| < tau; if nothing survives the filter
/// (or every attempt degenerates) the result is identity with fell_back set.
inline SampledPose
sample_normal_derived(RandomStream &rng, const PointCloud &cloud, const SamplerConfig &cfg) {
    if (cloud.empty()) {
        throw Error(ErrorCode::EmptyCloud, "normal-derived sampling needs a non-empty cloud");
    }
    auto passes_filter = [&](std::size_t i) { return std::abs(cloud.normals[i].y) < cfg.tau; };
    for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
        const auto idx = sample_anchor_if(rng, cloud, cfg.eps_near, passes_filter);
        if (!idx) {
            break;
        }
        const Vec3 &p   = cloud.points[*idx];
        const double r  = norm(p);
        const double s  = log_uniform(rng, cfg.d_min * r, cfg.d_max * r);
        const Vec3 cam  = p + s * cloud.normals[*idx];
        try {
            return {look_at(cam, p), Strategy::NormalDerived, false};
        } catch (const Error &e) {
            if (e.code() != ErrorCode::DegenerateLookAt) {
                throw;
            }
        }
    }
    return {RigidTransform::identity(), Strategy::NormalDerived, true};
}

/// Unit direction obtained by turning `reference` by `azimuth` about its local
/// up axis and then by `elevation` about its local right axis. The local frame
/// is the look-at basis of `reference`; nullopt when reference is parallel to
/// the global up axis.
inline std::optional<Vec3>
perturb_direction(const Vec3 &reference, double azimuth, double elevation) {
    const Vec3 right_raw   = cross(kUp, reference);
    const double right_len = norm(right_raw);
    if (!(right_len > 1e-6)) {
        return std::nullopt;
    }
    const Vec3 right = right_raw / right_len;
    const Vec3 up    = cross(reference, right);
    const Vec3 turned = std::cos(azimuth) * reference + std::sin(azimuth) * right;
    return std::cos(elevation) * turned + std::sin(elevation) * up;
}

/// Orbit around a jittered anchor, staying within delta (per axis) of the
/// direction from the anchor back toward the source camera.
inline RigidTransform
sample_frontal_hemisphere(RandomStream &rng, const PointCloud &cloud, const SamplerConfig &cfg) {
    if (cloud.empty()) {
        throw Error(ErrorCode::EmptyCloud, "frontal-hemisphere sampling needs a non-empty cloud");
    }
    for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
        const std::size_t idx = sample_anchor(rng, cloud, cfg.eps_near);
        const Vec3 &p         = cloud.points[idx];
        const double r        = norm(p);
        const double jitter   = cfg.sigma_anchor * r;
        const double ex       = rng.normal();
        const double ey       = rng.normal();
        const double ez       = rng.normal();
        const Vec3 anchor     = p + jitter * Vec3{ex, ey, ez};
        const double anchor_r = norm(anchor);
        const double azimuth   = rng.uniform(-cfg.delta, cfg.delta);
        const double elevation = rng.uniform(-cfg.delta, cfg.delta);
        const double distance  = r * log_uniform(rng, cfg.d_min, cfg.d_max);
        if (!(anchor_r > 0.0)) {
            continue;
        }
        const auto dir = perturb_direction(Vec3{} - anchor / anchor_r, azimuth, elevation);
        if (!dir) {
            continue;
        }
        try {
            return look_at(anchor + distance * *dir, anchor);
        } catch (const Error &e) {
            if (e.code() != ErrorCode::DegenerateLookAt) {
                throw;
            }
        }
    }
    return RigidTransform::identity();
}

/// Routes a single categorical draw over the six strategy weights.
inline Strategy
route_strategy(RandomStream &rng, const SamplerConfig &cfg) {
    const auto probs   = cfg.probabilities();
    const double u     = rng.uniform();
    double cumulative  = 0.0;
    std::size_t chosen = probs.size();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cumulative += probs[i];
        if (u < cumulative) {
            chosen = i;
            break;
        }
    }
    if (chosen == probs.size()) {
        // u landed in the rounding gap above the cumulative sum.
        for (std::size_t i = probs.size(); i-- > 0;) {
            if (probs[i] > 0.0) {
                chosen = i;
                break;
            }
        }
    }
    return kAllStrategies[chosen];
}

inline SampledPose
sample_pose(RandomStream &rng, const PointCloud &cloud, const SceneStats &stats, double hfov,
            const SamplerConfig &cfg) {
    const Strategy strategy = route_strategy(rng, cfg);
    switch (strategy) {
    case Strategy::Identity: return {RigidTransform::identity(), strategy, false};
    case Strategy::Translation: return {sample_translation(rng, stats, cfg), strategy, false};
    case Strategy::Rotation: return {sample_rotation(rng, hfov, cfg), strategy, false};
    case Strategy::Combined: return {sample_combined(rng, stats, hfov, cfg), strategy, false};
    case Strategy::NormalDerived: return sample_normal_derived(rng, cloud, cfg);
    case Strategy::FrontalHemisphere:
        return {sample_frontal_hemisphere(rng, cloud, cfg), strategy, false};
    }
    return {};
}

} // namespace forge
