// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// Randomized equivalence suite between the splatting renderer and the
// brute-force reference.

#pragma once

#include "forge/geometry.hpp"
#include "forge/pose_sampler.hpp"
#include "forge/random.hpp"
#include "forge/reprojector.hpp"
#include "forge/scene_lift.hpp"
#include "forge/synthetic.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

namespace forge::synthetic {

struct OracleTrial {
    AnalyticScene scene;
    CameraIntrinsics intrinsics;
    PointCloud cloud;
    SampledPose pose;
};

inline AnalyticScene
random_scene(RandomStream &rng) {
    AnalyticScene scene;
    const double kind = rng.uniform();
    if (kind < 1.0 / 3.0) {
        scene.kind = FrontoPlane{rng.uniform(0.5, 5.0)};
    } else if (kind < 2.0 / 3.0) {
        const Vec3 point{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(1.0, 4.0)};
        Vec3 normal{rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6), -1.0};
        scene.kind = SlantedPlane{point, normal / norm(normal)};
    } else {
        const Vec3 center{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(3.0, 6.0)};
        scene.kind = Sphere{center, rng.uniform(0.5, 2.0)};
    }
    const double tex = rng.uniform();
    scene.texture    = tex < 1.0 / 3.0   ? Texture::Checkerboard
                       : tex < 2.0 / 3.0 ? Texture::AxisGradient
                                         : Texture::Hash;
    return scene;
}

/// Trial `index` of the suite seeded by `seed`: a random analytic scene of at
/// most max_side x max_side pixels and a pose drawn from the default mixture.
inline OracleTrial
make_trial(std::uint64_t seed, std::uint64_t index, int max_side = 64,
           const SamplerConfig &cfg = {}) {
    RandomStream rng(seed, "oracle-check", index);
    for (;;) {
        const int width  = 8 + static_cast<int>(rng.uniform() * (max_side - 7));
        const int height = 8 + static_cast<int>(rng.uniform() * (max_side - 7));
        const double hfov = deg_to_rad(rng.uniform(30.0, 120.0));
        const CameraIntrinsics k = intrinsics_from_hfov(width, height, hfov);
        const AnalyticScene scene = random_scene(rng);
        const RealizedScene real  = realize(scene, k);
        PointCloud cloud;
        try {
            cloud = unproject(real.image, real.depth, real.normals, k);
        } catch (const Error &e) {
            if (e.code() == ErrorCode::EmptyCloud) {
                continue;
            }
            throw;
        }
        const SceneStats stats = scene_stats(cloud);
        SampledPose pose       = sample_pose(rng, cloud, stats, hfov, cfg);
        return {scene, k, std::move(cloud), pose};
    }
}

using Renderer =
    std::function<PseudoView(const PointCloud &, const RigidTransform &, const CameraIntrinsics &)>;

struct OracleMismatch {
    std::uint64_t seed  = 0;
    std::uint64_t trial = 0;
    std::string detail;
};

inline bool
views_identical(const PseudoView &a, const PseudoView &b, std::string *why = nullptr) {
    auto report = [&](const char *what) {
        if (why) {
            *why = what;
        }
        return false;
    };
    if (a.width() != b.width() || a.height() != b.height()) {
        return report("dimensions differ");
    }
    if (!(a.mask == b.mask)) {
        return report("masks differ");
    }
    if (!(a.image == b.image)) {
        return report("images differ");
    }
    // operator== on doubles treats +inf == +inf, which is what we want here.
    if (!(a.zbuffer == b.zbuffer)) {
        return report("depth buffers differ");
    }
    return true;
}

/// Runs `trials` trials and stops at the first mismatch.
inline std::optional<OracleMismatch>
run_oracle_check(std::uint64_t trials, std::uint64_t seed, const Renderer &renderer,
                 int max_side = 64) {
    for (std::uint64_t i = 0; i < trials; ++i) {
        const OracleTrial trial = make_trial(seed, i, max_side);
        const PseudoView fast   = renderer(trial.cloud, trial.pose.transform, trial.intrinsics);
        const PseudoView ref =
            brute_force_render(trial.cloud, trial.pose.transform, trial.intrinsics);
        std::string why;
        if (!views_identical(fast, ref, &why)) {
            std::ostringstream msg;
            msg << why << " (" << trial.intrinsics.width << "x" << trial.intrinsics.height
                << ", strategy " << to_string(trial.pose.strategy) << ")";
            return OracleMismatch{seed, i, msg.str()};
        }
    }
    return std::nullopt;
}

inline std::optional<OracleMismatch>
run_oracle_check(std::uint64_t trials, std::uint64_t seed) {
    return run_oracle_check(
        trials, seed,
        [](const PointCloud &c, const RigidTransform &t, const CameraIntrinsics &k) {
            return render(c, t, k);
        });
}

} // namespace forge::synthetic
