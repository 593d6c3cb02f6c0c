// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace forge;

namespace {

synthetic::RealizedScene
realize_scene(const synthetic::AnalyticScene &scene, const CameraIntrinsics &k) {
    return synthetic::realize(scene, k);
}

void
expect_view_consistent(const PseudoView &v) {
    for (int r = 0; r < v.height(); ++r) {
        for (int c = 0; c < v.width(); ++c) {
            if (v.mask(r, c)) {
                EXPECT_TRUE(std::isfinite(v.zbuffer(r, c)));
                EXPECT_GT(v.zbuffer(r, c), 0.0);
            } else {
                EXPECT_TRUE(std::isinf(v.zbuffer(r, c)));
                for (int ch = 0; ch < 3; ++ch) {
                    EXPECT_EQ(v.image(r, c, ch), 0.0);
                }
            }
        }
    }
}

} // namespace

TEST(Backface, Examples) {
    EXPECT_TRUE(backface_visible({0, 0, -1}, {0, 0, 2}, {0, 0, 0}));
    EXPECT_FALSE(backface_visible({0, 0, 1}, {0, 0, 2}, {0, 0, 0}));
    EXPECT_FALSE(backface_visible({1, 0, 0}, {0, 0, 2}, {0, 0, 0}));
}

TEST(Render, NearerPointWinsRegardlessOfOrder) {
    const auto k = intrinsics_from_hfov(8, 8, 1.0);
    for (bool near_first : {true, false}) {
        PointCloud cloud;
        const Vec3 nearp{0, 0, 1}, farp{0, 0, 2};
        const Rgb near_color{1, 0, 0}, far_color{0, 0, 1};
        if (near_first) {
            cloud.push_back(nearp, {0, 0, -1}, near_color, {});
            cloud.push_back(farp, {0, 0, -1}, far_color, {});
        } else {
            cloud.push_back(farp, {0, 0, -1}, far_color, {});
            cloud.push_back(nearp, {0, 0, -1}, near_color, {});
        }
        const PseudoView v = render(cloud, RigidTransform::identity(), k);
        EXPECT_EQ(v.mask(4, 4), 1);
        EXPECT_EQ(v.image(4, 4, 0), 1.0);
        EXPECT_EQ(v.image(4, 4, 2), 0.0);
        EXPECT_EQ(v.zbuffer(4, 4), 1.0);
    }
}

TEST(Render, EqualDepthKeepsLowerIndex) {
    const auto k = intrinsics_from_hfov(8, 8, 1.0);
    PointCloud cloud;
    cloud.push_back({0, 0, 2}, {0, 0, -1}, {0.25, 0.25, 0.25}, {});
    cloud.push_back({0.001, -0.001, 2}, {0, 0, -1}, {0.75, 0.75, 0.75}, {});
    const PseudoView v = render(cloud, RigidTransform::identity(), k);
    EXPECT_EQ(v.image(4, 4, 0), 0.25);
    EXPECT_EQ(v.zbuffer(4, 4), 2.0);
}

TEST(Render, CullsNearPlaneAndOutOfFrame) {
    const auto k = intrinsics_from_hfov(8, 8, 1.0);
    PointCloud cloud;
    cloud.push_back({0, 0, 5e-4}, {0, 0, -1}, {1, 1, 1}, {});
    cloud.push_back({100, 0, 1}, {0, 0, -1}, {1, 1, 1}, {});
    cloud.push_back({1e300, -1e300, 1}, {0, 0, -1}, {1, 1, 1}, {});
    const PseudoView v = render(cloud, RigidTransform::identity(), k);
    for (auto m : v.mask.values()) {
        EXPECT_EQ(m, 0);
    }
}

TEST(Render, IdentityReproducesSource) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        RandomStream rng(30, "identity", s);
        const auto scene = synthetic::random_scene(rng);
        const auto k     = intrinsics_from_hfov(8 + static_cast<int>(rng.uniform() * 57),
                                                8 + static_cast<int>(rng.uniform() * 57),
                                                deg_to_rad(rng.uniform(30.0, 120.0)));
        const auto real  = realize_scene(scene, k);
        bool any_valid   = false;
        for (double z : real.depth.values()) {
            any_valid = any_valid || is_valid_depth(z);
        }
        if (!any_valid) {
            continue;
        }
        const auto [view, meta] =
            render_pair(real.image, real.depth, real.normals, k, RigidTransform::identity());
        EXPECT_FALSE(meta.strategy.has_value());
        for (int r = 0; r < k.height; ++r) {
            for (int c = 0; c < k.width; ++c) {
                const bool valid = is_valid_depth(real.depth(r, c));
                ASSERT_EQ(view.mask(r, c), valid ? 1 : 0);
                if (valid) {
                    for (int ch = 0; ch < 3; ++ch) {
                        ASSERT_EQ(view.image(r, c, ch), real.image(r, c, ch));
                    }
                    ASSERT_EQ(view.zbuffer(r, c), real.depth(r, c));
                }
            }
        }
    }
}

TEST(Render, FlippedNormalsAreAllCulled) {
    const auto k = intrinsics_from_hfov(32, 32, 1.2);
    auto real    = realize_scene({synthetic::FrontoPlane{2.0}, synthetic::Texture::Hash}, k);
    for (int r = 0; r < 32; ++r) {
        for (int c = 0; c < 32; ++c) {
            real.normals(r, c, 2) = 1.0;
        }
    }
    const auto [view, meta] =
        render_pair(real.image, real.depth, real.normals, k, RigidTransform::identity());
    for (auto m : view.mask.values()) {
        EXPECT_EQ(m, 0);
    }
    for (double v : view.image.values()) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Render, PullBackFootprintShrinks) {
    // Fronto plane at depth d viewed after backing up by b: the footprint
    // half-width is (W/2) d / (d + b).
    const int w    = 64;
    const auto k   = intrinsics_from_hfov(w, w, deg_to_rad(90.0));
    const double d = 2.0;
    const auto real =
        realize_scene({synthetic::FrontoPlane{d}, synthetic::Texture::Checkerboard}, k);
    for (double b : {0.5, 1.0, 3.0}) {
        const RigidTransform t{Mat3::identity(), {0, 0, b}};
        const auto [view, meta] = render_pair(real.image, real.depth, real.normals, k, t);
        const int mid           = w / 2;
        int lo = w, hi = -1;
        for (int c = 0; c < w; ++c) {
            if (view.mask(mid, c)) {
                lo = std::min(lo, c);
                hi = std::max(hi, c);
            }
        }
        const double half_width = (hi - lo + 1) / 2.0;
        EXPECT_NEAR(half_width, (w / 2.0) * d / (d + b), 1.0) << "b = " << b;
    }
}

TEST(Render, AddingNearerPointNeverIncreasesDepth) {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto k = intrinsics_from_hfov(16, 16, 1.2);
    for (int trial = 0; trial < 200; ++trial) {
        PointCloud cloud;
        for (int i = 0; i < 50; ++i) {
            cloud.push_back({u(gen), u(gen), 2.0 + u(gen)}, {0, 0, -1}, {0.5, 0.5, 0.5}, {});
        }
        const PseudoView before = render(cloud, RigidTransform::identity(), k);
        const std::size_t pick  = static_cast<std::size_t>(trial % 50);
        const Vec3 p            = cloud.points[pick];
        const double scale      = 0.5 + 0.4 * (u(gen) + 1.0) / 2.0; // same ray, nearer
        cloud.push_back(scale * p, {0, 0, -1}, {1, 0, 0}, {});
        const PseudoView after = render(cloud, RigidTransform::identity(), k);
        PixelIndex px;
        if (!pixel_of(project(scale * p, k), k, px)) {
            continue; // original point was out of frame
        }
        EXPECT_LE(after.zbuffer(px.row, px.col), before.zbuffer(px.row, px.col));
        EXPECT_EQ(after.mask(px.row, px.col), 1);
    }
}

TEST(Render, MaskInvariantOnSampledPoses) {
    for (std::uint64_t i = 0; i < 30; ++i) {
        const auto trial = synthetic::make_trial(32, i, 48);
        expect_view_consistent(render(trial.cloud, trial.pose.transform, trial.intrinsics));
    }
}

TEST(Render, EmptyCloudIsAnError) {
    try {
        render(PointCloud{}, RigidTransform::identity(), intrinsics_from_hfov(4, 4, 1.0));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyCloud);
    }
}

TEST(RenderPair, CarriesPoseMetadata) {
    const auto k    = intrinsics_from_hfov(16, 16, 1.0);
    const auto real = realize_scene({synthetic::FrontoPlane{2.0}, synthetic::Texture::Hash}, k);
    const SampledPose pose{RigidTransform::identity(), Strategy::NormalDerived, true};
    const auto [view, meta] = render_pair(real.image, real.depth, real.normals, k, pose);
    ASSERT_TRUE(meta.strategy.has_value());
    EXPECT_EQ(*meta.strategy, Strategy::NormalDerived);
    EXPECT_TRUE(meta.fell_back);
    EXPECT_EQ(meta.intrinsics, k);
    EXPECT_EQ(view.image, real.image);
}
