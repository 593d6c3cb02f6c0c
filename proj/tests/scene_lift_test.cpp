// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <limits>

using namespace forge;

namespace {

NormalMap
facing_normals(int w, int h) {
    NormalMap n(w, h, 0.0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            n(r, c, 2) = -1.0;
        }
    }
    return n;
}

} // namespace

TEST(Unproject, SinglePixelLandsOnAxis) {
    const auto k = intrinsics_from_hfov(1, 1, deg_to_rad(90.0));
    const auto cloud =
        unproject(RgbImage(1, 1, 0.5), DepthMap(1, 1, 2.0), facing_normals(1, 1), k);
    ASSERT_EQ(cloud.size(), 1u);
    EXPECT_EQ(cloud.points[0], (Vec3{0, 0, 2}));
}

TEST(Unproject, CornerPixelClosedForm) {
    const double d = 3.7;
    const auto k   = intrinsics_from_hfov(256, 256, deg_to_rad(90.0));
    const auto cloud =
        unproject(RgbImage(256, 256, 0.2), DepthMap(256, 256, d), facing_normals(256, 256), k);
    ASSERT_EQ(cloud.size(), 256u * 256u);
    EXPECT_EQ(cloud.pixel_index[0], (PixelIndex{0, 0}));
    EXPECT_NEAR(cloud.points[0].x, (0.5 - 128.0) * d / 128.0, 1e-12);
    EXPECT_NEAR(cloud.points[0].y, (128.0 - 0.5) * d / 128.0, 1e-12);
    EXPECT_EQ(cloud.points[0].z, d);
}

TEST(Unproject, DropsInvalidDepthAndKeepsRowMajorOrder) {
    const auto k = intrinsics_from_hfov(3, 2, deg_to_rad(60.0));
    DepthMap depth(3, 2, 1.0);
    depth(0, 1) = 0.0;
    depth(1, 0) = -2.0;
    depth(1, 2) = std::numeric_limits<double>::quiet_NaN();
    depth(0, 2) = std::numeric_limits<double>::infinity();
    NormalMap n = facing_normals(3, 2);
    n(0, 1, 2)  = 0.0; // ignored: pixel is invalid
    const auto cloud = unproject(RgbImage(3, 2), depth, n, k);
    ASSERT_EQ(cloud.size(), 2u);
    EXPECT_EQ(cloud.pixel_index[0], (PixelIndex{0, 0}));
    EXPECT_EQ(cloud.pixel_index[1], (PixelIndex{1, 1}));
}

TEST(Unproject, Errors) {
    const auto k = intrinsics_from_hfov(4, 4, 1.0);
    try {
        unproject(RgbImage(4, 4), DepthMap(4, 4, 0.0), facing_normals(4, 4), k);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyCloud);
    }
    NormalMap bad = facing_normals(4, 4);
    bad(2, 2, 2)  = -0.9;
    try {
        unproject(RgbImage(4, 4), DepthMap(4, 4, 1.0), bad, k);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidNormal);
    }
    try {
        unproject(RgbImage(4, 3), DepthMap(4, 4, 1.0), facing_normals(4, 4), k);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Project, OpticalAxisAndBehindCamera) {
    const auto k = intrinsics_from_hfov(40, 30, 1.2);
    const auto q = project({0, 0, 5}, k);
    EXPECT_EQ(q.u, k.cx);
    EXPECT_EQ(q.v, k.cy);
    try {
        project({0, 0, -1}, k);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BehindCamera);
    }
}

TEST(Project, RoundTripOverRandomDepth) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.1, 50.0);
    const auto k = intrinsics_from_hfov(37, 23, deg_to_rad(75.0));
    DepthMap depth(37, 23);
    for (double &z : depth.values()) {
        z = u(gen);
    }
    const auto cloud = unproject(RgbImage(37, 23), depth, facing_normals(37, 23), k);
    EXPECT_EQ(cloud.size(), depth.pixel_count());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto q = project(cloud.points[i], k);
        EXPECT_NEAR(q.u, cloud.pixel_index[i].col + 0.5, 1e-4);
        EXPECT_NEAR(q.v, cloud.pixel_index[i].row + 0.5, 1e-4);
        EXPECT_GT(cloud.points[i].z, 0.0);
    }
}

TEST(SceneStats, Examples) {
    PointCloud one;
    one.push_back({0.3, -0.2, 4.5}, {0, 0, -1}, {}, {});
    const auto s1 = scene_stats(one);
    EXPECT_EQ(s1.sigma, (Vec3{0, 0, 0}));
    EXPECT_EQ(s1.min_z, 4.5);

    PointCloud two;
    two.push_back({1, 0, 2}, {0, 0, -1}, {}, {});
    two.push_back({-1, 0, 2}, {0, 0, -1}, {}, {});
    const auto s2 = scene_stats(two);
    EXPECT_DOUBLE_EQ(s2.sigma.x, 1.0);
    EXPECT_EQ(s2.sigma.y, 0.0);
    EXPECT_EQ(s2.min_z, 2.0);

    const auto k    = intrinsics_from_hfov(32, 24, deg_to_rad(70.0));
    const auto real = synthetic::realize({synthetic::FrontoPlane{2.3}, synthetic::Texture::Hash}, k);
    const auto s3   = scene_stats(unproject(real.image, real.depth, real.normals, k));
    EXPECT_EQ(s3.sigma.z, 0.0);
    EXPECT_GT(s3.sigma.x, 0.0);

    try {
        scene_stats(PointCloud{});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyCloud);
    }
}
