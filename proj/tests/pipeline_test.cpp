// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace forge;

namespace {

RunConfig
two_views(std::uint64_t seed = 5) {
    RunConfig cfg;
    cfg.views_per_image = 2;
    cfg.seed            = seed;
    return cfg;
}

} // namespace

TEST(Generate, CountsTriplesAndRunManifest) {
    test::TempDir dir("gen");
    const auto manifest = test::write_synthetic_manifest(dir.path() / "in", 3, 24);
    const auto entries  = load_manifest(manifest.string());
    const auto out      = dir.path() / "out";
    const auto summary  = generate(two_views(), entries, out, 2);
    EXPECT_TRUE(summary.ok());
    EXPECT_EQ(summary.views_written, 6u);

    const auto files = test::snapshot_tree(out);
    EXPECT_EQ(files.size(), 6u * 3u + 1u);
    for (const auto &e : entries) {
        for (int k = 0; k < 2; ++k) {
            const std::string stem = view_stem(e.id, k);
            EXPECT_TRUE(files.count(stem + ".target.png")) << stem;
            EXPECT_TRUE(files.count(stem + ".mask.png")) << stem;
            EXPECT_TRUE(files.count(stem + ".meta.json")) << stem;
        }
    }
    const json run = json::parse(files.at(kRunManifestName));
    EXPECT_EQ(run.at("outputs").size(), 6u);
    EXPECT_EQ(run.at("failed").size(), 0u);
    EXPECT_EQ(run.at("seed"), 5);
    EXPECT_EQ(run.at("outputs")[0].at("image_id"), "img0");
    EXPECT_EQ(run.at("outputs")[1].at("view_index"), 1);
}

TEST(Generate, RerunAndThreadCountAreByteIdentical) {
    test::TempDir dir("gen");
    const auto manifest = test::write_synthetic_manifest(dir.path() / "in", 6, 20);
    const auto entries  = load_manifest(manifest.string());
    generate(two_views(), entries, dir.path() / "a", 1);
    generate(two_views(), entries, dir.path() / "b", 1);
    generate(two_views(), entries, dir.path() / "c", 8);
    const auto a = test::snapshot_tree(dir.path() / "a");
    EXPECT_EQ(a, test::snapshot_tree(dir.path() / "b"));
    EXPECT_EQ(a, test::snapshot_tree(dir.path() / "c"));

    generate(two_views(6), entries, dir.path() / "d", 1);
    EXPECT_NE(a, test::snapshot_tree(dir.path() / "d"));
}

TEST(Generate, MetaReRendersTargetByteIdentically) {
    test::TempDir dir("gen");
    const auto manifest = test::write_synthetic_manifest(dir.path() / "in", 4, 28, 23);
    const auto entries  = load_manifest(manifest.string());
    RunConfig cfg       = two_views();
    cfg.views_per_image = 4;
    const auto out      = dir.path() / "out";
    ASSERT_TRUE(generate(cfg, entries, out, 3).ok());

    for (const auto &entry : entries) {
        const SourceFrame frame = load_frame(entry);
        for (int k = 0; k < cfg.views_per_image; ++k) {
            const std::string stem = view_stem(entry.id, k);
            const json meta        = json::parse(test::read_file(out / (stem + ".meta.json")));
            EXPECT_EQ(meta.at("image_id"), entry.id);
            EXPECT_EQ(meta.at("view_index"), k);
            EXPECT_EQ(meta.at("width"), frame.image.width());
            EXPECT_EQ(meta.at("quaternion").size(), 4u);
            EXPECT_GE(meta.at("quaternion")[0].get<double>(), 0.0);
            EXPECT_TRUE(strategy_from_string(meta.at("strategy").get<std::string>()).has_value());

            const auto kk = intrinsics_from_hfov(meta.at("width"), meta.at("height"),
                                                 deg_to_rad(meta.at("hfov_deg").get<double>()));
            const auto [view, unused] = render_pair(frame.image, frame.depth, frame.normals, kk,
                                                    transform_from_metadata(meta));
            const auto again = dir.path() / "again.png";
            io::write_rgb_png(again.string(), view.image);
            EXPECT_EQ(test::read_file(again), test::read_file(out / (stem + ".target.png")))
                << stem;
        }
    }
}

TEST(Generate, MaskedOffPixelsAreBlack) {
    test::TempDir dir("gen");
    const auto manifest = test::write_synthetic_manifest(dir.path() / "in", 3, 24, 31);
    const auto entries  = load_manifest(manifest.string());
    RunConfig cfg       = two_views();
    cfg.views_per_image = 5;
    const auto out      = dir.path() / "out";
    ASSERT_TRUE(generate(cfg, entries, out, 2).ok());
    for (const auto &entry : entries) {
        for (int k = 0; k < cfg.views_per_image; ++k) {
            const std::string stem = view_stem(entry.id, k);
            const RgbImage img     = io::read_rgb_png((out / (stem + ".target.png")).string());
            const Mask mask        = io::read_mask_png((out / (stem + ".mask.png")).string());
            for (int r = 0; r < img.height(); ++r) {
                for (int c = 0; c < img.width(); ++c) {
                    if (!mask(r, c)) {
                        for (int ch = 0; ch < 3; ++ch) {
                            ASSERT_EQ(img(r, c, ch), 0.0);
                        }
                    }
                }
            }
        }
    }
}

TEST(Generate, FailedEntriesAreSkippedAndReported) {
    test::TempDir dir("gen");
    const auto manifest = test::write_synthetic_manifest(dir.path() / "in", 2, 16);
    {
        std::ofstream out(manifest, std::ios::app);
        out << R"({"id":"broken","image_path":"nope.png","depth_path":"nope.pfm",)"
            << R"("normal_path":"nope.n.pfm","hfov_deg":60})" << "\n";
    }
    // An all-invalid depth map lifts to an empty cloud.
    {
        io::write_rgb_png((dir.path() / "in" / "empty.png").string(), RgbImage(16, 16, 0.5));
        io::write_depth_pfm((dir.path() / "in" / "empty.pfm").string(), DepthMap(16, 16, 0.0));
        io::write_normal_pfm((dir.path() / "in" / "empty.n.pfm").string(), NormalMap(16, 16, 0.0));
        std::ofstream out(manifest, std::ios::app);
        out << R"({"id":"empty","image_path":"empty.png","depth_path":"empty.pfm",)"
            << R"("normal_path":"empty.n.pfm","hfov_deg":60})" << "\n";
    }
    const auto entries = load_manifest(manifest.string());
    ASSERT_EQ(entries.size(), 4u);
    std::ostringstream log;
    const auto summary = generate(two_views(), entries, dir.path() / "out", 4, &log);
    EXPECT_FALSE(summary.ok());
    ASSERT_EQ(summary.failures.size(), 2u);
    EXPECT_EQ(summary.failures[0].first, "broken");
    EXPECT_EQ(summary.failures[1].first, "empty");
    EXPECT_EQ(summary.views_written, 4u);
    EXPECT_NE(log.str().find("broken"), std::string::npos);
    const json run = json::parse(test::read_file(dir.path() / "out" / kRunManifestName));
    EXPECT_EQ(run.at("failed").size(), 2u);
    EXPECT_EQ(run.at("outputs").size(), 4u);
}

TEST(PairStreamTest, MatchesMaterializedViews) {
    const auto k    = intrinsics_from_hfov(24, 18, deg_to_rad(70.0));
    const auto real = synthetic::realize(
        {synthetic::Sphere{{0.2, 0, 3.5}, 1.4}, synthetic::Texture::AxisGradient}, k);
    const SourceFrame frame{"s", real.image, real.depth, real.normals, deg_to_rad(70.0)};
    PairStream stream(frame, SamplerConfig{}, 12, 5);
    const LiftedFrame lifted(frame);
    int count = 0;
    while (auto pair = stream.next()) {
        const PseudoPair expected = lifted.make_view(SamplerConfig{}, 12, count);
        EXPECT_EQ(pair->view_index, count);
        EXPECT_EQ(pair->transform, expected.transform);
        EXPECT_EQ(pair->view.image, expected.view.image);
        ++count;
    }
    EXPECT_EQ(count, 5);

    PairStream unbounded(frame, SamplerConfig{}, 12);
    for (int i = 0; i < 50; ++i) {
        ASSERT_TRUE(unbounded.next().has_value());
    }
}

TEST(SamplePoses, RecordShape) {
    const auto k    = intrinsics_from_hfov(16, 16, 1.0);
    const auto real = synthetic::realize({synthetic::FrontoPlane{2.0}, synthetic::Texture::Hash}, k);
    const auto cloud = unproject(real.image, real.depth, real.normals, k);
    const auto poses = sample_poses(cloud, 1.0, SamplerConfig{}, 4, 3);
    const json rec   = pose_record(2, poses[2]);
    EXPECT_EQ(rec.at("index"), 2);
    EXPECT_EQ(rec.at("quaternion").size(), 4u);
    EXPECT_EQ(rec.at("translation_m").size(), 3u);
    EXPECT_TRUE(rec.contains("strategy"));
    EXPECT_TRUE(rec.contains("fell_back"));
}
