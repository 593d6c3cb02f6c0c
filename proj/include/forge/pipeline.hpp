// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// Pseudo-pair generation: per-view sampling and rendering, an in-memory
// stream of pairs for consumers that do not want disk I/O, and the batch
// materialization behind `forge generate`.
//
// Every (image id, view index) unit draws from its own RandomStream keyed by
// (seed, id, view index) and writes only its own files, so output bytes do not
// depend on thread count or scheduling.

#pragma once

#include "forge/config.hpp"
#include "forge/error.hpp"
#include "forge/geometry.hpp"
#include "forge/io/pfm.hpp"
#include "forge/io/png.hpp"
#include "forge/pose_sampler.hpp"
#include "forge/random.hpp"
#include "forge/reprojector.hpp"
#include "forge/scene_lift.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace forge {

/// Decoded inputs for one source image.
struct SourceFrame {
    std::string id;
    RgbImage image;
    DepthMap depth;
    NormalMap normals;
    double hfov = 0.0; ///< radians
};

inline SourceFrame
load_frame(const ManifestEntry &entry) {
    SourceFrame frame{entry.id, io::read_rgb_png(entry.image_path),
                      io::read_depth_pfm(entry.depth_path), io::read_normal_pfm(entry.normal_path),
                      deg_to_rad(entry.hfov_deg)};
    require_same_extent(frame.image, frame.depth, entry.id + ": image vs depth");
    require_same_extent(frame.image, frame.normals, entry.id + ": image vs normals");
    return frame;
}

struct PseudoPair {
    std::string image_id;
    int view_index = 0;
    SampledPose pose;          ///< as sampled
    PoseVector7 pose_vector;   ///< serialized form
    RigidTransform transform;  ///< rebuilt from pose_vector; the view is rendered with this
    CameraIntrinsics intrinsics;
    PseudoView view;
};

/// A lifted source image, ready to produce any number of views.
class LiftedFrame {
  public:
    explicit LiftedFrame(const SourceFrame &frame)
        : id_(frame.id), hfov_(frame.hfov),
          k_(intrinsics_from_hfov(frame.image.width(), frame.image.height(), frame.hfov)),
          cloud_(unproject(frame.image, frame.depth, frame.normals, k_)),
          stats_(scene_stats(cloud_)) {}

    /// The sampled transform is passed through its 7D encoding before
    /// rendering, so re-rendering from serialized metadata is bit-exact.
    PseudoPair
    make_view(const SamplerConfig &cfg, std::uint64_t seed, int view_index) const {
        RandomStream rng(seed, id_, static_cast<std::uint64_t>(view_index));
        PseudoPair pair;
        pair.image_id    = id_;
        pair.view_index  = view_index;
        pair.pose        = sample_pose(rng, cloud_, stats_, hfov_, cfg);
        pair.pose_vector = to_pose_vector(pair.pose.transform);
        pair.transform   = from_pose_vector(pair.pose_vector);
        pair.intrinsics  = k_;
        pair.view        = render(cloud_, pair.transform, k_, cfg.eps_near);
        return pair;
    }

    const PointCloud &
    cloud() const noexcept {
        return cloud_;
    }
    const SceneStats &
    stats() const noexcept {
        return stats_;
    }
    const CameraIntrinsics &
    intrinsics() const noexcept {
        return k_;
    }
    double
    hfov() const noexcept {
        return hfov_;
    }

  private:
    std::string id_;
    double hfov_;
    CameraIntrinsics k_;
    PointCloud cloud_;
    SceneStats stats_;
};

/// Yields views 0, 1, ... of a single source image without touching disk.
/// With views_per_image = 0 the stream is unbounded.
class PairStream {
  public:
    PairStream(const SourceFrame &frame, SamplerConfig cfg, std::uint64_t seed,
               int views_per_image = 0)
        : lifted_(std::make_shared<const LiftedFrame>(frame)), cfg_(cfg), seed_(seed),
          limit_(views_per_image) {
        cfg_.validate();
    }

    std::optional<PseudoPair>
    next() {
        if (limit_ > 0 && next_index_ >= limit_) {
            return std::nullopt;
        }
        return lifted_->make_view(cfg_, seed_, next_index_++);
    }

  private:
    std::shared_ptr<const LiftedFrame> lifted_;
    SamplerConfig cfg_;
    std::uint64_t seed_;
    int limit_;
    int next_index_ = 0;
};

inline json
pair_metadata(const PseudoPair &pair, double hfov, std::uint64_t seed) {
    const auto &q = pair.pose_vector.rotation;
    const auto &t = pair.pose_vector.translation;
    return json{{"image_id", pair.image_id},
                {"view_index", pair.view_index},
                {"strategy", std::string(to_string(pair.pose.strategy))},
                {"fell_back", pair.pose.fell_back},
                {"quaternion", {q.w, q.x, q.y, q.z}},
                {"translation_m", {t.x, t.y, t.z}},
                {"hfov_deg", rad_to_deg(hfov)},
                {"width", pair.intrinsics.width},
                {"height", pair.intrinsics.height},
                {"seed", seed}};
}

/// The extrinsic stored in a meta.json record.
inline RigidTransform
transform_from_metadata(const json &meta) {
    try {
        const auto &q = meta.at("quaternion");
        const auto &t = meta.at("translation_m");
        return from_pose_vector(
            {{t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>()},
             {q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>(),
              q.at(3).get<double>()}});
    } catch (const json::exception &e) {
        throw Error(ErrorCode::InvalidConfig, std::string("malformed pose metadata: ") + e.what());
    }
}

inline std::string
view_stem(const std::string &id, int view_index) {
    return id + "_" + std::to_string(view_index);
}

inline void
write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw Error(ErrorCode::Io, "failed writing " + path.string());
    }
}

struct GenerateSummary {
    std::size_t views_written = 0;
    std::vector<std::pair<std::string, std::string>> failures; ///< (id, reason), manifest order

    bool
    ok() const noexcept {
        return failures.empty();
    }
};

inline constexpr const char *kRunManifestName = "run_manifest.json";

/// Materializes views_per_image pseudo-pairs for every entry into out_dir.
/// Entries whose inputs fail to decode or lift are reported and skipped.
/// `threads` workers pull entries from a shared counter.
inline GenerateSummary
generate(const RunConfig &cfg, const std::vector<ManifestEntry> &entries,
         const std::filesystem::path &out_dir, int threads, std::ostream *log = nullptr) {
    cfg.validate();
    if (threads < 1) {
        throw Error(ErrorCode::InvalidConfig, "threads must be >= 1");
    }
    std::filesystem::create_directories(out_dir);

    struct Outcome {
        bool ok = false;
        std::string error;
    };
    std::vector<Outcome> outcomes(entries.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= entries.size()) {
                return;
            }
            const ManifestEntry &entry = entries[i];
            try {
                const SourceFrame frame = load_frame(entry);
                const LiftedFrame lifted(frame);
                for (int k = 0; k < cfg.views_per_image; ++k) {
                    const PseudoPair pair = lifted.make_view(cfg.sampler, cfg.seed, k);
                    const std::string stem = view_stem(entry.id, k);
                    io::write_rgb_png((out_dir / (stem + ".target.png")).string(), pair.view.image);
                    io::write_mask_png((out_dir / (stem + ".mask.png")).string(), pair.view.mask);
                    write_text_file(out_dir / (stem + ".meta.json"),
                                    pair_metadata(pair, frame.hfov, cfg.seed).dump(2) + "\n");
                }
                outcomes[i].ok = true;
            } catch (const std::exception &e) {
                outcomes[i].error = e.what();
            }
            done.fetch_add(1);
        }
    };

    const int n_workers = std::max(1, std::min<int>(threads, static_cast<int>(entries.size())));
    {
        std::vector<std::jthread> pool;
        for (int t = 1; t < n_workers; ++t) {
            pool.emplace_back(work);
        }
        work();
    }

    GenerateSummary summary;
    json outputs = json::array();
    json failed  = json::array();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const ManifestEntry &entry = entries[i];
        if (!outcomes[i].ok) {
            summary.failures.emplace_back(entry.id, outcomes[i].error);
            failed.push_back({{"image_id", entry.id}, {"error", outcomes[i].error}});
            if (log) {
                *log << "forge: skipping '" << entry.id << "': " << outcomes[i].error << "\n";
            }
            continue;
        }
        for (int k = 0; k < cfg.views_per_image; ++k) {
            const std::string stem = view_stem(entry.id, k);
            outputs.push_back({{"image_id", entry.id},
                               {"view_index", k},
                               {"target", stem + ".target.png"},
                               {"mask", stem + ".mask.png"},
                               {"meta", stem + ".meta.json"}});
            ++summary.views_written;
        }
    }
    const json run{{"seed", cfg.seed},
                   {"views_per_image", cfg.views_per_image},
                   {"sampler", to_json(cfg.sampler)},
                   {"outputs", outputs},
                   {"failed", failed}};
    write_text_file(out_dir / kRunManifestName, run.dump(2) + "\n");
    return summary;
}

/// One record per draw, for inspecting the pose distribution.
inline json
pose_record(std::size_t index, const SampledPose &pose) {
    const PoseVector7 pv = to_pose_vector(pose.transform);
    return json{{"index", index},
                {"strategy", std::string(to_string(pose.strategy))},
                {"quaternion", {pv.rotation.w, pv.rotation.x, pv.rotation.y, pv.rotation.z}},
                {"translation_m", {pv.translation.x, pv.translation.y, pv.translation.z}},
                {"fell_back", pose.fell_back}};
}

/// Draws `n` poses for one cloud from a single stream keyed by
/// (seed, stream_id, 0).
inline std::vector<SampledPose>
sample_poses(const PointCloud &cloud, double hfov, const SamplerConfig &cfg, std::uint64_t seed,
             std::size_t n, std::string_view stream_id = "sample-poses") {
    cfg.validate();
    const SceneStats stats = scene_stats(cloud);
    RandomStream rng(seed, stream_id, 0);
    std::vector<SampledPose> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(sample_pose(rng, cloud, stats, hfov, cfg));
    }
    return out;
}

} // namespace forge
