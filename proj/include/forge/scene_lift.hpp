// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// Lifting a metric depth map into a source-camera point cloud, the matching
// projection, and the per-cloud statistics consumed by the pose sampler.

#pragma once

#include "forge/error.hpp"
#include "forge/geometry.hpp"
#include "forge/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace forge {

using Rgb = std::array<double, 3>;

struct PixelIndex {
    int row = 0;
    int col = 0;

    friend constexpr bool operator==(const PixelIndex &, const PixelIndex &) = default;
};

/// Structure-of-arrays cloud in the source camera frame. Entry i of every
/// array describes the same point; points keep the row-major order of the
/// pixels they came from.
struct PointCloud {
    std::vector<Vec3> points;
    std::vector<Vec3> normals;
    std::vector<Rgb> colors;
    std::vector<PixelIndex> pixel_index;

    std::size_t
    size() const noexcept {
        return points.size();
    }
    bool
    empty() const noexcept {
        return points.empty();
    }

    void
    reserve(std::size_t n) {
        points.reserve(n);
        normals.reserve(n);
        colors.reserve(n);
        pixel_index.reserve(n);
    }

    void
    push_back(const Vec3 &p, const Vec3 &n, const Rgb &c, PixelIndex px) {
        points.push_back(p);
        normals.push_back(n);
        colors.push_back(c);
        pixel_index.push_back(px);
    }
};

struct SceneStats {
    Vec3 sigma;
    double min_z = 0.0;
    Vec3 centroid;
};

struct PixelCoord {
    double u = 0.0;
    double v = 0.0;
};

inline bool
is_valid_depth(double z) {
    return std::isfinite(z) && z > 0.0;
}

/// Pixels with non-finite or non-positive depth are dropped. Normals of kept
/// pixels must be unit length within 1e-3; they are used as given.
inline PointCloud
unproject(const RgbImage &image, const DepthMap &depth, const NormalMap &normals,
          const CameraIntrinsics &k) {
    require_same_extent(image, depth, "image vs depth");
    require_same_extent(image, normals, "image vs normals");
    if (image.width() != k.width || image.height() != k.height) {
        throw Error(ErrorCode::DimensionMismatch, "image size does not match the intrinsics");
    }

    PointCloud cloud;
    cloud.reserve(depth.pixel_count());
    for (int row = 0; row < depth.height(); ++row) {
        const double dy = row + 0.5 - k.cy;
        for (int col = 0; col < depth.width(); ++col) {
            const double z = depth(row, col);
            if (!is_valid_depth(z)) {
                continue;
            }
            const Vec3 n{normals(row, col, 0), normals(row, col, 1), normals(row, col, 2)};
            if (!(std::abs(norm(n) - 1.0) <= 1e-3)) {
                throw Error(ErrorCode::InvalidNormal,
                            "normal at row " + std::to_string(row) + ", col " +
                                std::to_string(col) + " is not unit length");
            }
            const double dx = col + 0.5 - k.cx;
            const Vec3 p{dx * z / k.fx, -(dy * z / k.fy), z};
            cloud.push_back(p, n, Rgb{image(row, col, 0), image(row, col, 1), image(row, col, 2)},
                            {row, col});
        }
    }
    if (cloud.empty()) {
        throw Error(ErrorCode::EmptyCloud, "depth map has no valid pixels");
    }
    return cloud;
}

/// Continuous pixel coordinates of a camera-frame point.
inline PixelCoord
project(const Vec3 &p, const CameraIntrinsics &k) {
    if (!(p.z > 0.0)) {
        throw Error(ErrorCode::BehindCamera, "point has non-positive depth");
    }
    return {k.cx + k.fx * p.x / p.z, k.cy - k.fy * p.y / p.z};
}

/// Population statistics over the cloud. Moments are accumulated relative to
/// the first point so an axis with constant coordinate gets exactly zero spread.
inline SceneStats
scene_stats(const PointCloud &cloud) {
    if (cloud.empty()) {
        throw Error(ErrorCode::EmptyCloud, "scene statistics of an empty cloud");
    }
    const double n   = static_cast<double>(cloud.size());
    const Vec3 pivot = cloud.points.front();
    Vec3 sum;
    double min_z = std::numeric_limits<double>::infinity();
    for (const Vec3 &p : cloud.points) {
        sum   = sum + (p - pivot);
        min_z = std::min(min_z, p.z);
    }
    const Vec3 mean_offset = sum / n;
    Vec3 sq;
    for (const Vec3 &p : cloud.points) {
        const Vec3 d = (p - pivot) - mean_offset;
        sq           = sq + Vec3{d.x * d.x, d.y * d.y, d.z * d.z};
    }
    return {{std::sqrt(sq.x / n), std::sqrt(sq.y / n), std::sqrt(sq.z / n)},
            min_z,
            pivot + mean_offset};
}

} // namespace forge
