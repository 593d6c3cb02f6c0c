// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// Forward splatting of a point cloud into a target camera with backface
// culling and a nearest-depth z-buffer. One point writes at most one pixel;
// nothing is blended or filled.

#pragma once

#include "forge/error.hpp"
#include "forge/geometry.hpp"
#include "forge/pose_sampler.hpp"
#include "forge/raster.hpp"
#include "forge/scene_lift.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

namespace forge {

inline constexpr double kDefaultEpsNear = 1e-3;

/// Pseudo-target view. Pixels with mask 0 are black and hold +inf depth.
struct PseudoView {
    RgbImage image;
    Mask mask;
    DepthBuffer zbuffer;

    PseudoView() = default;
    PseudoView(int width, int height)
        : image(width, height, 0.0), mask(width, height, 0),
          zbuffer(width, height, std::numeric_limits<double>::infinity()) {}

    int
    width() const noexcept {
        return image.width();
    }
    int
    height() const noexcept {
        return image.height();
    }
};

/// True iff the surface faces the camera: n . (c - p) > 0. Grazing points
/// (exactly zero) are culled.
inline bool
backface_visible(const Vec3 &n, const Vec3 &p, const Vec3 &cam_center) {
    return dot(n, cam_center - p) > 0.0;
}

/// Discrete target pixel of a continuous coordinate, or false when it falls
/// outside the image. Comparisons run on the doubles before any integer
/// conversion so far-off points cannot overflow.
inline bool
pixel_of(const PixelCoord &q, const CameraIntrinsics &k, PixelIndex &out) {
    if (!(q.u >= 0.0 && q.u < k.width && q.v >= 0.0 && q.v < k.height)) {
        return false;
    }
    out = {static_cast<int>(std::floor(q.v)), static_cast<int>(std::floor(q.u))};
    return true;
}

/// Splats the cloud in index order. A point overwrites a pixel only when it
/// is strictly nearer, so equal depths keep the lower index.
inline PseudoView
render(const PointCloud &cloud, const RigidTransform &t, const CameraIntrinsics &k,
       double eps_near = kDefaultEpsNear) {
    if (cloud.empty()) {
        throw Error(ErrorCode::EmptyCloud, "cannot render an empty cloud");
    }
    if (k.width < 1 || k.height < 1) {
        throw Error(ErrorCode::DimensionMismatch, "intrinsics describe an empty image");
    }
    PseudoView view(k.width, k.height);
    const Vec3 center = camera_center(t);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3 &p = cloud.points[i];
        if (!backface_visible(cloud.normals[i], p, center)) {
            continue;
        }
        const Vec3 q = apply(t, p);
        if (!(q.z > eps_near)) {
            continue;
        }
        PixelIndex px;
        if (!pixel_of(project(q, k), k, px)) {
            continue;
        }
        double &depth = view.zbuffer(px.row, px.col);
        if (q.z < depth) {
            depth = q.z;
            const Rgb &c                  = cloud.colors[i];
            view.image(px.row, px.col, 0) = c[0];
            view.image(px.row, px.col, 1) = c[1];
            view.image(px.row, px.col, 2) = c[2];
            view.mask(px.row, px.col)     = 1;
        }
    }
    return view;
}

struct RenderMetadata {
    RigidTransform transform;
    CameraIntrinsics intrinsics;
    std::optional<Strategy> strategy;
    bool fell_back = false;
};

/// Lift then render in one call.
inline std::pair<PseudoView, RenderMetadata>
render_pair(const RgbImage &image, const DepthMap &depth, const NormalMap &normals,
            const CameraIntrinsics &k, const RigidTransform &t,
            double eps_near = kDefaultEpsNear) {
    const PointCloud cloud = unproject(image, depth, normals, k);
    return {render(cloud, t, k, eps_near), RenderMetadata{t, k, std::nullopt, false}};
}

inline std::pair<PseudoView, RenderMetadata>
render_pair(const RgbImage &image, const DepthMap &depth, const NormalMap &normals,
            const CameraIntrinsics &k, const SampledPose &pose,
            double eps_near = kDefaultEpsNear) {
    auto [view, meta] = render_pair(image, depth, normals, k, pose.transform, eps_near);
    meta.strategy     = pose.strategy;
    meta.fell_back    = pose.fell_back;
    return {std::move(view), meta};
}

} // namespace forge
