// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// Analytic test scenes with exact depth and normals, and a per-pixel
// brute-force renderer used as the reference for the fast splatting path.
// The reference shares geometry primitives with the renderer but none of its
// rasterization code.

#pragma once

#include "forge/error.hpp"
#include "forge/geometry.hpp"
#include "forge/raster.hpp"
#include "forge/reprojector.hpp"
#include "forge/scene_lift.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

namespace forge::synthetic {

struct FrontoPlane {
    double depth = 2.0;
};

struct SlantedPlane {
    Vec3 point{0.0, 0.0, 2.0};
    Vec3 normal{0.0, 0.0, -1.0};
};

struct Sphere {
    Vec3 center{0.0, 0.0, 5.0};
    double radius = 1.0;
};

/// Procedural textures are functions of the source pixel grid and are
/// quantized to multiples of 1/255 so they survive 8-bit PNG storage.
enum class Texture {
    Checkerboard, ///< alternating 1-pixel cells in red, gradients in green/blue
    AxisGradient, ///< red ramps with the column, green with the row
    Hash,         ///< per-pixel pseudo-random color
};

struct AnalyticScene {
    std::variant<FrontoPlane, SlantedPlane, Sphere> kind = FrontoPlane{};
    Texture texture = Texture::Checkerboard;
};

struct RealizedScene {
    RgbImage image;
    DepthMap depth;
    NormalMap normals;
};

namespace detail {

inline double
quantize(unsigned level) {
    return static_cast<double>(level % 256u) / 255.0;
}

inline std::uint32_t
mix32(std::uint32_t x) {
    x ^= x >> 16;
    x *= 0x7feb352du;
    x ^= x >> 15;
    x *= 0x846ca68bu;
    x ^= x >> 16;
    return x;
}

struct Hit {
    double t;
    Vec3 normal;
};

/// Ray from the origin along `dir` (dir.z == 1, so t is the depth).
inline std::optional<Hit>
intersect(const FrontoPlane &s, const Vec3 &) {
    if (!(s.depth > 0.0)) {
        return std::nullopt;
    }
    return Hit{s.depth, {0.0, 0.0, -1.0}};
}

inline std::optional<Hit>
intersect(const SlantedPlane &s, const Vec3 &dir) {
    const double n_len = norm(s.normal);
    const Vec3 n       = s.normal / n_len;
    const double denom = dot(n, dir);
    if (denom == 0.0) {
        return std::nullopt;
    }
    const double t = dot(n, s.point) / denom;
    if (!(t > 0.0) || !std::isfinite(t)) {
        return std::nullopt;
    }
    // Orient toward the camera.
    return Hit{t, denom < 0.0 ? n : Vec3{} - n};
}

inline std::optional<Hit>
intersect(const Sphere &s, const Vec3 &dir) {
    // |t dir - c|^2 = r^2
    const double a    = dot(dir, dir);
    const double b    = -2.0 * dot(dir, s.center);
    const double c    = dot(s.center, s.center) - s.radius * s.radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        return std::nullopt;
    }
    const double root = std::sqrt(disc);
    const double t0   = (-b - root) / (2.0 * a);
    const double t1   = (-b + root) / (2.0 * a);
    const double t    = t0 > 0.0 ? t0 : t1;
    if (!(t > 0.0)) {
        return std::nullopt;
    }
    Vec3 n = (t * dir - s.center) / s.radius;
    n      = n / norm(n);
    if (dot(n, dir) > 0.0) {
        n = Vec3{} - n; // inside the sphere: see the inner wall
    }
    return Hit{t, n};
}

} // namespace detail

inline Rgb
texture_color(Texture texture, int row, int col) {
    const auto r = static_cast<unsigned>(row);
    const auto c = static_cast<unsigned>(col);
    switch (texture) {
    case Texture::Checkerboard:
        return {((r + c) % 2u) ? 200.0 / 255.0 : 55.0 / 255.0, detail::quantize(c * 3u + 7u),
                detail::quantize(r * 5u + 11u)};
    case Texture::AxisGradient:
        return {detail::quantize(c), detail::quantize(r), detail::quantize((r + c) / 2u + 64u)};
    case Texture::Hash: {
        const std::uint32_t h = detail::mix32(r * 73856093u ^ c * 19349663u ^ 0x9e3779b9u);
        return {detail::quantize(h & 0xffu), detail::quantize((h >> 8) & 0xffu),
                detail::quantize((h >> 16) & 0xffu)};
    }
    }
    return {0.0, 0.0, 0.0};
}

/// Exact ray-surface intersection at every pixel center. Pixels whose ray
/// misses get depth 0 (invalid) and a zero normal; their color is still the
/// texture.
inline RealizedScene
realize(const AnalyticScene &scene, const CameraIntrinsics &k) {
    RealizedScene out{RgbImage(k.width, k.height, 0.0), DepthMap(k.width, k.height, 0.0),
                      NormalMap(k.width, k.height, 0.0)};
    for (int row = 0; row < k.height; ++row) {
        for (int col = 0; col < k.width; ++col) {
            const Rgb color = texture_color(scene.texture, row, col);
            for (int c = 0; c < 3; ++c) {
                out.image(row, col, c) = color[c];
            }
            const Vec3 dir{(col + 0.5 - k.cx) / k.fx, -((row + 0.5 - k.cy) / k.fy), 1.0};
            const auto hit =
                std::visit([&](const auto &s) { return detail::intersect(s, dir); }, scene.kind);
            if (!hit) {
                continue;
            }
            out.depth(row, col)      = hit->t;
            out.normals(row, col, 0) = hit->normal.x;
            out.normals(row, col, 1) = hit->normal.y;
            out.normals(row, col, 2) = hit->normal.z;
        }
    }
    return out;
}

/// Reference renderer: every output pixel independently scans all points and
/// keeps the nearest one that survives culling and lands inside it, with the
/// lowest index winning depth ties. O(pixels * points).
inline PseudoView
brute_force_render(const PointCloud &cloud, const RigidTransform &t, const CameraIntrinsics &k,
                   double eps_near = kDefaultEpsNear) {
    if (cloud.empty()) {
        throw Error(ErrorCode::EmptyCloud, "cannot render an empty cloud");
    }
    // Per-point camera-space quantities, computed once; the per-pixel scan
    // below decides membership itself.
    struct Candidate {
        bool alive;
        double z;
        double u;
        double v;
    };
    const Vec3 center = camera_center(t);
    std::vector<Candidate> cands(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3 q    = apply(t, cloud.points[i]);
        const bool face = dot(cloud.normals[i], center - cloud.points[i]) > 0.0;
        if (!face || !(q.z > eps_near)) {
            cands[i] = {false, 0.0, 0.0, 0.0};
            continue;
        }
        const PixelCoord uv = project(q, k);
        cands[i]            = {true, q.z, uv.u, uv.v};
    }

    PseudoView view(k.width, k.height);
    for (int row = 0; row < k.height; ++row) {
        const double v_lo = row;
        const double v_hi = row + 1.0;
        for (int col = 0; col < k.width; ++col) {
            const double u_lo = col;
            const double u_hi = col + 1.0;
            std::size_t best  = cloud.size();
            for (std::size_t i = 0; i < cands.size(); ++i) {
                const Candidate &cd = cands[i];
                if (!cd.alive || !(cd.u >= u_lo && cd.u < u_hi && cd.v >= v_lo && cd.v < v_hi)) {
                    continue;
                }
                if (best == cloud.size() || cd.z < cands[best].z) {
                    best = i;
                }
            }
            if (best == cloud.size()) {
                continue;
            }
            view.zbuffer(row, col) = cands[best].z;
            view.mask(row, col)    = 1;
            for (int c = 0; c < 3; ++c) {
                view.image(row, col, c) = cloud.colors[best][c];
            }
        }
    }
    return view;
}

} // namespace forge::synthetic
