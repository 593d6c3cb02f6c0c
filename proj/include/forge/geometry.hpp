// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// SE(3), quaternion and pinhole primitives.
//
// Camera frame convention: right-handed, +x right, +y up, +z forward into the
// scene. Image rows grow downward, so the vertical pixel offset is negated when
// moving between pixel and camera coordinates. Pixel (row, col) covers the
// continuous square [col, col+1) x [row, row+1) and has its center at
// (col + 0.5, row + 0.5).

#pragma once

#include "forge/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace forge {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3
    operator+(const Vec3 &a, const Vec3 &b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend constexpr Vec3
    operator-(const Vec3 &a, const Vec3 &b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend constexpr Vec3
    operator*(double s, const Vec3 &v) {
        return {s * v.x, s * v.y, s * v.z};
    }
    friend constexpr Vec3
    operator*(const Vec3 &v, double s) {
        return s * v;
    }
    friend constexpr Vec3
    operator/(const Vec3 &v, double s) {
        return {v.x / s, v.y / s, v.z / s};
    }
    friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

constexpr double
dot(const Vec3 &a, const Vec3 &b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Vec3
cross(const Vec3 &a, const Vec3 &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double
norm(const Vec3 &v) {
    return std::sqrt(dot(v, v));
}

inline bool
is_finite(const Vec3 &v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Angle in radians between two non-zero vectors; atan2 form stays accurate
/// near 0 and pi where acos loses precision.
inline double
angle_between(const Vec3 &a, const Vec3 &b) {
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

inline constexpr Vec3 kUp{0.0, 1.0, 0.0};
inline constexpr Vec3 kForward{0.0, 0.0, 1.0};

/// 3x3 matrix, row-major storage.
struct Mat3 {
    std::array<double, 9> m{};

    static constexpr Mat3
    identity() {
        return {{1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0}};
    }

    static constexpr Mat3
    from_rows(const Vec3 &r0, const Vec3 &r1, const Vec3 &r2) {
        return {{r0.x, r0.y, r0.z, r1.x, r1.y, r1.z, r2.x, r2.y, r2.z}};
    }

    static constexpr Mat3
    from_cols(const Vec3 &c0, const Vec3 &c1, const Vec3 &c2) {
        return {{c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z}};
    }

    constexpr double
    operator()(int row, int col) const {
        return m[row * 3 + col];
    }
    constexpr double &
    operator()(int row, int col) {
        return m[row * 3 + col];
    }

    constexpr Vec3
    row(int r) const {
        return {m[r * 3], m[r * 3 + 1], m[r * 3 + 2]};
    }
    constexpr Vec3
    col(int c) const {
        return {m[c], m[3 + c], m[6 + c]};
    }

    constexpr Mat3
    transposed() const {
        return from_cols(row(0), row(1), row(2));
    }

    constexpr double
    determinant() const {
        return dot(row(0), cross(row(1), row(2)));
    }

    friend constexpr Vec3
    operator*(const Mat3 &a, const Vec3 &v) {
        return {dot(a.row(0), v), dot(a.row(1), v), dot(a.row(2), v)};
    }

    friend constexpr Mat3
    operator*(const Mat3 &a, const Mat3 &b) {
        Mat3 out;
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c) + a(r, 2) * b(2, c);
            }
        }
        return out;
    }

    friend constexpr bool operator==(const Mat3 &, const Mat3 &) = default;
};

/// Largest absolute entry of R^T R - I.
inline double
orthonormality_error(const Mat3 &r) {
    const Mat3 rtr = r.transposed() * r;
    const Mat3 eye = Mat3::identity();
    double worst   = 0.0;
    for (int i = 0; i < 9; ++i) {
        worst = std::max(worst, std::abs(rtr.m[i] - eye.m[i]));
    }
    return worst;
}

/// Scalar-first unit quaternion. Canonical form has w >= 0.
struct UnitQuaternion {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double
    norm() const {
        return std::sqrt(w * w + x * x + y * y + z * z);
    }

    UnitQuaternion
    canonical() const {
        if (w < 0.0) {
            return {-w, -x, -y, -z};
        }
        return *this;
    }

    friend constexpr bool operator==(const UnitQuaternion &, const UnitQuaternion &) = default;
};

inline Mat3
quat_to_matrix(const UnitQuaternion &q) {
    const double n = q.norm();
    if (!(std::abs(n - 1.0) <= 1e-6)) {
        std::ostringstream msg;
        msg << "quaternion norm " << n << " deviates from 1 by more than 1e-6";
        throw Error(ErrorCode::NonUnitQuaternion, msg.str());
    }
    const double w = q.w, x = q.x, y = q.y, z = q.z;
    return {{1.0 - 2.0 * (y * y + z * z),
             2.0 * (x * y - w * z),
             2.0 * (x * z + w * y),
             2.0 * (x * y + w * z),
             1.0 - 2.0 * (x * x + z * z),
             2.0 * (y * z - w * x),
             2.0 * (x * z - w * y),
             2.0 * (y * z + w * x),
             1.0 - 2.0 * (x * x + y * y)}};
}

/// Shepperd's method: branch on the largest of (trace, diagonal entries) so the
/// square root argument is never small.
inline UnitQuaternion
matrix_to_quat(const Mat3 &r) {
    if (!(orthonormality_error(r) <= 1e-6) || !(std::abs(r.determinant() - 1.0) <= 1e-6)) {
        throw Error(ErrorCode::NotARotation, "matrix is not orthonormal with det +1");
    }
    const double trace = r(0, 0) + r(1, 1) + r(2, 2);
    UnitQuaternion q;
    if (trace >= r(0, 0) && trace >= r(1, 1) && trace >= r(2, 2)) {
        const double s = std::sqrt(1.0 + trace) * 2.0; // 4w
        q              = {0.25 * s,
                          (r(2, 1) - r(1, 2)) / s,
                          (r(0, 2) - r(2, 0)) / s,
                          (r(1, 0) - r(0, 1)) / s};
    } else if (r(0, 0) >= r(1, 1) && r(0, 0) >= r(2, 2)) {
        const double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2.0; // 4x
        q              = {(r(2, 1) - r(1, 2)) / s,
                          0.25 * s,
                          (r(0, 1) + r(1, 0)) / s,
                          (r(0, 2) + r(2, 0)) / s};
    } else if (r(1, 1) >= r(2, 2)) {
        const double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2.0; // 4y
        q              = {(r(0, 2) - r(2, 0)) / s,
                          (r(0, 1) + r(1, 0)) / s,
                          0.25 * s,
                          (r(1, 2) + r(2, 1)) / s};
    } else {
        const double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2.0; // 4z
        q              = {(r(1, 0) - r(0, 1)) / s,
                          (r(0, 2) + r(2, 0)) / s,
                          (r(1, 2) + r(2, 1)) / s,
                          0.25 * s};
    }
    const double n = q.norm();
    q              = {q.w / n, q.x / n, q.y / n, q.z / n};
    return q.canonical();
}

/// World-to-camera extrinsic [R | t]: p_cam = R p_world + t.
struct RigidTransform {
    Mat3 rotation    = Mat3::identity();
    Vec3 translation = {};

    static constexpr RigidTransform
    identity() {
        return {};
    }

    friend constexpr bool operator==(const RigidTransform &, const RigidTransform &) = default;
};

inline Vec3
apply(const RigidTransform &t, const Vec3 &p) {
    return t.rotation * p + t.translation;
}

/// apply(compose(a, b), p) == apply(a, apply(b, p)).
inline RigidTransform
compose(const RigidTransform &a, const RigidTransform &b) {
    return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

inline RigidTransform
invert(const RigidTransform &t) {
    const Mat3 rt = t.rotation.transposed();
    return {rt, Vec3{} - rt * t.translation};
}

/// Camera center in world coordinates, c = -R^T t.
inline Vec3
camera_center(const RigidTransform &t) {
    return Vec3{} - t.rotation.transposed() * t.translation;
}

/// Extrinsic for a camera at `camera_pos` looking at `target` with +y as the
/// reference up direction. The basis [right | up | forward] is camera-to-world;
/// the returned rotation is its transpose, so the target lands on the +z axis.
inline RigidTransform
look_at(const Vec3 &camera_pos, const Vec3 &target) {
    const Vec3 offset   = target - camera_pos;
    const double length = norm(offset);
    if (!(length > 1e-9)) {
        throw Error(ErrorCode::DegenerateLookAt, "camera and target coincide");
    }
    const Vec3 forward     = offset / length;
    const Vec3 right_raw   = cross(kUp, forward);
    const double right_len = norm(right_raw);
    if (!(right_len > 1e-6)) {
        throw Error(ErrorCode::DegenerateLookAt, "forward direction is parallel to the up axis");
    }
    const Vec3 right = right_raw / right_len;
    const Vec3 up    = cross(forward, right);
    const Mat3 rot   = Mat3::from_rows(right, up, forward);
    return {rot, Vec3{} - rot * camera_pos};
}

/// Pinhole intrinsics with square pixels and the principal point at the image
/// center.
struct CameraIntrinsics {
    int width  = 0;
    int height = 0;
    double fx  = 0.0;
    double fy  = 0.0;
    double cx  = 0.0;
    double cy  = 0.0;

    /// Horizontal field of view in radians.
    double
    hfov() const {
        return 2.0 * std::atan((width / 2.0) / fx);
    }

    friend constexpr bool operator==(const CameraIntrinsics &, const CameraIntrinsics &) = default;
};

inline double
deg_to_rad(double deg) {
    return deg * std::numbers::pi / 180.0;
}

inline double
rad_to_deg(double rad) {
    return rad * 180.0 / std::numbers::pi;
}

inline CameraIntrinsics
intrinsics_from_hfov(int width, int height, double hfov) {
    if (width < 1 || height < 1) {
        throw Error(ErrorCode::DimensionMismatch, "image dimensions must be positive");
    }
    if (!(hfov > 0.0 && hfov < std::numbers::pi)) {
        throw Error(ErrorCode::InvalidFov, "horizontal field of view must lie in (0, pi)");
    }
    const double f = (width / 2.0) / std::tan(hfov / 2.0);
    return {width, height, f, f, width / 2.0, height / 2.0};
}

/// 7D pose encoding: translation followed by a scalar-first unit quaternion.
struct PoseVector7 {
    Vec3 translation;
    UnitQuaternion rotation;

    std::array<double, 7>
    to_array() const {
        return {translation.x, translation.y, translation.z,
                rotation.w, rotation.x, rotation.y, rotation.z};
    }
};

inline PoseVector7
to_pose_vector(const RigidTransform &t) {
    return {t.translation, matrix_to_quat(t.rotation)};
}

inline RigidTransform
from_pose_vector(const PoseVector7 &p) {
    return {quat_to_matrix(p.rotation), p.translation};
}

} // namespace forge
