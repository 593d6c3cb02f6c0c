// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace forge;
using forge::test::max_abs_diff;

namespace {

void
expect_error(ErrorCode code, auto &&fn) {
    try {
        fn();
        FAIL() << "expected " << to_string(code);
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

} // namespace

TEST(Quaternion, IdentityMapsToIdentityMatrix) {
    EXPECT_EQ(quat_to_matrix({1, 0, 0, 0}), Mat3::identity());
}

TEST(Quaternion, QuarterTurnAboutYMapsZToX) {
    const double h = std::sqrt(0.5);
    const Mat3 r   = quat_to_matrix({h, 0, h, 0});
    EXPECT_LT(max_abs_diff(r * Vec3{0, 0, 1}, Vec3{1, 0, 0}), 1e-12);
    EXPECT_LT(max_abs_diff(r * Vec3{1, 0, 0}, Vec3{0, 0, -1}), 1e-12);
}

TEST(Quaternion, HandPickedRoundTrip) {
    const UnitQuaternion q = matrix_to_quat(quat_to_matrix({0.6, 0.8, 0, 0}));
    EXPECT_NEAR(q.w, 0.6, 1e-12);
    EXPECT_NEAR(q.x, 0.8, 1e-12);
    EXPECT_NEAR(q.y, 0.0, 1e-12);
    EXPECT_NEAR(q.z, 0.0, 1e-12);
}

TEST(Quaternion, IdentityMatrixToQuaternion) {
    EXPECT_EQ(matrix_to_quat(Mat3::identity()), (UnitQuaternion{1, 0, 0, 0}));
}

TEST(Quaternion, HalfTurnAboutXHasZeroScalar) {
    const Mat3 r = Mat3::from_rows({1, 0, 0}, {0, -1, 0}, {0, 0, -1});
    const UnitQuaternion q = matrix_to_quat(r);
    EXPECT_NEAR(q.w, 0.0, 1e-15);
    EXPECT_NEAR(q.x, 1.0, 1e-15);
    EXPECT_NEAR(q.y, 0.0, 1e-15);
    EXPECT_NEAR(q.z, 0.0, 1e-15);
}

TEST(Quaternion, RandomRoundTripAndValidity) {
    std::mt19937_64 gen(1);
    for (int i = 0; i < 1000; ++i) {
        const UnitQuaternion q = test::random_unit_quaternion(gen);
        const Mat3 r           = quat_to_matrix(q);
        EXPECT_LT(orthonormality_error(r), 1e-9);
        EXPECT_NEAR(r.determinant(), 1.0, 1e-9);
        const UnitQuaternion back = matrix_to_quat(r);
        const double sign         = (q.w * back.w + q.x * back.x + q.y * back.y + q.z * back.z) < 0
                                        ? -1.0
                                        : 1.0;
        EXPECT_NEAR(back.w, sign * q.w, 1e-9);
        EXPECT_NEAR(back.x, sign * q.x, 1e-9);
        EXPECT_NEAR(back.y, sign * q.y, 1e-9);
        EXPECT_NEAR(back.z, sign * q.z, 1e-9);
        EXPECT_GE(back.w, 0.0);
    }
}

TEST(Quaternion, RejectsNonUnitAndNonRotation) {
    expect_error(ErrorCode::NonUnitQuaternion, [] { quat_to_matrix({1.0, 0.01, 0, 0}); });
    expect_error(ErrorCode::NotARotation,
                 [] { matrix_to_quat(Mat3::from_rows({-1, 0, 0}, {0, 1, 0}, {0, 0, 1})); });
    expect_error(ErrorCode::NotARotation,
                 [] { matrix_to_quat(Mat3::from_rows({2, 0, 0}, {0, 1, 0}, {0, 0, 0.5})); });
}

TEST(RigidTransformTest, InvertIdentityAndApplyTranslation) {
    EXPECT_EQ(invert(RigidTransform::identity()), RigidTransform::identity());
    const RigidTransform t{Mat3::identity(), {1, 2, 3}};
    EXPECT_EQ(apply(t, Vec3{}), (Vec3{1, 2, 3}));
}

TEST(RigidTransformTest, CameraCenter) {
    EXPECT_EQ(camera_center(RigidTransform::identity()), (Vec3{0, 0, 0}));
    EXPECT_EQ(camera_center({Mat3::identity(), {0, 0, -2}}), (Vec3{0, 0, 2}));
    std::mt19937_64 gen(2);
    for (int i = 0; i < 100; ++i) {
        const RigidTransform t = test::random_transform(gen);
        EXPECT_LT(norm(apply(t, camera_center(t))), 1e-9);
    }
}

TEST(RigidTransformTest, GroupLaws) {
    std::mt19937_64 gen(3);
    for (int i = 0; i < 1000; ++i) {
        const RigidTransform a = test::random_transform(gen);
        const RigidTransform b = test::random_transform(gen);
        const RigidTransform c = test::random_transform(gen);
        const Vec3 p           = test::random_vec(gen);

        const RigidTransform left  = compose(compose(a, b), c);
        const RigidTransform right = compose(a, compose(b, c));
        EXPECT_LT(max_abs_diff(left.rotation, right.rotation), 1e-9);
        EXPECT_LT(max_abs_diff(left.translation, right.translation), 1e-9);

        EXPECT_LT(max_abs_diff(apply(compose(a, b), p), apply(a, apply(b, p))), 1e-9);
        EXPECT_EQ(compose(a, RigidTransform::identity()), a);

        const RigidTransform e = compose(a, invert(a));
        EXPECT_LT(max_abs_diff(e.rotation, Mat3::identity()), 1e-9);
        EXPECT_LT(norm(e.translation), 1e-9);
        EXPECT_LT(max_abs_diff(apply(invert(a), apply(a, p)), p), 1e-9);
    }
}

TEST(LookAt, CanonicalFrontalCase) {
    const RigidTransform t = look_at({0, 0, -1}, {0, 0, 0});
    EXPECT_EQ(t.rotation, Mat3::identity());
    EXPECT_EQ(t.translation, (Vec3{0, 0, 1}));
}

TEST(LookAt, SideCameraPutsTargetOnAxis) {
    const RigidTransform t = look_at({1, 0, 0}, {0, 0, 0});
    EXPECT_LT(max_abs_diff(apply(t, Vec3{}), Vec3{0, 0, 1}), 1e-12);
}

TEST(LookAt, DegenerateCases) {
    expect_error(ErrorCode::DegenerateLookAt, [] { look_at({0, 1, 0}, {0, 0, 0}); });
    expect_error(ErrorCode::DegenerateLookAt, [] { look_at({1, 2, 3}, {1, 2, 3}); });
}

TEST(LookAt, RandomTargetsLandOnAxisAndCenterIsCamera) {
    std::mt19937_64 gen(4);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 cam    = test::random_vec(gen);
        const Vec3 target = test::random_vec(gen);
        const RigidTransform t = look_at(cam, target);
        EXPECT_LT(orthonormality_error(t.rotation), 1e-9);
        EXPECT_NEAR(t.rotation.determinant(), 1.0, 1e-9);
        EXPECT_LT(max_abs_diff(apply(t, target), Vec3{0, 0, norm(target - cam)}), 1e-9);
        EXPECT_LT(max_abs_diff(camera_center(t), cam), 1e-9);
        // Image "up" stays on the side of world +y.
        EXPECT_GE(t.rotation.row(1).y, 0.0);
    }
}

TEST(Intrinsics, FromHorizontalFov) {
    const CameraIntrinsics a = intrinsics_from_hfov(256, 256, deg_to_rad(90.0));
    EXPECT_NEAR(a.fx, 128.0, 1e-12);
    EXPECT_NEAR(a.fy, 128.0, 1e-12);
    EXPECT_EQ(a.cx, 128.0);
    EXPECT_EQ(a.cy, 128.0);
    const CameraIntrinsics b = intrinsics_from_hfov(640, 480, deg_to_rad(90.0));
    EXPECT_NEAR(b.fx, 320.0, 1e-12);
    EXPECT_EQ(b.cy, 240.0);
    EXPECT_NEAR(b.hfov(), deg_to_rad(90.0), 1e-12);
}

TEST(Intrinsics, RejectsBadFov) {
    expect_error(ErrorCode::InvalidFov, [] { intrinsics_from_hfov(64, 64, 0.0); });
    expect_error(ErrorCode::InvalidFov, [] { intrinsics_from_hfov(64, 64, std::numbers::pi); });
    expect_error(ErrorCode::InvalidFov, [] { intrinsics_from_hfov(64, 64, -0.3); });
    expect_error(ErrorCode::DimensionMismatch, [] { intrinsics_from_hfov(0, 64, 1.0); });
}

TEST(PoseVector, EncodesScalarFirstAndRoundTrips) {
    std::mt19937_64 gen(5);
    const RigidTransform t = test::random_transform(gen);
    const PoseVector7 pv   = to_pose_vector(t);
    const auto arr         = pv.to_array();
    EXPECT_EQ(arr[0], t.translation.x);
    EXPECT_EQ(arr[3], pv.rotation.w);
    EXPECT_GE(pv.rotation.w, 0.0);
    const RigidTransform back = from_pose_vector(pv);
    EXPECT_LT(max_abs_diff(back.rotation, t.rotation), 1e-12);
    EXPECT_EQ(back.translation, t.translation);
}
