// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// Streams pseudo-pairs for one synthetic frame straight from memory and scores
// a trivial "prediction" (the unwarped source) with the masked losses, the way
// a training loop would consume them.

#include "forge/forge.hpp"

#include <cstdio>

int
main() {
    using namespace forge;

    const double hfov       = deg_to_rad(70.0);
    const CameraIntrinsics k = intrinsics_from_hfov(128, 96, hfov);
    const Vec3 n{0.2, 0.1, -1.0};
    const synthetic::AnalyticScene scene{synthetic::SlantedPlane{{0.0, 0.0, 2.5}, n / norm(n)},
                                         synthetic::Texture::Checkerboard};
    const auto real = synthetic::realize(scene, k);

    const SourceFrame frame{"demo", real.image, real.depth, real.normals, hfov};
    PairStream stream(frame, SamplerConfig{}, /*seed=*/7, /*views_per_image=*/6);

    while (auto pair = stream.next()) {
        std::size_t on = 0;
        for (auto m : pair->view.mask.values()) {
            on += m;
        }
        const MaskedImagePair loss_input{frame.image, pair->view.image, pair->view.mask};
        const auto &t = pair->pose_vector.translation;
        std::printf("view %d  %-18s  t=(%+.3f %+.3f %+.3f)  coverage %5.1f%%  masked mse %.4f\n",
                    pair->view_index, std::string(to_string(pair->pose.strategy)).c_str(), t.x,
                    t.y, t.z, 100.0 * on / pair->view.mask.pixel_count(), masked_mse(loss_input));
    }
    return 0;
}
