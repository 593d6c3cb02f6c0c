// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "forge/config.hpp"
#include "forge/error.hpp"
#include "forge/evaluation.hpp"
#include "forge/geometry.hpp"
#include "forge/io/pfm.hpp"
#include "forge/io/png.hpp"
#include "forge/losses.hpp"
#include "forge/metrics.hpp"
#include "forge/oracle_check.hpp"
#include "forge/pipeline.hpp"
#include "forge/pose_sampler.hpp"
#include "forge/random.hpp"
#include "forge/raster.hpp"
#include "forge/reprojector.hpp"
#include "forge/scene_lift.hpp"
#include "forge/synthetic.hpp"
