// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "forge/error.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

/// Dense interleaved row-major image. The Tag parameter keeps rasters with the
/// same element layout (depth vs. z-buffer, RGB vs. normals) from mixing.
template <typename T, int Channels, typename Tag>
class Raster {
  public:
    using value_type                 = T;
    static constexpr int kChannels   = Channels;

    Raster() = default;
    Raster(int width, int height, T fill = T{})
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * height * Channels, fill) {
        if (width < 0 || height < 0) {
            throw Error(ErrorCode::DimensionMismatch, "negative raster dimensions");
        }
    }

    int
    width() const noexcept {
        return width_;
    }
    int
    height() const noexcept {
        return height_;
    }
    std::size_t
    pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * height_;
    }
    bool
    empty() const noexcept {
        return data_.empty();
    }

    std::size_t
    offset(int row, int col, int channel = 0) const noexcept {
        return (static_cast<std::size_t>(row) * width_ + col) * Channels + channel;
    }

    T &
    operator()(int row, int col, int channel = 0) noexcept {
        return data_[offset(row, col, channel)];
    }
    const T &
    operator()(int row, int col, int channel = 0) const noexcept {
        return data_[offset(row, col, channel)];
    }

    std::span<T>
    values() noexcept {
        return data_;
    }
    std::span<const T>
    values() const noexcept {
        return data_;
    }

    template <typename U, int C, typename OtherTag>
    bool
    same_extent(const Raster<U, C, OtherTag> &other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool
    operator==(const Raster &a, const Raster &b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

  private:
    int width_  = 0;
    int height_ = 0;
    std::vector<T> data_;
};

struct RgbTag;
struct DepthTag;
struct NormalTag;
struct MaskTag;
struct ZBufferTag;

/// RGB in [0, 1].
using RgbImage = Raster<double, 3, RgbTag>;
/// Metric depth in meters; non-finite or non-positive marks an invalid pixel.
using DepthMap = Raster<double, 1, DepthTag>;
/// Camera-frame unit normals stored as (x, y, z) per pixel.
using NormalMap = Raster<double, 3, NormalTag>;
/// 0 = off, 1 = on.
using Mask = Raster<std::uint8_t, 1, MaskTag>;
using DepthBuffer = Raster<double, 1, ZBufferTag>;

template <typename A, typename B>
void
require_same_extent(const A &a, const B &b, std::string_view what) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a.width()) + "x" +
                        std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                        std::to_string(b.height()));
    }
}

} // namespace forge
