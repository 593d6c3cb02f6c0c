// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// 8-bit PNG I/O through libpng's simplified API. Images are RGB8, masks are
// GRAY8 holding 0 or 255.

#pragma once

#include "forge/error.hpp"
#include "forge/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace forge::io {

inline std::uint8_t
to_byte(double v) {
    if (!(v > 0.0)) {
        return 0;
    }
    return static_cast<std::uint8_t>(std::lround(std::min(v, 1.0) * 255.0));
}

namespace detail {

inline std::vector<std::uint8_t>
read_png_bytes(const std::string &path, std::uint32_t format, int &width, int &height) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
        throw Error(ErrorCode::Io, path + ": " + image.message);
    }
    image.format = format;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        png_image_free(&image);
        throw Error(ErrorCode::Io, path + ": " + image.message);
    }
    width  = static_cast<int>(image.width);
    height = static_cast<int>(image.height);
    return buffer;
}

inline void
write_png_bytes(const std::string &path, std::uint32_t format, int width, int height,
                const std::vector<std::uint8_t> &bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width   = static_cast<png_uint_32>(width);
    image.height  = static_cast<png_uint_32>(height);
    image.format  = format;
    if (!png_image_write_to_file(&image, path.c_str(), 0, bytes.data(), 0, nullptr)) {
        throw Error(ErrorCode::Io, path + ": " + image.message);
    }
}

} // namespace detail

/// Any PNG libpng can decode, converted to RGB8 and scaled to [0, 1].
inline RgbImage
read_rgb_png(const std::string &path) {
    int width = 0, height = 0;
    const auto bytes = detail::read_png_bytes(path, PNG_FORMAT_RGB, width, height);
    RgbImage out(width, height);
    auto values = out.values();
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        values[i] = bytes[i] / 255.0;
    }
    return out;
}

inline void
write_rgb_png(const std::string &path, const RgbImage &image) {
    std::vector<std::uint8_t> bytes(image.values().size());
    std::transform(image.values().begin(), image.values().end(), bytes.begin(), to_byte);
    detail::write_png_bytes(path, PNG_FORMAT_RGB, image.width(), image.height(), bytes);
}

/// Nonzero gray values read as mask-on.
inline Mask
read_mask_png(const std::string &path) {
    int width = 0, height = 0;
    const auto bytes = detail::read_png_bytes(path, PNG_FORMAT_GRAY, width, height);
    Mask out(width, height);
    auto values = out.values();
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        values[i] = bytes[i] ? 1 : 0;
    }
    return out;
}

inline void
write_mask_png(const std::string &path, const Mask &mask) {
    std::vector<std::uint8_t> bytes(mask.values().size());
    std::transform(mask.values().begin(), mask.values().end(), bytes.begin(),
                   [](std::uint8_t m) { return static_cast<std::uint8_t>(m ? 255 : 0); });
    detail::write_png_bytes(path, PNG_FORMAT_GRAY, mask.width(), mask.height(), bytes);
}

} // namespace forge::io
