// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// Portable Float Map reader/writer.
//
//   "Pf" one channel (depth), "PF" three channels (normals)
//   "<width> <height>"
//   "<scale>"   negative => little-endian samples, positive => big-endian
//   float32 samples, rows stored bottom-to-top
//
// Files are always written little-endian with scale -1; both byte orders are
// accepted on read. Rows are flipped so row 0 is the top of the image in memory.

#pragma once

#include "forge/error.hpp"
#include "forge/raster.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace forge::io {

namespace detail {

inline std::uint32_t
byteswap32(std::uint32_t v) {
    return (v >> 24) | ((v >> 8) & 0x0000ff00u) | ((v << 8) & 0x00ff0000u) | (v << 24);
}

inline std::string
read_token(std::istream &in) {
    std::string token;
    int c = in.get();
    while (c != EOF && std::isspace(c)) {
        c = in.get();
    }
    while (c != EOF && !std::isspace(c)) {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    // `c` is the single whitespace byte terminating the token (or EOF).
    return token;
}

struct PfmPayload {
    int width    = 0;
    int height   = 0;
    int channels = 0;
    std::vector<float> samples; ///< top-to-bottom, interleaved
};

inline PfmPayload
read_pfm_payload(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path);
    }
    PfmPayload out;
    const std::string magic = read_token(in);
    if (magic == "Pf") {
        out.channels = 1;
    } else if (magic == "PF") {
        out.channels = 3;
    } else {
        throw Error(ErrorCode::Io, path + ": not a PFM file");
    }
    const std::string w_tok = read_token(in);
    const std::string h_tok = read_token(in);
    const std::string s_tok = read_token(in);
    double scale            = 0.0;
    try {
        out.width  = std::stoi(w_tok);
        out.height = std::stoi(h_tok);
        scale      = std::stod(s_tok);
    } catch (const std::exception &) {
        throw Error(ErrorCode::Io, path + ": malformed PFM header");
    }
    if (out.width <= 0 || out.height <= 0 || scale == 0.0 || !std::isfinite(scale)) {
        throw Error(ErrorCode::Io, path + ": invalid PFM header values");
    }
    const bool little     = scale < 0.0;
    const std::size_t row = static_cast<std::size_t>(out.width) * out.channels;
    const std::size_t n   = row * out.height;
    std::vector<std::uint32_t> raw(n);
    in.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(n * 4));
    if (static_cast<std::size_t>(in.gcount()) != n * 4) {
        throw Error(ErrorCode::Io, path + ": truncated PFM data");
    }
    const bool host_little = std::endian::native == std::endian::little;
    out.samples.resize(n);
    for (int r = 0; r < out.height; ++r) {
        const std::size_t src = static_cast<std::size_t>(out.height - 1 - r) * row;
        const std::size_t dst = static_cast<std::size_t>(r) * row;
        for (std::size_t i = 0; i < row; ++i) {
            std::uint32_t bits = raw[src + i];
            if (little != host_little) {
                bits = byteswap32(bits);
            }
            out.samples[dst + i] = std::bit_cast<float>(bits);
        }
    }
    return out;
}

inline void
write_pfm_payload(const std::string &path, int width, int height, int channels,
                  const std::vector<float> &samples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot create " + path);
    }
    out << (channels == 1 ? "Pf" : "PF") << '\n' << width << ' ' << height << '\n' << "-1.0\n";
    const bool host_little = std::endian::native == std::endian::little;
    const std::size_t row  = static_cast<std::size_t>(width) * channels;
    std::vector<std::uint32_t> raw(samples.size());
    for (int r = 0; r < height; ++r) {
        const std::size_t src = static_cast<std::size_t>(r) * row;
        const std::size_t dst = static_cast<std::size_t>(height - 1 - r) * row;
        for (std::size_t i = 0; i < row; ++i) {
            std::uint32_t bits = std::bit_cast<std::uint32_t>(samples[src + i]);
            raw[dst + i]       = host_little ? bits : byteswap32(bits);
        }
    }
    out.write(reinterpret_cast<const char *>(raw.data()),
              static_cast<std::streamsize>(raw.size() * 4));
    if (!out) {
        throw Error(ErrorCode::Io, "failed writing " + path);
    }
}

template <typename RasterT>
RasterT
to_raster(const PfmPayload &p, const std::string &path) {
    if (p.channels != RasterT::kChannels) {
        throw Error(ErrorCode::Io, path + ": expected " + std::to_string(RasterT::kChannels) +
                                       "-channel PFM, found " + std::to_string(p.channels));
    }
    RasterT out(p.width, p.height);
    auto values = out.values();
    for (std::size_t i = 0; i < p.samples.size(); ++i) {
        values[i] = static_cast<double>(p.samples[i]);
    }
    return out;
}

template <typename RasterT>
void
from_raster(const std::string &path, const RasterT &r) {
    std::vector<float> samples(r.values().size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        samples[i] = static_cast<float>(r.values()[i]);
    }
    write_pfm_payload(path, r.width(), r.height(), RasterT::kChannels, samples);
}

} // namespace detail

inline DepthMap
read_depth_pfm(const std::string &path) {
    return detail::to_raster<DepthMap>(detail::read_pfm_payload(path), path);
}

inline NormalMap
read_normal_pfm(const std::string &path) {
    return detail::to_raster<NormalMap>(detail::read_pfm_payload(path), path);
}

inline void
write_depth_pfm(const std::string &path, const DepthMap &depth) {
    detail::from_raster(path, depth);
}

inline void
write_normal_pfm(const std::string &path, const NormalMap &normals) {
    detail::from_raster(path, normals);
}

} // namespace forge::io
