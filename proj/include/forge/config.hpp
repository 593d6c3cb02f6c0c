// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

// Run configuration and manifest parsing. The config is a single strict JSON
// document: unknown keys and wrong types are errors. Manifests are JSON lines,
// one entry per line.

#pragma once

#include "forge/error.hpp"
#include "forge/geometry.hpp"
#include "forge/pose_sampler.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace forge {

using json = nlohmann::json;

struct RunConfig {
    SamplerConfig sampler;
    int views_per_image = 1;
    std::uint64_t seed  = 0;
    std::string output_dir;
    int threads         = 1;
    double loss_epsilon = 1e-6;

    void
    validate() const {
        sampler.validate();
        if (views_per_image < 1) {
            throw Error(ErrorCode::InvalidConfig, "views_per_image must be >= 1");
        }
        if (threads < 1) {
            throw Error(ErrorCode::InvalidConfig, "threads must be >= 1");
        }
        if (!(loss_epsilon > 0.0)) {
            throw Error(ErrorCode::InvalidConfig, "loss_epsilon must be positive");
        }
    }
};

struct ManifestEntry {
    std::string id;
    std::string image_path;
    std::string depth_path;
    std::string normal_path;
    double hfov_deg = 0.0;
};

namespace detail {

inline void
reject_unknown_keys(const json &obj, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
    if (!obj.is_object()) {
        throw Error(ErrorCode::InvalidConfig, std::string(where) + " must be a JSON object");
    }
    for (const auto &item : obj.items()) {
        bool known = false;
        for (auto key : allowed) {
            known = known || item.key() == key;
        }
        if (!known) {
            throw Error(ErrorCode::InvalidConfig,
                        "unknown key '" + item.key() + "' in " + std::string(where));
        }
    }
}

template <typename T>
void
read_field(const json &obj, const char *key, T &out, std::string_view where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return;
    }
    try {
        if constexpr (std::is_same_v<T, double>) {
            if (!it->is_number()) {
                throw Error(ErrorCode::InvalidConfig, "");
            }
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer()) {
                throw Error(ErrorCode::InvalidConfig, "");
            }
            if constexpr (std::is_unsigned_v<T>) {
                if (it->is_number_integer() && !it->is_number_unsigned()) {
                    throw Error(ErrorCode::InvalidConfig, "");
                }
            }
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!it->is_string()) {
                throw Error(ErrorCode::InvalidConfig, "");
            }
        }
        out = it->template get<T>();
    } catch (const std::exception &) {
        throw Error(ErrorCode::InvalidConfig,
                    "key '" + std::string(key) + "' in " + std::string(where) + " has the wrong type");
    }
}

} // namespace detail

inline SamplerConfig
sampler_config_from_json(const json &j) {
    constexpr std::string_view where = "sampler";
    detail::reject_unknown_keys(j,
                                {"prob_identity", "prob_translation", "prob_rotation",
                                 "prob_combined", "prob_normal_derived", "prob_frontal", "alpha_t",
                                 "alpha_r", "d_min", "d_max", "delta_deg", "sigma_anchor", "tau",
                                 "eps_near"},
                                where);
    SamplerConfig cfg;
    detail::read_field(j, "prob_identity", cfg.prob_identity, where);
    detail::read_field(j, "prob_translation", cfg.prob_translation, where);
    detail::read_field(j, "prob_rotation", cfg.prob_rotation, where);
    detail::read_field(j, "prob_combined", cfg.prob_combined, where);
    detail::read_field(j, "prob_normal_derived", cfg.prob_normal_derived, where);
    detail::read_field(j, "prob_frontal", cfg.prob_frontal, where);
    detail::read_field(j, "alpha_t", cfg.alpha_t, where);
    detail::read_field(j, "alpha_r", cfg.alpha_r, where);
    detail::read_field(j, "d_min", cfg.d_min, where);
    detail::read_field(j, "d_max", cfg.d_max, where);
    double delta_deg = rad_to_deg(cfg.delta);
    detail::read_field(j, "delta_deg", delta_deg, where);
    cfg.delta = deg_to_rad(delta_deg);
    detail::read_field(j, "sigma_anchor", cfg.sigma_anchor, where);
    detail::read_field(j, "tau", cfg.tau, where);
    detail::read_field(j, "eps_near", cfg.eps_near, where);
    cfg.validate();
    return cfg;
}

inline json
to_json(const SamplerConfig &cfg) {
    return json{{"prob_identity", cfg.prob_identity},
                {"prob_translation", cfg.prob_translation},
                {"prob_rotation", cfg.prob_rotation},
                {"prob_combined", cfg.prob_combined},
                {"prob_normal_derived", cfg.prob_normal_derived},
                {"prob_frontal", cfg.prob_frontal},
                {"alpha_t", cfg.alpha_t},
                {"alpha_r", cfg.alpha_r},
                {"d_min", cfg.d_min},
                {"d_max", cfg.d_max},
                {"delta_deg", rad_to_deg(cfg.delta)},
                {"sigma_anchor", cfg.sigma_anchor},
                {"tau", cfg.tau},
                {"eps_near", cfg.eps_near}};
}

inline RunConfig
run_config_from_json(const json &j) {
    constexpr std::string_view where = "config";
    detail::reject_unknown_keys(
        j, {"sampler", "views_per_image", "seed", "output_dir", "threads", "loss_epsilon"}, where);
    RunConfig cfg;
    if (const auto it = j.find("sampler"); it != j.end()) {
        cfg.sampler = sampler_config_from_json(*it);
    }
    detail::read_field(j, "views_per_image", cfg.views_per_image, where);
    detail::read_field(j, "seed", cfg.seed, where);
    detail::read_field(j, "output_dir", cfg.output_dir, where);
    detail::read_field(j, "threads", cfg.threads, where);
    detail::read_field(j, "loss_epsilon", cfg.loss_epsilon, where);
    cfg.validate();
    return cfg;
}

inline json
to_json(const RunConfig &cfg) {
    return json{{"sampler", to_json(cfg.sampler)},
                {"views_per_image", cfg.views_per_image},
                {"seed", cfg.seed},
                {"output_dir", cfg.output_dir},
                {"threads", cfg.threads},
                {"loss_epsilon", cfg.loss_epsilon}};
}

inline RunConfig
load_run_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::InvalidConfig, "cannot open config " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
    }
    return run_config_from_json(j);
}

/// Relative paths resolve against `base_dir`.
inline ManifestEntry
parse_manifest_line(const std::string &line, const std::filesystem::path &base_dir) {
    constexpr std::string_view where = "manifest entry";
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::InvalidConfig, std::string("malformed manifest line: ") + e.what());
    }
    detail::reject_unknown_keys(j, {"id", "image_path", "depth_path", "normal_path", "hfov_deg"},
                                where);
    ManifestEntry e;
    for (const char *key : {"id", "image_path", "depth_path", "normal_path", "hfov_deg"}) {
        if (!j.contains(key)) {
            throw Error(ErrorCode::InvalidConfig, std::string("manifest entry lacks '") + key + "'");
        }
    }
    detail::read_field(j, "id", e.id, where);
    detail::read_field(j, "image_path", e.image_path, where);
    detail::read_field(j, "depth_path", e.depth_path, where);
    detail::read_field(j, "normal_path", e.normal_path, where);
    detail::read_field(j, "hfov_deg", e.hfov_deg, where);
    if (e.id.empty()) {
        throw Error(ErrorCode::InvalidConfig, "manifest id must be non-empty");
    }
    if (e.id.find_first_of("/\\") != std::string::npos) {
        throw Error(ErrorCode::InvalidConfig, "manifest id '" + e.id + "' contains a path separator");
    }
    if (!(e.hfov_deg > 0.0 && e.hfov_deg < 180.0)) {
        throw Error(ErrorCode::InvalidConfig, "hfov_deg of '" + e.id + "' must lie in (0, 180)");
    }
    auto resolve = [&](std::string &p) {
        const std::filesystem::path path(p);
        if (path.is_relative()) {
            p = (base_dir / path).lexically_normal().string();
        }
    };
    resolve(e.image_path);
    resolve(e.depth_path);
    resolve(e.normal_path);
    return e;
}

/// Blank lines are skipped; ids must be unique.
inline std::vector<ManifestEntry>
load_manifest(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::InvalidConfig, "cannot open manifest " + path);
    }
    const auto base = std::filesystem::path(path).parent_path();
    std::vector<ManifestEntry> entries;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        ManifestEntry e;
        try {
            e = parse_manifest_line(line, base);
        } catch (const Error &err) {
            throw Error(ErrorCode::InvalidConfig,
                        path + ":" + std::to_string(line_no) + ": " + err.what());
        }
        if (!seen.insert(e.id).second) {
            throw Error(ErrorCode::InvalidConfig, "duplicate manifest id '" + e.id + "'");
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

} // namespace forge
