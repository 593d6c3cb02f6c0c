// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace forge {

enum class ErrorCode {
    NonUnitQuaternion,
    NotARotation,
    DegenerateLookAt,
    InvalidFov,
    DimensionMismatch,
    EmptyCloud,
    BehindCamera,
    InvalidNormal,
    InvalidRange,
    InvalidConfig,
    ZeroFeature,
    TooSmall,
    EmptyGrid,
    MissingCounterpart,
    Io,
};

constexpr std::string_view
to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonUnitQuaternion: return "NonUnitQuaternion";
    case ErrorCode::NotARotation: return "NotARotation";
    case ErrorCode::DegenerateLookAt: return "DegenerateLookAt";
    case ErrorCode::InvalidFov: return "InvalidFov";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::BehindCamera: return "BehindCamera";
    case ErrorCode::InvalidNormal: return "InvalidNormal";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ZeroFeature: return "ZeroFeature";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::MissingCounterpart: return "MissingCounterpart";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the ErrorCode values so
/// callers (and tests) can dispatch on the kind without parsing messages.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode
    code() const noexcept {
        return code_;
    }

  private:
    ErrorCode code_;
};

} // namespace forge
