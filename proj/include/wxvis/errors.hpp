// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace wxvis {

/// Bad or inconsistent user configuration (CLI flags, config file).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input data (meshes, graph files, CSV).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numeric routine failed to meet its tolerance.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CLI exit codes.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitNumeric = 4;

} // namespace wxvis
