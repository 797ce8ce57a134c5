// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace pw {

// Invalid configuration or out-of-domain input. CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Request exceeds a memory or size guard. CLI maps it to exit code 3.
struct ResourceGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pw
