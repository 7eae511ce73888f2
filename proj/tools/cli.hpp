#pragma once

#include <iosfwd>

namespace dsmooth::cli {

inline constexpr const char* kSchemaVersion = "1.0";

/// Exit codes: 0 success, 1 statistical-input error (bad data, singular
/// covariance at order 1), 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dsmooth::cli
