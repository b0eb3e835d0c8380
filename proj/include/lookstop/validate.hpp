#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace lookstop {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidateOptions {
    std::size_t n_steps = 100;
    std::size_t n_paths = 20000;
    std::uint64_t seed = 1;
    /// Test fixture: corrupts an obstacle with NaN before solving, which must
    /// surface as a DataError (the caller maps it to the runtime-failure exit).
    bool inject_nan = false;
};

/// Runs the cross-module invariant suite at a small scale and reports one
/// result per check. Throws DataError when the NaN fixture is armed.
std::vector<CheckResult> run_validation(const ValidateOptions& options);

}  // namespace lookstop
