#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bosonlight/bounds.hpp"
#include "bosonlight/config.hpp"

namespace bosonlight {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBoundFailure = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitResourceLimit = 3;
inline constexpr int kExitNumericalFailure = 4;

struct RunOptions {
    std::string out_dir = ".";
    int workers = 0;  // 0: hardware concurrency
    std::optional<std::uint64_t> seed_override;
};

struct RunOutcome {
    int exit_code = kExitOk;
    BoundReport report;
    std::string message;  // human-readable summary or error text
};

/// Parse the config, run the named experiment family, write
/// <out_dir>/<experiment>.csv and .json, and map failures to exit codes.
RunOutcome run_experiment(const std::string& experiment, const std::string& config_text,
                          const RunOptions& options);

/// Dry-run: report lattice size, estimated basis dimension against the cap,
/// and admissibility of the requested parameters.  Never throws.
std::string validate_config(const std::string& experiment, const std::string& config_text);

/// Basis dimension for uniform cap / optional sector without enumerating states.
std::int64_t estimate_basis_dimension(int num_sites, int cap, std::optional<int> sector);

}  // namespace bosonlight
