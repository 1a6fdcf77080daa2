#pragma once

#include <cstdint>
#include <string>

#include "bosonlight/bounds.hpp"

namespace bosonlight {

inline constexpr const char* kCsvSchemaVersion = "1";

/// FNV-1a 64-bit hash, hex-encoded; used to fingerprint the raw config text.
std::uint64_t fnv1a64(const std::string& data);
std::string config_hash(const std::string& config_text);

/// Write the report rows as CSV: a versioned comment header, one row per
/// point, every row carrying the config hash.  Numeric formatting is fixed so
/// repeated runs are byte-identical.
void write_report_csv(const BoundReport& report, const std::string& path,
                      const std::string& cfg_hash);

/// Companion JSON: config echo, schema version, fit parameters, wall-clock
/// timings.  Timings vary between runs; everything else is deterministic.
void write_report_json(const BoundReport& report, const std::string& path,
                       const std::string& cfg_hash, const std::string& config_echo,
                       double elapsed_seconds);

/// Serialize rows exactly as write_report_csv does (for tests and hashing).
std::string report_csv_string(const BoundReport& report, const std::string& cfg_hash);

}  // namespace bosonlight
