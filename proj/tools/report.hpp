#pragma once

// Output helpers shared by the CLI subcommands.

#include <cstdint>
#include <filesystem>
#include <string>

#include "monobell/functional_io.hpp"

namespace monobell::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Rounds to 10 significant digits so JSON and CSV output stay diff-stable.
double sig10(double x);
std::string num(double x);

/// FNV-1a over the compact dump of the config, as 16 hex digits.
std::string config_hash(const Json& config);

/// {"version", "seed", "config_hash", "config"} block embedded in every report.
Json stamp(const Json& config, std::uint64_t seed);

/// Recursively applies sig10 to every floating-point number.
Json rounded(const Json& j);

/// --out if given, else $MONOBELL_OUT_DIR, else ./monobell-out.
std::filesystem::path output_dir(const std::string& out_option);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_report(const std::filesystem::path& path, const Json& report);

/// Published anchors for comparison columns; $MONOBELL_PUBLISHED_VALUES overrides
/// the compiled-in location.
Json published_values();

}  // namespace monobell::cli
