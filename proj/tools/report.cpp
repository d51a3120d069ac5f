#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "monobell/errors.hpp"

namespace monobell::cli {

double sig10(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return std::strtod(buf, nullptr);
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json stamp(const Json& config, std::uint64_t seed) {
  return Json{{"version", kVersion}, {"seed", seed}, {"config_hash", config_hash(config)}, {"config", config}};
}

Json rounded(const Json& j) {
  if (j.is_number_float()) return sig10(j.get<double>());
  if (j.is_array() || j.is_object()) {
    Json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = rounded(*it);
    return out;
  }
  return j;
}

std::filesystem::path output_dir(const std::string& out_option) {
  if (!out_option.empty()) return out_option;
  if (const char* env = std::getenv("MONOBELL_OUT_DIR"); env && *env) return env;
  return "monobell-out";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void write_report(const std::filesystem::path& path, const Json& report) {
  write_text(path, rounded(report).dump(2) + "\n");
}

Json published_values() {
  const char* env = std::getenv("MONOBELL_PUBLISHED_VALUES");
  return read_json_file(env && *env ? std::filesystem::path(env)
                                    : std::filesystem::path(MONOBELL_DATA_DIR) / "published_values.json");
}

}  // namespace monobell::cli
