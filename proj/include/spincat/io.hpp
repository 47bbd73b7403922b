#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace spincat {

/// Shortest round-trip decimal representation of a double (%.17g).
std::string format_double(double value);

/// Simple comma-separated table with a single header row; all cells are
/// serialized at full precision so a re-parse reproduces the values.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
  std::string to_string() const;
  static CsvTable parse(const std::string& text);
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// A run manifest: config echo, seed, format, code version, output list.
/// A manifest is itself accepted wherever a config is (the "config" object
/// is unwrapped), so a run can be reproduced from its manifest alone.
nlohmann::json make_manifest(const std::string& command, const nlohmann::json& config,
                             std::uint64_t seed, const std::string& format, int workers,
                             const std::vector<std::string>& outputs);

/// Load a config JSON from a path; if the file is a manifest, return its
/// embedded config (and seed/format defaults through the manifest pointer).
nlohmann::json load_config(const std::string& path);

/// Reject any key of `config` that is not in `allowed` (strict parsing).
void check_known_keys(const nlohmann::json& config, const std::vector<std::string>& allowed,
                      const std::string& command);

}  // namespace spincat
