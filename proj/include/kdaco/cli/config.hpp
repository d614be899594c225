#pragma once

// Flat sectioned key = value run configuration.
//
//   # comment
//   [section]
//   key = value
//
// Parsing is strict: an unknown section or key, a duplicate key, or a
// malformed line is a ConfigParseError naming the offender.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kdaco::cli {

class RunConfig {
 public:
  static RunConfig parse(std::string_view text, const std::string& origin = "<config>");
  static RunConfig load(const std::string& path);

  // Verbatim source text, kept for the copy written into each run directory.
  const std::string& source() const { return source_; }
  // Directory of the file the config was loaded from ("" for in-memory).
  const std::string& base_dir() const { return base_dir_; }

  bool has_section(std::string_view section) const;
  bool has(std::string_view section, std::string_view key) const;

  std::optional<std::string> get(std::string_view section, std::string_view key) const;
  std::string get_string(std::string_view section, std::string_view key,
                         const std::string& fallback) const;
  double get_real(std::string_view section, std::string_view key, double fallback) const;
  std::uint64_t get_uint(std::string_view section, std::string_view key,
                         std::uint64_t fallback) const;
  bool get_bool(std::string_view section, std::string_view key, bool fallback) const;
  std::vector<double> get_reals(std::string_view section, std::string_view key,
                                const std::vector<double>& fallback) const;
  std::vector<std::size_t> get_sizes(std::string_view section, std::string_view key,
                                     const std::vector<std::size_t>& fallback) const;

  // Resolves `path` against base_dir() unless it is absolute.
  std::string resolve(const std::string& path) const;

 private:
  std::map<std::string, std::map<std::string, std::string, std::less<>>, std::less<>> values_;
  std::string source_;
  std::string base_dir_;
};

}  // namespace kdaco::cli
