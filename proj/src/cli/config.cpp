#include "kdaco/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "kdaco/error.hpp"
#include "kdaco/text.hpp"

namespace kdaco::cli {

namespace {

const std::map<std::string_view, std::set<std::string_view>>& schema() {
  static const std::map<std::string_view, std::set<std::string_view>> keys{
      {"data",
       {"samples", "classes", "dim", "complexity", "seed", "noise_kind", "noise_level",
        "noise_fraction", "noise_seed", "file"}},
      {"policy",
       {"variant", "temperature", "alpha", "base_temperature", "step_up", "step_down",
        "min_temperature", "max_temperature", "noise_threshold", "confidence_threshold",
        "complexity_threshold", "base_weight", "weight_step", "max_weight"}},
      {"kd",
       {"t_base", "epochs", "batch_size", "learning_rate", "seed", "model_seed",
        "teacher_hidden", "student_hidden", "teacher_epochs", "teacher_learning_rate",
        "teacher_data", "constant_temperature"}},
      {"pool", {"file", "seed"}},
      {"aco",
       {"alpha", "beta", "rho", "q0", "ants", "iterations", "seed", "mode",
        "initial_pheromone"}},
      {"pso", {"particles", "iterations", "inertia", "c1", "c2", "seed"}},
      {"grid", {"mode"}},
      {"random", {"picks", "seed", "mode"}},
      {"out", {"dir"}},
  };
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
  throw Error(Errc::ConfigParseError, origin + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

std::string where(std::string_view section, std::string_view key) {
  return "[" + std::string(section) + "] " + std::string(key);
}

}  // namespace

RunConfig RunConfig::parse(std::string_view text, const std::string& origin) {
  RunConfig cfg;
  cfg.source_ = std::string(text);
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!schema().contains(section)) fail(origin, line_no, "unknown section [" + section + "]");
      cfg.values_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(origin, line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (section.empty()) fail(origin, line_no, "key '" + key + "' outside any section");
    if (!schema().at(section).contains(key)) {
      fail(origin, line_no, "unknown key '" + key + "' in [" + section + "]");
    }
    auto& entries = cfg.values_[section];
    if (entries.contains(key)) fail(origin, line_no, "duplicate key '" + key + "'");
    entries.emplace(key, value);
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse(buf.str(), path);
  cfg.base_dir_ = std::filesystem::path(path).parent_path().string();
  return cfg;
}

bool RunConfig::has_section(std::string_view section) const {
  return values_.find(section) != values_.end();
}

bool RunConfig::has(std::string_view section, std::string_view key) const {
  return get(section, key).has_value();
}

std::optional<std::string> RunConfig::get(std::string_view section, std::string_view key) const {
  const auto s = values_.find(section);
  if (s == values_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

std::string RunConfig::get_string(std::string_view section, std::string_view key,
                                  const std::string& fallback) const {
  return get(section, key).value_or(fallback);
}

double RunConfig::get_real(std::string_view section, std::string_view key,
                           double fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  try {
    return parse_real(*v);
  } catch (const Error&) {
    throw Error(Errc::ConfigParseError, where(section, key) + ": not a number '" + *v + "'");
  }
}

std::uint64_t RunConfig::get_uint(std::string_view section, std::string_view key,
                                  std::uint64_t fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  std::uint64_t out = 0;
  const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
  if (v->empty() || res.ec != std::errc() || res.ptr != v->data() + v->size()) {
    throw Error(Errc::ConfigParseError,
                where(section, key) + ": not a nonnegative integer '" + *v + "'");
  }
  return out;
}

bool RunConfig::get_bool(std::string_view section, std::string_view key, bool fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw Error(Errc::ConfigParseError, where(section, key) + ": not a boolean '" + *v + "'");
}

std::vector<double> RunConfig::get_reals(std::string_view section, std::string_view key,
                                         const std::vector<double>& fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  std::vector<double> out;
  for (auto item : split_list(*v)) {
    try {
      out.push_back(parse_real(item));
    } catch (const Error&) {
      throw Error(Errc::ConfigParseError,
                  where(section, key) + ": not a number '" + std::string(item) + "'");
    }
  }
  return out;
}

std::vector<std::size_t> RunConfig::get_sizes(std::string_view section, std::string_view key,
                                              const std::vector<std::size_t>& fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  std::vector<std::size_t> out;
  for (auto item : split_list(*v)) {
    std::size_t n = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), n);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw Error(Errc::ConfigParseError,
                  where(section, key) + ": not an integer '" + std::string(item) + "'");
    }
    out.push_back(n);
  }
  return out;
}

std::string RunConfig::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir_.empty()) return p.string();
  return (std::filesystem::path(base_dir_) / p).string();
}

}  // namespace kdaco::cli
