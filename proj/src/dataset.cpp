#include "kdaco/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kdaco/error.hpp"
#include "kdaco/rng.hpp"
#include "kdaco/text.hpp"

namespace kdaco::tinynet {

std::string_view split_name(Split split) noexcept {
  switch (split) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::Train;
  if (text == "val") return Split::Val;
  if (text == "test") return Split::Test;
  throw Error(Errc::ParseError, "unknown split '" + std::string(text) + "'");
}

std::vector<std::size_t> SyntheticDataset::indices(Split which) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < split.size(); ++i) {
    if (split[i] == which) out.push_back(i);
  }
  return out;
}

void validate(const SyntheticDataset& data) {
  const std::size_t n = data.size();
  if (data.n_classes < 2 || data.dim == 0) {
    throw Error(Errc::InvalidShape, "need >= 2 classes and >= 1 feature");
  }
  if (data.features.size() != n * data.dim || data.noise_level.size() != n ||
      data.split.size() != n || data.class_complexity.size() != data.n_classes) {
    throw Error(Errc::InvalidShape, "column lengths disagree");
  }
  if (n < data.n_classes) throw Error(Errc::InvalidShape, "fewer samples than classes");
  std::vector<std::size_t> seen(3 * data.n_classes, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (data.labels[i] >= data.n_classes) {
      throw Error(Errc::InvalidShape, "label out of range");
    }
    if (!(data.noise_level[i] >= 0.0 && data.noise_level[i] <= 1.0)) {
      throw Error(Errc::InvalidShape, "noise_level outside [0,1]");
    }
    ++seen[static_cast<std::size_t>(data.split[i]) * data.n_classes + data.labels[i]];
  }
  for (double c : data.class_complexity) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw Error(Errc::InvalidShape, "class complexity outside [0,1]");
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw Error(Errc::InvalidShape, "a class is missing from a split");
  }
}

double center_spacing(double complexity) {
  return kMaxSpacing + (kMinSpacing - kMaxSpacing) * complexity;
}

SyntheticDataset generate_synthetic(const SyntheticSpec& spec) {
  const std::size_t c = spec.n_classes;
  if (c < 2 || spec.input_dim < 2 || spec.n_samples < 10 * c) {
    throw Error(Errc::InvalidShape,
                "need n_classes >= 2, input_dim >= 2, n_samples >= 10 * n_classes");
  }
  std::vector<double> complexity = spec.complexity;
  if (complexity.empty()) complexity.assign(c, 0.0);
  if (complexity.size() != c) {
    throw Error(Errc::InvalidShape, "complexity needs one value per class");
  }
  for (double v : complexity) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(Errc::InvalidShape, "complexity outside [0,1]");
  }

  const std::size_t d = spec.input_dim;
  const Rng root(spec.seed);

  // Axis directions (+e_k, then -e_k) while they last, random unit vectors
  // after that.
  Rng dir_rng = root.split(1);
  std::vector<double> centers(c * d, 0.0);
  for (std::size_t k = 0; k < c; ++k) {
    double* u = centers.data() + k * d;
    if (k < 2 * d) {
      u[k % d] = k < d ? 1.0 : -1.0;
    } else {
      double norm = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        u[j] = dir_rng.normal();
        norm += u[j] * u[j];
      }
      norm = std::sqrt(norm);
      for (std::size_t j = 0; j < d; ++j) u[j] /= norm;
    }
    const double spacing = center_spacing(complexity[k]);
    for (std::size_t j = 0; j < d; ++j) u[j] *= spacing;
  }

  SyntheticDataset data;
  data.n_classes = c;
  data.dim = d;
  data.class_complexity = complexity;
  const std::size_t n = spec.n_samples;
  data.features.resize(n * d);
  data.labels.resize(n);
  data.noise_level.assign(n, 0.0);
  data.split.assign(n, Split::Train);

  Rng sample_rng = root.split(2);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = i % c;
    data.labels[i] = k;
    for (std::size_t j = 0; j < d; ++j) {
      data.features[i * d + j] = centers[k * d + j] + sample_rng.normal();
    }
  }

  Rng split_rng = root.split(3);
  for (std::size_t k = 0; k < c; ++k) {
    std::vector<std::size_t> members;
    for (std::size_t i = k; i < n; i += c) members.push_back(i);
    split_rng.shuffle(members);
    const auto count = static_cast<double>(members.size());
    const auto n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.1 * count)));
    const auto n_test = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.2 * count)));
    for (std::size_t r = 0; r < members.size(); ++r) {
      data.split[members[r]] =
          r < n_test ? Split::Test : (r < n_test + n_val ? Split::Val : Split::Train);
    }
  }
  validate(data);
  return data;
}

std::string_view noise_kind_name(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::SaltPepper: return "salt_pepper";
    case NoiseKind::Uniform: return "uniform";
  }
  return "gaussian";
}

NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "gaussian") return NoiseKind::Gaussian;
  if (text == "salt_pepper") return NoiseKind::SaltPepper;
  if (text == "uniform") return NoiseKind::Uniform;
  throw Error(Errc::UnknownNoiseKind, "'" + std::string(text) + "'");
}

SyntheticDataset inject_noise(const SyntheticDataset& data, NoiseKind kind,
                              double level, std::uint64_t seed, double fraction) {
  if (!(level >= 0.0 && level <= 1.0)) {
    throw Error(Errc::LevelOutOfRange, "noise level must be in [0,1]");
  }
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(Errc::LevelOutOfRange, "noise fraction must be in [0,1]");
  }
  switch (kind) {
    case NoiseKind::Gaussian:
    case NoiseKind::SaltPepper:
    case NoiseKind::Uniform:
      break;
    default:
      throw Error(Errc::UnknownNoiseKind, "enum value out of range");
  }
  SyntheticDataset out = data;
  if (level == 0.0 || fraction == 0.0 || data.size() == 0) return out;

  const std::size_t n = data.size();
  const std::size_t d = data.dim;
  std::vector<double> mean(d, 0.0), sd(d, 0.0), lo(d, 0.0), hi(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    lo[j] = hi[j] = data.features[j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double v = data.features[i * d + j];
      mean[j] += v;
      lo[j] = std::min(lo[j], v);
      hi[j] = std::max(hi[j], v);
    }
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double dv = data.features[i * d + j] - mean[j];
      sd[j] += dv * dv;
    }
  }
  for (double& s : sd) s = std::sqrt(s / static_cast<double>(n));

  const Rng root(seed);
  std::vector<std::size_t> chosen;
  Rng pick_rng = root.split(1);
  for (Split s : {Split::Train, Split::Val, Split::Test}) {
    auto members = data.indices(s);
    if (members.empty()) continue;
    pick_rng.shuffle(members);
    auto take = static_cast<std::size_t>(
        std::lround(fraction * static_cast<double>(members.size())));
    take = std::clamp<std::size_t>(take, 1, members.size());
    chosen.insert(chosen.end(), members.begin(), members.begin() + take);
  }
  std::sort(chosen.begin(), chosen.end());

  Rng noise_rng = root.split(2);
  for (std::size_t i : chosen) {
    double* x = out.features.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) {
      switch (kind) {
        case NoiseKind::Gaussian:
          x[j] += level * sd[j] * noise_rng.normal();
          break;
        case NoiseKind::SaltPepper:
          if (noise_rng.uniform() < level) x[j] = noise_rng.coin() ? hi[j] : lo[j];
          break;
        case NoiseKind::Uniform: {
          const double half = level * (hi[j] - lo[j]);
          x[j] += noise_rng.uniform(-half, half);
          break;
        }
      }
    }
    out.noise_level[i] = level;
  }
  return out;
}

void write_csv(const SyntheticDataset& data, std::ostream& out) {
  out << "split,label,noise_level";
  for (std::size_t j = 0; j < data.dim; ++j) out << ",f" << j;
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << split_name(data.split[i]) << ',' << data.labels[i] << ','
        << format_real(data.noise_level[i]);
    for (double v : data.row(i)) out << ',' << format_real(v);
    out << '\n';
  }
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

SyntheticDataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_fields(line);
  if (header.size() < 4 || header[0] != "split" || header[1] != "label" ||
      header[2] != "noise_level") {
    throw Error(Errc::ParseError, "header must start with split,label,noise_level,f0");
  }
  SyntheticDataset data;
  data.dim = header.size() - 3;
  for (std::size_t j = 0; j < data.dim; ++j) {
    if (header[3 + j] != "f" + std::to_string(j)) {
      throw Error(Errc::ParseError, "unexpected column '" + std::string(header[3 + j]) + "'");
    }
  }
  std::size_t line_no = 1;
  std::size_t max_label = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": wrong field count");
    }
    data.split.push_back(parse_split(fields[0]));
    std::size_t label = 0;
    const auto res = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), label);
    if (res.ec != std::errc() || res.ptr != fields[1].data() + fields[1].size()) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": bad label");
    }
    data.labels.push_back(label);
    max_label = std::max(max_label, label);
    data.noise_level.push_back(parse_real(fields[2]));
    for (std::size_t j = 0; j < data.dim; ++j) {
      data.features.push_back(parse_real(fields[3 + j]));
    }
  }
  if (data.labels.empty()) throw Error(Errc::ParseError, "no samples");
  data.n_classes = max_label + 1;
  data.class_complexity.assign(data.n_classes, 0.0);
  return data;
}

void save_csv(const SyntheticDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  write_csv(data, out);
  if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

SyntheticDataset load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path);
  return read_csv(in);
}

}  // namespace kdaco::tinynet
