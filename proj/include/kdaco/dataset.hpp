#pragma once

// Synthetic Gaussian-cluster classification data with per-class overlap
// ("complexity") and per-sample noise labels, plus the columnar text format.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kdaco::tinynet {

enum class Split : std::uint8_t { Train, Val, Test };

std::string_view split_name(Split split) noexcept;
Split parse_split(std::string_view text);

struct SyntheticDataset {
  std::size_t n_classes = 0;
  std::size_t dim = 0;
  std::vector<double> features;  // size() x dim, row-major
  std::vector<std::size_t> labels;
  std::vector<double> noise_level;
  std::vector<double> class_complexity;  // n_classes
  std::vector<Split> split;

  std::size_t size() const { return labels.size(); }

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * dim, dim};
  }

  std::vector<std::size_t> indices(Split which) const;

  bool operator==(const SyntheticDataset&) const = default;
};

// Throws InvalidShape if shapes disagree, a label is out of range, a class is
// missing from a split, or a noise/complexity value leaves [0,1].
void validate(const SyntheticDataset& data);

struct SyntheticSpec {
  std::size_t n_samples = 600;
  std::size_t n_classes = 3;
  std::size_t input_dim = 8;
  std::vector<double> complexity;  // per class; empty means all zero
  std::uint64_t seed = 0;
};

// Class k is an isotropic unit-variance Gaussian centred at spacing_k * u_k,
// where u_k is a fixed unit direction and spacing_k falls linearly from
// kMaxSpacing (complexity 0) to kMinSpacing (complexity 1). Labels are
// balanced; splits are stratified 70/10/20 per class.
inline constexpr double kMaxSpacing = 4.0;
inline constexpr double kMinSpacing = 0.5;

double center_spacing(double complexity);

SyntheticDataset generate_synthetic(const SyntheticSpec& spec);

enum class NoiseKind { Gaussian, SaltPepper, Uniform };

std::string_view noise_kind_name(NoiseKind kind) noexcept;
NoiseKind parse_noise_kind(std::string_view text);

// Corrupts a `fraction` of the samples of every split (chosen per split, at
// least one sample when fraction > 0) and sets their noise_level to `level`.
// Feature statistics (std, min, max, range) come from the input dataset.
// Labels and split membership never change.
SyntheticDataset inject_noise(const SyntheticDataset& data, NoiseKind kind,
                              double level, std::uint64_t seed,
                              double fraction = 1.0);

// Columnar text: header `split,label,noise_level,f0,...`, one row per sample,
// reals in shortest round-trip form.
void write_csv(const SyntheticDataset& data, std::ostream& out);

// Reads the columnar format. n_classes is one past the largest label and
// class_complexity is zero-filled (the file does not carry it).
SyntheticDataset read_csv(std::istream& in);

void save_csv(const SyntheticDataset& data, const std::string& path);
SyntheticDataset load_csv(const std::string& path);

}  // namespace kdaco::tinynet
