#pragma once

// Experiment drivers shared by the CLI and the acceptance suite.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kdaco/dataset.hpp"
#include "kdaco/distill.hpp"
#include "kdaco/metrics.hpp"
#include "kdaco/mlp.hpp"
#include "kdaco/temperature.hpp"
#include "kdaco/train.hpp"

namespace kdaco::cli {

struct NoiseSpec {
  tinynet::NoiseKind kind = tinynet::NoiseKind::Gaussian;
  double level = 0.5;
  double fraction = 1.0;
  std::uint64_t seed = 1;
};

struct DistillSetup {
  tinynet::SyntheticSpec data;
  std::optional<NoiseSpec> noise;
  std::vector<std::size_t> teacher_hidden{32, 32};
  std::vector<std::size_t> student_hidden{16, 16};
  tinynet::TrainConfig teacher_train;
  distill::KdConfig kd{temperature::RuleBasedPolicy{}, 0.5, {}};
  double constant_temperature = 2.0;
  // Teacher fits the clean dataset even when the student sees the noisy one.
  bool teacher_on_clean = true;
  std::uint64_t model_seed = 1;
};

struct Prepared {
  tinynet::SyntheticDataset clean;
  tinynet::SyntheticDataset data;  // clean, or clean + injected noise
  tinynet::MlpModel teacher;
  tinynet::MlpModel student_init;
};

Prepared prepare(const DistillSetup& setup);

struct MetricRow {
  std::string name;
  double accuracy = 0.0;
  double precision = 0.0;  // macro
  double recall = 0.0;     // macro
  double f1 = 0.0;         // macro
};

// Test-split metrics of `model` on `data`.
MetricRow evaluate_test(const std::string& name, const tinynet::MlpModel& model,
                        const tinynet::SyntheticDataset& data);

inline constexpr const char* kTableHeader = "configuration,accuracy,precision,recall,f1";
std::string csv_row(const MetricRow& row);

struct Table10 {
  // teacher, student_no_kd, student_constant_T, student_context_aware
  std::vector<MetricRow> rows;
  std::vector<tinynet::EpochStats> supervised_history;
  distill::DistillReport constant_report;
  distill::DistillReport context_report;
};

Table10 run_table10(const DistillSetup& setup);

struct Table11 {
  // gaussian, salt_pepper, uniform, clean
  std::vector<MetricRow> rows;
};

// Each variant corrupts the whole dataset at `level`, trains its own teacher
// on it and distils a student with the setup's policy.
Table11 run_table11(const DistillSetup& setup, double level);

}  // namespace kdaco::cli
