#pragma once

// Knowledge-distillation loss
//   total = (1 - w) * CE(onehot, softmax(student)) + w * T^2 * KL(p_t || p_s)
// with p_t = softmax(teacher / T), p_s = softmax(student / T), and the
// teacher -> student training loop driven by a TemperaturePolicy.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "kdaco/dataset.hpp"
#include "kdaco/mlp.hpp"
#include "kdaco/temperature.hpp"
#include "kdaco/train.hpp"

namespace kdaco::distill {

struct LossBreakdown {
  double ce_term = 0.0;
  double kl_term = 0.0;
  double temperature_used = 1.0;
  double distill_weight_used = 0.0;
  double total = 0.0;
};

LossBreakdown kd_loss(std::span<const double> student_logits,
                      std::span<const double> teacher_logits,
                      std::size_t true_class, double temperature, double weight);

// d total / d student_logits = (1 - w)(softmax(s) - y) + w T (p_s - p_t).
// The teacher is a constant.
std::vector<double> kd_loss_grad(std::span<const double> student_logits,
                                 std::span<const double> teacher_logits,
                                 std::size_t true_class, double temperature,
                                 double weight);

struct KdConfig {
  temperature::TemperaturePolicy policy = temperature::ConstantPolicy{};
  double t_base = 0.5;
  tinynet::TrainConfig train;
};

// Aggregates over one optimizer step.
struct BatchLog {
  std::size_t epoch = 0;
  std::size_t samples = 0;
  double mean_ce = 0.0;
  double mean_kl = 0.0;
  double mean_total = 0.0;
  double min_kl = 0.0;
  double max_kl = 0.0;
  // max over samples of |total - ((1-w) ce + w T^2 kl)|
  double max_recompose_error = 0.0;
};

struct TemperatureStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double variance = 0.0;
  std::size_t count = 0;
};

struct DistillReport {
  std::uint64_t seed = 0;
  std::string policy;
  double t_base = 0.0;
  std::vector<tinynet::EpochStats> history;
  std::vector<double> epoch_mean_temperature;
  std::vector<double> epoch_mean_weight;
  TemperatureStats temperature;
  std::vector<BatchLog> batches;  // kept in memory, not serialized
  double final_val_accuracy = 0.0;
  double final_test_accuracy = 0.0;
};

struct DistillResult {
  tinynet::MlpModel student;
  DistillReport report;
};

// The teacher is frozen; every training sample gets its own (T, w) from the
// policy applied to the teacher's context for that sample.
DistillResult distill_train(const tinynet::MlpModel& teacher,
                            tinynet::MlpModel student,
                            const tinynet::SyntheticDataset& data,
                            const KdConfig& config);

nlohmann::json to_json(const DistillReport& report);

}  // namespace kdaco::distill
