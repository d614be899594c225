#pragma once

// Per-sample temperature and distillation weight from sample context.

#include <span>
#include <string>
#include <variant>

namespace kdaco::temperature {

struct ContextFeatures {
  double noise_level = 0.0;
  double teacher_confidence = 0.0;  // max teacher softmax at T = 1
  double disease_complexity = 0.0;  // complexity of the sample's true class
  double uncertainty = 0.0;         // normalized entropy of teacher softmax at T = 1
};

ContextFeatures compute_context(std::span<const double> teacher_logits,
                                double sample_noise, double class_complexity);

struct ConstantPolicy {
  double temperature = 2.0;
};

// T = 1 + alpha * uncertainty
struct UncertaintyLinearPolicy {
  double alpha = 2.0;
};

// Threshold-gated additive steps:
//   noisy and low confidence   -> T = min(T_max, T_base + up)
//   clean and high confidence  -> T = max(T_min, T_base - down)
//   complex class              -> w = min(w_max, w_base + weight_step)
struct RuleBasedPolicy {
  double base_temperature = 2.0;
  double step_up = 2.0;
  double step_down = 1.0;
  double min_temperature = 1.0;
  double max_temperature = 8.0;
  double noise_threshold = 0.5;
  double confidence_threshold = 0.7;
  double complexity_threshold = 0.6;
  double base_weight = 0.5;
  double weight_step = 0.2;
  double max_weight = 0.9;
};

using TemperaturePolicy =
    std::variant<ConstantPolicy, UncertaintyLinearPolicy, RuleBasedPolicy>;

struct PolicyOutput {
  double temperature = 1.0;
  double distill_weight = 0.0;
};

// Throws InvalidPolicyParameters.
void validate(const TemperaturePolicy& policy);

// `run_weight` is the distillation weight used by the Constant and
// UncertaintyLinear variants; RuleBased carries its own base_weight.
PolicyOutput apply_policy(const TemperaturePolicy& policy,
                          const ContextFeatures& ctx, double run_weight);

// Short stable descriptor, e.g. "constant(T=2)".
std::string describe(const TemperaturePolicy& policy);

}  // namespace kdaco::temperature
