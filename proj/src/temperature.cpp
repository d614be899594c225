#include "kdaco/temperature.hpp"

#include <algorithm>
#include <cmath>

#include "kdaco/error.hpp"
#include "kdaco/text.hpp"
#include "kdaco/numerics.hpp"

namespace kdaco::temperature {

ContextFeatures compute_context(std::span<const double> teacher_logits,
                                double sample_noise, double class_complexity) {
  const auto probs = numerics::stable_softmax(teacher_logits, 1.0);
  ContextFeatures ctx;
  ctx.noise_level = sample_noise;
  ctx.disease_complexity = class_complexity;
  ctx.teacher_confidence = probs[numerics::argmax(probs)];
  ctx.uncertainty = numerics::normalized_entropy(probs);
  return ctx;
}

namespace {

bool unit(double v) { return v >= 0.0 && v <= 1.0; }
bool positive(double v) { return v > 0.0 && std::isfinite(v); }

void fail(const std::string& what) { throw Error(Errc::InvalidPolicyParameters, what); }

void check_context(const ContextFeatures& ctx) {
  if (!unit(ctx.noise_level) || !unit(ctx.teacher_confidence) ||
      !unit(ctx.disease_complexity) || !unit(ctx.uncertainty)) {
    fail("context features must lie in [0,1]");
  }
}

struct Validator {
  void operator()(const ConstantPolicy& p) const {
    if (!positive(p.temperature)) fail("constant temperature must be positive");
  }
  void operator()(const UncertaintyLinearPolicy& p) const {
    if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) fail("alpha must be >= 0");
  }
  void operator()(const RuleBasedPolicy& p) const {
    if (!positive(p.base_temperature) || !positive(p.step_up) ||
        !positive(p.step_down) || !positive(p.min_temperature) ||
        !positive(p.max_temperature)) {
      fail("rule temperatures and steps must be positive");
    }
    if (!(p.min_temperature <= p.base_temperature &&
          p.base_temperature <= p.max_temperature)) {
      fail("need min_temperature <= base_temperature <= max_temperature");
    }
    if (!unit(p.noise_threshold) || !unit(p.confidence_threshold) ||
        !unit(p.complexity_threshold)) {
      fail("rule thresholds must lie in [0,1]");
    }
    if (!unit(p.base_weight) || !unit(p.weight_step) || !unit(p.max_weight) ||
        p.base_weight > p.max_weight) {
      fail("need 0 <= base_weight <= max_weight <= 1 and weight_step in [0,1]");
    }
  }
};

}  // namespace

void validate(const TemperaturePolicy& policy) { std::visit(Validator{}, policy); }

PolicyOutput apply_policy(const TemperaturePolicy& policy,
                          const ContextFeatures& ctx, double run_weight) {
  validate(policy);
  check_context(ctx);
  if (!unit(run_weight)) fail("distillation weight must lie in [0,1]");

  struct Apply {
    const ContextFeatures& ctx;
    double run_weight;

    PolicyOutput operator()(const ConstantPolicy& p) const {
      return {p.temperature, run_weight};
    }
    PolicyOutput operator()(const UncertaintyLinearPolicy& p) const {
      return {1.0 + p.alpha * ctx.uncertainty, run_weight};
    }
    PolicyOutput operator()(const RuleBasedPolicy& p) const {
      PolicyOutput out{p.base_temperature, p.base_weight};
      const bool noisy = ctx.noise_level >= p.noise_threshold;
      const bool confident = ctx.teacher_confidence > p.confidence_threshold;
      if (noisy && !confident) {
        out.temperature = std::min(p.max_temperature, p.base_temperature + p.step_up);
      } else if (!noisy && confident) {
        out.temperature = std::max(p.min_temperature, p.base_temperature - p.step_down);
      }
      if (ctx.disease_complexity >= p.complexity_threshold) {
        out.distill_weight = std::min(p.max_weight, p.base_weight + p.weight_step);
      }
      return out;
    }
  };
  return std::visit(Apply{ctx, run_weight}, policy);
}

std::string describe(const TemperaturePolicy& policy) {
  struct Describe {
    std::string operator()(const ConstantPolicy& p) const {
      return "constant(T=" + format_real(p.temperature) + ")";
    }
    std::string operator()(const UncertaintyLinearPolicy& p) const {
      return "uncertainty_linear(alpha=" + format_real(p.alpha) + ")";
    }
    std::string operator()(const RuleBasedPolicy& p) const {
      return "rule_based(T_base=" + format_real(p.base_temperature) +
             ",up=" + format_real(p.step_up) + ",down=" + format_real(p.step_down) +
             ",T_min=" + format_real(p.min_temperature) +
             ",T_max=" + format_real(p.max_temperature) +
             ",noise>=" + format_real(p.noise_threshold) +
             ",conf<=" + format_real(p.confidence_threshold) +
             ",complexity>=" + format_real(p.complexity_threshold) +
             ",w_base=" + format_real(p.base_weight) +
             ",w_step=" + format_real(p.weight_step) +
             ",w_max=" + format_real(p.max_weight) + ")";
    }
  };
  return std::visit(Describe{}, policy);
}

}  // namespace kdaco::temperature
