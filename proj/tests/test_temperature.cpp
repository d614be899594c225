#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "kdaco/rng.hpp"
#include "kdaco/temperature.hpp"

using namespace kdaco;
using namespace kdaco::temperature;

namespace {

ContextFeatures ctx(double noise, double conf, double complexity = 0.0, double u = 0.0) {
  return {noise, conf, complexity, u};
}

}  // namespace

TEST_CASE("compute_context") {
  auto c = compute_context(std::vector<double>{10.0, -10.0}, 0.2, 0.5);
  CHECK(c.teacher_confidence == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(c.uncertainty < 1e-6);
  CHECK(c.noise_level == 0.2);
  CHECK(c.disease_complexity == 0.5);

  c = compute_context(std::vector<double>{0.0, 0.0, 0.0}, 0.0, 0.0);
  CHECK(c.teacher_confidence == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(c.uncertainty == doctest::Approx(1.0).epsilon(1e-12));

  c = compute_context(std::vector<double>{2.0, 0.5, -1.0}, 0.0, 0.0);
  CHECK(std::abs(c.teacher_confidence - oracle::kConfidence) < 1e-9);
  CHECK(std::abs(c.uncertainty - oracle::kUncertainty) < 1e-9);
}

TEST_CASE("uncertainty linear policy") {
  const auto out = apply_policy(UncertaintyLinearPolicy{2.0}, ctx(0, 0, 0, 0.3), 0.5);
  CHECK(out.temperature == 1.6);
  CHECK(out.distill_weight == 0.5);
  for (double u : {0.0, 0.4, 1.0}) {
    CHECK(apply_policy(UncertaintyLinearPolicy{0.0}, ctx(0, 0, 0, u), 0.5).temperature == 1.0);
  }
  CHECK(apply_policy(UncertaintyLinearPolicy{3.0}, ctx(0, 0, 0, 0.0), 0.5).temperature == 1.0);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double u1 = rng.uniform(), u2 = u1 + rng.uniform(1e-6, 1.0 - u1 + 1e-6);
    const UncertaintyLinearPolicy p{rng.uniform(0.1, 5.0)};
    CHECK(apply_policy(p, ctx(0, 0, 0, u2), 0.5).temperature >
          apply_policy(p, ctx(0, 0, 0, u1), 0.5).temperature);
  }
}

TEST_CASE("constant policy") {
  const auto out = apply_policy(ConstantPolicy{2.5}, ctx(0.9, 0.1, 0.9, 0.9), 0.3);
  CHECK(out.temperature == 2.5);
  CHECK(out.distill_weight == 0.3);
}

TEST_CASE("rule based policy") {
  const RuleBasedPolicy p;
  CHECK(apply_policy(p, ctx(0.8, 0.4), 0.0).temperature == 4.0);
  CHECK(apply_policy(p, ctx(0.1, 0.9), 0.0).temperature == 1.0);
  CHECK(apply_policy(p, ctx(0.8, 0.9), 0.0).temperature == 2.0);
  CHECK(apply_policy(p, ctx(0.1, 0.4), 0.0).temperature == 2.0);
  CHECK(apply_policy(p, ctx(0.1, 0.9, 0.5), 0.0).distill_weight == 0.5);
  CHECK(apply_policy(p, ctx(0.1, 0.9, 0.6), 0.0).distill_weight == doctest::Approx(0.7));

  RuleBasedPolicy clamped;
  clamped.step_up = 100.0;
  clamped.step_down = 100.0;
  clamped.weight_step = 1.0;
  CHECK(apply_policy(clamped, ctx(0.9, 0.1, 1.0), 0.0).temperature == 8.0);
  CHECK(apply_policy(clamped, ctx(0.9, 0.1, 1.0), 0.0).distill_weight == 0.9);
  CHECK(apply_policy(clamped, ctx(0.0, 1.0), 0.0).temperature == 1.0);

  Rng rng(2);
  for (int i = 0; i < 2000; ++i) {
    const auto c = ctx(rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform());
    const auto out = apply_policy(p, c, 0.0);
    const bool rule1 = c.noise_level >= p.noise_threshold &&
                       c.teacher_confidence <= p.confidence_threshold;
    const bool rule2 = c.noise_level < p.noise_threshold &&
                       c.teacher_confidence > p.confidence_threshold;
    CHECK_FALSE((rule1 && rule2));
    if (rule1) CHECK(out.temperature >= p.base_temperature);
    if (rule2) CHECK(out.temperature <= p.base_temperature);
    CHECK(out.temperature >= p.min_temperature);
    CHECK(out.temperature <= p.max_temperature);
    CHECK(out.distill_weight >= p.base_weight);
    CHECK(out.distill_weight <= p.max_weight);
    if (c.disease_complexity < p.complexity_threshold) CHECK(out.distill_weight == p.base_weight);
    const auto again = apply_policy(p, c, 0.0);
    CHECK(again.temperature == out.temperature);
    CHECK(again.distill_weight == out.distill_weight);
  }
}

TEST_CASE("policy validation") {
  CHECK(error_code([] { validate(ConstantPolicy{0.0}); }) == Errc::InvalidPolicyParameters);
  CHECK(error_code([] { validate(UncertaintyLinearPolicy{-1.0}); }) ==
        Errc::InvalidPolicyParameters);
  RuleBasedPolicy p;
  p.min_temperature = 3.0;
  CHECK(error_code([&] { validate(p); }) == Errc::InvalidPolicyParameters);
  p = {};
  p.max_weight = 0.4;
  CHECK(error_code([&] { validate(p); }) == Errc::InvalidPolicyParameters);
  p = {};
  p.max_weight = 1.2;
  CHECK(error_code([&] { validate(p); }) == Errc::InvalidPolicyParameters);
  p = {};
  p.noise_threshold = 1.5;
  CHECK(error_code([&] { apply_policy(p, ctx(0, 0), 0.5); }) == Errc::InvalidPolicyParameters);
  CHECK(error_code([] { apply_policy(ConstantPolicy{}, ctx(0, 0), 1.5); }) ==
        Errc::InvalidPolicyParameters);
  CHECK(describe(ConstantPolicy{2.0}) == "constant(T=2)");
}
