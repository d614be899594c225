#include "kdaco/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kdaco/error.hpp"

namespace kdaco::numerics {

void check_logits(std::span<const double> logits) {
  if (logits.size() < 2) {
    throw Error(Errc::InvalidShape,
                "need at least 2 classes, got " + std::to_string(logits.size()));
  }
  for (double v : logits) {
    if (!std::isfinite(v)) throw Error(Errc::NonFiniteInput, "logit is NaN/Inf");
  }
}

void check_distribution(std::span<const double> probs) {
  if (probs.empty()) throw Error(Errc::InvalidDistribution, "empty distribution");
  double sum = 0.0;
  for (double v : probs) {
    if (!std::isfinite(v) || v < -kDistTolerance || v > 1.0 + kDistTolerance) {
      throw Error(Errc::InvalidDistribution, "entry outside [0,1]");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kDistTolerance) {
    throw Error(Errc::InvalidDistribution,
                "entries sum to " + std::to_string(sum));
  }
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

namespace {

void check_temperature(double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(Errc::NonPositiveTemperature,
                "temperature must be positive, got " + std::to_string(temperature));
  }
}

void check_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(Errc::LengthMismatch,
                std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

Probs stable_softmax(std::span<const double> logits, double temperature) {
  check_temperature(temperature);
  check_logits(logits);
  const double top = *std::max_element(logits.begin(), logits.end());
  Probs out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp((logits[i] - top) / temperature);
    sum += out[i];
  }
  // sum >= 1 because the max element contributes exp(0).
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> log_softmax(std::span<const double> logits,
                                double temperature) {
  check_temperature(temperature);
  check_logits(logits);
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> shifted(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    shifted[i] = (logits[i] - top) / temperature;
    sum += std::exp(shifted[i]);
  }
  const double log_norm = std::log(sum);
  for (double& v : shifted) v -= log_norm;
  return shifted;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  check_same_length(p.size(), q.size());
  check_distribution(p);
  check_distribution(q);
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    kl += p[i] * (std::log(std::max(p[i], kProbFloor)) -
                  std::log(std::max(q[i], kProbFloor)));
  }
  // Rounding can leave a tiny negative residue for p ~= q.
  return std::max(kl, 0.0);
}

double cross_entropy(std::span<const double> target,
                     std::span<const double> predicted) {
  check_same_length(target.size(), predicted.size());
  check_distribution(target);
  check_distribution(predicted);
  double ce = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] <= 0.0) continue;
    ce -= target[i] * std::log(std::max(predicted[i], kProbFloor));
  }
  return std::max(ce, 0.0);
}

double cross_entropy(std::size_t target_class,
                     std::span<const double> predicted) {
  if (target_class >= predicted.size()) {
    throw Error(Errc::IndexOutOfRange,
                "class " + std::to_string(target_class) + " of " +
                    std::to_string(predicted.size()));
  }
  check_distribution(predicted);
  return 0.0 - std::log(std::max(predicted[target_class], kProbFloor));
}

double normalized_entropy(std::span<const double> probs) {
  check_distribution(probs);
  if (probs.size() < 2) {
    throw Error(Errc::InvalidDistribution, "need at least 2 classes");
  }
  double h = 0.0;
  for (double v : probs) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return std::clamp(h / std::log(static_cast<double>(probs.size())), 0.0, 1.0);
}

}  // namespace kdaco::numerics
