#pragma once

// Numerically stable probability kernels. All functions are pure and operate
// on plain real vectors: logits are unbounded class scores, distributions are
// nonnegative and sum to one.

#include <cstddef>
#include <span>
#include <vector>

namespace kdaco::numerics {

// Floor applied to probabilities inside logarithms (KL, cross-entropy).
inline constexpr double kProbFloor = 1e-12;

// Tolerance used when validating that an input is a distribution.
inline constexpr double kDistTolerance = 1e-6;

using Logits = std::vector<double>;
using Probs = std::vector<double>;

// Throws NonFiniteInput if any value is NaN/Inf, InvalidShape if fewer than
// two classes.
void check_logits(std::span<const double> logits);

// Throws InvalidDistribution unless every entry lies in [0,1] and the sum is
// within kDistTolerance of one.
void check_distribution(std::span<const double> probs);

// Lowest index of the maximum element.
std::size_t argmax(std::span<const double> values);

// softmax(logits / temperature) via max-subtraction.
Probs stable_softmax(std::span<const double> logits, double temperature = 1.0);

// log(softmax(logits / temperature)) via log-sum-exp, never forming the
// probabilities first.
std::vector<double> log_softmax(std::span<const double> logits,
                                double temperature = 1.0);

// sum_i p_i ln(p_i / q_i) with q floored at kProbFloor; terms with p_i = 0
// contribute nothing.
double kl_divergence(std::span<const double> p, std::span<const double> q);

double cross_entropy(std::span<const double> target,
                     std::span<const double> predicted);
double cross_entropy(std::size_t target_class,
                     std::span<const double> predicted);

// Shannon entropy divided by ln C, in [0, 1].
double normalized_entropy(std::span<const double> probs);

}  // namespace kdaco::numerics
