#pragma once

// Small fully connected classifier: affine + rectifier hidden layers and an
// affine output layer producing raw logits.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace kdaco::tinynet {

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> bias;     // out

  bool operator==(const DenseLayer&) const = default;
};

struct MlpModel {
  std::vector<std::size_t> dims;  // input, hidden..., output
  std::vector<DenseLayer> layers;

  std::size_t input_dim() const { return dims.front(); }
  std::size_t output_dim() const { return dims.back(); }

  bool operator==(const MlpModel&) const = default;
};

// All-zero parameters.
MlpModel make_zero_mlp(std::vector<std::size_t> dims);

// Per-layer uniform init in [-s, s], s = sqrt(6 / (fan_in + fan_out)).
MlpModel make_mlp(std::vector<std::size_t> dims, std::uint64_t seed);

// Throws InvalidShape / NonFiniteInput if the layer shapes do not chain or a
// parameter is not finite.
void validate(const MlpModel& model);

std::size_t parameter_count(const MlpModel& model);

// Flat view over parameters: per layer, weights then bias.
double& parameter_at(MlpModel& model, std::size_t index);
double parameter_at(const MlpModel& model, std::size_t index);

std::vector<double> forward(const MlpModel& model, std::span<const double> x);

// Loss of one sample's logits plus its gradient w.r.t. those logits.
struct LossEval {
  double loss = 0.0;
  std::vector<double> grad;
};

// `row` is the position of the sample inside the batch.
using LogitLoss =
    std::function<LossEval(std::span<const double> logits, std::size_t row)>;

struct MlpGradients {
  std::vector<DenseLayer> layers;  // same shapes as the model
  double mean_loss = 0.0;
};

// Reverse-mode gradients of the mean batch loss.
MlpGradients loss_gradients(const MlpModel& model,
                            std::span<const std::span<const double>> batch,
                            const LogitLoss& loss_fn);

// params -= learning_rate * grads
void sgd_step(MlpModel& model, const MlpGradients& grads, double learning_rate);

}  // namespace kdaco::tinynet
