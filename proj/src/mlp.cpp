#include "kdaco/mlp.hpp"

#include <cmath>
#include <string>

#include "kdaco/error.hpp"
#include "kdaco/rng.hpp"

namespace kdaco::tinynet {

namespace {

std::vector<DenseLayer> shaped_layers(const std::vector<std::size_t>& dims) {
  if (dims.size() < 2) {
    throw Error(Errc::InvalidShape, "need input and output dims");
  }
  std::vector<DenseLayer> layers;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    if (dims[k] == 0 || dims[k + 1] == 0) {
      throw Error(Errc::InvalidShape, "layer dims must be positive");
    }
    DenseLayer layer;
    layer.in = dims[k];
    layer.out = dims[k + 1];
    layer.weights.assign(layer.in * layer.out, 0.0);
    layer.bias.assign(layer.out, 0.0);
    layers.push_back(std::move(layer));
  }
  return layers;
}

void affine(const DenseLayer& layer, std::span<const double> x,
            std::vector<double>& y) {
  y.assign(layer.out, 0.0);
  for (std::size_t o = 0; o < layer.out; ++o) {
    const double* w = layer.weights.data() + o * layer.in;
    double acc = layer.bias[o];
    for (std::size_t i = 0; i < layer.in; ++i) acc += w[i] * x[i];
    y[o] = acc;
  }
}

}  // namespace

MlpModel make_zero_mlp(std::vector<std::size_t> dims) {
  MlpModel model;
  model.layers = shaped_layers(dims);
  model.dims = std::move(dims);
  return model;
}

MlpModel make_mlp(std::vector<std::size_t> dims, std::uint64_t seed) {
  MlpModel model = make_zero_mlp(std::move(dims));
  Rng rng(seed);
  for (auto& layer : model.layers) {
    const double s = std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
    for (double& w : layer.weights) w = rng.uniform(-s, s);
  }
  return model;
}

void validate(const MlpModel& model) {
  if (model.dims.size() < 2 || model.layers.size() + 1 != model.dims.size()) {
    throw Error(Errc::InvalidShape, "layer count does not match dims");
  }
  for (std::size_t k = 0; k < model.layers.size(); ++k) {
    const auto& layer = model.layers[k];
    if (layer.in != model.dims[k] || layer.out != model.dims[k + 1] ||
        layer.weights.size() != layer.in * layer.out ||
        layer.bias.size() != layer.out) {
      throw Error(Errc::InvalidShape, "layer " + std::to_string(k) +
                                          " does not conform to dims");
    }
    for (double w : layer.weights) {
      if (!std::isfinite(w)) throw Error(Errc::NonFiniteInput, "weight");
    }
    for (double b : layer.bias) {
      if (!std::isfinite(b)) throw Error(Errc::NonFiniteInput, "bias");
    }
  }
}

std::size_t parameter_count(const MlpModel& model) {
  std::size_t n = 0;
  for (const auto& layer : model.layers) n += layer.weights.size() + layer.bias.size();
  return n;
}

double& parameter_at(MlpModel& model, std::size_t index) {
  for (auto& layer : model.layers) {
    if (index < layer.weights.size()) return layer.weights[index];
    index -= layer.weights.size();
    if (index < layer.bias.size()) return layer.bias[index];
    index -= layer.bias.size();
  }
  throw Error(Errc::IndexOutOfRange, "parameter index");
}

double parameter_at(const MlpModel& model, std::size_t index) {
  return parameter_at(const_cast<MlpModel&>(model), index);
}

std::vector<double> forward(const MlpModel& model, std::span<const double> x) {
  if (x.size() != model.input_dim()) {
    throw Error(Errc::ShapeMismatch, "input has " + std::to_string(x.size()) +
                                         " features, model expects " +
                                         std::to_string(model.input_dim()));
  }
  std::vector<double> current(x.begin(), x.end());
  std::vector<double> next;
  for (std::size_t k = 0; k < model.layers.size(); ++k) {
    affine(model.layers[k], current, next);
    if (k + 1 < model.layers.size()) {
      for (double& v : next) v = v > 0.0 ? v : 0.0;
    }
    current.swap(next);
  }
  return current;
}

MlpGradients loss_gradients(const MlpModel& model,
                            std::span<const std::span<const double>> batch,
                            const LogitLoss& loss_fn) {
  if (batch.empty()) throw Error(Errc::ShapeMismatch, "empty batch");
  const std::size_t depth = model.layers.size();

  MlpGradients grads;
  grads.layers = shaped_layers(model.dims);

  // activations[k] is the input to layer k; activations[depth] the logits.
  std::vector<std::vector<double>> activations(depth + 1);
  std::vector<double> delta;
  std::vector<double> prev_delta;
  double loss_sum = 0.0;

  for (std::size_t row = 0; row < batch.size(); ++row) {
    const auto x = batch[row];
    if (x.size() != model.input_dim()) {
      throw Error(Errc::ShapeMismatch, "batch row " + std::to_string(row));
    }
    activations[0].assign(x.begin(), x.end());
    for (std::size_t k = 0; k < depth; ++k) {
      affine(model.layers[k], activations[k], activations[k + 1]);
      if (k + 1 < depth) {
        for (double& v : activations[k + 1]) v = v > 0.0 ? v : 0.0;
      }
    }

    LossEval eval = loss_fn(activations[depth], row);
    if (!std::isfinite(eval.loss)) {
      throw Error(Errc::NonFiniteLoss, "batch row " + std::to_string(row));
    }
    if (eval.grad.size() != model.output_dim()) {
      throw Error(Errc::ShapeMismatch, "loss gradient length");
    }
    loss_sum += eval.loss;
    delta = std::move(eval.grad);

    for (std::size_t k = depth; k-- > 0;) {
      const auto& layer = model.layers[k];
      auto& g = grads.layers[k];
      const auto& input = activations[k];
      for (std::size_t o = 0; o < layer.out; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        g.bias[o] += d;
        double* gw = g.weights.data() + o * layer.in;
        for (std::size_t i = 0; i < layer.in; ++i) gw[i] += d * input[i];
      }
      if (k == 0) break;
      prev_delta.assign(layer.in, 0.0);
      for (std::size_t o = 0; o < layer.out; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        const double* w = layer.weights.data() + o * layer.in;
        for (std::size_t i = 0; i < layer.in; ++i) prev_delta[i] += d * w[i];
      }
      // Rectifier derivative; the input of layer k is the rectified output of
      // layer k-1, so a zero activation means a closed gate.
      for (std::size_t i = 0; i < layer.in; ++i) {
        if (input[i] <= 0.0) prev_delta[i] = 0.0;
      }
      delta.swap(prev_delta);
    }
  }

  const double scale = 1.0 / static_cast<double>(batch.size());
  for (auto& g : grads.layers) {
    for (double& w : g.weights) w *= scale;
    for (double& b : g.bias) b *= scale;
  }
  grads.mean_loss = loss_sum * scale;
  return grads;
}

void sgd_step(MlpModel& model, const MlpGradients& grads, double learning_rate) {
  for (std::size_t k = 0; k < model.layers.size(); ++k) {
    auto& layer = model.layers[k];
    const auto& g = grads.layers[k];
    for (std::size_t i = 0; i < layer.weights.size(); ++i) {
      layer.weights[i] -= learning_rate * g.weights[i];
    }
    for (std::size_t i = 0; i < layer.bias.size(); ++i) {
      layer.bias[i] -= learning_rate * g.bias[i];
    }
  }
}

}  // namespace kdaco::tinynet
