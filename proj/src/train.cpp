#include "kdaco/train.hpp"

#include <algorithm>
#include <cmath>

#include "kdaco/error.hpp"
#include "kdaco/numerics.hpp"
#include "kdaco/rng.hpp"

namespace kdaco::tinynet {

void validate(const TrainConfig& config) {
  if (config.epochs < 1 || config.batch_size < 1 ||
      !(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
    throw Error(Errc::InvalidConfig,
                "need epochs >= 1, batch_size >= 1, finite learning_rate >= 0");
  }
}

LossEval cross_entropy_loss(std::span<const double> logits, std::size_t label) {
  LossEval eval;
  eval.grad = numerics::stable_softmax(logits, 1.0);
  eval.loss = numerics::cross_entropy(label, eval.grad);
  eval.grad[label] -= 1.0;
  return eval;
}

TrainResult train_with_loss(MlpModel model, const SyntheticDataset& data,
                            const TrainConfig& config, const SampleLoss& loss,
                            const BatchHook& on_batch) {
  validate(config);
  validate(model);
  auto order = data.indices(Split::Train);
  if (order.empty()) throw Error(Errc::EmptySplit, "train split is empty");
  if (data.indices(Split::Val).empty()) throw Error(Errc::EmptySplit, "val split is empty");
  if (model.input_dim() != data.dim || model.output_dim() != data.n_classes) {
    throw Error(Errc::ShapeMismatch, "model does not match dataset shape");
  }

  TrainResult result;
  Rng rng = Rng(config.seed).split(0x5eed);
  std::vector<std::span<const double>> batch;
  std::vector<std::size_t> batch_samples;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      batch_samples.clear();
      for (std::size_t r = start; r < end; ++r) {
        batch.push_back(data.row(order[r]));
        batch_samples.push_back(order[r]);
      }
      const auto grads = loss_gradients(
          model, batch, [&](std::span<const double> logits, std::size_t row) {
            return loss(logits, batch_samples[row]);
          });
      loss_sum += grads.mean_loss * static_cast<double>(batch.size());
      sgd_step(model, grads, config.learning_rate);
      if (on_batch) on_batch(epoch, batch_index);
      ++batch_index;
    }
    EpochStats stats;
    stats.train_loss = loss_sum / static_cast<double>(order.size());
    stats.val_accuracy = accuracy(model, data, Split::Val);
    result.history.push_back(stats);
  }
  result.model = std::move(model);
  return result;
}

TrainResult train_supervised(MlpModel model, const SyntheticDataset& data,
                             const TrainConfig& config) {
  return train_with_loss(std::move(model), data, config,
                         [&](std::span<const double> logits, std::size_t sample) {
                           return cross_entropy_loss(logits, data.labels[sample]);
                         });
}

std::size_t predict(const MlpModel& model, std::span<const double> x) {
  return numerics::argmax(forward(model, x));
}

double accuracy(const MlpModel& model, const SyntheticDataset& data,
                std::span<const std::size_t> samples) {
  if (samples.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i : samples) {
    if (predict(model, data.row(i)) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

double accuracy(const MlpModel& model, const SyntheticDataset& data, Split split) {
  const auto samples = data.indices(split);
  return accuracy(model, data, samples);
}

}  // namespace kdaco::tinynet
