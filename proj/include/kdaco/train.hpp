#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kdaco/dataset.hpp"
#include "kdaco/mlp.hpp"

namespace kdaco::tinynet {

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 32;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;  // drives mini-batch shuffling only
};

void validate(const TrainConfig& config);

struct EpochStats {
  double train_loss = 0.0;  // mean per-sample loss seen during the epoch
  double val_accuracy = 0.0;

  bool operator==(const EpochStats&) const = default;
};

struct TrainResult {
  MlpModel model;
  std::vector<EpochStats> history;
};

// Loss on one training sample; `sample` indexes the dataset.
using SampleLoss =
    std::function<LossEval(std::span<const double> logits, std::size_t sample)>;

// Called after every optimizer step.
using BatchHook = std::function<void(std::size_t epoch, std::size_t batch)>;

// Mini-batch SGD over the train split with a per-sample loss. Each epoch
// visits the train split in a fresh shuffled order.
TrainResult train_with_loss(MlpModel model, const SyntheticDataset& data,
                            const TrainConfig& config, const SampleLoss& loss,
                            const BatchHook& on_batch = {});

// Cross-entropy of the one-hot label against softmax(logits) and its
// gradient softmax(logits) - onehot.
LossEval cross_entropy_loss(std::span<const double> logits, std::size_t label);

TrainResult train_supervised(MlpModel model, const SyntheticDataset& data,
                             const TrainConfig& config);

std::size_t predict(const MlpModel& model, std::span<const double> x);

double accuracy(const MlpModel& model, const SyntheticDataset& data, Split split);

// Accuracy over an explicit list of sample indices; 0 for an empty list.
double accuracy(const MlpModel& model, const SyntheticDataset& data,
                std::span<const std::size_t> samples);

}  // namespace kdaco::tinynet
