#include "kdaco/distill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>


#include "kdaco/error.hpp"
#include "kdaco/numerics.hpp"

namespace kdaco::distill {

namespace {

void check_pair(std::span<const double> student, std::span<const double> teacher,
                std::size_t true_class, double temperature, double weight) {
  if (student.size() != teacher.size()) {
    throw Error(Errc::LengthMismatch, "student and teacher logits differ in length");
  }
  if (!(temperature > 0.0)) {
    throw Error(Errc::NonPositiveTemperature, "temperature must be positive");
  }
  if (true_class >= student.size()) throw Error(Errc::IndexOutOfRange, "true class");
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw Error(Errc::InvalidConfig, "distillation weight outside [0,1]");
  }
}

}  // namespace

LossBreakdown kd_loss(std::span<const double> student_logits,
                      std::span<const double> teacher_logits,
                      std::size_t true_class, double temperature, double weight) {
  check_pair(student_logits, teacher_logits, true_class, temperature, weight);
  LossBreakdown out;
  out.temperature_used = temperature;
  out.distill_weight_used = weight;
  out.ce_term = numerics::cross_entropy(
      true_class, numerics::stable_softmax(student_logits, 1.0));
  out.kl_term = numerics::kl_divergence(
      numerics::stable_softmax(teacher_logits, temperature),
      numerics::stable_softmax(student_logits, temperature));
  out.total = (1.0 - weight) * out.ce_term +
              weight * temperature * temperature * out.kl_term;
  return out;
}

std::vector<double> kd_loss_grad(std::span<const double> student_logits,
                                 std::span<const double> teacher_logits,
                                 std::size_t true_class, double temperature,
                                 double weight) {
  check_pair(student_logits, teacher_logits, true_class, temperature, weight);
  auto grad = numerics::stable_softmax(student_logits, 1.0);
  const auto soft_student = numerics::stable_softmax(student_logits, temperature);
  const auto soft_teacher = numerics::stable_softmax(teacher_logits, temperature);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double hard = grad[i] - (i == true_class ? 1.0 : 0.0);
    grad[i] = (1.0 - weight) * hard +
              weight * temperature * (soft_student[i] - soft_teacher[i]);
  }
  return grad;
}

DistillResult distill_train(const tinynet::MlpModel& teacher,
                            tinynet::MlpModel student,
                            const tinynet::SyntheticDataset& data,
                            const KdConfig& config) {
  temperature::validate(config.policy);
  if (!(config.t_base >= 0.0 && config.t_base <= 1.0)) {
    throw Error(Errc::InvalidConfig, "t_base outside [0,1]");
  }
  tinynet::validate(teacher);
  if (teacher.input_dim() != data.dim || teacher.output_dim() != data.n_classes) {
    throw Error(Errc::ShapeMismatch, "teacher does not match dataset shape");
  }
  const auto train_ids = data.indices(tinynet::Split::Train);
  if (train_ids.empty()) throw Error(Errc::EmptySplit, "train split is empty");

  // Teacher outputs and the policy decision are fixed per sample.
  struct SampleTarget {
    std::vector<double> teacher_logits;
    temperature::PolicyOutput policy;
  };
  std::vector<SampleTarget> targets(data.size());
  for (std::size_t i : train_ids) {
    auto& t = targets[i];
    t.teacher_logits = tinynet::forward(teacher, data.row(i));
    const auto ctx = temperature::compute_context(
        t.teacher_logits, data.noise_level[i], data.class_complexity[data.labels[i]]);
    t.policy = temperature::apply_policy(config.policy, ctx, config.t_base);
  }

  DistillReport report;
  report.seed = config.train.seed;
  report.policy = temperature::describe(config.policy);
  report.t_base = config.t_base;

  BatchLog current;
  current.min_kl = std::numeric_limits<double>::infinity();
  double epoch_temp_sum = 0.0, epoch_weight_sum = 0.0;
  std::size_t epoch_count = 0;

  const auto loss = [&](std::span<const double> logits, std::size_t sample) {
    const auto& t = targets[sample];
    const std::size_t label = data.labels[sample];
    const double temp = t.policy.temperature;
    const double w = t.policy.distill_weight;
    const auto parts = kd_loss(logits, t.teacher_logits, label, temp, w);

    current.samples += 1;
    current.mean_ce += parts.ce_term;
    current.mean_kl += parts.kl_term;
    current.mean_total += parts.total;
    current.min_kl = std::min(current.min_kl, parts.kl_term);
    current.max_kl = std::max(current.max_kl, parts.kl_term);
    const double recomposed = (1.0 - w) * parts.ce_term + w * temp * temp * parts.kl_term;
    current.max_recompose_error =
        std::max(current.max_recompose_error, std::abs(parts.total - recomposed));

    epoch_temp_sum += temp;
    epoch_weight_sum += w;
    ++epoch_count;

    tinynet::LossEval eval;
    eval.loss = parts.total;
    eval.grad = kd_loss_grad(logits, t.teacher_logits, label, temp, w);
    return eval;
  };

  const auto close_epoch = [&] {
    report.epoch_mean_temperature.push_back(epoch_temp_sum / static_cast<double>(epoch_count));
    report.epoch_mean_weight.push_back(epoch_weight_sum / static_cast<double>(epoch_count));
    epoch_temp_sum = 0.0;
    epoch_weight_sum = 0.0;
    epoch_count = 0;
  };
  const auto on_batch = [&](std::size_t epoch, std::size_t) {
    const auto n = static_cast<double>(current.samples);
    current.epoch = epoch;
    current.mean_ce /= n;
    current.mean_kl /= n;
    current.mean_total /= n;
    report.batches.push_back(current);
    current = BatchLog{};
    current.min_kl = std::numeric_limits<double>::infinity();
    if (epoch_count == train_ids.size()) close_epoch();
  };

  auto trained = tinynet::train_with_loss(std::move(student), data, config.train,
                                          loss, on_batch);

  // Every train sample is used once per epoch with a fixed temperature, so
  // the distribution over uses equals the distribution over train samples.
  auto& ts = report.temperature;
  ts.count = train_ids.size() * config.train.epochs;
  ts.min = std::numeric_limits<double>::infinity();
  ts.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i : train_ids) {
    const double temp = targets[i].policy.temperature;
    sum += temp;
    ts.min = std::min(ts.min, temp);
    ts.max = std::max(ts.max, temp);
  }
  ts.mean = sum / static_cast<double>(train_ids.size());
  double sq = 0.0;
  for (std::size_t i : train_ids) {
    const double dev = targets[i].policy.temperature - ts.mean;
    sq += dev * dev;
  }
  ts.variance = sq / static_cast<double>(train_ids.size());

  report.history = std::move(trained.history);
  report.final_val_accuracy = tinynet::accuracy(trained.model, data, tinynet::Split::Val);
  report.final_test_accuracy = tinynet::accuracy(trained.model, data, tinynet::Split::Test);
  return {std::move(trained.model), std::move(report)};
}

nlohmann::json to_json(const DistillReport& report) {
  nlohmann::json j;
  j["seed"] = report.seed;
  j["policy"] = report.policy;
  j["t_base"] = report.t_base;
  auto& epochs = j["epochs"];
  epochs["train_loss"] = nlohmann::json::array();
  epochs["val_accuracy"] = nlohmann::json::array();
  for (const auto& e : report.history) {
    epochs["train_loss"].push_back(e.train_loss);
    epochs["val_accuracy"].push_back(e.val_accuracy);
  }
  epochs["mean_temperature"] = report.epoch_mean_temperature;
  epochs["mean_distill_weight"] = report.epoch_mean_weight;
  j["temperature"] = {{"mean", report.temperature.mean},
                      {"min", report.temperature.min},
                      {"max", report.temperature.max},
                      {"variance", report.temperature.variance},
                      {"count", report.temperature.count}};
  j["final"] = {{"val_accuracy", report.final_val_accuracy},
                {"test_accuracy", report.final_test_accuracy}};
  return j;
}

}  // namespace kdaco::distill
