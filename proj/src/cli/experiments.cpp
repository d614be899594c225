#include "kdaco/cli/experiments.hpp"

#include "kdaco/rng.hpp"
#include "kdaco/text.hpp"

namespace kdaco::cli {

namespace {

std::vector<std::size_t> dims_for(const tinynet::SyntheticDataset& data,
                                  const std::vector<std::size_t>& hidden) {
  std::vector<std::size_t> dims{data.dim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(data.n_classes);
  return dims;
}

tinynet::MlpModel train_teacher(const DistillSetup& setup,
                                const tinynet::SyntheticDataset& data) {
  const Rng seeds(setup.model_seed);
  auto model = tinynet::make_mlp(dims_for(data, setup.teacher_hidden), seeds.split(1).next_u64());
  return tinynet::train_supervised(std::move(model), data, setup.teacher_train).model;
}

tinynet::MlpModel fresh_student(const DistillSetup& setup,
                                const tinynet::SyntheticDataset& data) {
  const Rng seeds(setup.model_seed);
  return tinynet::make_mlp(dims_for(data, setup.student_hidden), seeds.split(2).next_u64());
}

}  // namespace

Prepared prepare(const DistillSetup& setup) {
  Prepared p;
  p.clean = tinynet::generate_synthetic(setup.data);
  p.data = setup.noise ? tinynet::inject_noise(p.clean, setup.noise->kind, setup.noise->level,
                                               setup.noise->seed, setup.noise->fraction)
                       : p.clean;
  p.teacher = train_teacher(setup, setup.teacher_on_clean ? p.clean : p.data);
  p.student_init = fresh_student(setup, p.data);
  return p;
}

MetricRow evaluate_test(const std::string& name, const tinynet::MlpModel& model,
                        const tinynet::SyntheticDataset& data) {
  std::vector<std::size_t> predictions, labels;
  for (std::size_t i : data.indices(tinynet::Split::Test)) {
    predictions.push_back(tinynet::predict(model, data.row(i)));
    labels.push_back(data.labels[i]);
  }
  const auto report =
      metrics::class_report(metrics::confusion(predictions, labels, data.n_classes));
  return {name, report.accuracy, report.macro.precision, report.macro.recall, report.macro.f1};
}

std::string csv_row(const MetricRow& row) {
  return row.name + "," + format_real(row.accuracy) + "," + format_real(row.precision) + "," +
         format_real(row.recall) + "," + format_real(row.f1);
}

Table10 run_table10(const DistillSetup& setup) {
  const Prepared p = prepare(setup);
  Table10 table;
  table.rows.push_back(evaluate_test("teacher", p.teacher, p.data));

  const auto supervised = tinynet::train_supervised(p.student_init, p.data, setup.kd.train);
  table.supervised_history = supervised.history;
  table.rows.push_back(evaluate_test("student_no_kd", supervised.model, p.data));

  distill::KdConfig constant = setup.kd;
  constant.policy = temperature::ConstantPolicy{setup.constant_temperature};
  auto constant_run = distill::distill_train(p.teacher, p.student_init, p.data, constant);
  table.rows.push_back(evaluate_test("student_constant_T", constant_run.student, p.data));
  table.constant_report = std::move(constant_run.report);

  auto context_run = distill::distill_train(p.teacher, p.student_init, p.data, setup.kd);
  table.rows.push_back(evaluate_test("student_context_aware", context_run.student, p.data));
  table.context_report = std::move(context_run.report);
  return table;
}

Table11 run_table11(const DistillSetup& setup, double level) {
  const auto clean = tinynet::generate_synthetic(setup.data);
  const std::uint64_t noise_seed = setup.noise ? setup.noise->seed : 1;
  Table11 table;
  const auto run = [&](const std::string& name, const tinynet::SyntheticDataset& data) {
    const auto teacher = train_teacher(setup, data);
    auto result = distill::distill_train(teacher, fresh_student(setup, data), data, setup.kd);
    table.rows.push_back(evaluate_test(name, result.student, data));
  };
  for (auto kind : {tinynet::NoiseKind::Gaussian, tinynet::NoiseKind::SaltPepper,
                    tinynet::NoiseKind::Uniform}) {
    run(std::string(tinynet::noise_kind_name(kind)),
        tinynet::inject_noise(clean, kind, level, noise_seed));
  }
  run("clean", clean);
  return table;
}

}  // namespace kdaco::cli
