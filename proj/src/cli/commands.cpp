#include "kdaco/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "kdaco/error.hpp"
#include "kdaco/numerics.hpp"
#include "kdaco/text.hpp"

namespace kdaco::cli {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Config mapping

tinynet::SyntheticSpec data_spec_from_config(const RunConfig& cfg) {
  tinynet::SyntheticSpec spec;
  spec.n_samples = cfg.get_uint("data", "samples", spec.n_samples);
  spec.n_classes = cfg.get_uint("data", "classes", spec.n_classes);
  spec.input_dim = cfg.get_uint("data", "dim", spec.input_dim);
  spec.complexity = cfg.get_reals("data", "complexity", {});
  if (spec.complexity.size() == 1 && spec.n_classes > 1) {
    spec.complexity.assign(spec.n_classes, spec.complexity.front());
  }
  spec.seed = cfg.get_uint("data", "seed", spec.seed);
  return spec;
}

std::optional<NoiseSpec> noise_from_config(const RunConfig& cfg) {
  if (!cfg.has("data", "noise_kind") && !cfg.has("data", "noise_level")) return std::nullopt;
  NoiseSpec noise;
  noise.kind = tinynet::parse_noise_kind(cfg.get_string("data", "noise_kind", "gaussian"));
  noise.level = cfg.get_real("data", "noise_level", noise.level);
  noise.fraction = cfg.get_real("data", "noise_fraction", noise.fraction);
  noise.seed = cfg.get_uint("data", "noise_seed", cfg.get_uint("data", "seed", 0) + 1);
  return noise;
}

temperature::TemperaturePolicy policy_from_config(const RunConfig& cfg) {
  const auto variant = cfg.get_string("policy", "variant", "rule_based");
  temperature::TemperaturePolicy policy;
  if (variant == "constant") {
    temperature::ConstantPolicy p;
    p.temperature = cfg.get_real("policy", "temperature", p.temperature);
    policy = p;
  } else if (variant == "uncertainty_linear") {
    temperature::UncertaintyLinearPolicy p;
    p.alpha = cfg.get_real("policy", "alpha", p.alpha);
    policy = p;
  } else if (variant == "rule_based") {
    temperature::RuleBasedPolicy p;
    p.base_temperature = cfg.get_real("policy", "base_temperature", p.base_temperature);
    p.step_up = cfg.get_real("policy", "step_up", p.step_up);
    p.step_down = cfg.get_real("policy", "step_down", p.step_down);
    p.min_temperature = cfg.get_real("policy", "min_temperature", p.min_temperature);
    p.max_temperature = cfg.get_real("policy", "max_temperature", p.max_temperature);
    p.noise_threshold = cfg.get_real("policy", "noise_threshold", p.noise_threshold);
    p.confidence_threshold = cfg.get_real("policy", "confidence_threshold", p.confidence_threshold);
    p.complexity_threshold = cfg.get_real("policy", "complexity_threshold", p.complexity_threshold);
    p.base_weight = cfg.get_real("policy", "base_weight", p.base_weight);
    p.weight_step = cfg.get_real("policy", "weight_step", p.weight_step);
    p.max_weight = cfg.get_real("policy", "max_weight", p.max_weight);
    policy = p;
  } else {
    throw Error(Errc::ConfigParseError, "[policy] variant: unknown '" + variant + "'");
  }
  temperature::validate(policy);
  return policy;
}

DistillSetup distill_setup_from_config(const RunConfig& cfg) {
  DistillSetup setup;
  setup.data = data_spec_from_config(cfg);
  setup.noise = noise_from_config(cfg);
  setup.kd.policy = policy_from_config(cfg);
  setup.kd.t_base = cfg.get_real("kd", "t_base", setup.kd.t_base);
  auto& train = setup.kd.train;
  train.epochs = cfg.get_uint("kd", "epochs", train.epochs);
  train.batch_size = cfg.get_uint("kd", "batch_size", train.batch_size);
  train.learning_rate = cfg.get_real("kd", "learning_rate", train.learning_rate);
  train.seed = cfg.get_uint("kd", "seed", train.seed);
  setup.teacher_train = train;
  setup.teacher_train.epochs = cfg.get_uint("kd", "teacher_epochs", train.epochs);
  setup.teacher_train.learning_rate =
      cfg.get_real("kd", "teacher_learning_rate", train.learning_rate);
  setup.teacher_hidden = cfg.get_sizes("kd", "teacher_hidden", setup.teacher_hidden);
  setup.student_hidden = cfg.get_sizes("kd", "student_hidden", setup.student_hidden);
  setup.model_seed = cfg.get_uint("kd", "model_seed", setup.model_seed);
  setup.constant_temperature =
      cfg.get_real("kd", "constant_temperature", setup.constant_temperature);
  const auto teacher_data = cfg.get_string("kd", "teacher_data", "clean");
  if (teacher_data != "clean" && teacher_data != "noisy") {
    throw Error(Errc::ConfigParseError, "[kd] teacher_data must be clean or noisy");
  }
  setup.teacher_on_clean = teacher_data == "clean";
  return setup;
}

namespace {

selection::SearchMode parse_mode(const RunConfig& cfg, std::string_view section) {
  const auto mode = cfg.get_string(section, "mode", "single");
  if (mode == "single") return selection::SearchMode::Single;
  if (mode == "pair") return selection::SearchMode::Pair;
  throw Error(Errc::ConfigParseError,
              "[" + std::string(section) + "] mode must be single or pair, got '" + mode + "'");
}

}  // namespace

selection::AcoConfig aco_from_config(const RunConfig& cfg) {
  selection::AcoConfig aco;
  aco.alpha = cfg.get_real("aco", "alpha", aco.alpha);
  aco.beta = cfg.get_real("aco", "beta", aco.beta);
  aco.rho = cfg.get_real("aco", "rho", aco.rho);
  aco.q0 = cfg.get_real("aco", "q0", aco.q0);
  aco.n_ants = cfg.get_uint("aco", "ants", aco.n_ants);
  aco.n_iterations = cfg.get_uint("aco", "iterations", aco.n_iterations);
  aco.seed = cfg.get_uint("aco", "seed", aco.seed);
  aco.mode = parse_mode(cfg, "aco");
  aco.initial_pheromone = cfg.get_reals("aco", "initial_pheromone", {});
  return aco;
}

selection::PsoConfig pso_from_config(const RunConfig& cfg) {
  selection::PsoConfig pso;
  pso.n_particles = cfg.get_uint("pso", "particles", pso.n_particles);
  pso.n_iterations = cfg.get_uint("pso", "iterations", pso.n_iterations);
  pso.inertia = cfg.get_real("pso", "inertia", pso.inertia);
  pso.c1 = cfg.get_real("pso", "c1", pso.c1);
  pso.c2 = cfg.get_real("pso", "c2", pso.c2);
  pso.seed = cfg.get_uint("pso", "seed", pso.seed);
  return pso;
}

tinynet::SyntheticDataset dataset_from_config(const RunConfig& cfg) {
  if (const auto file = cfg.get("data", "file")) {
    auto data = tinynet::load_csv(cfg.resolve(*file));
    const auto complexity = cfg.get_reals("data", "complexity", {});
    if (complexity.size() == data.n_classes) data.class_complexity = complexity;
    return data;
  }
  auto data = tinynet::generate_synthetic(data_spec_from_config(cfg));
  if (const auto noise = noise_from_config(cfg)) {
    data = tinynet::inject_noise(data, noise->kind, noise->level, noise->seed, noise->fraction);
  }
  return data;
}

selection::CandidatePool load_pool(const std::string& path,
                                   std::shared_ptr<const tinynet::SyntheticDataset> data,
                                   std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read pool " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("candidates") || !doc["candidates"].is_array()) {
    throw Error(Errc::ParseError, path + ": expected an object with a candidates array");
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "candidates" && key != "seed") {
      throw Error(Errc::ParseError, path + ": unknown key '" + key + "'");
    }
  }
  std::vector<selection::Candidate> candidates;
  try {
    for (const auto& entry : doc["candidates"]) {
      selection::Candidate c;
      for (const auto& [key, _] : entry.items()) {
        static const std::set<std::string> allowed{"name", "stub_score", "heuristic",
                                                   "hidden", "learning_rate", "epochs"};
        if (!allowed.contains(key)) {
          throw Error(Errc::ParseError, path + ": unknown candidate key '" + key + "'");
        }
      }
      c.name = entry.at("name").get<std::string>();
      if (entry.contains("stub_score")) c.stub_score = entry["stub_score"].get<double>();
      if (entry.contains("heuristic")) c.heuristic = entry["heuristic"].get<double>();
      if (entry.contains("hidden")) {
        selection::MlpProfile profile;
        profile.hidden = entry["hidden"].get<std::vector<std::size_t>>();
        profile.learning_rate = entry.value("learning_rate", profile.learning_rate);
        profile.epochs = entry.value("epochs", profile.epochs);
        c.profile = profile;
      }
      candidates.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
  const std::uint64_t seed = seed_override ? *seed_override : doc.value("seed", std::uint64_t{0});
  return selection::CandidatePool(std::move(candidates), std::move(data), seed);
}

std::string output_dir(const RunConfig& cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const auto dir = cfg.get("out", "dir")) return cfg.resolve(*dir);
  throw Error(Errc::InvalidConfig, "no output directory: pass --out or set [out] dir");
}

// ---------------------------------------------------------------------------
// Helpers

namespace {

void require_section(const RunConfig& cfg, std::string_view section) {
  if (!cfg.has_section(section)) {
    throw Error(Errc::ConfigParseError, "missing section [" + std::string(section) + "]");
  }
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir + ": " + ec.message());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << content;
  if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void start_run_dir(const RunConfig& cfg, const std::string& dir) {
  make_dir(dir);
  write_file(join_path(dir, "config.ini"), cfg.source());
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string fixed_list(std::span<const double> values, int digits = 6) {
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ", ";
    s += fixed(values[i], digits);
  }
  return s + "]";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path);
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, path + ": missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split_csv(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto row = split_csv(line);
    if (row.size() != t.header.size()) {
      throw Error(Errc::ParseError, path + ":" + std::to_string(line_no) + ": wrong field count");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::size_t parse_index(const std::string& text, const std::string& where) {
  std::size_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(Errc::ParseError, where + ": not a class index '" + text + "'");
  }
  return v;
}

std::optional<std::size_t> column(const Table& t, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - t.header.begin());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

// ---------------------------------------------------------------------------
// gen-data

int cmd_gen_data(const RunConfig& cfg, const std::string& out_dir, std::ostream& out) {
  require_section(cfg, "data");
  const auto data = dataset_from_config(cfg);
  start_run_dir(cfg, out_dir);
  tinynet::save_csv(data, join_path(out_dir, "dataset.csv"));

  const auto n_train = data.indices(tinynet::Split::Train).size();
  const auto n_val = data.indices(tinynet::Split::Val).size();
  const auto n_test = data.indices(tinynet::Split::Test).size();
  double noise_sum = 0.0;
  for (double v : data.noise_level) noise_sum += v;
  const double mean_noise = noise_sum / static_cast<double>(data.size());

  json summary{{"samples", data.size()}, {"classes", data.n_classes}, {"dim", data.dim},
               {"train", n_train},       {"val", n_val},              {"test", n_test},
               {"mean_noise_level", mean_noise}};
  write_file(join_path(out_dir, "summary.json"), dump(summary));
  out << "samples=" << data.size() << " classes=" << data.n_classes << " train=" << n_train
      << " val=" << n_val << " test=" << n_test << " mean_noise_level=" << fixed(mean_noise)
      << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// select

int cmd_select(const RunConfig& cfg, const std::string& strategy, const std::string& out_dir,
               std::ostream& out) {
  require_section(cfg, "pool");
  const auto pool_file = cfg.get("pool", "file");
  if (!pool_file) throw Error(Errc::ConfigParseError, "[pool] file is required");
  std::shared_ptr<const tinynet::SyntheticDataset> data;
  if (cfg.has_section("data")) {
    data = std::make_shared<const tinynet::SyntheticDataset>(dataset_from_config(cfg));
  }
  std::optional<std::uint64_t> seed;
  if (cfg.has("pool", "seed")) seed = cfg.get_uint("pool", "seed", 0);
  const auto pool = load_pool(cfg.resolve(*pool_file), data, seed);

  selection::SelectionReport report;
  if (strategy == "aco") {
    report = selection::run_aco(pool, aco_from_config(cfg));
  } else if (strategy == "random") {
    report = selection::run_random(pool, cfg.get_uint("random", "picks", 1),
                                   cfg.get_uint("random", "seed", 0), parse_mode(cfg, "random"));
  } else if (strategy == "grid") {
    report = selection::run_grid(pool, parse_mode(cfg, "grid"));
  } else if (strategy == "pso") {
    report = selection::run_pso(pool, pso_from_config(cfg));
  } else {
    throw Error(Errc::InvalidConfig, "unknown strategy '" + strategy + "'");
  }

  start_run_dir(cfg, out_dir);
  write_file(join_path(out_dir, "select_" + strategy + ".json"), dump(selection::to_json(report)));
  write_file(join_path(out_dir, "select_" + strategy + ".csv"),
             std::string(selection::kCsvHeader) + "\n" + selection::csv_row(report) + "\n");

  out << selection::kCsvHeader << "\n" << selection::csv_row(report) << "\n";
  out << "best=" << report.best_name << " score=" << fixed(report.best_score);
  if (report.teacher_id) out << " teacher=" << pool[*report.teacher_id].name;
  if (report.student_id) out << " student=" << pool[*report.student_id].name;
  out << "\n";
  if (!report.history.empty() && !report.history.front().probabilities.empty()) {
    out << "iteration 1 probabilities: " << fixed_list(report.history.front().probabilities)
        << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// distill

int cmd_distill(const RunConfig& cfg, const std::string& ablation, const std::string& out_dir,
                std::ostream& out) {
  require_section(cfg, "data");
  require_section(cfg, "kd");
  if (cfg.has("data", "file")) {
    throw Error(Errc::InvalidConfig,
                "distill generates its own dataset; [data] file is not supported here");
  }
  const DistillSetup setup = distill_setup_from_config(cfg);

  if (ablation == "table10") {
    const auto table = run_table10(setup);
    std::string csv = std::string(kTableHeader) + "\n";
    for (const auto& row : table.rows) csv += csv_row(row) + "\n";
    start_run_dir(cfg, out_dir);
    write_file(join_path(out_dir, "table10.csv"), csv);
    write_file(join_path(out_dir, "distill_constant.json"),
               dump(distill::to_json(table.constant_report)));
    write_file(join_path(out_dir, "distill_context_aware.json"),
               dump(distill::to_json(table.context_report)));
    out << csv;
    return 0;
  }
  if (ablation == "table11") {
    const double level = cfg.get_real("data", "noise_level", 0.5);
    const auto table = run_table11(setup, level);
    std::string csv = std::string(kTableHeader) + "\n";
    for (const auto& row : table.rows) csv += csv_row(row) + "\n";
    start_run_dir(cfg, out_dir);
    write_file(join_path(out_dir, "table11.csv"), csv);
    out << csv;
    return 0;
  }
  if (!ablation.empty()) throw Error(Errc::InvalidConfig, "unknown ablation '" + ablation + "'");

  const Prepared p = prepare(setup);
  const auto result = distill::distill_train(p.teacher, p.student_init, p.data, setup.kd);
  const auto row = evaluate_test("student", result.student, p.data);
  const auto teacher_row = evaluate_test("teacher", p.teacher, p.data);

  std::vector<std::size_t> predictions, labels;
  for (std::size_t i : p.data.indices(tinynet::Split::Test)) {
    predictions.push_back(tinynet::predict(result.student, p.data.row(i)));
    labels.push_back(p.data.labels[i]);
  }
  const auto report =
      metrics::class_report(metrics::confusion(predictions, labels, p.data.n_classes));
  std::ostringstream metrics_csv;
  metrics::write_report_csv(report, metrics_csv);

  start_run_dir(cfg, out_dir);
  write_file(join_path(out_dir, "distill_report.json"), dump(distill::to_json(result.report)));
  write_file(join_path(out_dir, "student_metrics.csv"), metrics_csv.str());
  const std::string csv = std::string(kTableHeader) + "\n" + csv_row(teacher_row) + "\n" +
                          csv_row(row) + "\n";
  write_file(join_path(out_dir, "summary.csv"), csv);
  out << "policy=" << result.report.policy << "\n"
      << "temperature mean=" << fixed(result.report.temperature.mean)
      << " min=" << fixed(result.report.temperature.min)
      << " max=" << fixed(result.report.temperature.max) << "\n"
      << csv;
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

int cmd_evaluate(const std::string& predictions_path, const std::string& labels_path,
                 const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const Table preds = read_table(predictions_path);
  const Table labs = read_table(labels_path);
  const auto label_col = column(labs, "label");
  if (!label_col) throw Error(Errc::ParseError, labels_path + ": no 'label' column");
  if (preds.rows.size() != labs.rows.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(preds.rows.size()) + " predictions vs " +
                                          std::to_string(labs.rows.size()) + " labels");
  }

  std::vector<std::size_t> prob_cols;
  for (std::size_t k = 0;; ++k) {
    const auto c = column(preds, "p" + std::to_string(k));
    if (!c) break;
    prob_cols.push_back(*c);
  }
  const auto pred_col = column(preds, "prediction");
  if (!pred_col && prob_cols.empty()) {
    throw Error(Errc::ParseError, predictions_path + ": needs 'prediction' or p0.. columns");
  }

  std::vector<std::size_t> labels, predictions;
  std::vector<metrics::ScoredPrediction> scored;
  std::size_t n_classes = prob_cols.size();
  for (std::size_t r = 0; r < labs.rows.size(); ++r) {
    const std::string where = "row " + std::to_string(r + 1);
    labels.push_back(parse_index(labs.rows[r][*label_col], labels_path + " " + where));
    metrics::ScoredPrediction sp;
    for (std::size_t c : prob_cols) sp.probs.push_back(parse_real(preds.rows[r][c]));
    sp.label = labels.back();
    predictions.push_back(pred_col ? parse_index(preds.rows[r][*pred_col],
                                                 predictions_path + " " + where)
                                   : numerics::argmax(sp.probs));
    n_classes = std::max({n_classes, labels.back() + 1, predictions.back() + 1});
    if (!prob_cols.empty()) scored.push_back(std::move(sp));
  }
  n_classes = std::max<std::size_t>(n_classes, 2);
  if (!prob_cols.empty() && prob_cols.size() != n_classes) {
    throw Error(Errc::ParseError, "probability columns do not cover every class index");
  }

  const auto report = metrics::class_report(metrics::confusion(predictions, labels, n_classes));
  json summary = metrics::to_json(report);
  if (!scored.empty()) {
    const auto roc = metrics::roc_auc_micro(scored);
    const auto pr = metrics::pr_average_precision_micro(scored);
    summary["roc_auc_micro"] = roc.area;
    summary["average_precision_micro"] = pr.area;
    const auto points = [](const metrics::CurveResult& c) {
      json arr = json::array();
      for (const auto& p : c.points) arr.push_back({p.x, p.y});
      return arr;
    };
    summary["roc_curve"] = points(roc);
    summary["pr_curve"] = points(pr);
  } else {
    err << "warning: no probability columns (p0..); AUC/AP not computed\n";
  }

  std::ostringstream csv;
  metrics::write_report_csv(report, csv);
  make_dir(out_dir);
  write_file(join_path(out_dir, "metrics.csv"), csv.str());
  write_file(join_path(out_dir, "metrics.json"), dump(summary));

  out << "accuracy=" << fixed(report.accuracy);
  if (summary.contains("roc_auc_micro")) {
    out << " roc_auc_micro=" << fixed(summary["roc_auc_micro"].get<double>())
        << " average_precision_micro="
        << fixed(summary["average_precision_micro"].get<double>());
  }
  out << "\n" << csv.str();
  return 0;
}

// ---------------------------------------------------------------------------
// repro-examples

namespace {

// exp / sum(exp) in extended precision without max-subtraction.
std::vector<double> direct_softmax(std::span<const double> logits, long double temperature) {
  std::vector<long double> e;
  long double sum = 0.0L;
  for (double z : logits) {
    e.push_back(std::exp(static_cast<long double>(z) / temperature));
    sum += e.back();
  }
  std::vector<double> out;
  for (long double v : e) out.push_back(static_cast<double>(v / sum));
  return out;
}

struct Check {
  std::string name;
  std::vector<double> computed;
  std::vector<double> expected;
  double tolerance;
};

double max_deviation(const Check& c) {
  if (c.computed.size() != c.expected.size()) return std::numeric_limits<double>::infinity();
  double dev = 0.0;
  for (std::size_t i = 0; i < c.computed.size(); ++i) {
    dev = std::max(dev, std::abs(c.computed[i] - c.expected[i]));
  }
  return dev;
}

}  // namespace

int cmd_repro_examples(bool tamper, const std::string& out_dir, std::ostream& out) {
  std::vector<Check> checks;

  const selection::PheromoneState example{{2.0, 1.0, 4.0}, {3.0, 5.0, 2.0}};
  checks.push_back({"aco.selection_probabilities",
                    selection::selection_probabilities(example, 1.0, 2.0),
                    {0.305, 0.424, 0.271},
                    1e-3});

  const std::vector<selection::Deposit> deposits{{1, 0.8}, {0, 0.9}, {1, 0.7}};
  const auto updated = selection::update_pheromones(example, deposits, 0.1);
  checks.push_back({"aco.pheromone_update",
                    updated.pheromone,
                    {tamper ? 2.8 : 2.7, 2.4, 3.6},
                    1e-9});

  std::vector<std::optional<double>> tie_scores(example.heuristic.begin(), example.heuristic.end());
  const auto [teacher, student] = selection::extract_teacher_student(updated.pheromone, tie_scores);
  // 1-based model numbers
  checks.push_back({"aco.teacher_student_models",
                    {static_cast<double>(teacher + 1), static_cast<double>(student + 1)},
                    {3.0, 1.0},
                    0.0});

  temperature::ContextFeatures ctx;
  ctx.uncertainty = 0.3;
  const double tau =
      temperature::apply_policy(temperature::UncertaintyLinearPolicy{2.0}, ctx, 0.5).temperature;
  checks.push_back({"temperature.uncertainty_linear", {tau}, {1.6}, 0.0});

  const std::vector<double> logits{2.0, 0.5, -1.0};
  const auto soft2 = numerics::stable_softmax(logits, 2.0);
  const auto soft16 = numerics::stable_softmax(logits, tau);
  checks.push_back({"softmax.T2.vs_printed", soft2, {0.61, 0.27, 0.12}, 0.03});
  checks.push_back({"softmax.T2.vs_oracle", soft2, direct_softmax(logits, 2.0L), 1e-4});
  checks.push_back({"softmax.T1.6.vs_printed", soft16, {0.65, 0.23, 0.12}, 0.03});
  checks.push_back({"softmax.T1.6.vs_oracle", soft16, direct_softmax(logits, 1.6L), 1e-4});

  std::ostringstream text;
  bool all_pass = true;
  char line[512];
  for (const auto& c : checks) {
    const double dev = max_deviation(c);
    const bool pass = dev <= c.tolerance;
    all_pass = all_pass && pass;
    std::snprintf(line, sizeof(line), "%-32s computed=%-34s expected=%-34s tol=%-6g dev=%.3e %s\n",
                  c.name.c_str(), fixed_list(c.computed).c_str(),
                  fixed_list(c.expected).c_str(), c.tolerance, dev, pass ? "PASS" : "FAIL");
    text << line;
  }
  text << (all_pass ? "all checks PASS\n" : "verification FAILED\n");
  out << text.str();
  if (!out_dir.empty()) {
    make_dir(out_dir);
    write_file(join_path(out_dir, "repro_examples.txt"), text.str());
  }
  return all_pass ? 0 : 1;
}

}  // namespace kdaco::cli
