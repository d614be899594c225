#include "kdaco/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kdaco/distill.hpp"
#include "kdaco/error.hpp"
#include "kdaco/text.hpp"
#include "kdaco/train.hpp"

namespace kdaco::selection {

std::string_view mode_name(SearchMode mode) noexcept {
  return mode == SearchMode::Pair ? "pair" : "single";
}

// ---------------------------------------------------------------------------
// Pool

CandidatePool::CandidatePool(std::vector<Candidate> candidates,
                             std::shared_ptr<const tinynet::SyntheticDataset> data,
                             std::uint64_t seed)
    : candidates_(std::move(candidates)), data_(std::move(data)), seed_(seed) {
  for (const auto& c : candidates_) {
    if (c.stub_score.has_value() == c.profile.has_value()) {
      throw Error(Errc::InvalidConfig,
                  "candidate '" + c.name + "' needs exactly one of stub_score / profile");
    }
    if (c.stub_score && !(*c.stub_score >= 0.0 && *c.stub_score <= 1.0)) {
      throw Error(Errc::InvalidConfig, "stub_score of '" + c.name + "' outside [0,1]");
    }
    if (c.heuristic && !(*c.heuristic >= 0.0) ) {
      throw Error(Errc::InvalidConfig, "heuristic of '" + c.name + "' is negative");
    }
    if (c.profile && !data_) {
      throw Error(Errc::InvalidConfig, "MLP candidate '" + c.name + "' needs a dataset");
    }
    if (c.profile && (c.profile->epochs == 0 || !(c.profile->learning_rate > 0.0))) {
      throw Error(Errc::InvalidConfig, "MLP candidate '" + c.name + "' needs epochs and lr > 0");
    }
  }
}

CandidatePool CandidatePool::from_stub_scores(std::span<const double> scores) {
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    Candidate c;
    c.name = "stub" + std::to_string(i);
    c.stub_score = scores[i];
    candidates.push_back(std::move(c));
  }
  return CandidatePool(std::move(candidates));
}

namespace {

std::vector<std::size_t> mlp_dims(const tinynet::SyntheticDataset& data,
                                  const MlpProfile& profile) {
  std::vector<std::size_t> dims{data.dim};
  dims.insert(dims.end(), profile.hidden.begin(), profile.hidden.end());
  dims.push_back(data.n_classes);
  return dims;
}

// Train split reduced to a stratified 10 % (at least one per class); val
// split kept whole.
tinynet::SyntheticDataset proxy_subset(const tinynet::SyntheticDataset& data,
                                       std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < data.n_classes; ++k) {
    std::vector<std::size_t> members;
    for (std::size_t i : data.indices(tinynet::Split::Train)) {
      if (data.labels[i] == k) members.push_back(i);
    }
    rng.shuffle(members);
    const auto take = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(0.1 * static_cast<double>(members.size()))));
    keep.insert(keep.end(), members.begin(),
                members.begin() + static_cast<std::ptrdiff_t>(std::min(take, members.size())));
  }
  for (std::size_t i : data.indices(tinynet::Split::Val)) keep.push_back(i);
  std::sort(keep.begin(), keep.end());

  tinynet::SyntheticDataset out;
  out.n_classes = data.n_classes;
  out.dim = data.dim;
  out.class_complexity = data.class_complexity;
  for (std::size_t i : keep) {
    const auto row = data.row(i);
    out.features.insert(out.features.end(), row.begin(), row.end());
    out.labels.push_back(data.labels[i]);
    out.noise_level.push_back(data.noise_level[i]);
    out.split.push_back(data.split[i]);
  }
  return out;
}

}  // namespace

double CandidatePool::evaluate(std::size_t id, Fidelity fidelity) const {
  const Candidate& c = candidates_.at(id);
  if (c.stub_score) return *c.stub_score;

  const auto& profile = *c.profile;
  const Rng stream = Rng(seed_).split(id);
  auto model = tinynet::make_mlp(mlp_dims(*data_, profile), stream.split(1).next_u64());
  tinynet::TrainConfig cfg;
  cfg.learning_rate = profile.learning_rate;
  cfg.epochs = profile.epochs;
  cfg.seed = stream.split(2).next_u64();
  if (fidelity == Fidelity::Proxy) {
    cfg.epochs = std::min<std::size_t>(3, profile.epochs);
    const auto subset = proxy_subset(*data_, stream.split(3).next_u64());
    const auto trained = tinynet::train_supervised(std::move(model), subset, cfg);
    return tinynet::accuracy(trained.model, subset, tinynet::Split::Val);
  }
  const auto trained = tinynet::train_supervised(std::move(model), *data_, cfg);
  return tinynet::accuracy(trained.model, *data_, tinynet::Split::Val);
}

double CandidatePool::evaluate_pair(std::size_t teacher, std::size_t student) const {
  const Candidate& t = candidates_.at(teacher);
  const Candidate& s = candidates_.at(student);
  if (t.stub_score || s.stub_score) {
    return 0.5 * (evaluate(teacher, Fidelity::Full) + evaluate(student, Fidelity::Full));
  }
  const Rng t_stream = Rng(seed_).split(teacher);
  auto teacher_model =
      tinynet::make_mlp(mlp_dims(*data_, *t.profile), t_stream.split(1).next_u64());
  tinynet::TrainConfig t_cfg;
  t_cfg.learning_rate = t.profile->learning_rate;
  t_cfg.epochs = t.profile->epochs;
  t_cfg.seed = t_stream.split(2).next_u64();
  const auto trained_teacher = tinynet::train_supervised(std::move(teacher_model), *data_, t_cfg);

  const Rng s_stream = Rng(seed_).split(student).split(4);
  auto student_model =
      tinynet::make_mlp(mlp_dims(*data_, *s.profile), s_stream.split(1).next_u64());
  distill::KdConfig kd;
  kd.policy = temperature::ConstantPolicy{2.0};
  kd.t_base = 0.5;
  kd.train.learning_rate = s.profile->learning_rate;
  kd.train.epochs = s.profile->epochs;
  kd.train.seed = s_stream.split(2).next_u64();
  const auto result = distill::distill_train(trained_teacher.model, std::move(student_model),
                                             *data_, kd);
  return result.report.final_val_accuracy;
}

std::size_t key_count(std::size_t pool_size, SearchMode mode) {
  return mode == SearchMode::Single ? pool_size : pool_size * (pool_size - 1);
}

std::pair<std::size_t, std::size_t> pair_from_key(std::size_t key, std::size_t pool_size) {
  const std::size_t t = key / (pool_size - 1);
  const std::size_t r = key % (pool_size - 1);
  return {t, r < t ? r : r + 1};
}

std::size_t key_from_pair(std::size_t teacher, std::size_t student, std::size_t pool_size) {
  if (teacher == student) throw Error(Errc::IndexOutOfRange, "teacher == student");
  return teacher * (pool_size - 1) + (student < teacher ? student : student - 1);
}

// ---------------------------------------------------------------------------
// Cache

EvaluationCache::EvaluationCache(const CandidatePool& pool, SearchMode mode)
    : pool_(pool),
      mode_(mode),
      scores_(key_count(pool.size(), mode)),
      proxy_scores_(pool.size()) {}

double EvaluationCache::score(std::size_t key) {
  auto& slot = scores_.at(key);
  if (!slot) {
    if (mode_ == SearchMode::Single) {
      slot = pool_.evaluate(key, Fidelity::Full);
    } else {
      const auto [t, s] = pair_from_key(key, pool_.size());
      slot = pool_.evaluate_pair(t, s);
    }
    ++unique_;
  }
  return *slot;
}

double EvaluationCache::proxy(std::size_t id) {
  auto& slot = proxy_scores_.at(id);
  if (!slot) {
    slot = pool_.evaluate(id, Fidelity::Proxy);
    ++proxies_;
  }
  return *slot;
}

// ---------------------------------------------------------------------------
// Pheromone kernels

void validate(const PheromoneState& state) {
  if (state.pheromone.size() != state.heuristic.size() || state.pheromone.empty()) {
    throw Error(Errc::InvalidShape, "pheromone and heuristic sizes differ");
  }
  for (double p : state.pheromone) {
    if (!(p > 0.0) || !std::isfinite(p)) throw Error(Errc::InvalidShape, "pheromone must be > 0");
  }
  for (double h : state.heuristic) {
    if (!(h >= 0.0) || !std::isfinite(h)) throw Error(Errc::InvalidShape, "heuristic must be >= 0");
  }
}

std::vector<double> selection_weights(const PheromoneState& state, double alpha,
                                      double beta) {
  validate(state);
  std::vector<double> w(state.pheromone.size());
  for (std::size_t m = 0; m < w.size(); ++m) {
    w[m] = std::pow(state.pheromone[m], alpha) * std::pow(state.heuristic[m], beta);
  }
  return w;
}

std::vector<double> selection_probabilities(const PheromoneState& state,
                                            double alpha, double beta) {
  auto w = selection_weights(state, alpha, beta);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) throw Error(Errc::AllZeroWeights, "every candidate has zero weight");
  for (double& v : w) v /= total;
  return w;
}

void validate(const AcoConfig& config) {
  if (!(config.alpha >= 0.0) || !(config.beta >= 0.0)) {
    throw Error(Errc::InvalidConfig, "alpha and beta must be >= 0");
  }
  if (!(config.rho >= 0.0 && config.rho < 1.0)) throw Error(Errc::InvalidRho, "rho must be in [0,1)");
  if (!(config.q0 >= 0.0 && config.q0 <= 1.0)) throw Error(Errc::InvalidConfig, "q0 must be in [0,1]");
  if (config.n_ants == 0) throw Error(Errc::InvalidConfig, "n_ants must be >= 1");
}

std::size_t ant_select(const PheromoneState& state, const AcoConfig& config, Rng& rng) {
  const auto w = selection_weights(state, config.alpha, config.beta);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) throw Error(Errc::AllZeroWeights, "every candidate has zero weight");
  if (config.q0 > 0.0 && rng.uniform() < config.q0) {
    return static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
  }
  const double target = rng.uniform() * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t m = 0; m < w.size(); ++m) {
    if (w[m] <= 0.0) continue;
    last_positive = m;
    cumulative += w[m];
    if (target < cumulative) return m;
  }
  return last_positive;  // rounding at the top of the wheel
}

PheromoneState update_pheromones(const PheromoneState& state,
                                 std::span<const Deposit> deposits, double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(Errc::InvalidRho, "rho must be in [0,1)");
  PheromoneState next = state;
  for (double& p : next.pheromone) p *= (1.0 - rho);
  for (const auto& d : deposits) {
    if (d.key >= next.pheromone.size()) throw Error(Errc::IndexOutOfRange, "deposit key");
    if (!(d.performance >= 0.0 && d.performance <= 1.0)) {
      throw Error(Errc::InvalidConfig, "performance outside [0,1]");
    }
    next.pheromone[d.key] += d.performance;
  }
  return next;
}

// ---------------------------------------------------------------------------
// Strategies

namespace {

void require_pool(const CandidatePool& pool) {
  if (pool.size() < 2) throw Error(Errc::PoolTooSmall, "need at least 2 candidates");
}

std::string key_name(const CandidatePool& pool, SearchMode mode, std::size_t key) {
  if (mode == SearchMode::Single) return pool[key].name;
  const auto [t, s] = pair_from_key(key, pool.size());
  return pool[t].name + "->" + pool[s].name;
}

// Top two full scores (descending, lower index on ties) in single mode; the
// best pair's members in pair mode.
void fill_roles_from_scores(SelectionReport& report) {
  if (report.mode == SearchMode::Pair) {
    const auto [t, s] = pair_from_key(report.best_key, report.pool_size);
    report.teacher_id = t;
    report.student_id = s;
    return;
  }
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < report.scores.size(); ++i) {
    if (report.scores[i]) ids.push_back(i);
  }
  std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
    return *report.scores[a] > *report.scores[b];
  });
  if (!ids.empty()) report.teacher_id = ids[0];
  if (ids.size() > 1) report.student_id = ids[1];
}

SelectionReport start_report(const CandidatePool& pool, std::string strategy,
                             SearchMode mode, std::uint64_t seed) {
  SelectionReport report;
  report.strategy = std::move(strategy);
  report.mode = mode;
  report.seed = seed;
  report.pool_size = pool.size();
  report.best_score = -std::numeric_limits<double>::infinity();
  return report;
}

void finish_report(SelectionReport& report, const CandidatePool& pool,
                   const EvaluationCache& cache) {
  report.scores = cache.scores();
  report.unique_evaluations = cache.unique_evaluations();
  report.proxy_evaluations = cache.proxy_evaluations();
  report.best_name = key_name(pool, report.mode, report.best_key);
}

}  // namespace

SelectionReport run_aco(const CandidatePool& pool, const AcoConfig& config) {
  require_pool(pool);
  validate(config);
  if (config.n_iterations == 0) {
    throw Error(Errc::EmptyRun, "n_iterations = 0 leaves the best candidate undefined");
  }
  const std::size_t m = pool.size();
  const std::size_t keys = key_count(m, config.mode);

  EvaluationCache cache(pool, config.mode);
  std::vector<double> candidate_h(m);
  for (std::size_t i = 0; i < m; ++i) {
    candidate_h[i] = pool[i].heuristic ? *pool[i].heuristic : cache.proxy(i);
  }

  PheromoneState state;
  state.heuristic.resize(keys);
  if (config.mode == SearchMode::Single) {
    state.heuristic = candidate_h;
  } else {
    for (std::size_t k = 0; k < keys; ++k) {
      const auto [t, s] = pair_from_key(k, m);
      state.heuristic[k] = 0.5 * (candidate_h[t] + candidate_h[s]);
    }
  }
  if (config.initial_pheromone.empty()) {
    state.pheromone.assign(keys, 1.0);
  } else if (config.initial_pheromone.size() == keys) {
    state.pheromone = config.initial_pheromone;
  } else {
    throw Error(Errc::InvalidConfig, "initial_pheromone needs " + std::to_string(keys) + " values");
  }
  validate(state);

  SelectionReport report = start_report(pool, "aco", config.mode, config.seed);
  report.heuristic = state.heuristic;
  Rng rng(config.seed);

  std::vector<Deposit> deposits;
  for (std::size_t iter = 0; iter < config.n_iterations; ++iter) {
    IterationLog log;
    log.probabilities = selection_probabilities(state, config.alpha, config.beta);
    deposits.clear();
    for (std::size_t ant = 0; ant < config.n_ants; ++ant) {
      const std::size_t key = ant_select(state, config, rng);
      const double performance = cache.score(key);
      deposits.push_back({key, performance});
      log.chosen.push_back(key);
      log.performance.push_back(performance);
      ++report.total_selections;
    }
    for (const auto& d : deposits) {
      if (d.performance > report.best_score) {
        report.best_score = d.performance;
        report.best_key = d.key;
      }
    }
    state = update_pheromones(state, deposits, config.rho);
    log.pheromone = state.pheromone;
    log.best_score = report.best_score;
    report.history.push_back(std::move(log));
  }

  report.final_pheromone = state.pheromone;
  finish_report(report, pool, cache);

  // Tie-break scores: full evaluation where available, else the heuristic.
  std::vector<std::optional<double>> known(keys);
  for (std::size_t k = 0; k < keys; ++k) {
    known[k] = report.scores[k] ? report.scores[k] : std::optional<double>(state.heuristic[k]);
  }
  const auto [first, second] = extract_teacher_student(report.final_pheromone, known);
  if (config.mode == SearchMode::Single) {
    report.teacher_id = first;
    report.student_id = second;
  } else {
    const auto [t, s] = pair_from_key(first, m);
    report.teacher_id = t;
    report.student_id = s;
  }
  return report;
}

std::pair<std::size_t, std::size_t> extract_teacher_student(
    std::span<const double> pheromone, std::span<const std::optional<double>> scores) {
  if (pheromone.size() != scores.size()) {
    throw Error(Errc::LengthMismatch, "pheromone and scores differ in length");
  }
  const auto scored = std::count_if(scores.begin(), scores.end(),
                                    [](const auto& s) { return s.has_value(); });
  if (pheromone.size() < 2 || scored < 2) {
    throw Error(Errc::InsufficientEvaluated, "need at least 2 evaluated candidates");
  }
  std::vector<std::size_t> order(pheromone.size());
  std::iota(order.begin(), order.end(), 0);
  const auto score_of = [&](std::size_t i) {
    return scores[i] ? *scores[i] : -std::numeric_limits<double>::infinity();
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pheromone[a] != pheromone[b]) return pheromone[a] > pheromone[b];
    if (score_of(a) != score_of(b)) return score_of(a) > score_of(b);
    return a < b;
  });
  return {order[0], order[1]};
}

std::pair<std::size_t, std::size_t> extract_teacher_student(const SelectionReport& report) {
  return extract_teacher_student(report.final_pheromone, report.scores);
}

SelectionReport run_random(const CandidatePool& pool, std::size_t n_picks,
                           std::uint64_t seed, SearchMode mode) {
  require_pool(pool);
  const std::size_t keys = key_count(pool.size(), mode);
  if (n_picks == 0 || n_picks > keys) {
    throw Error(Errc::InvalidConfig, "n_picks must be in [1, " + std::to_string(keys) + "]");
  }
  SelectionReport report = start_report(pool, "random", mode, seed);
  EvaluationCache cache(pool, mode);
  std::vector<std::size_t> order(keys);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  IterationLog log;
  for (std::size_t i = 0; i < n_picks; ++i) {
    const std::size_t key = order[i];
    const double s = cache.score(key);
    log.chosen.push_back(key);
    log.performance.push_back(s);
    ++report.total_selections;
    if (s > report.best_score || (s == report.best_score && key < report.best_key)) {
      report.best_score = s;
      report.best_key = key;
    }
  }
  log.best_score = report.best_score;
  report.history.push_back(std::move(log));
  finish_report(report, pool, cache);
  fill_roles_from_scores(report);
  return report;
}

SelectionReport run_grid(const CandidatePool& pool, SearchMode mode) {
  if (pool.size() == 0) throw Error(Errc::PoolTooSmall, "empty pool");
  if (mode == SearchMode::Pair) require_pool(pool);
  const std::size_t keys = key_count(pool.size(), mode);
  SelectionReport report = start_report(pool, "grid", mode, 0);
  EvaluationCache cache(pool, mode);
  for (std::size_t key = 0; key < keys; ++key) {
    const double s = cache.score(key);
    ++report.total_selections;
    if (s > report.best_score) {
      report.best_score = s;
      report.best_key = key;
    }
  }
  finish_report(report, pool, cache);
  fill_roles_from_scores(report);
  return report;
}

SelectionReport run_pso(const CandidatePool& pool, const PsoConfig& config) {
  require_pool(pool);
  if (config.n_particles == 0) throw Error(Errc::InvalidConfig, "n_particles must be >= 1");
  const std::size_t m = pool.size();
  const double upper = static_cast<double>(m - 1);
  const double v_max = upper / 2.0;

  SelectionReport report = start_report(pool, "pso", SearchMode::Single, config.seed);
  EvaluationCache cache(pool, SearchMode::Single);
  Rng rng(config.seed);

  struct Particle {
    double x = 0.0, v = 0.0, best_x = 0.0, best_score = 0.0;
  };
  std::vector<Particle> swarm(config.n_particles);
  double global_x = 0.0;

  const auto index_of = [&](double x) {
    return static_cast<std::size_t>(std::lround(std::clamp(x, 0.0, upper)));
  };
  const auto visit = [&](Particle& p, IterationLog& log) {
    const std::size_t key = index_of(p.x);
    const double s = cache.score(key);
    log.chosen.push_back(key);
    log.performance.push_back(s);
    ++report.total_selections;
    if (s > p.best_score) {
      p.best_score = s;
      p.best_x = p.x;
    }
    if (s > report.best_score) {
      report.best_score = s;
      report.best_key = key;
      global_x = p.x;
    }
  };

  IterationLog init;
  for (auto& p : swarm) {
    p.x = rng.uniform(0.0, upper);
    p.v = rng.uniform(-upper / 4.0, upper / 4.0);
    p.best_score = -std::numeric_limits<double>::infinity();
    visit(p, init);
  }
  init.best_score = report.best_score;
  report.history.push_back(std::move(init));

  for (std::size_t iter = 0; iter < config.n_iterations; ++iter) {
    IterationLog log;
    for (auto& p : swarm) {
      const double r1 = rng.uniform();
      const double r2 = rng.uniform();
      p.v = config.inertia * p.v + config.c1 * r1 * (p.best_x - p.x) +
            config.c2 * r2 * (global_x - p.x);
      p.v = std::clamp(p.v, -v_max, v_max);
      p.x = std::clamp(p.x + p.v, 0.0, upper);
      visit(p, log);
    }
    log.best_score = report.best_score;
    report.history.push_back(std::move(log));
  }
  finish_report(report, pool, cache);
  fill_roles_from_scores(report);
  return report;
}

// ---------------------------------------------------------------------------
// Export

nlohmann::json to_json(const SelectionReport& report) {
  using nlohmann::json;
  const auto opt = [](const std::optional<std::size_t>& v) -> json {
    return v ? json(*v) : json(nullptr);
  };
  json j;
  j["strategy"] = report.strategy;
  j["mode"] = std::string(mode_name(report.mode));
  j["seed"] = report.seed;
  j["pool_size"] = report.pool_size;
  j["best"] = {{"key", report.best_key}, {"name", report.best_name}, {"score", report.best_score}};
  j["teacher_id"] = opt(report.teacher_id);
  j["student_id"] = opt(report.student_id);
  j["unique_evaluations"] = report.unique_evaluations;
  j["total_selections"] = report.total_selections;
  j["proxy_evaluations"] = report.proxy_evaluations;
  j["heuristic"] = report.heuristic;
  j["final_pheromone"] = report.final_pheromone;
  json scores = json::array();
  for (const auto& s : report.scores) scores.push_back(s ? json(*s) : json(nullptr));
  j["scores"] = std::move(scores);
  json history = json::array();
  for (const auto& it : report.history) {
    history.push_back({{"probabilities", it.probabilities},
                       {"chosen", it.chosen},
                       {"performance", it.performance},
                       {"pheromone", it.pheromone},
                       {"best_score", it.best_score}});
  }
  j["history"] = std::move(history);
  return j;
}

std::string csv_row(const SelectionReport& report) {
  return report.strategy + "," + std::to_string(report.seed) + "," +
         format_real(report.best_score) + "," +
         std::to_string(report.unique_evaluations) + "," +
         std::to_string(report.total_selections);
}

}  // namespace kdaco::selection
