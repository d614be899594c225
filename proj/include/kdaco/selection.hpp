#pragma once

// Teacher/student model selection over a candidate pool: ant colony search
// plus random, exhaustive grid and particle swarm baselines, all reporting
// evaluation counts.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "kdaco/dataset.hpp"
#include "kdaco/rng.hpp"

namespace kdaco::selection {

struct MlpProfile {
  std::vector<std::size_t> hidden;
  double learning_rate = 0.05;
  std::size_t epochs = 10;
};

struct Candidate {
  std::string name;
  // Exactly one of stub_score / profile is set.
  std::optional<double> stub_score;
  std::optional<MlpProfile> profile;
  // Replaces the proxy-derived heuristic when set.
  std::optional<double> heuristic;
};

enum class Fidelity { Proxy, Full };

// Single: ants pick one model, keys are candidate ids.
// Pair: ants pick an ordered (teacher, student) pair, keys index the
// M * (M - 1) pairs in row-major order with the diagonal removed.
enum class SearchMode { Single, Pair };

std::string_view mode_name(SearchMode mode) noexcept;

// Immutable pool. Stub candidates score their fixed value at every fidelity
// and a stub pair scores the mean of its two members. MLP candidates train on
// the pool's dataset: the full evaluation uses the whole train split, the
// proxy a stratified 10 % subsample for at most 3 epochs; both report
// validation accuracy. An MLP pair distils the student from the teacher with
// a constant temperature of 2 and weight 0.5 and reports the student's
// validation accuracy.
class CandidatePool {
 public:
  explicit CandidatePool(std::vector<Candidate> candidates,
                         std::shared_ptr<const tinynet::SyntheticDataset> data = nullptr,
                         std::uint64_t seed = 0);

  static CandidatePool from_stub_scores(std::span<const double> scores);

  std::size_t size() const { return candidates_.size(); }
  const Candidate& operator[](std::size_t id) const { return candidates_.at(id); }

  // Deterministic given the pool seed; not cached.
  double evaluate(std::size_t id, Fidelity fidelity) const;
  double evaluate_pair(std::size_t teacher, std::size_t student) const;

 private:
  std::vector<Candidate> candidates_;
  std::shared_ptr<const tinynet::SyntheticDataset> data_;
  std::uint64_t seed_;
};

std::size_t key_count(std::size_t pool_size, SearchMode mode);
std::pair<std::size_t, std::size_t> pair_from_key(std::size_t key, std::size_t pool_size);
std::size_t key_from_pair(std::size_t teacher, std::size_t student, std::size_t pool_size);

// One strategy run's view of the pool: caches every score and counts how many
// distinct keys were evaluated at full fidelity and how many proxy runs were
// spent on heuristics.
class EvaluationCache {
 public:
  EvaluationCache(const CandidatePool& pool, SearchMode mode);

  double score(std::size_t key);
  double proxy(std::size_t id);

  const std::vector<std::optional<double>>& scores() const { return scores_; }
  std::size_t unique_evaluations() const { return unique_; }
  std::size_t proxy_evaluations() const { return proxies_; }

 private:
  const CandidatePool& pool_;
  SearchMode mode_;
  std::vector<std::optional<double>> scores_;
  std::vector<std::optional<double>> proxy_scores_;
  std::size_t unique_ = 0;
  std::size_t proxies_ = 0;
};

struct PheromoneState {
  std::vector<double> pheromone;
  std::vector<double> heuristic;
};

// Throws InvalidShape on size mismatch or a non-positive pheromone / negative
// heuristic.
void validate(const PheromoneState& state);

// pheromone^alpha * heuristic^beta, elementwise.
std::vector<double> selection_weights(const PheromoneState& state, double alpha,
                                      double beta);

// Normalized selection_weights; throws AllZeroWeights.
std::vector<double> selection_probabilities(const PheromoneState& state,
                                            double alpha, double beta);

struct AcoConfig {
  double alpha = 1.0;
  double beta = 2.0;
  double rho = 0.1;
  double q0 = 0.0;
  std::size_t n_ants = 5;
  std::size_t n_iterations = 15;
  std::uint64_t seed = 0;
  SearchMode mode = SearchMode::Single;
  // Empty means all ones.
  std::vector<double> initial_pheromone;
};

void validate(const AcoConfig& config);

// Pseudo-random-proportional rule: with probability q0 take the heaviest key
// (lowest index on ties), otherwise roulette-wheel sample. With q0 = 0 no
// exploitation draw is made.
std::size_t ant_select(const PheromoneState& state, const AcoConfig& config, Rng& rng);

struct Deposit {
  std::size_t key = 0;
  double performance = 0.0;
};

// pheromone <- (1 - rho) * pheromone + sum of deposits on each key.
PheromoneState update_pheromones(const PheromoneState& state,
                                 std::span<const Deposit> deposits, double rho);

struct IterationLog {
  std::vector<double> probabilities;  // empty for strategies without them
  std::vector<std::size_t> chosen;
  std::vector<double> performance;
  std::vector<double> pheromone;  // after the update
  double best_score = 0.0;
};

struct SelectionReport {
  std::string strategy;
  SearchMode mode = SearchMode::Single;
  std::uint64_t seed = 0;
  std::size_t pool_size = 0;
  std::size_t best_key = 0;
  std::string best_name;
  double best_score = 0.0;
  std::optional<std::size_t> teacher_id;
  std::optional<std::size_t> student_id;
  std::size_t unique_evaluations = 0;
  std::size_t total_selections = 0;
  std::size_t proxy_evaluations = 0;
  std::vector<double> heuristic;
  std::vector<double> final_pheromone;  // ACO only
  std::vector<std::optional<double>> scores;  // per key, full fidelity
  std::vector<IterationLog> history;
};

SelectionReport run_aco(const CandidatePool& pool, const AcoConfig& config);

// Teacher = highest pheromone, student = second highest; ties go to the
// higher score, then the lower index. Needs at least two scored entries.
std::pair<std::size_t, std::size_t> extract_teacher_student(
    std::span<const double> pheromone, std::span<const std::optional<double>> scores);
std::pair<std::size_t, std::size_t> extract_teacher_student(const SelectionReport& report);

SelectionReport run_random(const CandidatePool& pool, std::size_t n_picks,
                           std::uint64_t seed, SearchMode mode = SearchMode::Single);

SelectionReport run_grid(const CandidatePool& pool, SearchMode mode = SearchMode::Single);

struct PsoConfig {
  std::size_t n_particles = 8;
  std::size_t n_iterations = 30;
  double inertia = 0.7;
  double c1 = 1.5;
  double c2 = 1.5;
  std::uint64_t seed = 0;
};

// Particles move over the continuous interval [0, M - 1]; a position is
// evaluated at its rounded index. Initial positions count as evaluations, so
// total_selections = n_particles * (n_iterations + 1).
SelectionReport run_pso(const CandidatePool& pool, const PsoConfig& config);

nlohmann::json to_json(const SelectionReport& report);

inline constexpr std::string_view kCsvHeader =
    "strategy,seed,best_score,unique_evaluations,total_selections";
std::string csv_row(const SelectionReport& report);

}  // namespace kdaco::selection
