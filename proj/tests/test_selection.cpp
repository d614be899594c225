#include <array>
#include <cmath>
#include <memory>
#include <set>
#include <vector>

#include "doctest.h"
#include "support.hpp"

#include "kdaco/dataset.hpp"
#include "kdaco/rng.hpp"
#include "kdaco/selection.hpp"

using namespace kdaco;
using namespace kdaco::selection;

namespace {

const PheromoneState kExample{{2.0, 1.0, 4.0}, {3.0, 5.0, 2.0}};

std::vector<double> sixteen_scores() {
  std::vector<double> s;
  for (int i = 0; i < 16; ++i) s.push_back(0.5 + 0.02 * i);
  s[11] = 0.95;
  return s;
}

}  // namespace

TEST_CASE("selection_probabilities") {
  const auto p = selection_probabilities(kExample, 1.0, 2.0);
  CHECK(p[0] == doctest::Approx(18.0 / 59.0).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(25.0 / 59.0).epsilon(1e-14));
  CHECK(p[2] == doctest::Approx(16.0 / 59.0).epsilon(1e-14));
  CHECK(std::abs(p[1] - 0.424) < 1e-3);

  for (double v : selection_probabilities(kExample, 0.0, 0.0)) CHECK(v == doctest::Approx(1.0 / 3));

  const auto q = selection_probabilities({{1.0, 1.0}, {1.0, 3.0}}, 1.0, 1.0);
  CHECK(q[0] == doctest::Approx(0.25));
  CHECK(q[1] == doctest::Approx(0.75));

  auto scaled = kExample;
  for (auto& v : scaled.pheromone) v *= 7.5;
  const auto ps = selection_probabilities(scaled, 1.0, 2.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(ps[i] == doctest::Approx(p[i]).epsilon(1e-14));

  CHECK(error_code([] { selection_probabilities({{1.0, 1.0}, {0.0, 0.0}}, 1.0, 1.0); }) ==
        Errc::AllZeroWeights);
}

TEST_CASE("ant_select") {
  AcoConfig cfg;
  cfg.q0 = 1.0;
  Rng rng(1);
  for (int i = 0; i < 100; ++i) CHECK(ant_select(kExample, cfg, rng) == 1);

  cfg.q0 = 0.0;
  std::array<double, 3> counts{};
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) counts[ant_select(kExample, cfg, rng)] += 1.0;
  CHECK(std::abs(counts[0] / draws - 0.305) < 0.01);
  CHECK(std::abs(counts[1] / draws - 0.424) < 0.01);
  CHECK(std::abs(counts[2] / draws - 0.271) < 0.01);

  const PheromoneState zero_mass{{1.0, 1.0}, {0.0, 5.0}};
  for (int i = 0; i < 100; ++i) CHECK(ant_select(zero_mass, cfg, rng) == 1);
}

TEST_CASE("update_pheromones") {
  const std::vector<Deposit> deposits{{1, 0.8}, {0, 0.9}, {1, 0.7}};
  const auto next = update_pheromones(kExample, deposits, 0.1);
  CHECK(std::abs(next.pheromone[0] - 2.7) < 1e-12);
  CHECK(std::abs(next.pheromone[1] - 2.4) < 1e-12);
  CHECK(std::abs(next.pheromone[2] - 3.6) < 1e-12);
  CHECK(next.heuristic == kExample.heuristic);

  CHECK(update_pheromones(kExample, {}, 0.0).pheromone == kExample.pheromone);
  CHECK(update_pheromones({{4.0}, {1.0}}, std::vector<Deposit>{{0, 1.0}}, 0.5).pheromone ==
        std::vector<double>{3.0});

  CHECK(error_code([] { update_pheromones(kExample, {}, 1.0); }) == Errc::InvalidRho);
  CHECK(error_code([] { update_pheromones(kExample, {}, -0.1); }) == Errc::InvalidRho);

  auto state = kExample;
  for (int i = 0; i < 5000; ++i) state = update_pheromones(state, {}, 0.1);
  for (double v : state.pheromone) CHECK(v > 0.0);
}

TEST_CASE("extract_teacher_student") {
  const std::vector<double> phi{2.7, 2.4, 3.6};
  const std::vector<std::optional<double>> scores{0.9, 0.8, 0.7};
  const auto [t, s] = extract_teacher_student(phi, scores);
  CHECK(t == 2);
  CHECK(s == 0);

  const auto two = extract_teacher_student(std::vector<double>{1.0, 3.0},
                                           std::vector<std::optional<double>>{0.1, 0.2});
  CHECK(two.first == 1);
  CHECK(two.second == 0);

  const auto tie = extract_teacher_student(std::vector<double>{2.0, 2.0},
                                           std::vector<std::optional<double>>{0.8, 0.9});
  CHECK(tie.first == 1);
  CHECK(tie.second == 0);

  const auto idx = extract_teacher_student(std::vector<double>{2.0, 2.0, 2.0},
                                           std::vector<std::optional<double>>{0.5, 0.5, 0.5});
  CHECK(idx.first == 0);
  CHECK(idx.second == 1);

  CHECK(error_code([] {
          extract_teacher_student(std::vector<double>{1.0, 2.0},
                                  std::vector<std::optional<double>>{0.5, std::nullopt});
        }) == Errc::InsufficientEvaluated);
}

TEST_CASE("pair keys") {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t k = 0; k < key_count(5, SearchMode::Pair); ++k) {
    const auto p = pair_from_key(k, 5);
    CHECK(p.first != p.second);
    CHECK(key_from_pair(p.first, p.second, 5) == k);
    seen.insert(p);
  }
  CHECK(seen.size() == 20);
  CHECK(key_count(16, SearchMode::Pair) == 240);
  CHECK(key_count(16, SearchMode::Single) == 16);
}

TEST_CASE("run_aco") {
  const auto pool = CandidatePool::from_stub_scores(std::vector<double>{0.1, 0.9, 0.2});
  AcoConfig cfg;
  cfg.n_iterations = 10;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    const auto r = run_aco(pool, cfg);
    CHECK(r.best_key == 1);
    CHECK(r.total_selections == 50);
    CHECK(r.unique_evaluations <= r.total_selections);
    CHECK(r.unique_evaluations <= 3);
    CHECK(r.history.size() == 10);
  }

  cfg.n_iterations = 0;
  CHECK(error_code([&] { run_aco(pool, cfg); }) == Errc::EmptyRun);
  cfg.n_iterations = 5;
  const auto single = CandidatePool::from_stub_scores(std::vector<double>{0.5});
  CHECK(error_code([&] { run_aco(single, cfg); }) == Errc::PoolTooSmall);
  cfg.rho = 1.0;
  CHECK(error_code([&] { run_aco(pool, cfg); }) == Errc::InvalidRho);

  const auto big = CandidatePool::from_stub_scores(sixteen_scores());
  AcoConfig def;
  def.seed = 3;
  const auto r = run_aco(big, def);
  CHECK(r.unique_evaluations <= 16);
  CHECK(r.total_selections == def.n_ants * def.n_iterations);
  CHECK(r.final_pheromone.size() == 16);
  CHECK(to_json(r) == to_json(run_aco(big, def)));
  CHECK(csv_row(r) == csv_row(run_aco(big, def)));

  def.mode = SearchMode::Pair;
  const auto pr = run_aco(big, def);
  CHECK(pr.unique_evaluations < 240);
  CHECK(pr.unique_evaluations <= pr.total_selections);
  CHECK(pr.teacher_id != pr.student_id);
}

TEST_CASE("worked example through run_aco") {
  std::vector<Candidate> cs;
  const std::array<double, 3> h{3, 5, 2};
  for (std::size_t i = 0; i < 3; ++i) {
    Candidate c;
    c.name = "m" + std::to_string(i);
    c.stub_score = 0.7 + 0.1 * static_cast<double>(i);
    c.heuristic = h[i];
    cs.push_back(c);
  }
  const CandidatePool pool(cs);
  AcoConfig cfg;
  cfg.n_iterations = 1;
  cfg.n_ants = 3;
  cfg.initial_pheromone = {2.0, 1.0, 4.0};
  const auto r = run_aco(pool, cfg);
  CHECK(r.history[0].probabilities[0] == doctest::Approx(18.0 / 59.0));
  CHECK(r.history[0].probabilities[1] == doctest::Approx(25.0 / 59.0));
  CHECK(r.proxy_evaluations == 0);
}

TEST_CASE("run_random") {
  const std::vector<double> scores{0.3, 0.8, 0.5, 0.6};
  const auto pool = CandidatePool::from_stub_scores(scores);
  const auto all = run_random(pool, 4, 1);
  CHECK(all.best_key == 1);
  CHECK(all.unique_evaluations == 4);
  const auto one = run_random(pool, 1, 2);
  CHECK(one.unique_evaluations == 1);
  CHECK(one.total_selections == 1);
  CHECK(to_json(one) == to_json(run_random(pool, 1, 2)));
  CHECK(error_code([&] { run_random(pool, 0, 1); }) == Errc::InvalidConfig);
}

TEST_CASE("run_grid") {
  const auto pool = CandidatePool::from_stub_scores(std::vector<double>{0.3, 0.7});
  CHECK(run_grid(pool).best_key == 1);
  const auto big = CandidatePool::from_stub_scores(sixteen_scores());
  const auto pairs = run_grid(big, SearchMode::Pair);
  CHECK(pairs.unique_evaluations == 240);
  CHECK(pairs.total_selections == 240);
  CHECK(run_grid(big).unique_evaluations == 16);

  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> s(2 + rng.below(10));
    for (auto& v : s) v = rng.uniform();
    const auto p = CandidatePool::from_stub_scores(s);
    AcoConfig cfg;
    cfg.seed = trial;
    CHECK(run_grid(p).best_score >= run_aco(p, cfg).best_score);
  }
}

TEST_CASE("run_pso") {
  const auto pool = CandidatePool::from_stub_scores(std::vector<double>{0.1, 0.9, 0.2});
  PsoConfig tiny;
  tiny.n_particles = 1;
  tiny.n_iterations = 1;
  CHECK(run_pso(pool, tiny).unique_evaluations <= 2);

  int found = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PsoConfig cfg;
    cfg.seed = seed;
    const auto r = run_pso(pool, cfg);
    found += r.best_key == 1;
    CHECK(r.total_selections == 8 * 31);
  }
  CHECK(found >= 18);

  PsoConfig frozen;
  frozen.inertia = 0.0;
  frozen.c1 = 0.0;
  frozen.c2 = 0.0;
  frozen.seed = 5;
  const auto big = CandidatePool::from_stub_scores(sixteen_scores());
  const auto r = run_pso(big, frozen);
  double initial_best = 0.0;
  for (std::size_t id : r.history.front().chosen) initial_best = std::max(initial_best, sixteen_scores()[id]);
  CHECK(r.best_score == initial_best);
  for (const auto& log : r.history) CHECK(log.chosen == r.history.front().chosen);
  CHECK(to_json(run_pso(big, frozen)) == to_json(r));
}

TEST_CASE("MLP candidate pool") {
  tinynet::SyntheticSpec spec;
  spec.n_samples = 300;
  spec.seed = 2;
  auto data = std::make_shared<const tinynet::SyntheticDataset>(tinynet::generate_synthetic(spec));
  std::vector<Candidate> cs;
  for (std::size_t h : {4u, 16u, 32u}) {
    Candidate c;
    c.name = "mlp" + std::to_string(h);
    c.profile = MlpProfile{{h}, 0.05, 5};
    cs.push_back(c);
  }
  const CandidatePool pool(cs, data, 3);
  const double full = pool.evaluate(1, Fidelity::Full);
  CHECK(full == pool.evaluate(1, Fidelity::Full));
  CHECK(full >= 0.0);
  CHECK(full <= 1.0);
  const double pair = pool.evaluate_pair(2, 0);
  CHECK(pair == pool.evaluate_pair(2, 0));

  AcoConfig cfg;
  cfg.n_ants = 2;
  cfg.n_iterations = 3;
  const auto r = run_aco(pool, cfg);
  CHECK(r.proxy_evaluations == 3);
  CHECK(r.unique_evaluations <= 3);

  CHECK(error_code([&] { CandidatePool bad(cs); }) == Errc::InvalidConfig);
}
