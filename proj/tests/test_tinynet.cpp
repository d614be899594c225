#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "kdaco/dataset.hpp"
#include "kdaco/mlp.hpp"
#include "kdaco/numerics.hpp"
#include "kdaco/rng.hpp"
#include "kdaco/train.hpp"

using namespace kdaco;
using namespace kdaco::tinynet;

namespace {

oracle::Net to_oracle(const MlpModel& m) {
  oracle::Net net;
  for (const auto& layer : m.layers) {
    std::vector<std::vector<double>> w(layer.out, std::vector<double>(layer.in));
    for (std::size_t o = 0; o < layer.out; ++o) {
      for (std::size_t i = 0; i < layer.in; ++i) w[o][i] = layer.weights[o * layer.in + i];
    }
    net.w.push_back(w);
    net.b.push_back(layer.bias);
  }
  return net;
}

std::vector<double> random_vector(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

// Mean cross-entropy of a batch, evaluated through forward() only.
double batch_loss(const MlpModel& m, const std::vector<std::vector<double>>& xs,
                  const std::vector<std::size_t>& ys) {
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s += cross_entropy_loss(forward(m, xs[i]), ys[i]).loss;
  }
  return s / static_cast<double>(xs.size());
}

std::vector<std::span<const double>> spans(const std::vector<std::vector<double>>& xs) {
  return {xs.begin(), xs.end()};
}

double grad_at(const MlpGradients& g, std::size_t index) {
  for (const auto& layer : g.layers) {
    if (index < layer.weights.size()) return layer.weights[index];
    index -= layer.weights.size();
    if (index < layer.bias.size()) return layer.bias[index];
    index -= layer.bias.size();
  }
  FAIL("parameter index out of range");
  return 0.0;
}

SyntheticDataset separable(std::uint64_t seed, std::size_t n = 300, std::size_t c = 3) {
  SyntheticSpec spec;
  spec.n_samples = n;
  spec.n_classes = c;
  spec.seed = seed;
  return generate_synthetic(spec);
}

std::string to_csv(const SyntheticDataset& d) {
  std::ostringstream out;
  write_csv(d, out);
  return out.str();
}

std::vector<double> class_mean(const SyntheticDataset& d, std::size_t k) {
  std::vector<double> m(d.dim, 0.0);
  double n = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.labels[i] != k) continue;
    n += 1.0;
    for (std::size_t j = 0; j < d.dim; ++j) m[j] += d.row(i)[j];
  }
  for (auto& v : m) v /= n;
  return m;
}

double mean_center_distance(const SyntheticDataset& d) {
  double s = 0.0, pairs = 0.0;
  for (std::size_t a = 0; a < d.n_classes; ++a) {
    for (std::size_t b = a + 1; b < d.n_classes; ++b) {
      const auto ma = class_mean(d, a), mb = class_mean(d, b);
      double dist = 0.0;
      for (std::size_t j = 0; j < d.dim; ++j) dist += (ma[j] - mb[j]) * (ma[j] - mb[j]);
      s += std::sqrt(dist);
      pairs += 1.0;
    }
  }
  return s / pairs;
}

}  // namespace

TEST_CASE("forward") {
  const auto zero = make_zero_mlp({4, 5, 3});
  const std::vector<double> x{1.0, -2.0, 0.5, 3.0};
  const auto logits = forward(zero, x);
  CHECK(logits == std::vector<double>{0.0, 0.0, 0.0});
  for (double p : numerics::stable_softmax(logits)) CHECK(p == doctest::Approx(1.0 / 3.0));

  auto identity = make_zero_mlp({3, 3});
  for (std::size_t k = 0; k < 3; ++k) identity.layers[0].weights[k * 3 + k] = 1.0;
  const std::vector<double> y{0.25, -7.0, 4.5};
  CHECK(forward(identity, y) == y);

  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = make_mlp({6, 9, 7, 4}, 100 + trial);
    const auto in = random_vector(rng, 6, 3.0);
    const auto got = forward(m, in);
    const auto want = oracle::forward(to_oracle(m), in);
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-9);
  }
  CHECK(error_code([&] { forward(zero, std::vector<double>{1.0}); }) == Errc::ShapeMismatch);
}

TEST_CASE("init bounds and determinism") {
  const auto a = make_mlp({8, 16, 3}, 4);
  CHECK(a == make_mlp({8, 16, 3}, 4));
  CHECK_FALSE(a == make_mlp({8, 16, 3}, 5));
  const double s0 = std::sqrt(6.0 / 24.0), s1 = std::sqrt(6.0 / 19.0);
  for (double w : a.layers[0].weights) CHECK(std::abs(w) <= s0);
  for (double w : a.layers[1].weights) CHECK(std::abs(w) <= s1);
  CHECK(parameter_count(a) == 8 * 16 + 16 + 16 * 3 + 3);
}

TEST_CASE("loss_gradients") {
  const auto m = make_mlp({5, 7, 6, 3}, 9);
  Rng rng(10);
  const std::vector<std::vector<double>> xs{random_vector(rng, 5), random_vector(rng, 5)};
  const LogitLoss constant = [](std::span<const double> z, std::size_t) {
    return LossEval{1.5, std::vector<double>(z.size(), 0.0)};
  };
  const auto g0 = loss_gradients(m, spans(xs), constant);
  CHECK(g0.mean_loss == 1.5);
  for (std::size_t i = 0; i < parameter_count(m); ++i) CHECK(grad_at(g0, i) == 0.0);

  const LogitLoss ce = [](std::span<const double> z, std::size_t) {
    return cross_entropy_loss(z, 1);
  };
  const std::vector<std::vector<double>> one{xs[0]};
  const std::vector<std::vector<double>> many(5, xs[0]);
  const auto g1 = loss_gradients(m, spans(one), ce);
  const auto g5 = loss_gradients(m, spans(many), ce);
  for (std::size_t i = 0; i < parameter_count(m); ++i) {
    CHECK(grad_at(g5, i) == doctest::Approx(grad_at(g1, i)).epsilon(1e-12));
  }

  const LogitLoss nan_loss = [](std::span<const double> z, std::size_t) {
    return LossEval{std::nan(""), std::vector<double>(z.size(), 0.0)};
  };
  CHECK(error_code([&] { loss_gradients(m, spans(xs), nan_loss); }) == Errc::NonFiniteLoss);
  const std::vector<std::vector<double>> wrong{{1.0, 2.0}};
  CHECK(error_code([&] { loss_gradients(m, spans(wrong), ce); }) == Errc::ShapeMismatch);
  CHECK(error_code([&] { loss_gradients(m, {}, ce); }) == Errc::ShapeMismatch);
}

TEST_CASE("backprop matches central finite differences") {
  Rng rng(12);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + rng.below(5), h = 2 + rng.below(6), c = 2 + rng.below(4);
    auto m = make_mlp({d, h, h, c}, 500 + trial);
    for (auto& layer : m.layers) {
      for (auto& b : layer.bias) b = rng.uniform(-0.5, 0.5);
    }
    std::vector<std::vector<double>> xs;
    std::vector<std::size_t> ys;
    for (int i = 0; i < 4; ++i) {
      xs.push_back(random_vector(rng, d, 2.0));
      ys.push_back(rng.below(c));
    }
    const LogitLoss loss = [&](std::span<const double> z, std::size_t row) {
      return cross_entropy_loss(z, ys[row]);
    };
    const auto g = loss_gradients(m, spans(xs), loss);
    const std::size_t p = rng.below(parameter_count(m));
    const double h_step = 1e-5;
    const double saved = parameter_at(m, p);
    parameter_at(m, p) = saved + h_step;
    const double up = batch_loss(m, xs, ys);
    parameter_at(m, p) = saved - h_step;
    const double down = batch_loss(m, xs, ys);
    parameter_at(m, p) = saved;
    worst = std::max(worst, oracle::rel_err(grad_at(g, p), (up - down) / (2 * h_step)));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("generate_synthetic") {
  const auto a = separable(1);
  CHECK(a == separable(1));
  CHECK(to_csv(a) == to_csv(separable(1)));
  CHECK_FALSE(a == separable(2));
  validate(a);
  CHECK(a.size() == 300);
  CHECK(a.indices(Split::Train).size() == 210);
  CHECK(a.indices(Split::Val).size() == 30);
  CHECK(a.indices(Split::Test).size() == 60);

  SyntheticSpec hard;
  hard.n_samples = 600;
  hard.n_classes = 3;
  hard.seed = 1;
  hard.complexity = {1.0, 1.0, 1.0};
  SyntheticSpec easy = hard;
  easy.complexity = {0.0, 0.0, 0.0};
  CHECK(mean_center_distance(generate_synthetic(hard)) <
        mean_center_distance(generate_synthetic(easy)));

  SyntheticSpec bad;
  bad.n_samples = 29;
  CHECK(error_code([&] { generate_synthetic(bad); }) == Errc::InvalidShape);
  bad.n_samples = 300;
  bad.input_dim = 1;
  CHECK(error_code([&] { generate_synthetic(bad); }) == Errc::InvalidShape);
}

TEST_CASE("separable data trains to high test accuracy") {
  auto data = separable(21);
  TrainConfig cfg;
  cfg.seed = 21;
  const auto result = train_supervised(make_mlp({8, 16, 16, 3}, 21), data, cfg);
  CHECK(result.history.size() == 30);
  CHECK(accuracy(result.model, data, Split::Test) >= 0.95);
}

TEST_CASE("inject_noise") {
  const auto clean = separable(3, 3000);
  for (auto kind : {NoiseKind::Gaussian, NoiseKind::SaltPepper, NoiseKind::Uniform}) {
    const auto same = inject_noise(clean, kind, 0.0, 1);
    CHECK(same.features == clean.features);
    for (double v : same.noise_level) CHECK(v == 0.0);
  }

  // per-feature std of the clean data
  std::vector<double> sd(clean.dim);
  for (std::size_t j = 0; j < clean.dim; ++j) {
    double m = 0.0, s = 0.0;
    for (std::size_t i = 0; i < clean.size(); ++i) m += clean.row(i)[j];
    m /= static_cast<double>(clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) s += std::pow(clean.row(i)[j] - m, 2);
    sd[j] = std::sqrt(s / static_cast<double>(clean.size() - 1));
  }
  const auto g = inject_noise(clean, NoiseKind::Gaussian, 0.5, 7);
  for (std::size_t j = 0; j < clean.dim; ++j) {
    double m = 0.0, s = 0.0;
    const auto n = static_cast<double>(clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) m += g.row(i)[j] - clean.row(i)[j];
    m /= n;
    for (std::size_t i = 0; i < clean.size(); ++i) {
      s += std::pow(g.row(i)[j] - clean.row(i)[j] - m, 2);
    }
    const double want = std::pow(0.5 * sd[j], 2);
    CHECK(std::abs(s / (n - 1) - want) < 0.1 * want);
  }
  for (double v : g.noise_level) CHECK(v == 0.5);
  CHECK(g.labels == clean.labels);
  CHECK(g.split == clean.split);
  CHECK(g == inject_noise(clean, NoiseKind::Gaussian, 0.5, 7));

  const auto sp = inject_noise(clean, NoiseKind::SaltPepper, 0.3, 8);
  std::size_t altered = 0;
  for (std::size_t i = 0; i < clean.features.size(); ++i) altered += sp.features[i] != clean.features[i];
  const double frac = static_cast<double>(altered) / static_cast<double>(clean.features.size());
  CHECK(frac >= 0.27);
  CHECK(frac <= 0.33);

  const auto u = inject_noise(clean, NoiseKind::Uniform, 0.2, 9);
  for (std::size_t j = 0; j < clean.dim; ++j) {
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < clean.size(); ++i) {
      lo = std::min(lo, clean.row(i)[j]);
      hi = std::max(hi, clean.row(i)[j]);
    }
    for (std::size_t i = 0; i < clean.size(); ++i) {
      CHECK(std::abs(u.row(i)[j] - clean.row(i)[j]) <= 0.2 * (hi - lo));
    }
  }

  const auto half = inject_noise(clean, NoiseKind::Gaussian, 0.8, 10, 0.5);
  std::size_t noisy = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const bool changed = !std::equal(half.row(i).begin(), half.row(i).end(), clean.row(i).begin());
    CHECK(changed == (half.noise_level[i] == 0.8));
    noisy += changed;
  }
  CHECK(noisy == 1500);

  CHECK(error_code([&] { inject_noise(clean, NoiseKind::Uniform, 1.5, 1); }) ==
        Errc::LevelOutOfRange);
  CHECK(error_code([&] { inject_noise(clean, NoiseKind::Uniform, -0.1, 1); }) ==
        Errc::LevelOutOfRange);
  CHECK(error_code([&] { parse_noise_kind("speckle"); }) == Errc::UnknownNoiseKind);
  CHECK(parse_noise_kind("salt_pepper") == NoiseKind::SaltPepper);
}

TEST_CASE("dataset CSV round-trips bit-exactly") {
  auto data = inject_noise(separable(4), NoiseKind::Gaussian, 0.37, 5, 0.5);
  data.features[0] = 0.1 + 0.2;
  data.features[1] = -1e-310;
  const std::string text = to_csv(data);
  std::istringstream in(text);
  const auto back = read_csv(in);
  CHECK(back.features == data.features);
  CHECK(back.labels == data.labels);
  CHECK(back.noise_level == data.noise_level);
  CHECK(back.split == data.split);
  CHECK(to_csv(back) == text);
  CHECK(text.rfind("split,label,noise_level,f0,f1,", 0) == 0);

  std::istringstream bad("split,label,noise_level,f0\ntrain,0,0.5\n");
  CHECK(error_code([&] { read_csv(bad); }) == Errc::ParseError);
  std::istringstream bad_split("split,label,noise_level,f0\nholdout,0,0,1\n");
  CHECK(error_code([&] { read_csv(bad_split); }) == Errc::ParseError);
}

TEST_CASE("train_supervised") {
  const auto data = separable(6);
  const auto init = make_mlp({8, 16, 16, 3}, 6);
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.seed = 6;
  const auto a = train_supervised(init, data, cfg);
  const auto b = train_supervised(init, data, cfg);
  CHECK(a.history == b.history);
  CHECK(a.model == b.model);

  cfg.learning_rate = 0.0;
  CHECK(train_supervised(init, data, cfg).model == init);

  auto no_val = data;
  for (auto& s : no_val.split) {
    if (s == Split::Val) s = Split::Train;
  }
  CHECK(error_code([&] { train_supervised(init, no_val, cfg); }) == Errc::EmptySplit);
  cfg.epochs = 0;
  CHECK(error_code([&] { train_supervised(init, data, cfg); }) == Errc::InvalidConfig);
}

TEST_CASE("separable data: validation accuracy and median loss over 20 seeds") {
  std::vector<std::vector<double>> losses(30);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto data = separable(1000 + seed);
    TrainConfig cfg;
    cfg.seed = seed;
    const auto r = train_supervised(make_mlp({8, 16, 16, 3}, 2000 + seed), data, cfg);
    CHECK(r.history.back().val_accuracy >= 0.95);
    for (std::size_t e = 0; e < 30; ++e) losses[e].push_back(r.history[e].train_loss);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return 0.5 * (v[9] + v[10]);
  };
  double prev = 1e300;
  for (std::size_t e : {1u, 5u, 10u, 20u, 30u}) {
    const double m = median(losses[e - 1]);
    CHECK(m <= prev);
    prev = m;
  }
}
