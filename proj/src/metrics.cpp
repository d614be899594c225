#include "kdaco/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "kdaco/error.hpp"
#include "kdaco/text.hpp"

namespace kdaco::metrics {

std::size_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

ConfusionMatrix confusion(std::span<const std::size_t> predictions,
                          std::span<const std::size_t> labels, std::size_t n_classes) {
  if (predictions.size() != labels.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(predictions.size()) + " predictions vs " +
                                          std::to_string(labels.size()) + " labels");
  }
  ConfusionMatrix cm(n_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= n_classes || predictions[i] >= n_classes) {
      throw Error(Errc::IndexOutOfRange, "class index at row " + std::to_string(i));
    }
    ++cm.at(labels[i], predictions[i]);
  }
  return cm;
}

namespace {

double ratio(std::size_t num, std::size_t den, bool& undefined) {
  if (den == 0) {
    undefined = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r, bool& undefined) {
  if (p + r == 0.0) {
    undefined = true;
    return 0.0;
  }
  return 2.0 * p * r / (p + r);
}

}  // namespace

ClassReport class_report(const ConfusionMatrix& cm) {
  const std::size_t n = cm.classes();
  const std::size_t total = cm.total();
  if (n == 0 || total == 0) throw Error(Errc::EmptyMatrix, "confusion matrix has no samples");

  ClassReport report;
  std::size_t trace = 0, sum_tp = 0, sum_fp = 0, sum_fn = 0;
  for (std::size_t k = 0; k < n; ++k) {
    ClassMetrics m;
    std::size_t predicted = 0;
    for (std::size_t j = 0; j < n; ++j) {
      m.support += cm.at(k, j);
      predicted += cm.at(j, k);
    }
    m.tp = cm.at(k, k);
    m.fp = predicted - m.tp;
    m.fn = m.support - m.tp;
    m.tn = total - m.tp - m.fp - m.fn;
    m.precision = ratio(m.tp, m.tp + m.fp, m.precision_undefined);
    m.recall = ratio(m.tp, m.tp + m.fn, m.recall_undefined);
    m.f1 = harmonic(m.precision, m.recall, m.f1_undefined);
    trace += m.tp;
    sum_tp += m.tp;
    sum_fp += m.fp;
    sum_fn += m.fn;
    report.macro.precision += m.precision;
    report.macro.recall += m.recall;
    report.macro.f1 += m.f1;
    report.per_class.push_back(m);
  }
  const auto nd = static_cast<double>(n);
  report.macro.precision /= nd;
  report.macro.recall /= nd;
  report.macro.f1 /= nd;
  report.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  bool ignored = false;
  report.micro.precision = ratio(sum_tp, sum_tp + sum_fp, ignored);
  report.micro.recall = ratio(sum_tp, sum_tp + sum_fn, ignored);
  report.micro.f1 = harmonic(report.micro.precision, report.micro.recall, ignored);
  return report;
}

namespace {

struct Decision {
  double score;
  bool positive;
};

struct Sweep {
  std::size_t positives = 0;
  std::size_t negatives = 0;
  // Cumulative (tp, fp) after each threshold group, descending score.
  std::vector<std::pair<std::size_t, std::size_t>> steps;
};

Sweep sweep(std::span<const ScoredPrediction> scored) {
  if (scored.size() < 2) throw Error(Errc::DegenerateLabels, "need at least 2 samples");
  std::vector<Decision> flat;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const auto& s = scored[i];
    // Any finite scores work: the sweep only depends on their order.
    for (double v : s.probs) {
      if (!std::isfinite(v)) throw Error(Errc::NonFiniteInput, "score at sample " + std::to_string(i));
    }
    if (s.probs.size() != scored.front().probs.size()) {
      throw Error(Errc::LengthMismatch, "sample " + std::to_string(i) + " has a different class count");
    }
    if (s.label >= s.probs.size()) {
      throw Error(Errc::IndexOutOfRange, "label at sample " + std::to_string(i));
    }
    for (std::size_t k = 0; k < s.probs.size(); ++k) flat.push_back({s.probs[k], k == s.label});
  }
  Sweep out;
  for (const auto& d : flat) (d.positive ? out.positives : out.negatives) += 1;
  if (out.positives == 0 || out.negatives == 0) {
    throw Error(Errc::DegenerateLabels, "flattened labels contain a single class");
  }
  std::sort(flat.begin(), flat.end(),
            [](const Decision& a, const Decision& b) { return a.score > b.score; });
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < flat.size();) {
    std::size_t j = i;
    while (j < flat.size() && flat[j].score == flat[i].score) {
      (flat[j].positive ? tp : fp) += 1;
      ++j;
    }
    out.steps.emplace_back(tp, fp);
    i = j;
  }
  return out;
}

}  // namespace

CurveResult roc_auc_micro(std::span<const ScoredPrediction> scored) {
  const Sweep s = sweep(scored);
  const auto p = static_cast<double>(s.positives);
  const auto n = static_cast<double>(s.negatives);
  CurveResult out;
  out.points.push_back({0.0, 0.0});
  for (const auto& [tp, fp] : s.steps) {
    const CurvePoint next{static_cast<double>(fp) / n, static_cast<double>(tp) / p};
    const CurvePoint& prev = out.points.back();
    out.area += (next.x - prev.x) * (next.y + prev.y) / 2.0;
    out.points.push_back(next);
  }
  return out;
}

CurveResult pr_average_precision_micro(std::span<const ScoredPrediction> scored) {
  const Sweep s = sweep(scored);
  const auto p = static_cast<double>(s.positives);
  CurveResult out;
  double prev_recall = 0.0;
  for (const auto& [tp, fp] : s.steps) {
    const double recall = static_cast<double>(tp) / p;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    out.area += (recall - prev_recall) * precision;
    out.points.push_back({recall, precision});
    prev_recall = recall;
  }
  return out;
}

void write_report_csv(const ClassReport& report, std::ostream& out) {
  out << "row,precision,recall,f1,support,undefined\n";
  std::size_t support_total = 0;
  for (std::size_t k = 0; k < report.per_class.size(); ++k) {
    const auto& m = report.per_class[k];
    support_total += m.support;
    const bool undefined = m.precision_undefined || m.recall_undefined || m.f1_undefined;
    out << "class_" << k << ',' << format_real(m.precision) << ',' << format_real(m.recall)
        << ',' << format_real(m.f1) << ',' << m.support << ',' << (undefined ? 1 : 0) << '\n';
  }
  out << "macro," << format_real(report.macro.precision) << ','
      << format_real(report.macro.recall) << ',' << format_real(report.macro.f1) << ','
      << support_total << ",0\n";
  out << "micro," << format_real(report.micro.precision) << ','
      << format_real(report.micro.recall) << ',' << format_real(report.micro.f1) << ','
      << support_total << ",0\n";
}

nlohmann::json to_json(const ClassReport& report) {
  nlohmann::json j;
  j["accuracy"] = report.accuracy;
  auto& classes = j["classes"] = nlohmann::json::array();
  for (const auto& m : report.per_class) {
    classes.push_back({{"support", m.support},
                       {"tp", m.tp},
                       {"fp", m.fp},
                       {"fn", m.fn},
                       {"tn", m.tn},
                       {"precision", m.precision},
                       {"recall", m.recall},
                       {"f1", m.f1},
                       {"precision_undefined", m.precision_undefined},
                       {"recall_undefined", m.recall_undefined},
                       {"f1_undefined", m.f1_undefined}});
  }
  j["macro"] = {{"precision", report.macro.precision},
                {"recall", report.macro.recall},
                {"f1", report.macro.f1}};
  j["micro"] = {{"precision", report.micro.precision},
                {"recall", report.micro.recall},
                {"f1", report.micro.f1}};
  return j;
}

}  // namespace kdaco::metrics
