#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "json.hpp"

namespace kdaco::metrics {

// counts[true][predicted]
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t n_classes = 0)
      : n_(n_classes), counts_(n_classes * n_classes, 0) {}

  std::size_t classes() const { return n_; }
  std::size_t at(std::size_t truth, std::size_t predicted) const {
    return counts_.at(truth * n_ + predicted);
  }
  std::size_t& at(std::size_t truth, std::size_t predicted) {
    return counts_.at(truth * n_ + predicted);
  }
  std::size_t total() const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t n_;
  std::vector<std::size_t> counts_;
};

ConfusionMatrix confusion(std::span<const std::size_t> predictions,
                          std::span<const std::size_t> labels, std::size_t n_classes);

struct ClassMetrics {
  std::size_t support = 0;  // actual count
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Set when a zero denominator forced a 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

struct Averages {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassReport {
  std::vector<ClassMetrics> per_class;
  double accuracy = 0.0;
  Averages macro;
  Averages micro;
};

ClassReport class_report(const ConfusionMatrix& cm);

struct ScoredPrediction {
  std::vector<double> probs;  // any finite per-class scores; usually a distribution
  std::size_t label = 0;
};

struct CurvePoint {
  double x = 0.0;  // FPR for ROC, recall for PR
  double y = 0.0;  // TPR for ROC, precision for PR
};

struct CurveResult {
  double area = 0.0;
  std::vector<CurvePoint> points;
};

// Micro-averaged one-vs-rest ROC: every (sample, class) pair becomes a binary
// decision scored by probs[class]. Equal scores form one threshold group;
// area is the trapezoidal integral of TPR over FPR.
CurveResult roc_auc_micro(std::span<const ScoredPrediction> scored);

// Step-wise average precision over the same flattened sweep:
// sum_k (R_k - R_{k-1}) * P_k.
CurveResult pr_average_precision_micro(std::span<const ScoredPrediction> scored);

// One row per class, then macro and micro rows:
// row,precision,recall,f1,support,undefined
void write_report_csv(const ClassReport& report, std::ostream& out);

nlohmann::json to_json(const ClassReport& report);

}  // namespace kdaco::metrics
