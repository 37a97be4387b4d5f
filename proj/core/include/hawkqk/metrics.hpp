#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hawkqk::metrics {

// Positive class is +1.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + tn + fp + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// A ratio with a zero denominator is reported as 0 and flagged.
struct Scores {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;       // tp / (tp + fn)
  double specificity = 0.0;  // tn / (tn + fp)
  double f1 = 0.0;
  double fpr = 0.0;  // fp / (fp + tn)

  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool specificity_degenerate = false;
  bool f1_degenerate = false;
  bool fpr_degenerate = false;
};

Scores scores_from_confusion(const ConfusionMatrix& c);

struct RocPoint {
  double threshold;  // predict +1 when score >= threshold
  double fpr;
  double tpr;
};

struct RocCurve {
  double auc = 0.0;
  // Starts at (+inf, 0, 0), one point per distinct score in descending
  // order, ending at (1, 1).
  std::vector<RocPoint> points;
};

// Mann-Whitney AUC with ties counted 1/2.
double rank_auc(const std::vector<int>& y_true, const std::vector<double>& scores);

RocCurve roc_auc(const std::vector<int>& y_true, const std::vector<double>& scores);

// Trapezoid area under the (fpr, tpr) polyline.
double trapezoid_area(const std::vector<RocPoint>& points);

void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve,
                   const std::string& header_comment = {});

}  // namespace hawkqk::metrics
