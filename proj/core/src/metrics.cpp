#include "hawkqk/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hawkqk/text.hpp"

namespace hawkqk::metrics {

namespace {

double ratio(std::size_t num, std::size_t den, bool& degenerate) {
  degenerate = den == 0;
  return degenerate ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void check_binary(const std::vector<int>& y, const char* what) {
  for (int v : y)
    if (v != 1 && v != -1) throw std::invalid_argument(std::string(what) + ": labels must be -1 or +1");
}

void check_both_classes(const std::vector<int>& y_true, const std::vector<double>& scores) {
  if (y_true.size() != scores.size())
    throw std::invalid_argument("roc_auc: label and score lengths differ");
  check_binary(y_true, "roc_auc");
  const auto pos = std::count(y_true.begin(), y_true.end(), 1);
  if (pos == 0 || pos == static_cast<std::ptrdiff_t>(y_true.size()))
    throw std::invalid_argument("roc_auc: single-class input");
}

}  // namespace

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("confusion: label and prediction lengths differ");
  check_binary(y_true, "confusion");
  check_binary(y_pred, "confusion");
  ConfusionMatrix c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == 1)
      ++(y_pred[i] == 1 ? c.tp : c.fn);
    else
      ++(y_pred[i] == 1 ? c.fp : c.tn);
  }
  return c;
}

Scores scores_from_confusion(const ConfusionMatrix& c) {
  if (c.total() == 0) throw std::invalid_argument("scores_from_confusion: empty confusion matrix");
  Scores s;
  bool unused = false;
  s.accuracy = ratio(c.tp + c.tn, c.total(), unused);
  s.precision = ratio(c.tp, c.tp + c.fp, s.precision_degenerate);
  s.recall = ratio(c.tp, c.tp + c.fn, s.recall_degenerate);
  s.specificity = ratio(c.tn, c.tn + c.fp, s.specificity_degenerate);
  s.fpr = ratio(c.fp, c.fp + c.tn, s.fpr_degenerate);
  const double pr = s.precision + s.recall;
  s.f1_degenerate = pr == 0.0;
  s.f1 = s.f1_degenerate ? 0.0 : 2.0 * s.precision * s.recall / pr;
  return s;
}

double rank_auc(const std::vector<int>& y_true, const std::vector<double>& scores) {
  check_both_classes(y_true, scores);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Average ranks (1-based) over tie groups; ranks are doubled to stay integral.
  double pos_rank2 = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double rank2 = static_cast<double>(i + 1 + j);  // 2 * mean of (i+1 .. j)
    for (std::size_t t = i; t < j; ++t)
      if (y_true[order[t]] == 1) {
        pos_rank2 += rank2;
        ++n_pos;
      }
    i = j;
  }
  const double n_neg = static_cast<double>(n - n_pos);
  const double np = static_cast<double>(n_pos);
  const double u = pos_rank2 / 2.0 - np * (np + 1.0) / 2.0;
  return u / (np * n_neg);
}

double trapezoid_area(const std::vector<RocPoint>& points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i)
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  return area;
}

RocCurve roc_auc(const std::vector<int>& y_true, const std::vector<double>& scores) {
  check_both_classes(y_true, scores);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const auto n_pos = static_cast<std::size_t>(std::count(y_true.begin(), y_true.end(), 1));
  const std::size_t n_neg = n - n_pos;

  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    for (; j < n && scores[order[j]] == scores[order[i]]; ++j) ++(y_true[order[j]] == 1 ? tp : fp);
    curve.points.push_back({scores[order[i]], static_cast<double>(fp) / static_cast<double>(n_neg),
                            static_cast<double>(tp) / static_cast<double>(n_pos)});
    i = j;
  }
  curve.auc = rank_auc(y_true, scores);
  return curve;
}

void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve,
                   const std::string& header_comment) {
  std::ostringstream out;
  if (!header_comment.empty()) out << header_comment << '\n';
  out << "threshold,fpr,tpr\n";
  for (const auto& p : curve.points)
    out << text::format_double(p.threshold) << ',' << text::format_double(p.fpr) << ','
        << text::format_double(p.tpr) << '\n';
  text::write_file(path, out.str());
}

}  // namespace hawkqk::metrics
