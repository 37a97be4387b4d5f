#include "hawkqk/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hawkqk/error.hpp"
#include "hawkqk/random.hpp"
#include "hawkqk/text.hpp"

namespace hawkqk {

namespace {
constexpr std::uint64_t kSplitStream = 0x53504c4954;  // "SPLIT"
}  // namespace

std::size_t LabeledDataset::count(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void LabeledDataset::validate() const {
  if (features.rows() != labels.size())
    throw DataError("dataset: " + std::to_string(features.rows()) + " feature rows but " +
                    std::to_string(labels.size()) + " labels");
  for (int y : labels)
    if (y != 1 && y != -1) throw DataError("dataset: label " + std::to_string(y) + " is not +1/-1");
  for (double v : features.values())
    if (!std::isfinite(v)) throw DataError("dataset: non-finite feature value");
  if (!gene_names.empty() && gene_names.size() != features.cols())
    throw DataError("dataset: gene name count does not match column count");
}

LabeledDataset LabeledDataset::select_rows(std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.features = features.select_rows(indices);
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.labels.push_back(labels.at(i));
  out.gene_names = gene_names;
  out.positive_name = positive_name;
  out.negative_name = negative_name;
  return out;
}

LabeledDataset LabeledDataset::select_genes(std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.features = features.select_cols(indices);
  out.labels = labels;
  if (!gene_names.empty())
    for (std::size_t j : indices) out.gene_names.push_back(gene_names.at(j));
  out.positive_name = positive_name;
  out.negative_name = negative_name;
  return out;
}

LabeledDataset load_csv(const std::filesystem::path& path, const LabelColumn& label_column,
                        const std::string& positive_label) {
  if (!std::filesystem::exists(path)) throw DataError("missing data file: " + path.string());
  const auto lines = text::read_data_lines(path);
  if (lines.empty()) throw DataError("empty data file: " + path.string());

  const auto header = text::split_csv_line(lines.front());
  std::size_t label_idx = header.size();
  if (const auto* name = std::get_if<std::string>(&label_column)) {
    auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) throw DataError("label column '" + *name + "' absent from header");
    label_idx = static_cast<std::size_t>(it - header.begin());
  } else {
    label_idx = std::get<std::size_t>(label_column);
    if (label_idx >= header.size())
      throw DataError("label column index " + std::to_string(label_idx) + " out of range");
  }

  LabeledDataset ds;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_idx) ds.gene_names.push_back(header[c]);
  ds.positive_name = positive_label;

  const std::size_t n_genes = header.size() - 1;
  std::vector<double> row(n_genes);
  bool mixed_negatives = false;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = text::split_csv_line(lines[li]);
    if (fields.size() != header.size())
      throw DataError("ragged row " + std::to_string(li + 1) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    std::size_t g = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_idx) continue;
      double v = 0.0;
      if (!text::parse_double(fields[c], v) || !std::isfinite(v))
        throw DataError("non-numeric feature cell '" + fields[c] + "' at row " +
                        std::to_string(li + 1) + ", column " + std::to_string(c + 1));
      row[g++] = v;
    }
    ds.features.append_row(row);
    const std::string& label = fields[label_idx];
    if (label == positive_label) {
      ds.labels.push_back(1);
    } else {
      ds.labels.push_back(-1);
      if (ds.negative_name.empty() && !mixed_negatives) {
        ds.negative_name = label;
      } else if (ds.negative_name != label) {
        mixed_negatives = true;
        ds.negative_name.clear();
      }
    }
  }
  if (n_genes == 0) throw DataError("data file has no feature columns");
  if (ds.labels.size() < 2) throw DataError("dataset has fewer than 2 samples");
  if (ds.count(1) == 0 || ds.count(-1) == 0) throw DataError("single-class dataset");
  ds.validate();
  return ds;
}

void write_csv(const std::filesystem::path& path, const LabeledDataset& ds,
               const std::string& header_comment) {
  ds.validate();
  std::ostringstream out;
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  for (std::size_t j = 0; j < ds.n_genes(); ++j) {
    out << (ds.gene_names.empty() ? "g" + std::to_string(j) : ds.gene_names[j]) << ',';
  }
  out << "label\n";
  const bool named = !ds.positive_name.empty() && !ds.negative_name.empty();
  for (std::size_t i = 0; i < ds.n_samples(); ++i) {
    for (double v : ds.features.row(i)) out << text::format_double(v) << ',';
    if (named)
      out << (ds.labels[i] == 1 ? ds.positive_name : ds.negative_name) << '\n';
    else
      out << ds.labels[i] << '\n';
  }
  text::write_file(path, out.str());
}

Split stratified_split(const LabeledDataset& ds, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
    throw std::invalid_argument("split: test_fraction must lie strictly between 0 and 1");
  ds.validate();

  Rng rng = derive_rng(spec.seed, {kSplitStream});
  std::vector<std::size_t> test_idx;
  if (spec.stratified) {
    for (int cls : {1, -1}) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < ds.labels.size(); ++i)
        if (ds.labels[i] == cls) members.push_back(i);
      if (members.size() < 2)
        throw DataError("split: class " + std::to_string(cls) + " has fewer than 2 samples");
      std::shuffle(members.begin(), members.end(), rng);
      const auto n_test = static_cast<std::size_t>(
          std::llround(spec.test_fraction * static_cast<double>(members.size())));
      if (n_test == 0 || n_test == members.size())
        throw DataError("split: test_fraction leaves class " + std::to_string(cls) +
                        " absent from one side");
      test_idx.insert(test_idx.end(), members.begin(), members.begin() + n_test);
    }
  } else {
    std::vector<std::size_t> all(ds.n_samples());
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    const auto n_test = static_cast<std::size_t>(
        std::llround(spec.test_fraction * static_cast<double>(all.size())));
    test_idx.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_test));
  }
  std::sort(test_idx.begin(), test_idx.end());

  Split out;
  out.test_indices = test_idx;
  for (std::size_t i = 0, t = 0; i < ds.n_samples(); ++i) {
    if (t < test_idx.size() && test_idx[t] == i)
      ++t;
    else
      out.train_indices.push_back(i);
  }
  out.train = ds.select_rows(out.train_indices);
  out.test = ds.select_rows(out.test_indices);
  for (const auto* side : {&out.train, &out.test})
    if (side->count(1) == 0 || side->count(-1) == 0)
      throw DataError("split: a class is absent from the train or test side");
  return out;
}

PhaseScaler::PhaseScaler(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(hi > lo)) throw std::invalid_argument("phase scaling: hi must exceed lo");
}

void PhaseScaler::fit(const Matrix& x) {
  if (x.rows() == 0) throw std::invalid_argument("phase scaling: cannot fit on zero rows");
  min_.assign(x.cols(), 0.0);
  max_.assign(x.cols(), 0.0);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double lo = x(0, c), hi = x(0, c);
    for (std::size_t r = 1; r < x.rows(); ++r) {
      lo = std::min(lo, x(r, c));
      hi = std::max(hi, x(r, c));
    }
    min_[c] = lo;
    max_[c] = hi;
  }
}

Matrix PhaseScaler::apply(const Matrix& x) const {
  if (!fitted()) throw std::logic_error("phase scaling: apply before fit");
  if (x.cols() != min_.size()) throw std::invalid_argument("phase scaling: column count mismatch");
  Matrix out(x.rows(), x.cols());
  const double span = hi_ - lo_;
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const double width = max_[c] - min_[c];
      if (width <= 0.0) {
        out(r, c) = lo_;
        continue;
      }
      const double t = (x(r, c) - min_[c]) / width;
      out(r, c) = std::clamp(lo_ + t * span, lo_, hi_);
    }
  return out;
}

LabeledDataset scale_to_phase(const LabeledDataset& ds, double lo, double hi) {
  PhaseScaler scaler(lo, hi);
  LabeledDataset out = ds;
  out.features = scaler.fit_apply(ds.features);
  return out;
}

}  // namespace hawkqk
