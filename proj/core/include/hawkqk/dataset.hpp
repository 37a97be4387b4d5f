#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hawkqk/matrix.hpp"

namespace hawkqk {

// Sample x gene expression matrix with labels in {-1, +1}.
struct LabeledDataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> gene_names;  // empty when the source had none
  // Source names of the +1 and -1 classes, when known ("" otherwise).
  std::string positive_name;
  std::string negative_name;

  std::size_t n_samples() const noexcept { return features.rows(); }
  std::size_t n_genes() const noexcept { return features.cols(); }
  std::size_t count(int label) const;

  // Throws DataError on a broken invariant.
  void validate() const;

  LabeledDataset select_rows(std::span<const std::size_t> indices) const;
  LabeledDataset select_genes(std::span<const std::size_t> indices) const;
};

using LabelColumn = std::variant<std::string, std::size_t>;

// Reads a header-first CSV; the label column may be given by name or index.
// Labels equal to positive_label map to +1, every other value to -1.
LabeledDataset load_csv(const std::filesystem::path& path, const LabelColumn& label_column,
                        const std::string& positive_label);

// Writes features plus a trailing "label" column holding the class names
// (or +1/-1 when the names are unknown).
void write_csv(const std::filesystem::path& path, const LabeledDataset& ds,
               const std::string& header_comment = {});

struct SplitSpec {
  double test_fraction = 0.25;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct Split {
  LabeledDataset train;
  LabeledDataset test;
  std::vector<std::size_t> train_indices;  // ascending, into the source dataset
  std::vector<std::size_t> test_indices;   // ascending
};

// Per class, round(test_fraction * class_size) samples go to the test side.
Split stratified_split(const LabeledDataset& ds, const SplitSpec& spec);

// Per-column min/max scaling into [lo, hi]. Fit on training data, apply to
// anything; values outside the fitted range are clamped.
class PhaseScaler {
 public:
  PhaseScaler() = default;
  PhaseScaler(double lo, double hi);

  void fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
  Matrix fit_apply(const Matrix& x) {
    fit(x);
    return apply(x);
  }

  bool fitted() const noexcept { return !min_.empty(); }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  const std::vector<double>& column_min() const noexcept { return min_; }
  const std::vector<double>& column_max() const noexcept { return max_; }

 private:
  double lo_ = 0.0;
  double hi_ = 3.14159265358979323846;
  std::vector<double> min_;
  std::vector<double> max_;
};

// Fit-and-apply convenience over a whole dataset.
LabeledDataset scale_to_phase(const LabeledDataset& ds, double lo, double hi);

}  // namespace hawkqk
