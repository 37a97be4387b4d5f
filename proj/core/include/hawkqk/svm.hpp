#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hawkqk/matrix.hpp"

namespace hawkqk::svm {

// Gram (square) or cross (test x train) kernel values plus the sample ids
// of rows and columns.
struct KernelMatrix {
  Matrix values;
  std::vector<std::size_t> row_ids;
  std::vector<std::size_t> col_ids;

  static KernelMatrix with_default_ids(Matrix values);
};

// Long-format CSV: row_id,col_id,value.
void write_kernel_csv(const std::filesystem::path& path, const KernelMatrix& k,
                      const std::string& header_comment = {});
KernelMatrix read_kernel_csv(const std::filesystem::path& path);

struct SvmParams {
  double c = 1.0;
  double tol = 1e-3;
  // Iteration cap is max_passes * n; 0 selects 10 * n passes.
  std::size_t max_passes = 0;
};

struct SvmModel {
  std::vector<double> alphas;
  double bias = 0.0;
  std::vector<std::size_t> support_indices;  // alpha > 1e-10
  std::vector<int> train_labels;
  double c = 1.0;
  std::size_t iterations = 0;
};

inline constexpr double kSupportThreshold = 1e-10;

// SMO on the dual with maximal-violating-pair selection. Stops once the
// largest KKT gap drops below tol. Throws std::invalid_argument on bad input
// (asymmetric K, labels outside {-1,+1}, one class, C <= 0) and
// NumericalError when the iteration cap is hit.
SvmModel smo_train(const Matrix& k, const std::vector<int>& y, const SvmParams& params = {});

// sum_i alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
double dual_objective(const SvmModel& m, const Matrix& k);

// Largest KKT violation measured on y_i f(x_i) against the margin.
double max_kkt_violation(const SvmModel& m, const Matrix& k);

// score_t = sum_i alpha_i y_i K[t, i] + bias
std::vector<double> decision_function(const SvmModel& m, const Matrix& k_cross);

// Sign of the score; exactly zero maps to +1.
std::vector<int> predict(const SvmModel& m, const Matrix& k_cross);
std::vector<int> labels_from_scores(const std::vector<double>& scores);

// exp(-gamma ||x_i - x2_j||^2)
Matrix rbf_kernel_matrix(const Matrix& x, const Matrix& x2, double gamma);

// Symmetrizes and clips negative eigenvalues to zero.
Matrix repair_psd(const Matrix& k);

void save_model(const std::filesystem::path& path, const SvmModel& m,
                const std::string& header_comment = {});
SvmModel load_model(const std::filesystem::path& path);

}  // namespace hawkqk::svm
