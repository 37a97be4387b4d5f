#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hawkqk/bhho.hpp"
#include "hawkqk/config.hpp"
#include "hawkqk/dataset.hpp"
#include "hawkqk/metrics.hpp"
#include "hawkqk/pca.hpp"
#include "hawkqk/svm.hpp"

namespace hawkqk::pipeline {

// Source data plus its train/test split.
struct Prepared {
  LabeledDataset source;
  Split split;
};

Prepared prepare(const PipelineConfig& cfg);
Prepared prepare(const PipelineConfig& cfg, LabeledDataset source);

// BHHO over the training partition.
hho::BhhoResult select_genes(const PipelineConfig& cfg, const LabeledDataset& train);

// Training side after mask restriction, SMOTE, PCA and phase scaling. The
// projection always has pca.k columns; components beyond the data rank are 0.
struct Reduced {
  Matrix train_x;
  std::vector<int> train_y;
  std::vector<std::size_t> train_ids;  // source index, or n_source + s for synthetic row s
  Matrix test_x;
  std::vector<std::size_t> test_ids;
  pca::PcaModel pca;
  std::size_t n_genes = 0;      // genes entering PCA
  std::size_t n_synthetic = 0;  // rows added by SMOTE
};

// The test side enters as features only; its labels are not visible here.
Reduced reduce(const PipelineConfig& cfg, const LabeledDataset& train,
               const std::vector<std::size_t>& train_ids, const Matrix& test_features,
               const std::vector<std::size_t>& test_ids, std::size_t n_source,
               const hho::FeatureMask* mask);

struct KernelPair {
  Matrix train;  // n_train x n_train
  Matrix cross;  // n_test x n_train
};

// kernel is one of z, zz, pauli_zyy, rbf.
KernelPair compute_kernels(const PipelineConfig& cfg, const std::string& kernel,
                           const Matrix& train_x, const Matrix& test_x);

svm::SvmModel train_model(const PipelineConfig& cfg, const Matrix& k_train,
                          const std::vector<int>& train_y);

struct Evaluation {
  std::vector<double> scores;
  std::vector<int> predictions;
  metrics::ConfusionMatrix confusion;
  metrics::Scores summary;
  metrics::RocCurve roc;
};

Evaluation evaluate(const svm::SvmModel& model, const Matrix& k_cross,
                    const std::vector<int>& test_labels);

struct RunReport {
  std::string kernel;
  bool use_selection = false;
  std::size_t n_source_genes = 0;
  std::vector<std::string> gene_names;
  hho::FeatureMask mask;                       // all genes without selection
  std::optional<hho::BhhoResult> selection;
  Reduced reduced;
  std::string input_hash;  // hash of the scaled train/test matrices
  KernelPair kernels;
  svm::SvmModel model;
  Evaluation evaluation;
};

// split -> (mask) -> SMOTE -> PCA -> scaling -> kernels -> SMO -> metrics.
// Both settings of use_selection share the split and every seed.
RunReport run_full(const PipelineConfig& cfg, bool use_selection);
RunReport run_full(const PipelineConfig& cfg, const Prepared& data, bool use_selection);

// One run per kernel in {z, zz, pauli_zyy, rbf} over the same split, mask and
// reduced matrices.
std::vector<RunReport> run_compare_kernels(const PipelineConfig& cfg);
std::vector<RunReport> run_compare_kernels(const PipelineConfig& cfg, const Prepared& data);

inline const std::vector<std::string>& compared_kernels() {
  static const std::vector<std::string> k = {"z", "zz", "pauli_zyy", "rbf"};
  return k;
}

// ---- artifacts ----

void write_mask(const std::filesystem::path& path, const hho::FeatureMask& mask,
                const std::vector<std::string>& gene_names, const std::string& header);
hho::FeatureMask read_mask(const std::filesystem::path& path, std::size_t n_genes);

void write_convergence(const std::filesystem::path& path, const hho::BhhoResult& r,
                       const std::string& header);

// id, z0..z{k-1}[, label]
void write_reduced(const std::filesystem::path& path, const std::vector<std::size_t>& ids,
                   const Matrix& x, const std::vector<int>* labels, const std::string& header);

struct ReducedTable {
  std::vector<std::size_t> ids;
  Matrix x;
  std::vector<int> labels;  // empty when the file has no label column
};
ReducedTable read_reduced(const std::filesystem::path& path);

// Flat JSON object; keys sorted, numbers in shortest round-trip form.
std::string metrics_json(const PipelineConfig& cfg, const std::string& kernel, bool use_selection,
                         std::size_t n_selected_genes, const svm::SvmModel& model,
                         const Evaluation& ev);

void write_compare_csv(const std::filesystem::path& path, const std::vector<RunReport>& runs,
                       const std::string& header);

// Writes every artifact of one run into cfg.output_dir.
void write_run_artifacts(const PipelineConfig& cfg, const RunReport& run);

// ---- CLI stages: each reads earlier artifacts from cfg.output_dir ----

void stage_select(const PipelineConfig& cfg);
void stage_reduce(const PipelineConfig& cfg);
void stage_kernel(const PipelineConfig& cfg);
void stage_train(const PipelineConfig& cfg);
Evaluation stage_evaluate(const PipelineConfig& cfg);

}  // namespace hawkqk::pipeline
