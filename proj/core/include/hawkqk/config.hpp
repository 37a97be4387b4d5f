#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "hawkqk/binary.hpp"
#include "hawkqk/fitness.hpp"
#include "hawkqk/hho.hpp"
#include "hawkqk/kernel.hpp"
#include "hawkqk/svm.hpp"

namespace hawkqk::pipeline {

// Flat key=value text. Blank lines and lines starting with '#' are ignored;
// a repeated key keeps its last value.
class Settings {
 public:
  static Settings load(const std::filesystem::path& path);
  static Settings parse(std::string_view text, const std::string& origin = "<text>");

  void set(const std::string& key, const std::string& value);
  // "key=value"; throws ConfigError without '='.
  void assign(std::string_view assignment);
  void merge(const Settings& other);

  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

enum class StageOrder { smote_then_pca, pca_then_smote };

struct PipelineConfig {
  std::uint64_t seed = 0;

  std::filesystem::path data_path;
  std::string label_column = "label";
  std::optional<std::size_t> label_index;  // wins over label_column when set
  std::string positive_label = "1";

  double test_fraction = 0.25;
  bool stratified = true;
  std::uint64_t split_seed = 0;

  bool smote_enabled = true;
  std::size_t smote_k = 5;
  std::map<std::string, std::size_t> smote_targets;  // class name -> count
  std::uint64_t smote_seed = 0;

  bool use_selection = true;
  hho::HhoParams hho;  // dimension is filled in from the data
  hho::TransferKind transfer = hho::TransferKind::s_shaped;
  hho::FitnessConfig fitness;

  StageOrder order = StageOrder::smote_then_pca;
  std::size_t pca_k = 20;
  double scale_lo = 0.0;
  double scale_hi = 3.14159265358979323846;

  std::string kernel = "zz";  // z | zz | pauli_zyy | rbf
  std::size_t reps = 3;
  qk::KernelMode mode = qk::KernelMode::exact;
  qk::ShotConfig shots;
  bool repair_psd = true;
  double rbf_gamma = 0.0;  // 0 selects 1 / k
  std::size_t memory_budget = std::size_t{1} << 30;

  svm::SvmParams svm;

  std::filesystem::path output_dir = "out";
  unsigned threads = 1;
};

// Unknown keys and malformed values raise ConfigError. Stage seeds not set
// explicitly are derived from `seed`.
PipelineConfig resolve(const Settings& s);

// Effective settings as key=value pairs, seeds resolved.
std::map<std::string, std::string> describe(const PipelineConfig& cfg);

// Hash of every setting that influences results (not output.dir or threads).
std::string config_hash(const PipelineConfig& cfg);

// "# config_hash=<hash>", the first line of every CSV artifact.
std::string artifact_header(const PipelineConfig& cfg);

// Keys accepted by resolve(), for help text.
const std::map<std::string, std::string>& known_keys();

}  // namespace hawkqk::pipeline
