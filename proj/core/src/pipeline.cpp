#include "hawkqk/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "hawkqk/error.hpp"
#include "hawkqk/kernel.hpp"
#include "hawkqk/smote.hpp"
#include "hawkqk/text.hpp"

namespace hawkqk::pipeline {

namespace {

namespace fs = std::filesystem;

// Re-raises any failure with the stage name in front, keeping its category.
template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  const std::string prefix = std::string(stage) + ": ";
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(prefix + e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(prefix + e.what());
  }
}

int class_of(const std::string& name, const LabeledDataset& ds) {
  if (!ds.positive_name.empty() && name == ds.positive_name) return 1;
  if (!ds.negative_name.empty() && name == ds.negative_name) return -1;
  if (name == "positive" || name == "pos" || name == "+1" || name == "1") return 1;
  if (name == "negative" || name == "neg" || name == "-1") return -1;
  throw ConfigError("smote.targets." + name + ": unknown class (use the class name, positive or negative)");
}

std::map<int, std::size_t> smote_targets(const PipelineConfig& cfg, const LabeledDataset& train) {
  if (cfg.smote_targets.empty()) return smote::balanced_targets(train);
  std::map<int, std::size_t> out;
  for (const auto& [name, count] : cfg.smote_targets) {
    const int label = class_of(name, train);
    if (out.count(label)) throw ConfigError("smote.targets: class '" + name + "' given twice");
    out[label] = count;
  }
  return out;
}

// Oversamples ds; synthetic rows get ids n_source, n_source + 1, ...
LabeledDataset oversample(const PipelineConfig& cfg, const LabeledDataset& ds,
                          std::vector<std::size_t>& ids, std::size_t n_source,
                          std::size_t& n_synthetic) {
  n_synthetic = 0;
  if (!cfg.smote_enabled) return ds;
  smote::SmoteConfig sc;
  sc.k_neighbors = cfg.smote_k;
  sc.target_counts = smote_targets(cfg, ds);
  sc.seed = cfg.smote_seed;
  LabeledDataset out = smote::smote_oversample(ds, sc);
  n_synthetic = out.n_samples() - ds.n_samples();
  for (std::size_t s = 0; s < n_synthetic; ++s) ids.push_back(n_source + s);
  return out;
}

Matrix pad_columns(const Matrix& m, std::size_t cols) {
  Matrix out(m.rows(), cols);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

std::string matrix_text(const Matrix& m) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      s += text::format_double(m(i, j));
      s += j + 1 < m.cols() ? ',' : '\n';
    }
  }
  return s;
}

std::string input_hash(const Reduced& r) {
  return text::fnv1a_hex(matrix_text(r.train_x) + "|" + matrix_text(r.test_x));
}

RunReport base_report(const PipelineConfig& cfg, const Prepared& data, bool use_selection) {
  RunReport r;
  r.use_selection = use_selection;
  r.n_source_genes = data.source.n_genes();
  r.gene_names = data.source.gene_names;
  if (use_selection) {
    r.selection = in_stage("select", [&] { return select_genes(cfg, data.split.train); });
    r.mask = r.selection->best_mask;
  } else {
    r.mask = hho::FeatureMask::all(r.n_source_genes);
  }
  r.reduced = in_stage("reduce", [&] {
    return reduce(cfg, data.split.train, data.split.train_indices, data.split.test.features,
                  data.split.test_indices, data.source.n_samples(),
                  use_selection ? &r.mask : nullptr);
  });
  r.input_hash = input_hash(r.reduced);
  return r;
}

void finish(const PipelineConfig& cfg, const Prepared& data, const std::string& kernel,
            RunReport& r) {
  r.kernel = kernel;
  r.kernels = in_stage("kernel", [&] {
    return compute_kernels(cfg, kernel, r.reduced.train_x, r.reduced.test_x);
  });
  r.model = in_stage("train", [&] { return train_model(cfg, r.kernels.train, r.reduced.train_y); });
  // Test labels are read here and nowhere earlier.
  r.evaluation = in_stage("evaluate", [&] {
    return evaluate(r.model, r.kernels.cross, data.split.test.labels);
  });
}

fs::path out_path(const PipelineConfig& cfg, const char* name) { return cfg.output_dir / name; }

std::vector<std::vector<std::string>> read_table(const fs::path& path, std::string& header) {
  const auto lines = text::read_data_lines(path);
  if (lines.empty()) throw DataError(path.string() + ": empty file");
  header = std::string(text::trim(lines.front()));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t l = 1; l < lines.size(); ++l) rows.push_back(text::split_csv_line(lines[l]));
  return rows;
}

std::size_t to_index(const std::string& s, const fs::path& path) {
  double v = 0;
  if (!text::parse_double(text::trim(s), v) || v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
    throw DataError(path.string() + ": bad id '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

Prepared prepare(const PipelineConfig& cfg) {
  if (cfg.data_path.empty()) throw ConfigError("data: data.path is not set");
  LabeledDataset ds = in_stage("data", [&] {
    const LabelColumn col = cfg.label_index ? LabelColumn{*cfg.label_index} : LabelColumn{cfg.label_column};
    return load_csv(cfg.data_path, col, cfg.positive_label);
  });
  return prepare(cfg, std::move(ds));
}

Prepared prepare(const PipelineConfig& cfg, LabeledDataset source) {
  Prepared p;
  p.split = in_stage("split", [&] {
    source.validate();
    return stratified_split(source, SplitSpec{cfg.test_fraction, cfg.split_seed, cfg.stratified});
  });
  p.source = std::move(source);
  return p;
}

hho::BhhoResult select_genes(const PipelineConfig& cfg, const LabeledDataset& train) {
  hho::HhoParams p = cfg.hho;
  p.dimension = train.n_genes();
  return hho::run_bhho(train, p, cfg.fitness, cfg.transfer, cfg.threads);
}

Reduced reduce(const PipelineConfig& cfg, const LabeledDataset& train,
               const std::vector<std::size_t>& train_ids, const Matrix& test_features,
               const std::vector<std::size_t>& test_ids, std::size_t n_source,
               const hho::FeatureMask* mask) {
  if (train_ids.size() != train.n_samples() || test_ids.size() != test_features.rows())
    throw std::invalid_argument("reduce: id count differs from row count");
  if (test_features.cols() != train.n_genes())
    throw std::invalid_argument("reduce: train and test gene counts differ");

  LabeledDataset tr = train;
  Matrix te = test_features;
  if (mask != nullptr) {
    if (mask->size() != train.n_genes())
      throw std::invalid_argument("reduce: mask length " + std::to_string(mask->size()) +
                                  " differs from gene count " + std::to_string(train.n_genes()));
    const auto genes = mask->selected_indices();
    if (genes.empty()) throw std::invalid_argument("reduce: mask selects no genes");
    tr = train.select_genes(genes);
    te = test_features.select_cols(genes);
  }

  Reduced r;
  r.n_genes = tr.n_genes();
  r.train_ids = train_ids;
  r.test_ids = test_ids;

  auto fit_pca = [&](const Matrix& x) {
    const std::size_t k = std::min({cfg.pca_k, x.cols(), x.rows()});
    return pca::pca_fit(x, k);
  };

  Matrix z_train;
  if (cfg.order == StageOrder::smote_then_pca) {
    tr = oversample(cfg, tr, r.train_ids, n_source, r.n_synthetic);
    r.pca = fit_pca(tr.features);
    z_train = pca::pca_transform(r.pca, tr.features);
  } else {
    r.pca = fit_pca(tr.features);
    LabeledDataset projected = tr;
    projected.features = pca::pca_transform(r.pca, tr.features);
    projected.gene_names.clear();
    projected = oversample(cfg, projected, r.train_ids, n_source, r.n_synthetic);
    tr.labels = projected.labels;
    z_train = std::move(projected.features);
  }
  Matrix z_test = pca::pca_transform(r.pca, te);
  // Fewer genes or samples than qubits: the missing components carry no
  // variance, so their coordinates are zero.
  if (z_train.cols() < cfg.pca_k) {
    z_train = pad_columns(z_train, cfg.pca_k);
    z_test = pad_columns(z_test, cfg.pca_k);
  }

  PhaseScaler scaler(cfg.scale_lo, cfg.scale_hi);
  r.train_x = scaler.fit_apply(z_train);
  r.test_x = scaler.apply(z_test);
  r.train_y = tr.labels;
  return r;
}

KernelPair compute_kernels(const PipelineConfig& cfg, const std::string& kernel,
                           const Matrix& train_x, const Matrix& test_x) {
  KernelPair kp;
  if (kernel == "rbf") {
    const double gamma = cfg.rbf_gamma > 0.0 ? cfg.rbf_gamma : 1.0 / static_cast<double>(train_x.cols());
    kp.train = svm::rbf_kernel_matrix(train_x, train_x, gamma);
    kp.cross = svm::rbf_kernel_matrix(test_x, train_x, gamma);
    return kp;
  }
  qk::FeatureMapSpec spec;
  spec.kind = qk::parse_feature_map(kernel);
  spec.n_qubits = train_x.cols();
  spec.reps = cfg.reps;
  qk::KernelOptions opts;
  opts.mode = cfg.mode;
  opts.shots = cfg.shots;
  opts.memory_budget = cfg.memory_budget;
  opts.threads = cfg.threads;
  kp.train = qk::kernel_matrix(train_x, spec, opts);
  kp.cross = qk::cross_kernel_matrix(test_x, train_x, spec, opts);
  if (cfg.mode == qk::KernelMode::sampled && cfg.repair_psd) kp.train = svm::repair_psd(kp.train);
  return kp;
}

svm::SvmModel train_model(const PipelineConfig& cfg, const Matrix& k_train,
                          const std::vector<int>& train_y) {
  return svm::smo_train(k_train, train_y, cfg.svm);
}

Evaluation evaluate(const svm::SvmModel& model, const Matrix& k_cross,
                    const std::vector<int>& test_labels) {
  if (k_cross.rows() != test_labels.size())
    throw std::invalid_argument("evaluate: cross kernel rows differ from test label count");
  Evaluation ev;
  ev.scores = svm::decision_function(model, k_cross);
  ev.predictions = svm::labels_from_scores(ev.scores);
  ev.confusion = metrics::confusion(test_labels, ev.predictions);
  ev.summary = metrics::scores_from_confusion(ev.confusion);
  ev.roc = metrics::roc_auc(test_labels, ev.scores);
  return ev;
}

RunReport run_full(const PipelineConfig& cfg, bool use_selection) {
  return run_full(cfg, prepare(cfg), use_selection);
}

RunReport run_full(const PipelineConfig& cfg, const Prepared& data, bool use_selection) {
  RunReport r = base_report(cfg, data, use_selection);
  finish(cfg, data, cfg.kernel, r);
  return r;
}

std::vector<RunReport> run_compare_kernels(const PipelineConfig& cfg) {
  return run_compare_kernels(cfg, prepare(cfg));
}

std::vector<RunReport> run_compare_kernels(const PipelineConfig& cfg, const Prepared& data) {
  const RunReport base = base_report(cfg, data, cfg.use_selection);
  std::vector<RunReport> runs;
  for (const auto& kernel : compared_kernels()) {
    RunReport r = base;
    finish(cfg, data, kernel, r);
    runs.push_back(std::move(r));
  }
  return runs;
}

// ---- artifacts ----

void write_mask(const fs::path& path, const hho::FeatureMask& mask,
                const std::vector<std::string>& gene_names, const std::string& header) {
  std::ostringstream out;
  out << header << "\ngene,selected\n";
  for (std::size_t j = 0; j < mask.size(); ++j)
    out << (j < gene_names.size() ? gene_names[j] : std::to_string(j)) << ','
        << (mask.test(j) ? 1 : 0) << '\n';
  text::write_file(path, out.str());
}

hho::FeatureMask read_mask(const fs::path& path, std::size_t n_genes) {
  std::string header;
  const auto rows = read_table(path, header);
  if (header != "gene,selected") throw DataError(path.string() + ": missing mask header");
  if (rows.size() != n_genes)
    throw DataError(path.string() + ": " + std::to_string(rows.size()) + " mask rows for " +
                    std::to_string(n_genes) + " genes");
  hho::FeatureMask mask(n_genes);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != 2 || (rows[j][1] != "0" && rows[j][1] != "1"))
      throw DataError(path.string() + ": bad mask row " + std::to_string(j + 1));
    mask.set(j, rows[j][1] == "1");
  }
  return mask;
}

void write_convergence(const fs::path& path, const hho::BhhoResult& r, const std::string& header) {
  std::ostringstream out;
  out << header << "\niteration,best_fitness,selected_count\n";
  for (std::size_t t = 0; t < r.convergence.size(); ++t)
    out << t << ',' << text::format_double(r.convergence[t]) << ',' << r.selected_counts[t] << '\n';
  text::write_file(path, out.str());
}

void write_reduced(const fs::path& path, const std::vector<std::size_t>& ids, const Matrix& x,
                   const std::vector<int>* labels, const std::string& header) {
  std::ostringstream out;
  out << header << "\nid";
  for (std::size_t j = 0; j < x.cols(); ++j) out << ",z" << j;
  if (labels) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < x.rows(); ++i) {
    out << ids[i];
    for (std::size_t j = 0; j < x.cols(); ++j) out << ',' << text::format_double(x(i, j));
    if (labels) out << ',' << (*labels)[i];
    out << '\n';
  }
  text::write_file(path, out.str());
}

ReducedTable read_reduced(const fs::path& path) {
  std::string header;
  const auto rows = read_table(path, header);
  const auto cols = text::split_csv_line(header);
  if (cols.size() < 2 || cols.front() != "id") throw DataError(path.string() + ": missing reduced header");
  const bool labelled = cols.back() == "label";
  const std::size_t k = cols.size() - 1 - (labelled ? 1 : 0);
  ReducedTable t;
  t.x = Matrix(rows.size(), k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols.size())
      throw DataError(path.string() + ": ragged row " + std::to_string(i + 1));
    t.ids.push_back(to_index(rows[i][0], path));
    for (std::size_t j = 0; j < k; ++j)
      if (!text::parse_double(rows[i][j + 1], t.x(i, j)))
        throw DataError(path.string() + ": non-numeric value in row " + std::to_string(i + 1));
    if (labelled) {
      const auto& l = rows[i].back();
      if (l != "1" && l != "-1") throw DataError(path.string() + ": bad label '" + l + "'");
      t.labels.push_back(l == "1" ? 1 : -1);
    }
  }
  return t;
}

std::string metrics_json(const PipelineConfig& cfg, const std::string& kernel, bool use_selection,
                         std::size_t n_selected_genes, const svm::SvmModel& model,
                         const Evaluation& ev) {
  nlohmann::json j;
  const auto& c = ev.confusion;
  const auto& s = ev.summary;
  j["config_hash"] = config_hash(cfg);
  j["kernel"] = kernel;
  j["mode"] = kernel == "rbf" ? "classical" : describe(cfg).at("qk.mode");
  j["use_selection"] = use_selection;
  j["n_selected_genes"] = n_selected_genes;
  j["n_train"] = model.alphas.size();
  j["n_test"] = c.total();
  j["n_support"] = model.support_indices.size();
  j["svm_iterations"] = model.iterations;
  j["tp"] = c.tp;
  j["tn"] = c.tn;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  j["accuracy"] = s.accuracy;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["specificity"] = s.specificity;
  j["f1"] = s.f1;
  j["fpr"] = s.fpr;
  j["auc"] = ev.roc.auc;
  j["precision_degenerate"] = s.precision_degenerate;
  j["recall_degenerate"] = s.recall_degenerate;
  j["specificity_degenerate"] = s.specificity_degenerate;
  j["f1_degenerate"] = s.f1_degenerate;
  j["fpr_degenerate"] = s.fpr_degenerate;
  return j.dump(2) + "\n";
}

void write_compare_csv(const fs::path& path, const std::vector<RunReport>& runs,
                       const std::string& header) {
  std::ostringstream out;
  out << header << "\nkernel,accuracy,precision,recall,f1,auc,input_hash\n";
  for (const auto& r : runs) {
    const auto& s = r.evaluation.summary;
    out << r.kernel << ',' << text::format_double(s.accuracy) << ','
        << text::format_double(s.precision) << ',' << text::format_double(s.recall) << ','
        << text::format_double(s.f1) << ',' << text::format_double(r.evaluation.roc.auc) << ','
        << r.input_hash << '\n';
  }
  text::write_file(path, out.str());
}

void write_run_artifacts(const PipelineConfig& cfg, const RunReport& run) {
  const std::string header = artifact_header(cfg);
  const auto& red = run.reduced;
  write_mask(out_path(cfg, "mask.csv"), run.mask, run.gene_names, header);
  if (run.selection) write_convergence(out_path(cfg, "convergence.csv"), *run.selection, header);
  write_reduced(out_path(cfg, "reduced_train.csv"), red.train_ids, red.train_x, &red.train_y, header);
  write_reduced(out_path(cfg, "reduced_test.csv"), red.test_ids, red.test_x, nullptr, header);
  pca::save_model(out_path(cfg, "pca_model.csv"), red.pca, header);
  svm::write_kernel_csv(out_path(cfg, "kernel_train.csv"),
                        {run.kernels.train, red.train_ids, red.train_ids}, header);
  svm::write_kernel_csv(out_path(cfg, "kernel_cross.csv"),
                        {run.kernels.cross, red.test_ids, red.train_ids}, header);
  svm::save_model(out_path(cfg, "model.csv"), run.model, header);
  text::write_file(out_path(cfg, "metrics.json"),
                   metrics_json(cfg, run.kernel, run.use_selection, run.mask.selected_count(),
                                run.model, run.evaluation));
  metrics::write_roc_csv(out_path(cfg, "roc.csv"), run.evaluation.roc, header);
}

// ---- CLI stages ----

void stage_select(const PipelineConfig& cfg) {
  const Prepared data = prepare(cfg);
  const auto result = in_stage("select", [&] { return select_genes(cfg, data.split.train); });
  const std::string header = artifact_header(cfg);
  write_mask(out_path(cfg, "mask.csv"), result.best_mask, data.source.gene_names, header);
  write_convergence(out_path(cfg, "convergence.csv"), result, header);
}

void stage_reduce(const PipelineConfig& cfg) {
  const Prepared data = prepare(cfg);
  std::optional<hho::FeatureMask> mask;
  if (cfg.use_selection)
    mask = in_stage("reduce", [&] { return read_mask(out_path(cfg, "mask.csv"), data.source.n_genes()); });
  const Reduced red = in_stage("reduce", [&] {
    return reduce(cfg, data.split.train, data.split.train_indices, data.split.test.features,
                  data.split.test_indices, data.source.n_samples(), mask ? &*mask : nullptr);
  });
  const std::string header = artifact_header(cfg);
  write_reduced(out_path(cfg, "reduced_train.csv"), red.train_ids, red.train_x, &red.train_y, header);
  write_reduced(out_path(cfg, "reduced_test.csv"), red.test_ids, red.test_x, nullptr, header);
  pca::save_model(out_path(cfg, "pca_model.csv"), red.pca, header);
}

void stage_kernel(const PipelineConfig& cfg) {
  const auto [train, test] = in_stage("kernel", [&] {
    return std::pair{read_reduced(out_path(cfg, "reduced_train.csv")),
                     read_reduced(out_path(cfg, "reduced_test.csv"))};
  });
  const auto kp = in_stage("kernel", [&] { return compute_kernels(cfg, cfg.kernel, train.x, test.x); });
  const std::string header = artifact_header(cfg);
  svm::write_kernel_csv(out_path(cfg, "kernel_train.csv"), {kp.train, train.ids, train.ids}, header);
  svm::write_kernel_csv(out_path(cfg, "kernel_cross.csv"), {kp.cross, test.ids, train.ids}, header);
}

void stage_train(const PipelineConfig& cfg) {
  const auto model = in_stage("train", [&] {
    const auto k = svm::read_kernel_csv(out_path(cfg, "kernel_train.csv"));
    const auto train = read_reduced(out_path(cfg, "reduced_train.csv"));
    if (train.labels.empty() || k.row_ids != train.ids || k.col_ids != train.ids)
      throw DataError("kernel_train.csv does not match reduced_train.csv");
    return train_model(cfg, k.values, train.labels);
  });
  svm::save_model(out_path(cfg, "model.csv"), model, artifact_header(cfg));
}

Evaluation stage_evaluate(const PipelineConfig& cfg) {
  const Prepared data = prepare(cfg);
  const auto model = in_stage("evaluate", [&] { return svm::load_model(out_path(cfg, "model.csv")); });
  const auto cross = in_stage("evaluate", [&] { return svm::read_kernel_csv(out_path(cfg, "kernel_cross.csv")); });
  if (cross.row_ids != data.split.test_indices)
    throw DataError("evaluate: kernel_cross.csv rows do not match the configured test split");
  std::size_t n_selected = data.source.n_genes();
  if (cfg.use_selection)
    n_selected = in_stage("evaluate", [&] {
      return read_mask(out_path(cfg, "mask.csv"), data.source.n_genes()).selected_count();
    });
  const Evaluation ev =
      in_stage("evaluate", [&] { return evaluate(model, cross.values, data.split.test.labels); });
  text::write_file(out_path(cfg, "metrics.json"),
                   metrics_json(cfg, cfg.kernel, cfg.use_selection, n_selected, model, ev));
  metrics::write_roc_csv(out_path(cfg, "roc.csv"), ev.roc, artifact_header(cfg));
  return ev;
}

}  // namespace hawkqk::pipeline
