#include <gtest/gtest.h>

#include <set>

#include "hawkqk/config.hpp"
#include "hawkqk/error.hpp"
#include "hawkqk/pipeline.hpp"
#include "hawkqk/synthetic.hpp"
#include "hawkqk/text.hpp"
#include "oracles.hpp"

using namespace hawkqk;
using namespace hawkqk::pipeline;

namespace {

// Two Gaussian blobs: every gene is shifted by +-shift/2 with unit noise.
LabeledDataset blobs(std::size_t per_class, std::size_t genes, double shift, std::uint64_t seed) {
  synthetic::PlantedSpec spec;
  spec.n_positive = per_class;
  spec.n_negative = per_class;
  spec.n_informative = genes;
  spec.n_noise = 0;
  spec.shift = shift;
  spec.seed = seed;
  return synthetic::make_planted(spec).data;
}

PipelineConfig config(const std::vector<std::string>& assignments) {
  Settings s;
  for (const auto& a : assignments) s.assign(a);
  return resolve(s);
}

struct Workspace {
  std::filesystem::path dir;
  std::filesystem::path data;
};

Workspace workspace(const std::string& name, const LabeledDataset& ds) {
  Workspace w;
  w.dir = oracle::scratch_dir("pipeline_" + name);
  w.data = w.dir / "data.csv";
  write_csv(w.data, ds);
  return w;
}

const std::vector<std::string> kSmallRun = {"pca.k=2", "hho.n=4", "hho.t=5", "qk.reps=2",
                                            "scale.hi=1"};

std::vector<std::string> with(std::vector<std::string> base, const std::vector<std::string>& more) {
  base.insert(base.end(), more.begin(), more.end());
  return base;
}

}  // namespace

// ---- configuration ----

TEST(Config, DefaultsAndOverrides) {
  const auto d = config({});
  EXPECT_EQ(d.pca_k, 20u);
  EXPECT_EQ(d.reps, 3u);
  EXPECT_EQ(d.kernel, "zz");
  EXPECT_EQ(d.shots.shots, 100u);
  EXPECT_EQ(d.shots.seed, 10598u);
  EXPECT_EQ(d.fitness.alpha, 0.99);
  EXPECT_EQ(d.order, StageOrder::smote_then_pca);

  const auto c = config({"seed=5", "pca.k=4", "qk.map=pauli_zyy", "hho.bounds=-3,2", "hho.transfer=v",
                         "pipeline.order=pca_then_smote", "smote.targets.tumor=49", "svm.c=2.5",
                         "qk.mode=sampled", "hho.folds=3"});
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.pca_k, 4u);
  EXPECT_EQ(c.kernel, "pauli_zyy");
  EXPECT_EQ(c.hho.lower_bound, -3.0);
  EXPECT_EQ(c.hho.upper_bound, 2.0);
  EXPECT_EQ(c.transfer, hho::TransferKind::v_shaped);
  EXPECT_EQ(c.order, StageOrder::pca_then_smote);
  EXPECT_EQ(c.smote_targets.at("tumor"), 49u);
  EXPECT_EQ(c.svm.c, 2.5);
  EXPECT_EQ(c.mode, qk::KernelMode::sampled);
  EXPECT_EQ(c.fitness.folds, 3u);
}

TEST(Config, StageSeedsFollowMasterSeedUnlessSet) {
  const auto a = config({"seed=1"}), b = config({"seed=2"});
  EXPECT_NE(a.split_seed, b.split_seed);
  EXPECT_NE(a.hho.seed, b.hho.seed);
  EXPECT_NE(a.split_seed, a.smote_seed);
  EXPECT_EQ(config({"seed=1", "split.seed=77"}).split_seed, 77u);
  EXPECT_EQ(a.shots.seed, b.shots.seed);
}

TEST(Config, ParsingRules) {
  const auto s = Settings::parse("# comment\n\nseed = 4\npca.k=3\npca.k=6\n");
  EXPECT_EQ(s.entries().at("seed"), "4");
  EXPECT_EQ(s.entries().at("pca.k"), "6");
  Settings merged = s;
  merged.merge(Settings::parse("seed=9"));
  EXPECT_EQ(resolve(merged).seed, 9u);
}

TEST(Config, ErrorsAreConfigErrors) {
  EXPECT_THROW(config({"no.such.key=1"}), ConfigError);
  EXPECT_THROW(config({"pca.k=abc"}), ConfigError);
  EXPECT_THROW(config({"pca.k=0"}), ConfigError);
  EXPECT_THROW(config({"qk.map=xyz"}), ConfigError);
  EXPECT_THROW(config({"qk.entanglement=full"}), ConfigError);
  EXPECT_THROW(config({"split.test_fraction=1.5"}), ConfigError);
  EXPECT_THROW(config({"hho.bounds=2,1"}), ConfigError);
  EXPECT_THROW(config({"svm.c=-1"}), ConfigError);
  EXPECT_THROW(config({"hho.alpha=2"}), ConfigError);
  Settings s;
  EXPECT_THROW(s.assign("missing-equals"), ConfigError);
  EXPECT_THROW(Settings::load("/nonexistent/run.cfg"), ConfigError);
}

TEST(Config, HashIgnoresRuntimeOnlyKeys) {
  const auto a = config({"seed=3", "output.dir=/tmp/a", "threads=1"});
  const auto b = config({"seed=3", "output.dir=/tmp/b", "threads=4", "qk.memory_mb=16"});
  const auto c = config({"seed=4"});
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(c));
  EXPECT_EQ(artifact_header(a), "# config_hash=" + config_hash(a));
  for (const auto& [key, value] : describe(a)) EXPECT_TRUE(known_keys().count(key) || key.rfind("smote.targets.", 0) == 0) << key;
}

// ---- stages ----

TEST(Reduce, ShapesIdsAndPadding) {
  const auto ds = blobs(10, 6, 3.0, 1);
  auto cfg = config({"pca.k=4"});
  const auto prep = prepare(cfg, ds);
  hho::FeatureMask one(6);
  one.set(2);
  const auto r = reduce(cfg, prep.split.train, prep.split.train_indices, prep.split.test.features,
                        prep.split.test_indices, ds.n_samples(), &one);
  EXPECT_EQ(r.n_genes, 1u);
  EXPECT_EQ(r.train_x.cols(), 4u);
  EXPECT_EQ(r.test_x.cols(), 4u);
  for (std::size_t i = 0; i < r.train_x.rows(); ++i)
    for (std::size_t c = 1; c < 4; ++c) EXPECT_EQ(r.train_x(i, c), 0.0);
  // Balanced SMOTE: train had 8/8 already, so nothing is added.
  EXPECT_EQ(r.n_synthetic, 0u);
  EXPECT_EQ(r.train_ids, prep.split.train_indices);
}

TEST(Reduce, SmoteTargetsByClassNameAndSyntheticIds) {
  synthetic::PlantedSpec spec;
  spec.n_positive = 16;
  spec.n_negative = 8;
  spec.n_informative = 3;
  spec.n_noise = 5;
  const auto ds = synthetic::make_planted(spec).data;
  for (const char* order : {"smote_then_pca", "pca_then_smote"}) {
    auto cfg = config({"pca.k=3", "smote.targets.pos=14", "smote.targets.neg=10",
                       std::string("pipeline.order=") + order});
    const auto prep = prepare(cfg, ds);
    const auto r = reduce(cfg, prep.split.train, prep.split.train_indices, prep.split.test.features,
                          prep.split.test_indices, ds.n_samples(), nullptr);
    std::size_t pos = 0;
    for (int y : r.train_y) pos += y == 1;
    EXPECT_EQ(pos, 14u);
    EXPECT_EQ(r.train_y.size(), 24u);
    EXPECT_EQ(r.n_synthetic, 6u);
    for (std::size_t s = 0; s < 6; ++s) EXPECT_EQ(r.train_ids[18 + s], ds.n_samples() + s);
    for (double v : r.train_x.values()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, cfg.scale_hi);
    }
  }
}

TEST(RunFull, SeparableBlobsReachHighAccuracy) {
  const auto ds = blobs(20, 8, 4.0, 2);
  for (bool sel : {false, true}) {
    const auto cfg = config(with(kSmallRun, {"seed=3"}));
    const auto r = run_full(cfg, prepare(cfg, ds), sel);
    EXPECT_GE(r.evaluation.summary.accuracy, 0.9) << "selection=" << sel;
    EXPECT_EQ(r.kernels.train.rows(), r.reduced.train_x.rows());
    EXPECT_EQ(r.kernels.cross.rows(), 10u);
    EXPECT_EQ(r.use_selection, sel);
    EXPECT_EQ(r.selection.has_value(), sel);
  }
}

TEST(RunFull, DeterministicReport) {
  const auto ds = blobs(12, 6, 2.0, 3);
  const auto cfg = config(with(kSmallRun, {"seed=4"}));
  const auto a = run_full(cfg, prepare(cfg, ds), true);
  const auto b = run_full(cfg, prepare(cfg, ds), true);
  EXPECT_EQ(metrics_json(cfg, a.kernel, true, a.mask.selected_count(), a.model, a.evaluation),
            metrics_json(cfg, b.kernel, true, b.mask.selected_count(), b.model, b.evaluation));
  EXPECT_EQ(a.kernels.train, b.kernels.train);
  EXPECT_EQ(a.mask, b.mask);
}

TEST(RunFull, TestLabelsDoNotReachKernels) {
  const auto ds = blobs(12, 6, 2.0, 4);
  const auto cfg = config(with(kSmallRun, {"seed=5"}));
  const auto prep = prepare(cfg, ds);
  Prepared flipped = prep;
  for (auto& y : flipped.split.test.labels) y = -y;
  const auto a = run_full(cfg, prep, true);
  const auto b = run_full(cfg, flipped, true);
  EXPECT_EQ(a.mask, b.mask);
  EXPECT_EQ(a.reduced.train_x, b.reduced.train_x);
  EXPECT_EQ(a.reduced.test_x, b.reduced.test_x);
  EXPECT_EQ(a.kernels.train, b.kernels.train);
  EXPECT_EQ(a.kernels.cross, b.kernels.cross);
  EXPECT_EQ(a.evaluation.scores, b.evaluation.scores);
  EXPECT_NEAR(a.evaluation.summary.accuracy + b.evaluation.summary.accuracy, 1.0, 1e-12);
}

TEST(RunFull, SampledModeProducesQuantizedCrossKernel) {
  const auto ds = blobs(10, 4, 3.0, 5);
  const auto cfg = config(with(kSmallRun, {"qk.mode=sampled", "qk.shots=50"}));
  const auto r = run_full(cfg, prepare(cfg, ds), false);
  for (double v : r.kernels.cross.values()) EXPECT_NEAR(v * 50.0, std::round(v * 50.0), 1e-9);
  EXPECT_GE(oracle::min_eigenvalue(r.kernels.train), -1e-9);
}

TEST(CompareKernels, FourRowsOnSharedInput) {
  const auto ds = blobs(20, 8, 4.0, 6);
  const auto cfg = config(with(kSmallRun, {"seed=7", "selection.enabled=false"}));
  const auto runs = run_compare_kernels(cfg, prepare(cfg, ds));
  ASSERT_EQ(runs.size(), 4u);
  std::set<std::string> kernels;
  for (const auto& r : runs) {
    kernels.insert(r.kernel);
    EXPECT_EQ(r.input_hash, runs.front().input_hash);
    EXPECT_EQ(r.reduced.train_x, runs.front().reduced.train_x);
    EXPECT_GE(r.evaluation.summary.accuracy, 0.8) << r.kernel;
  }
  EXPECT_EQ(kernels, (std::set<std::string>{"z", "zz", "pauli_zyy", "rbf"}));

  const auto dir = oracle::scratch_dir("compare");
  write_compare_csv(dir / "compare.csv", runs, artifact_header(cfg));
  const auto body = oracle::slurp(dir / "compare.csv");
  std::size_t lines = 0;
  for (char c : body) lines += c == '\n';
  EXPECT_EQ(lines, 6u);  // comment, header, four rows
}

TEST(Artifacts, MaskAndReducedRoundTrip) {
  const auto dir = oracle::scratch_dir("artifacts");
  hho::FeatureMask m(std::vector<std::uint8_t>{1, 0, 0, 1, 1});
  write_mask(dir / "mask.csv", m, {"a", "b", "c", "d", "e"}, "# h");
  EXPECT_EQ(read_mask(dir / "mask.csv", 5), m);
  EXPECT_THROW(read_mask(dir / "mask.csv", 6), DataError);
  const auto body = oracle::slurp(dir / "mask.csv");
  std::size_t lines = 0;
  for (char c : body) lines += c == '\n';
  EXPECT_EQ(lines, 5u + 2u);

  const auto x = Matrix::from_rows({{0.1, 0.2}, {0.3, 1.0 / 3.0}});
  const std::vector<int> y{1, -1};
  write_reduced(dir / "r.csv", {4, 9}, x, &y, "# h");
  const auto t = read_reduced(dir / "r.csv");
  EXPECT_EQ(t.ids, (std::vector<std::size_t>{4, 9}));
  EXPECT_EQ(t.x, x);
  EXPECT_EQ(t.labels, y);
}

TEST(Stages, StagewiseMatchesRunAll) {
  const auto ds = blobs(12, 10, 2.5, 7);
  const auto w = workspace("stagewise", ds);
  const auto base = with(kSmallRun, {"seed=8", "data.path=" + w.data.string(), "data.positive_label=pos"});

  auto staged = config(with(base, {"output.dir=" + (w.dir / "staged").string()}));
  std::filesystem::create_directories(staged.output_dir);
  stage_select(staged);
  stage_reduce(staged);
  stage_kernel(staged);
  stage_train(staged);
  stage_evaluate(staged);

  auto whole = config(with(base, {"output.dir=" + (w.dir / "whole").string()}));
  std::filesystem::create_directories(whole.output_dir);
  write_run_artifacts(whole, run_full(whole, whole.use_selection));

  for (const char* f : {"metrics.json", "mask.csv", "kernel_train.csv", "kernel_cross.csv", "model.csv",
                        "roc.csv", "reduced_train.csv", "reduced_test.csv"})
    EXPECT_EQ(oracle::slurp(staged.output_dir / f), oracle::slurp(whole.output_dir / f)) << f;
}

TEST(Stages, MissingArtifactsAndDataAreReported) {
  const auto ds = blobs(6, 4, 2.0, 8);
  const auto w = workspace("missing", ds);
  auto cfg = config({"data.path=" + w.data.string(), "data.positive_label=pos",
                     "output.dir=" + (w.dir / "empty").string()});
  std::filesystem::create_directories(cfg.output_dir);
  try {
    stage_train(cfg);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("train: ", 0), 0u) << e.what();
  }
  auto nodata = config({"data.path=/nonexistent.csv"});
  EXPECT_THROW(prepare(nodata), DataError);
  EXPECT_THROW(prepare(config({})), ConfigError);
}

TEST(Metrics, JsonHasExpectedKeys) {
  const auto ds = blobs(10, 4, 3.0, 9);
  const auto cfg = config(with(kSmallRun, {"selection.enabled=false"}));
  const auto r = run_full(cfg, prepare(cfg, ds), false);
  const auto j = metrics_json(cfg, r.kernel, false, r.mask.selected_count(), r.model, r.evaluation);
  for (const char* key : {"\"accuracy\"", "\"auc\"", "\"config_hash\"", "\"recall\"", "\"specificity\"",
                          "\"f1\"", "\"precision\"", "\"tp\"", "\"n_support\""})
    EXPECT_NE(j.find(key), std::string::npos) << key;
}
