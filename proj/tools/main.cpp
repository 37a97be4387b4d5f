#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hawkqk/config.hpp"
#include "hawkqk/error.hpp"
#include "hawkqk/pipeline.hpp"
#include "hawkqk/synthetic.hpp"
#include "hawkqk/text.hpp"

namespace {

using namespace hawkqk;
using hawkqk::text::format_double;

struct CommonOptions {
  std::string config;
  std::vector<std::string> overrides;
  std::string data;
  std::string output;
  std::string seed;
  std::string threads;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config, "key=value config file");
  cmd->add_option("-s,--set", o.overrides, "override a config key (key=value), repeatable");
  cmd->add_option("-d,--data", o.data, "input CSV (data.path)");
  cmd->add_option("-o,--output", o.output, "artifact directory (output.dir)");
  cmd->add_option("--seed", o.seed, "master seed (seed)");
  cmd->add_option("-j,--threads", o.threads, "worker threads (threads)");
}

// Config file first, then named flags, then --set in order.
pipeline::PipelineConfig load_config(const CommonOptions& o) {
  pipeline::Settings s;
  if (!o.config.empty()) s = pipeline::Settings::load(o.config);
  if (!o.data.empty()) s.set("data.path", o.data);
  if (!o.output.empty()) s.set("output.dir", o.output);
  if (!o.seed.empty()) s.set("seed", o.seed);
  if (!o.threads.empty()) s.set("threads", o.threads);
  for (const auto& a : o.overrides) s.assign(a);
  return pipeline::resolve(s);
}

void print_scores(const std::string& label, const pipeline::Evaluation& ev) {
  const auto& s = ev.summary;
  std::cout << label << " accuracy=" << format_double(s.accuracy)
            << " precision=" << format_double(s.precision) << " recall=" << format_double(s.recall)
            << " f1=" << format_double(s.f1) << " auc=" << format_double(ev.roc.auc) << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"Gene selection and quantum-kernel SVM classification"};
  app.require_subcommand(1);

  CommonOptions common;
  auto* select = app.add_subcommand("select", "BHHO gene selection -> mask.csv, convergence.csv");
  auto* reduce = app.add_subcommand("reduce", "mask, SMOTE, PCA, scaling -> reduced_*.csv");
  auto* kernel = app.add_subcommand("kernel", "kernel matrices -> kernel_train.csv, kernel_cross.csv");
  auto* train = app.add_subcommand("train", "SMO on the train kernel -> model.csv");
  auto* evaluate = app.add_subcommand("evaluate", "test metrics -> metrics.json, roc.csv");
  auto* run_all = app.add_subcommand("run-all", "every stage in one process");
  auto* compare = app.add_subcommand("compare-kernels", "z, zz, pauli_zyy and rbf on one split -> compare.csv");
  for (auto* cmd : {select, reduce, kernel, train, evaluate, run_all, compare}) add_common(cmd, common);

  auto* keys = app.add_subcommand("keys", "list config keys");

  synthetic::PlantedSpec planted;
  std::string planted_model = "mean_shift";
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "write a planted-signal dataset CSV");
  synth->add_option("--out", synth_out, "output CSV")->required();
  synth->add_option("--model", planted_model, "mean_shift or linear_rule");
  synth->add_option("--positive", planted.n_positive, "positive samples");
  synth->add_option("--negative", planted.n_negative, "negative samples");
  synth->add_option("--informative", planted.n_informative, "informative genes");
  synth->add_option("--noise", planted.n_noise, "noise genes");
  synth->add_option("--shift", planted.shift, "class mean separation (mean_shift)");
  synth->add_option("--margin", planted.margin, "minimum normalized margin (linear_rule)");
  synth->add_option("--informative-sd", planted.informative_sd, "informative gene spread (linear_rule)");
  synth->add_option("--noise-sd", planted.noise_sd, "noise gene spread");
  synth->add_option("--seed", planted.seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (keys->parsed()) {
    for (const auto& [k, help] : pipeline::known_keys()) std::cout << k << "\t" << help << '\n';
    return 0;
  }
  if (synth->parsed()) {
    planted.model = synthetic::parse_planted_model(planted_model);
    const auto ds = synthetic::make_planted(planted);
    write_csv(synth_out, ds.data);
    std::cout << "informative";
    for (std::size_t g : ds.informative) std::cout << ' ' << ds.data.gene_names[g];
    std::cout << '\n';
    return 0;
  }

  const auto cfg = load_config(common);
  if (select->parsed()) {
    pipeline::stage_select(cfg);
    std::cout << "wrote " << (cfg.output_dir / "mask.csv").string() << '\n';
  } else if (reduce->parsed()) {
    pipeline::stage_reduce(cfg);
    std::cout << "wrote " << (cfg.output_dir / "reduced_train.csv").string() << '\n';
  } else if (kernel->parsed()) {
    pipeline::stage_kernel(cfg);
    std::cout << "wrote " << (cfg.output_dir / "kernel_train.csv").string() << '\n';
  } else if (train->parsed()) {
    pipeline::stage_train(cfg);
    std::cout << "wrote " << (cfg.output_dir / "model.csv").string() << '\n';
  } else if (evaluate->parsed()) {
    print_scores(cfg.kernel, pipeline::stage_evaluate(cfg));
  } else if (run_all->parsed()) {
    const auto report = pipeline::run_full(cfg, cfg.use_selection);
    pipeline::write_run_artifacts(cfg, report);
    std::cout << "genes=" << report.mask.selected_count() << '/' << report.n_source_genes
              << " qubits=" << report.reduced.train_x.cols()
              << " train=" << report.reduced.train_x.rows()
              << " test=" << report.reduced.test_x.rows() << '\n';
    print_scores(report.kernel, report.evaluation);
  } else if (compare->parsed()) {
    const auto runs = pipeline::run_compare_kernels(cfg);
    pipeline::write_compare_csv(cfg.output_dir / "compare.csv", runs, pipeline::artifact_header(cfg));
    for (const auto& r : runs) print_scores(r.kernel, r.evaluation);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hawkqk::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
