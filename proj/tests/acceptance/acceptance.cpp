// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Optional arguments select criteria by
// number, e.g. `acceptance 3 7`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hawkqk/bhho.hpp"
#include "hawkqk/config.hpp"
#include "hawkqk/feature_map.hpp"
#include "hawkqk/kernel.hpp"
#include "hawkqk/metrics.hpp"
#include "hawkqk/pca.hpp"
#include "hawkqk/pipeline.hpp"
#include "hawkqk/smote.hpp"
#include "hawkqk/statevector.hpp"
#include "hawkqk/svm.hpp"
#include "hawkqk/synthetic.hpp"
#include "oracles.hpp"

using namespace hawkqk;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

using Criterion = std::function<void(Outcome&)>;

std::vector<double> uniform_point(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows) { return Matrix::from_rows(rows); }

constexpr qk::FeatureMapKind kMaps[] = {qk::FeatureMapKind::z, qk::FeatureMapKind::zz,
                                        qk::FeatureMapKind::pauli_z_yy};

oracle::MapKind oracle_kind(qk::FeatureMapKind k) {
  switch (k) {
    case qk::FeatureMapKind::z: return oracle::MapKind::z;
    case qk::FeatureMapKind::zz: return oracle::MapKind::zz;
    case qk::FeatureMapKind::pauli_z_yy: return oracle::MapKind::pauli_zyy;
  }
  return oracle::MapKind::z;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1: statevector vs dense unitary ----
void simulator_equivalence(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  double worst = 0.0;
  std::size_t cases = 0;
  for (auto kind : kMaps)
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t reps = 1; reps <= 3; ++reps)
        for (int t = 0; t < 50; ++t) {
          const auto x = uniform_point(n, rng, 0.0, 2.0 * oracle::kPi);
          const auto sv = qk::feature_state({kind, n, reps}, x);
          const oracle::CVec ref = oracle::feature_map_unitary(oracle_kind(kind), x, reps) * oracle::zero_state(n);
          for (std::size_t i = 0; i < sv.dimension(); ++i)
            worst = std::max(worst, std::abs(sv.amplitudes()[i] - ref(i)));
          ++cases;
        }
  const double secs = seconds_since(t0);
  out.require(worst <= 1e-10, "amplitude deviation above 1e-10");
  out.require(secs < 10.0, "runtime above 10 s");
  out.detail << cases << " states, max |diff| " << worst << ", " << secs << " s";
}

// ---- 2: kernel axioms ----
void kernel_axioms(Outcome& out) {
  std::mt19937_64 rng(2);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back(uniform_point(4, rng, 0.0, oracle::kPi));
  const Matrix x = rows_to_matrix(rows);
  double worst_sym = 0.0, worst_diag = 0.0, min_eig = 1.0, worst_oracle = 0.0;
  for (auto kind : kMaps) {
    const qk::FeatureMapSpec spec{kind, 4, 2};
    const Matrix k = qk::kernel_matrix(x, spec);
    worst_sym = std::max(worst_sym, asymmetry(k));
    for (std::size_t i = 0; i < 10; ++i) worst_diag = std::max(worst_diag, std::abs(k(i, i) - 1.0));
    min_eig = std::min(min_eig, oracle::min_eigenvalue(k));
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j)
        worst_oracle = std::max(worst_oracle,
                                std::abs(k(i, j) - oracle::dense_kernel(oracle_kind(kind), rows[i], rows[j], 2)));
  }
  // Z map: product of one-qubit kernels.
  double worst_factor = 0.0;
  const qk::FeatureMapSpec z4{qk::FeatureMapKind::z, 4, 2}, z1{qk::FeatureMapKind::z, 1, 2};
  const Matrix kz = qk::kernel_matrix(x, z4);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) {
      double prod = 1.0;
      for (std::size_t q = 0; q < 4; ++q) {
        const double a = rows[i][q], b = rows[j][q];
        prod *= qk::exact_kernel_entry(std::span<const double>(&a, 1), std::span<const double>(&b, 1), z1);
      }
      worst_factor = std::max(worst_factor, std::abs(kz(i, j) - prod));
    }
  out.require(worst_sym == 0.0, "asymmetric kernel");
  out.require(worst_diag <= 1e-12, "diagonal differs from 1");
  out.require(min_eig >= -1e-9, "negative eigenvalue below -1e-9");
  out.require(worst_factor <= 1e-9, "Z kernel does not factorize");
  out.require(worst_oracle <= 1e-10, "entry differs from dense oracle");
  out.detail << "max asym " << worst_sym << ", max |diag-1| " << worst_diag << ", min eig " << min_eig
             << ", Z factor err " << worst_factor << ", oracle err " << worst_oracle;
}

// ---- 3: shot estimator calibration ----
void shot_calibration(Outcome& out) {
  const qk::FeatureMapSpec spec{qk::FeatureMapKind::zz, 3, 3};
  const std::size_t shots = 100, seeds = 500;
  std::mt19937_64 rng(3);
  double worst_z = 0.0;
  bool quantized = true;
  for (int pair = 0; pair < 5; ++pair) {
    const auto x = uniform_point(3, rng, 0.0, oracle::kPi);
    // Growing perturbations spread the exact values over (0, 1].
    auto z = x;
    const double scale = 0.08 * pair;
    for (auto& v : z) v += scale * std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    const double exact = qk::exact_kernel_entry(x, z, spec);
    double sum = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
      const double est = qk::sampled_kernel_entry(x, z, spec, {shots, 10598 + s});
      const double count = est * static_cast<double>(shots);
      quantized = quantized && std::abs(count - std::round(count)) < 1e-9;
      sum += est;
    }
    const double mean = sum / static_cast<double>(seeds);
    const double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(shots * seeds));
    const double dev = std::abs(mean - exact);
    const double z_score = sigma > 0.0 ? dev / sigma : (dev == 0.0 ? 0.0 : INFINITY);
    worst_z = std::max(worst_z, z_score);
    out.detail << "p=" << exact << " mean=" << mean << "; ";
  }
  out.require(worst_z <= 3.0, "mean outside 3 sigma");
  out.require(quantized, "estimate not a multiple of 1/shots");
  out.detail << "worst |z| " << worst_z;
}

// ---- 4: SMO vs projected-gradient QP oracle ----
void smo_correctness(Outcome& out) {
  std::mt19937_64 rng(4);
  const double tol = 1e-9;
  double worst_obj = 0.0, worst_kkt = 0.0, worst_eq = 0.0;
  bool box = true;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 8;  // 3..10
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = i % 2 == 0 ? 1 : -1;
    Matrix x = oracle::random_matrix(n, 3, rng);
    for (std::size_t i = 0; i < n; ++i) x(i, 0) += 0.4 * y[i];
    Matrix k;
    switch (trial % 3) {
      case 0: k = multiply_transposed(x, x); break;
      case 1: k = svm::rbf_kernel_matrix(x, x, 0.7); break;
      default: {
        Matrix phases(n, 3);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < 3; ++j) phases(i, j) = (x(i, j) + 1.0) * oracle::kPi / 2.0;
        k = qk::kernel_matrix(phases, {qk::FeatureMapKind::zz, 3, 2});
      }
    }
    const double c = trial % 2 == 0 ? 0.5 : 5.0;
    const auto m = svm::smo_train(k, y, {c, tol, 0});
    const auto a = oracle::solve_dual_qp(k, y, c);
    worst_obj = std::max(worst_obj, std::abs(svm::dual_objective(m, k) - oracle::dual_value(a, k, y)));
    worst_kkt = std::max(worst_kkt, svm::max_kkt_violation(m, k));
    double eq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      box = box && m.alphas[i] >= 0.0 && m.alphas[i] <= c;
      eq += y[i] * m.alphas[i];
    }
    worst_eq = std::max(worst_eq, std::abs(eq));
  }
  out.require(worst_obj <= 1e-6, "dual objective differs from oracle");
  out.require(worst_kkt < tol, "KKT residual not below tol");
  out.require(box, "box constraint violated");
  out.require(worst_eq <= 1e-12, "equality constraint violated");
  out.detail << "tol " << tol << ", max |obj diff| " << worst_obj << ", max KKT " << worst_kkt
             << ", max |y.a| " << worst_eq;
}

// ---- 5: planted-feature recovery ----
void planted_recovery(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  bool monotone = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    synthetic::PlantedSpec sp;
    sp.n_positive = 100;
    sp.n_negative = 100;
    sp.n_informative = 5;
    sp.n_noise = 45;
    sp.model = synthetic::PlantedModel::linear_rule;
    sp.margin = 0.5;
    sp.informative_sd = 3.0;
    sp.seed = 100 + seed;
    const auto pd = synthetic::make_planted(sp);
    hho::HhoParams p;
    p.n_hawks = 10;
    p.max_iters = 50;
    p.dimension = 50;
    p.seed = seed;
    hho::FitnessConfig fc;
    fc.seed = seed;
    const auto r = hho::run_bhho(pd.data, p, fc, hho::TransferKind::s_shaped);
    std::size_t hits = 0;
    for (auto g : pd.informative) hits += r.best_mask.test(g);
    for (std::size_t t = 1; t < r.convergence.size(); ++t)
      monotone = monotone && r.convergence[t] <= r.convergence[t - 1];
    out.require(hits >= 4, "seed " + std::to_string(seed) + " recovered fewer than 4 genes");
    out.detail << "seed " << seed << ": " << hits << "/5 of " << r.best_mask.selected_count() << "; ";
  }
  const double secs = seconds_since(t0);
  out.require(monotone, "convergence curve increases");
  out.require(secs < 60.0, "runtime above 60 s");
  out.detail << secs << " s";
}

// ---- 6: SMOTE counts and convexity ----
void smote_distribution(Outcome& out) {
  synthetic::PlantedSpec sp;
  sp.n_positive = 40;
  sp.n_negative = 22;
  sp.n_informative = 20;
  sp.n_noise = 1980;
  sp.seed = 6;
  const auto ds = synthetic::make_planted(sp).data;
  smote::SmoteConfig cfg;
  cfg.target_counts = {{1, 49}, {-1, 31}};
  cfg.seed = 6;
  const auto r = smote::smote_oversample_traced(ds, cfg);
  const std::size_t n0 = ds.n_samples();
  out.require(r.data.count(1) == 49 && r.data.count(-1) == 31, "class counts differ from 49/31");
  out.require(r.origins.size() == r.data.n_samples() - n0, "origin count mismatch");
  double worst = 0.0;
  for (std::size_t s = 0; s < r.origins.size(); ++s) {
    const auto& o = r.origins[s];
    const auto row = r.data.features.row(n0 + s);
    const auto base = ds.features.row(o.base), nb = ds.features.row(o.neighbor);
    out.require(ds.labels[o.base] == r.data.labels[n0 + s] && ds.labels[o.neighbor] == ds.labels[o.base],
                "neighbor from another class");
    out.require(o.delta >= 0.0 && o.delta <= 1.0, "delta outside [0, 1]");
    // Independent segment test: project onto base->neighbor, check the residual.
    double num = 0.0, den = 0.0;
    for (std::size_t g = 0; g < row.size(); ++g) {
      num += (row[g] - base[g]) * (nb[g] - base[g]);
      den += (nb[g] - base[g]) * (nb[g] - base[g]);
    }
    const double t = den > 0.0 ? num / den : 0.0;
    out.require(t >= -1e-9 && t <= 1.0 + 1e-9, "row outside the segment");
    for (std::size_t g = 0; g < row.size(); ++g)
      worst = std::max(worst, std::abs(row[g] - (base[g] + t * (nb[g] - base[g]))));
    // Neighbor is one of the 5 nearest same-class rows.
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t i = 0; i < n0; ++i)
      if (i != o.base && ds.labels[i] == ds.labels[o.base])
        d.emplace_back(squared_distance(base, ds.features.row(i)), i);
    std::sort(d.begin(), d.end());
    bool near = false;
    for (std::size_t i = 0; i < 5; ++i) near = near || d[i].second == o.neighbor;
    out.require(near, "neighbor not among the 5 nearest");
  }
  out.require(worst <= 1e-9, "convex residual above 1e-9");
  out.detail << "counts " << r.data.count(1) << "/" << r.data.count(-1) << ", " << r.origins.size()
             << " synthetic rows, max residual " << worst;
}

// ---- 7: PCA ----
void pca_checks(Outcome& out) {
  std::mt19937_64 rng(7);
  const Matrix x = oracle::random_matrix(6, 40, rng);
  const std::size_t k = 5;
  const auto m = pca::pca_fit(x, k);
  double worst_ortho = 0.0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      worst_ortho = std::max(worst_ortho, std::abs(dot(m.components.row(a), m.components.row(b)) - (a == b)));
  // Direct 40 x 40 covariance through Eigen.
  Eigen::MatrixXd e = oracle::to_eigen(x);
  e.rowwise() -= e.colwise().mean();
  const Eigen::MatrixXd cov = e.transpose() * e / 5.0;
  Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov).eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  double worst_eig = 0.0;
  for (std::size_t j = 0; j < k; ++j) worst_eig = std::max(worst_eig, std::abs(m.explained_variance[j] - ev(j)));
  // Variance of each projected column.
  const Matrix z = pca::pca_transform(m, x);
  double worst_var = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const auto col = z.column(j);
    double mean = 0.0;
    for (double v : col) mean += v / 6.0;
    double var = 0.0;
    for (double v : col) var += (v - mean) * (v - mean) / 5.0;
    worst_var = std::max(worst_var, std::abs(var - m.explained_variance[j]));
  }
  out.require(worst_ortho <= 1e-10, "components not orthonormal");
  out.require(worst_eig <= 1e-8, "Gram-trick eigenvalues differ from covariance");
  out.require(worst_var <= 1e-8, "projected variance differs from explained variance");
  out.detail << "ortho err " << worst_ortho << ", eigenvalue err " << worst_eig << ", variance err " << worst_var;
}

// ---- 8: selection vs no selection, end to end ----
void end_to_end(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  double sum_sel = 0.0, sum_all = 0.0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    synthetic::PlantedSpec sp;
    sp.n_positive = 30;
    sp.n_negative = 30;
    sp.n_informative = 5;
    sp.n_noise = 195;
    sp.shift = 3.0;
    sp.noise_sd = 2.0;
    sp.seed = 1000 + s;
    const auto ds = synthetic::make_planted(sp).data;
    pipeline::Settings settings;
    settings.set("seed", std::to_string(s));
    settings.set("pca.k", "4");
    settings.set("qk.map", "zz");
    settings.set("qk.mode", "exact");
    settings.set("hho.bounds", "-6,6");
    settings.set("scale.hi", "1");
    const auto cfg = pipeline::resolve(settings);
    const auto prep = pipeline::prepare(cfg, ds);
    const double sel = pipeline::run_full(cfg, prep, true).evaluation.summary.accuracy;
    const double all = pipeline::run_full(cfg, prep, false).evaluation.summary.accuracy;
    sum_sel += sel;
    sum_all += all;
    out.detail << "seed " << s << ": " << sel << " vs " << all << "; ";
  }
  const double secs = seconds_since(t0);
  const double mean_sel = sum_sel / 3.0, mean_all = sum_all / 3.0;
  out.require(mean_sel >= mean_all, "selection accuracy below no-selection accuracy");
  out.require(mean_sel >= 0.85, "selection accuracy below 0.85");
  out.require(secs < 300.0, "runtime above 5 min");
  out.detail << "mean " << mean_sel << " vs " << mean_all << ", " << secs << " s";
}

// ---- 9: metrics ----
void metrics_checks(Outcome& out) {
  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    std::uniform_int_distribution<std::size_t> u(1, 30);
    const metrics::ConfusionMatrix c{u(rng), u(rng), u(rng), u(rng)};
    // Expand into label vectors and recount.
    std::vector<int> yt, yp;
    auto push = [&](std::size_t count, int a, int b) {
      for (std::size_t i = 0; i < count; ++i) {
        yt.push_back(a);
        yp.push_back(b);
      }
    };
    push(c.tp, 1, 1);
    push(c.tn, -1, -1);
    push(c.fp, -1, 1);
    push(c.fn, 1, -1);
    out.require(metrics::confusion(yt, yp) == c, "confusion recount differs");
    const double tp = c.tp, tn = c.tn, fp = c.fp, fn = c.fn;
    const double acc = (tp + tn) / (tp + tn + fp + fn);
    const double prec = tp / (tp + fp);
    const double rec = tp / (tp + fn);
    const double tnr = tn / (tn + fp);
    const double f1 = 2.0 * prec * rec / (prec + rec);
    const double fpr = fp / (fp + tn);
    const auto s = metrics::scores_from_confusion(c);
    for (auto [got, want] : {std::pair{s.accuracy, acc}, {s.precision, prec}, {s.recall, rec},
                             {s.specificity, tnr}, {s.f1, f1}, {s.fpr, fpr}})
      worst = std::max(worst, std::abs(got - want));
  }
  out.require(worst <= 1e-12, "score differs from hand arithmetic");
  std::size_t auc_cases = 0;
  bool auc_exact = true;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + t % 11;
    std::vector<int> y(n);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = i == 0 ? 1 : i == 1 ? -1 : (rng() % 2 ? 1 : -1);
      s[i] = static_cast<double>(rng() % 6) / 5.0;
    }
    auc_exact = auc_exact && metrics::rank_auc(y, s) == oracle::all_pairs_auc(y, s);
    ++auc_cases;
  }
  out.require(auc_exact, "rank AUC differs from all-pairs concordance");
  out.detail << "10 confusion matrices, max score err " << worst << "; " << auc_cases
             << " AUC cases with ties, exact match";
}

// ---- 10: determinism ----
void determinism(Outcome& out) {
  synthetic::PlantedSpec sp;
  sp.n_positive = 16;
  sp.n_negative = 12;
  sp.n_informative = 4;
  sp.n_noise = 12;
  sp.shift = 2.5;
  sp.seed = 10;
  const auto dir = oracle::scratch_dir("acceptance_determinism");
  const auto data = dir / "data.csv";
  write_csv(data, synthetic::make_planted(sp).data);
  std::vector<std::string> files;
  for (const char* name : {"a", "b"}) {
    pipeline::Settings s;
    s.set("data.path", data.string());
    s.set("data.positive_label", "pos");
    s.set("pca.k", "3");
    s.set("hho.n", "6");
    s.set("hho.t", "10");
    s.set("qk.reps", "2");
    s.set("qk.mode", "sampled");
    s.set("output.dir", (dir / name).string());
    const auto cfg = pipeline::resolve(s);
    pipeline::write_run_artifacts(cfg, pipeline::run_full(cfg, cfg.use_selection));
    files.push_back(oracle::slurp(dir / name / "metrics.json"));
  }
  out.require(!files[0].empty(), "metrics.json missing");
  out.require(files[0] == files[1], "metrics.json differs between runs");
  out.detail << "metrics.json " << files[0].size() << " bytes, identical";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"simulator oracle equivalence", simulator_equivalence},
      {"kernel axioms", kernel_axioms},
      {"shot estimator calibration", shot_calibration},
      {"SMO correctness", smo_correctness},
      {"BHHO planted-feature recovery", planted_recovery},
      {"SMOTE distribution match", smote_distribution},
      {"PCA", pca_checks},
      {"end-to-end selection analogue", end_to_end},
      {"metrics", metrics_checks},
      {"determinism", determinism},
  };
  std::set<std::size_t> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::stoul(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!chosen.empty() && !chosen.count(i + 1)) continue;
    Outcome out;
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "exception: " << e.what();
    }
    failures += !out.pass;
    std::printf("%s  %2zu  %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
