#include "hawkqk/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "hawkqk/error.hpp"
#include "hawkqk/random.hpp"
#include "hawkqk/text.hpp"

namespace hawkqk::pipeline {

namespace {

constexpr std::string_view kTargetPrefix = "smote.targets.";

// Stage stream ids for seeds derived from the master seed.
constexpr std::uint64_t kSplitSeed = 0x53504c54;    // "SPLT"
constexpr std::uint64_t kSmoteSeed = 0x534d4f54;    // "SMOT"
constexpr std::uint64_t kHhoSeed = 0x4248484f;      // "BHHO"
constexpr std::uint64_t kFitnessSeed = 0x46495456;  // "FITV"
constexpr std::uint64_t kDefaultShotSeed = 10598;

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw ConfigError("config key '" + key + "': invalid value '" + value + "' (expected " +
                    expected + ")");
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto t = text::trim(v);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
    bad_value(key, v, "a non-negative integer");
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  double out = 0;
  if (!text::parse_double(text::trim(v), out) || !std::isfinite(out)) bad_value(key, v, "a number");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  const auto t = std::string(text::trim(v));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  bad_value(key, v, "true or false");
}

using Apply = std::function<void(PipelineConfig&, const std::string& key, const std::string& v)>;

struct KeyInfo {
  std::string help;
  Apply apply;
};

const std::map<std::string, KeyInfo>& table() {
  static const std::map<std::string, KeyInfo> t = {
      {"seed", {"master seed", [](auto& c, auto& k, auto& v) { c.seed = to_uint(k, v); }}},
      {"data.path", {"input CSV", [](auto& c, auto&, auto& v) { c.data_path = std::string(text::trim(v)); }}},
      {"data.label_column",
       {"label column name", [](auto& c, auto&, auto& v) { c.label_column = std::string(text::trim(v)); }}},
      {"data.label_index",
       {"label column index (overrides name)", [](auto& c, auto& k, auto& v) { c.label_index = to_uint(k, v); }}},
      {"data.positive_label",
       {"label text mapped to +1", [](auto& c, auto&, auto& v) { c.positive_label = std::string(text::trim(v)); }}},
      {"split.test_fraction",
       {"test share per class", [](auto& c, auto& k, auto& v) { c.test_fraction = to_real(k, v); }}},
      {"split.stratified", {"stratify by class", [](auto& c, auto& k, auto& v) { c.stratified = to_bool(k, v); }}},
      {"split.seed", {"split seed", [](auto& c, auto& k, auto& v) { c.split_seed = to_uint(k, v); }}},
      {"smote.enabled", {"oversample training data", [](auto& c, auto& k, auto& v) { c.smote_enabled = to_bool(k, v); }}},
      {"smote.k", {"SMOTE neighbors", [](auto& c, auto& k, auto& v) { c.smote_k = to_uint(k, v); }}},
      {"smote.seed", {"SMOTE seed", [](auto& c, auto& k, auto& v) { c.smote_seed = to_uint(k, v); }}},
      {"selection.enabled",
       {"run gene selection before reduction", [](auto& c, auto& k, auto& v) { c.use_selection = to_bool(k, v); }}},
      {"hho.n", {"number of hawks", [](auto& c, auto& k, auto& v) { c.hho.n_hawks = to_uint(k, v); }}},
      {"hho.t", {"iterations", [](auto& c, auto& k, auto& v) { c.hho.max_iters = to_uint(k, v); }}},
      {"hho.lb", {"lower position bound", [](auto& c, auto& k, auto& v) { c.hho.lower_bound = to_real(k, v); }}},
      {"hho.ub", {"upper position bound", [](auto& c, auto& k, auto& v) { c.hho.upper_bound = to_real(k, v); }}},
      {"hho.transfer",
       {"s or v", [](auto& c, auto& k, auto& v) {
          const auto t = text::trim(v);
          if (t == "s")
            c.transfer = hho::TransferKind::s_shaped;
          else if (t == "v")
            c.transfer = hho::TransferKind::v_shaped;
          else
            bad_value(k, v, "s or v");
        }}},
      {"hho.seed", {"BHHO seed", [](auto& c, auto& k, auto& v) { c.hho.seed = to_uint(k, v); }}},
      {"hho.alpha", {"error weight in fitness", [](auto& c, auto& k, auto& v) { c.fitness.alpha = to_real(k, v); }}},
      {"hho.evaluator",
       {"wrapper classifier (knn)", [](auto& c, auto& k, auto& v) {
          try {
            c.fitness.evaluator = hho::parse_evaluator(std::string(text::trim(v)));
          } catch (const std::invalid_argument&) {
            bad_value(k, v, "knn");
          }
        }}},
      {"hho.knn_k", {"neighbors of the wrapper vote", [](auto& c, auto& k, auto& v) { c.fitness.knn_k = to_uint(k, v); }}},
      {"hho.validation_fraction",
       {"wrapper validation share", [](auto& c, auto& k, auto& v) { c.fitness.validation_fraction = to_real(k, v); }}},
      {"hho.folds",
       {"0 = holdout split, k >= 2 = k-fold", [](auto& c, auto& k, auto& v) { c.fitness.folds = to_uint(k, v); }}},
      {"hho.bounds",
       {"lb,ub", [](auto& c, auto& k, auto& v) {
          const auto parts = text::split_csv_line(v);
          if (parts.size() != 2) bad_value(k, v, "lb,ub");
          c.hho.lower_bound = to_real(k, parts[0]);
          c.hho.upper_bound = to_real(k, parts[1]);
        }}},
      {"hho.fitness_seed",
       {"wrapper validation split seed", [](auto& c, auto& k, auto& v) { c.fitness.seed = to_uint(k, v); }}},
      {"pipeline.order",
       {"smote_then_pca or pca_then_smote", [](auto& c, auto& k, auto& v) {
          const auto t = text::trim(v);
          if (t == "smote_then_pca")
            c.order = StageOrder::smote_then_pca;
          else if (t == "pca_then_smote")
            c.order = StageOrder::pca_then_smote;
          else
            bad_value(k, v, "smote_then_pca or pca_then_smote");
        }}},
      {"pca.k", {"components = qubits", [](auto& c, auto& k, auto& v) { c.pca_k = to_uint(k, v); }}},
      {"scale.lo", {"phase range start", [](auto& c, auto& k, auto& v) { c.scale_lo = to_real(k, v); }}},
      {"scale.hi", {"phase range end", [](auto& c, auto& k, auto& v) { c.scale_hi = to_real(k, v); }}},
      {"qk.map",
       {"z, zz, pauli_zyy or rbf", [](auto& c, auto& k, auto& v) {
          const std::string t(text::trim(v));
          if (t == "rbf") {
            c.kernel = t;
            return;
          }
          try {
            c.kernel = qk::to_string(qk::parse_feature_map(t));
          } catch (const std::invalid_argument&) {
            bad_value(k, v, "z, zz, pauli_zyy or rbf");
          }
        }}},
      {"qk.reps", {"feature map depth", [](auto& c, auto& k, auto& v) { c.reps = to_uint(k, v); }}},
      {"qk.entanglement",
       {"linear", [](auto&, auto& k, auto& v) {
          if (text::trim(v) != "linear") bad_value(k, v, "linear");
        }}},
      {"qk.mode",
       {"exact or sampled", [](auto& c, auto& k, auto& v) {
          try {
            c.mode = qk::parse_kernel_mode(std::string(text::trim(v)));
          } catch (const std::invalid_argument&) {
            bad_value(k, v, "exact or sampled");
          }
        }}},
      {"qk.shots", {"shots per kernel entry", [](auto& c, auto& k, auto& v) { c.shots.shots = to_uint(k, v); }}},
      {"qk.seed", {"shot sampling seed", [](auto& c, auto& k, auto& v) { c.shots.seed = to_uint(k, v); }}},
      {"qk.repair_psd",
       {"clip negative eigenvalues of sampled kernels", [](auto& c, auto& k, auto& v) { c.repair_psd = to_bool(k, v); }}},
      {"qk.memory_mb",
       {"statevector cache budget", [](auto& c, auto& k, auto& v) { c.memory_budget = to_uint(k, v) << 20; }}},
      {"rbf.gamma", {"RBF width (0 = 1/k)", [](auto& c, auto& k, auto& v) { c.rbf_gamma = to_real(k, v); }}},
      {"svm.c", {"box constraint", [](auto& c, auto& k, auto& v) { c.svm.c = to_real(k, v); }}},
      {"svm.tol", {"KKT tolerance", [](auto& c, auto& k, auto& v) { c.svm.tol = to_real(k, v); }}},
      {"svm.max_passes",
       {"iteration cap in passes (0 = 10 n)", [](auto& c, auto& k, auto& v) { c.svm.max_passes = to_uint(k, v); }}},
      {"output.dir", {"artifact directory", [](auto& c, auto&, auto& v) { c.output_dir = std::string(text::trim(v)); }}},
      {"threads", {"worker threads", [](auto& c, auto& k, auto& v) { c.threads = static_cast<unsigned>(to_uint(k, v)); }}},
  };
  return t;
}

void validate(const PipelineConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) fail("split.test_fraction must be in (0, 1)");
  if (c.smote_k < 1) fail("smote.k must be at least 1");
  if (c.hho.n_hawks < 2) fail("hho.n must be at least 2");
  if (c.hho.max_iters < 1) fail("hho.t must be at least 1");
  if (!(c.hho.upper_bound > c.hho.lower_bound)) fail("hho.ub must exceed hho.lb");
  try {
    c.fitness.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("hho fitness: ") + e.what());
  }
  if (c.pca_k < 1) fail("pca.k must be at least 1");
  if (!(c.scale_hi > c.scale_lo)) fail("scale.hi must exceed scale.lo");
  if (c.reps < 1) fail("qk.reps must be at least 1");
  if (c.shots.shots < 1) fail("qk.shots must be at least 1");
  if (c.rbf_gamma < 0.0) fail("rbf.gamma must be non-negative");
  if (!(c.svm.c > 0.0)) fail("svm.c must be positive");
  if (!(c.svm.tol > 0.0)) fail("svm.tol must be positive");
  if (c.memory_budget == 0) fail("qk.memory_mb must be positive");
  if (c.threads < 1) fail("threads must be at least 1");
}

}  // namespace

Settings Settings::load(const std::filesystem::path& path) {
  std::vector<std::string> lines;
  try {
    lines = text::read_data_lines(path);
  } catch (const DataError&) {
    throw ConfigError("cannot read config file " + path.string());
  }
  Settings s;
  for (const auto& line : lines) s.assign(line);
  return s;
}

Settings Settings::parse(std::string_view input, const std::string& origin) {
  Settings s;
  std::istringstream in{std::string(input)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.find('=') == std::string_view::npos)
      throw ConfigError(origin + ":" + std::to_string(n) + ": expected key=value");
    s.assign(t);
  }
  return s;
}

void Settings::set(const std::string& key, const std::string& value) { values_[key] = value; }

void Settings::assign(std::string_view assignment) {
  const auto t = text::trim(assignment);
  if (t.empty() || t.front() == '#') return;
  const auto eq = t.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("expected key=value, got '" + std::string(t) + "'");
  const std::string key(text::trim(t.substr(0, eq)));
  if (key.empty()) throw ConfigError("empty key in '" + std::string(t) + "'");
  set(key, std::string(text::trim(t.substr(eq + 1))));
}

void Settings::merge(const Settings& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

PipelineConfig resolve(const Settings& s) {
  PipelineConfig c;
  const auto& keys = table();
  bool split_seed = false, smote_seed = false, hho_seed = false, fitness_seed = false,
       shot_seed = false;
  // The master seed goes first so derived seeds see it.
  if (auto it = s.entries().find("seed"); it != s.entries().end()) c.seed = to_uint("seed", it->second);
  for (const auto& [key, value] : s.entries()) {
    if (key.starts_with(kTargetPrefix)) {
      const std::string cls = key.substr(kTargetPrefix.size());
      if (cls.empty()) throw ConfigError("config key '" + key + "': missing class name");
      c.smote_targets[cls] = to_uint(key, value);
      continue;
    }
    auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second.apply(c, key, value);
    split_seed |= key == "split.seed";
    smote_seed |= key == "smote.seed";
    hho_seed |= key == "hho.seed";
    fitness_seed |= key == "hho.fitness_seed";
    shot_seed |= key == "qk.seed";
  }
  if (!split_seed) c.split_seed = derive_seed(c.seed, {kSplitSeed});
  if (!smote_seed) c.smote_seed = derive_seed(c.seed, {kSmoteSeed});
  if (!hho_seed) c.hho.seed = derive_seed(c.seed, {kHhoSeed});
  if (!fitness_seed) c.fitness.seed = derive_seed(c.seed, {kFitnessSeed});
  if (!shot_seed) c.shots.seed = kDefaultShotSeed;
  validate(c);
  return c;
}

std::map<std::string, std::string> describe(const PipelineConfig& c) {
  using text::format_double;
  std::map<std::string, std::string> d;
  d["seed"] = std::to_string(c.seed);
  d["data.path"] = c.data_path.string();
  d["data.label_column"] = c.label_column;
  if (c.label_index) d["data.label_index"] = std::to_string(*c.label_index);
  d["data.positive_label"] = c.positive_label;
  d["split.test_fraction"] = format_double(c.test_fraction);
  d["split.stratified"] = c.stratified ? "true" : "false";
  d["split.seed"] = std::to_string(c.split_seed);
  d["smote.enabled"] = c.smote_enabled ? "true" : "false";
  d["smote.k"] = std::to_string(c.smote_k);
  d["smote.seed"] = std::to_string(c.smote_seed);
  for (const auto& [cls, n] : c.smote_targets) d[std::string(kTargetPrefix) + cls] = std::to_string(n);
  d["selection.enabled"] = c.use_selection ? "true" : "false";
  d["hho.n"] = std::to_string(c.hho.n_hawks);
  d["hho.t"] = std::to_string(c.hho.max_iters);
  d["hho.lb"] = format_double(c.hho.lower_bound);
  d["hho.ub"] = format_double(c.hho.upper_bound);
  d["hho.transfer"] = c.transfer == hho::TransferKind::s_shaped ? "s" : "v";
  d["hho.seed"] = std::to_string(c.hho.seed);
  d["hho.alpha"] = format_double(c.fitness.alpha);
  d["hho.evaluator"] = "knn";
  d["hho.knn_k"] = std::to_string(c.fitness.knn_k);
  d["hho.validation_fraction"] = format_double(c.fitness.validation_fraction);
  d["hho.folds"] = std::to_string(c.fitness.folds);
  d["hho.fitness_seed"] = std::to_string(c.fitness.seed);
  d["pipeline.order"] = c.order == StageOrder::smote_then_pca ? "smote_then_pca" : "pca_then_smote";
  d["pca.k"] = std::to_string(c.pca_k);
  d["scale.lo"] = format_double(c.scale_lo);
  d["scale.hi"] = format_double(c.scale_hi);
  d["qk.map"] = c.kernel;
  d["qk.reps"] = std::to_string(c.reps);
  d["qk.entanglement"] = "linear";
  d["qk.mode"] = c.mode == qk::KernelMode::exact ? "exact" : "sampled";
  d["qk.shots"] = std::to_string(c.shots.shots);
  d["qk.seed"] = std::to_string(c.shots.seed);
  d["qk.repair_psd"] = c.repair_psd ? "true" : "false";
  d["qk.memory_mb"] = std::to_string(c.memory_budget >> 20);
  d["rbf.gamma"] = format_double(c.rbf_gamma);
  d["svm.c"] = format_double(c.svm.c);
  d["svm.tol"] = format_double(c.svm.tol);
  d["svm.max_passes"] = std::to_string(c.svm.max_passes);
  d["output.dir"] = c.output_dir.string();
  d["threads"] = std::to_string(c.threads);
  return d;
}

std::string config_hash(const PipelineConfig& cfg) {
  std::string canonical;
  for (const auto& [k, v] : describe(cfg)) {
    if (k == "output.dir" || k == "threads" || k == "qk.memory_mb") continue;
    canonical += k + "=" + v + "\n";
  }
  return text::fnv1a_hex(canonical);
}

std::string artifact_header(const PipelineConfig& cfg) { return "# config_hash=" + config_hash(cfg); }

const std::map<std::string, std::string>& known_keys() {
  static const std::map<std::string, std::string> k = [] {
    std::map<std::string, std::string> out;
    for (const auto& [key, info] : table()) out[key] = info.help;
    out[std::string(kTargetPrefix) + "<class>"] = "SMOTE target count for a class";
    return out;
  }();
  return k;
}

}  // namespace hawkqk::pipeline
