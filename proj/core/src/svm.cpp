#include "hawkqk/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hawkqk/error.hpp"
#include "hawkqk/pca.hpp"
#include "hawkqk/text.hpp"

namespace hawkqk::svm {

namespace {

constexpr double kTau = 1e-12;
constexpr double kSymmetryTol = 1e-9;

void check_labels(const std::vector<int>& y) {
  bool pos = false, neg = false;
  for (int v : y) {
    if (v == 1)
      pos = true;
    else if (v == -1)
      neg = true;
    else
      throw std::invalid_argument("svm: labels must be -1 or +1");
  }
  if (!pos || !neg) throw std::invalid_argument("svm: single-class labels");
}

bool in_up(double a, int y, double c) { return (y == 1 && a < c) || (y == -1 && a > 0.0); }
bool in_low(double a, int y, double c) { return (y == 1 && a > 0.0) || (y == -1 && a < c); }

double margin_gap(const std::vector<double>& alpha, const std::vector<int>& y,
                  const std::vector<double>& grad, double c, std::size_t* up, std::size_t* low) {
  double m = -std::numeric_limits<double>::infinity();
  double big_m = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    const double v = -y[t] * grad[t];
    if (in_up(alpha[t], y[t], c) && v > m) {
      m = v;
      if (up) *up = t;
    }
    if (in_low(alpha[t], y[t], c) && v < big_m) {
      big_m = v;
      if (low) *low = t;
    }
  }
  return m - big_m;
}

double compute_bias(const std::vector<double>& alpha, const std::vector<int>& y,
                    const std::vector<double>& grad, double c) {
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double yg = y[i] * grad[i];
    if (alpha[i] >= c) {
      if (y[i] == -1)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else if (alpha[i] <= 0.0) {
      if (y[i] == 1)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  return -rho;
}

}  // namespace

KernelMatrix KernelMatrix::with_default_ids(Matrix values) {
  KernelMatrix k;
  k.row_ids.resize(values.rows());
  k.col_ids.resize(values.cols());
  for (std::size_t i = 0; i < k.row_ids.size(); ++i) k.row_ids[i] = i;
  for (std::size_t j = 0; j < k.col_ids.size(); ++j) k.col_ids[j] = j;
  k.values = std::move(values);
  return k;
}

void write_kernel_csv(const std::filesystem::path& path, const KernelMatrix& k,
                      const std::string& header_comment) {
  std::ostringstream out;
  if (!header_comment.empty()) out << header_comment << '\n';
  out << "row_id,col_id,value\n";
  for (std::size_t i = 0; i < k.values.rows(); ++i)
    for (std::size_t j = 0; j < k.values.cols(); ++j)
      out << k.row_ids[i] << ',' << k.col_ids[j] << ',' << text::format_double(k.values(i, j))
          << '\n';
  text::write_file(path, out.str());
}

KernelMatrix read_kernel_csv(const std::filesystem::path& path) {
  const auto lines = text::read_data_lines(path);
  if (lines.empty() || text::trim(lines.front()) != "row_id,col_id,value")
    throw DataError(path.string() + ": missing kernel header");
  std::map<std::size_t, std::size_t> rows, cols;
  std::vector<std::tuple<std::size_t, std::size_t, double>> entries;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto f = text::split_csv_line(lines[l]);
    double r = 0, c = 0, v = 0;
    if (f.size() != 3 || !text::parse_double(f[0], r) || !text::parse_double(f[1], c) ||
        !text::parse_double(f[2], v) || r < 0 || c < 0)
      throw DataError(path.string() + ": malformed kernel line " + std::to_string(l + 1));
    const auto ri = static_cast<std::size_t>(r), ci = static_cast<std::size_t>(c);
    rows.try_emplace(ri, rows.size());
    cols.try_emplace(ci, cols.size());
    entries.emplace_back(ri, ci, v);
  }
  if (entries.size() != rows.size() * cols.size())
    throw DataError(path.string() + ": kernel entries do not form a full matrix");
  KernelMatrix k;
  k.values = Matrix(rows.size(), cols.size());
  // Ids keep their order of first appearance.
  k.row_ids.resize(rows.size());
  k.col_ids.resize(cols.size());
  for (const auto& [id, pos] : rows) k.row_ids[pos] = id;
  for (const auto& [id, pos] : cols) k.col_ids[pos] = id;
  for (const auto& [r, c, v] : entries) k.values(rows.at(r), cols.at(c)) = v;
  return k;
}

SvmModel smo_train(const Matrix& k, const std::vector<int>& y, const SvmParams& params) {
  const std::size_t n = y.size();
  if (k.rows() != n || k.cols() != n)
    throw std::invalid_argument("smo_train: kernel is not n x n for n labels");
  if (!(params.c > 0.0)) throw std::invalid_argument("smo_train: C must be positive");
  if (!(params.tol > 0.0)) throw std::invalid_argument("smo_train: tol must be positive");
  check_labels(y);
  if (asymmetry(k) > kSymmetryTol) throw std::invalid_argument("smo_train: kernel is not symmetric");

  const double c = params.c;
  const std::size_t passes = params.max_passes > 0 ? params.max_passes : 10 * n;
  const std::size_t max_iter = passes * n;

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
  auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * k(i, j); };

  std::size_t iter = 0;
  for (;; ++iter) {
    std::size_t i = 0, j = 0;
    const double gap = margin_gap(alpha, y, grad, c, &i, &j);
    if (gap < params.tol) break;
    if (iter >= max_iter)
      throw NumericalError("smo_train: no convergence after " + std::to_string(max_iter) +
                           " iterations; max KKT violation " + text::format_double(gap));

    const double ai = alpha[i], aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = k(i, i) + k(j, j) + 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = k(i, i) + k(j, j) - 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double di = alpha[i] - ai, dj = alpha[j] - aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(t, i) * di + q(t, j) * dj;
  }

  SvmModel m;
  m.alphas = std::move(alpha);
  m.bias = compute_bias(m.alphas, y, grad, c);
  m.train_labels = y;
  m.c = c;
  m.iterations = iter;
  for (std::size_t i = 0; i < n; ++i)
    if (m.alphas[i] > kSupportThreshold) m.support_indices.push_back(i);
  return m;
}

double dual_objective(const SvmModel& m, const Matrix& k) {
  const auto& a = m.alphas;
  const auto& y = m.train_labels;
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    linear += a[i];
    for (std::size_t j = 0; j < a.size(); ++j) quad += a[i] * a[j] * y[i] * y[j] * k(i, j);
  }
  return linear - 0.5 * quad;
}

double max_kkt_violation(const SvmModel& m, const Matrix& k) {
  const auto scores = decision_function(m, k);
  double worst = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double yf = m.train_labels[i] * scores[i];
    const double a = m.alphas[i];
    double v;
    if (a <= 0.0)
      v = std::max(0.0, 1.0 - yf);
    else if (a >= m.c)
      v = std::max(0.0, yf - 1.0);
    else
      v = std::abs(yf - 1.0);
    worst = std::max(worst, v);
  }
  return worst;
}

std::vector<double> decision_function(const SvmModel& m, const Matrix& k_cross) {
  if (k_cross.cols() != m.alphas.size())
    throw std::invalid_argument("decision_function: cross kernel has " +
                                std::to_string(k_cross.cols()) + " columns, model has " +
                                std::to_string(m.alphas.size()) + " training samples");
  std::vector<double> scores(k_cross.rows(), m.bias);
  for (std::size_t t = 0; t < k_cross.rows(); ++t) {
    double s = 0.0;
    for (std::size_t i : m.support_indices) s += m.alphas[i] * m.train_labels[i] * k_cross(t, i);
    scores[t] += s;
  }
  return scores;
}

std::vector<int> labels_from_scores(const std::vector<double>& scores) {
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= 0.0 ? 1 : -1;
  return out;
}

std::vector<int> predict(const SvmModel& m, const Matrix& k_cross) {
  return labels_from_scores(decision_function(m, k_cross));
}

Matrix rbf_kernel_matrix(const Matrix& x, const Matrix& x2, double gamma) {
  if (x.cols() != x2.cols()) throw std::invalid_argument("rbf_kernel_matrix: column count mismatch");
  if (!(gamma > 0.0)) throw std::invalid_argument("rbf_kernel_matrix: gamma must be positive");
  Matrix k(x.rows(), x2.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x2.rows(); ++j)
      k(i, j) = std::exp(-gamma * squared_distance(x.row(i), x2.row(j)));
  return k;
}

Matrix repair_psd(const Matrix& k) {
  if (k.rows() != k.cols()) throw std::invalid_argument("repair_psd: matrix is not square");
  const std::size_t n = k.rows();
  Matrix sym(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (k(i, j) + k(j, i));
  const auto eig = pca::symmetric_eigen(sym);
  if (eig.values.back() >= 0.0) return sym;
  Matrix out(n, n);
  for (std::size_t e = 0; e < n; ++e) {
    const double lambda = std::max(0.0, eig.values[e]);
    if (lambda == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += lambda * eig.vectors(i, e) * eig.vectors(j, e);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out(j, i) = out(i, j);
  return out;
}

void save_model(const std::filesystem::path& path, const SvmModel& m,
                const std::string& header_comment) {
  std::ostringstream out;
  if (!header_comment.empty()) out << header_comment << '\n';
  out << "key,value\n";
  out << "c," << text::format_double(m.c) << '\n';
  out << "bias," << text::format_double(m.bias) << '\n';
  out << "iterations," << m.iterations << '\n';
  out << "index,alpha,label,support\n";
  std::size_t s = 0;
  for (std::size_t i = 0; i < m.alphas.size(); ++i) {
    const bool sv = s < m.support_indices.size() && m.support_indices[s] == i;
    if (sv) ++s;
    out << i << ',' << text::format_double(m.alphas[i]) << ',' << m.train_labels[i] << ','
        << (sv ? 1 : 0) << '\n';
  }
  text::write_file(path, out.str());
}

SvmModel load_model(const std::filesystem::path& path) {
  const auto lines = text::read_data_lines(path);
  auto fail = [&](std::size_t l) {
    return DataError(path.string() + ": malformed model line " + std::to_string(l + 1));
  };
  if (lines.empty() || text::trim(lines[0]) != "key,value") throw fail(0);
  SvmModel m;
  std::size_t l = 1;
  for (; l < lines.size() && text::trim(lines[l]) != "index,alpha,label,support"; ++l) {
    const auto f = text::split_csv_line(lines[l]);
    double v = 0;
    if (f.size() != 2 || !text::parse_double(f[1], v)) throw fail(l);
    if (f[0] == "c")
      m.c = v;
    else if (f[0] == "bias")
      m.bias = v;
    else if (f[0] == "iterations")
      m.iterations = static_cast<std::size_t>(v);
    else
      throw fail(l);
  }
  if (l == lines.size()) throw DataError(path.string() + ": model has no coefficient table");
  for (++l; l < lines.size(); ++l) {
    const auto f = text::split_csv_line(lines[l]);
    double idx = 0, a = 0, lab = 0, sv = 0;
    if (f.size() != 4 || !text::parse_double(f[0], idx) || !text::parse_double(f[1], a) ||
        !text::parse_double(f[2], lab) || !text::parse_double(f[3], sv) ||
        static_cast<std::size_t>(idx) != m.alphas.size() || (lab != 1 && lab != -1))
      throw fail(l);
    m.alphas.push_back(a);
    m.train_labels.push_back(static_cast<int>(lab));
    if (sv != 0) m.support_indices.push_back(m.alphas.size() - 1);
  }
  if (m.alphas.empty()) throw DataError(path.string() + ": model has no coefficients");
  return m;
}

}  // namespace hawkqk::svm
