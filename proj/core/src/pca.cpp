#include "hawkqk/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hawkqk/error.hpp"
#include "hawkqk/text.hpp"

namespace hawkqk::pca {

SymmetricEigen symmetric_eigen(const Matrix& input, double tol, int max_sweeps) {
  const std::size_t n = input.rows();
  if (n != input.cols()) throw std::invalid_argument("symmetric_eigen: matrix not square");
  Matrix a = input;
  Matrix v = Matrix::identity(n);

  double frob = 0.0;
  for (double x : a.values()) frob += x * x;
  frob = std::sqrt(frob);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep <= max_sweeps; ++sweep) {
    if (off_norm() <= tol * frob) break;
    if (sweep == max_sweeps)
      throw NumericalError("symmetric_eigen: no convergence after " + std::to_string(max_sweeps) +
                           " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double apr = a(p, r), aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, j) = v(r, order[j]);
  }
  return out;
}

namespace {

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

// Removes the components along rows [0, upto) of `basis`, twice for stability.
void orthogonalize(std::span<double> x, const Matrix& basis, std::size_t upto) {
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t r = 0; r < upto; ++r) {
      const double proj = dot(x, basis.row(r));
      const auto b = basis.row(r);
      for (std::size_t j = 0; j < x.size(); ++j) x[j] -= proj * b[j];
    }
}

}  // namespace

PcaModel pca_fit(const Matrix& x, std::size_t k) {
  const std::size_t n = x.rows(), d = x.cols();
  if (n < 2) throw std::invalid_argument("pca_fit: need at least 2 samples");
  if (k < 1 || k > std::min(n, d))
    throw std::invalid_argument("pca_fit: k=" + std::to_string(k) + " outside [1, min(n, d)=" +
                                std::to_string(std::min(n, d)) + "]");

  PcaModel model;
  model.mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) model.mean[j] += x(i, j);
  for (auto& m : model.mean) m /= static_cast<double>(n);

  Matrix centered(n, d);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      centered(i, j) = x(i, j) - model.mean[j];
      total += centered(i, j) * centered(i, j);
    }
  if (total == 0.0) throw DataError("pca_fit: data has zero variance (all rows identical)");
  const double denom = static_cast<double>(n - 1);

  model.components = Matrix(k, d);
  model.explained_variance.assign(k, 0.0);
  std::vector<bool> resolved(k, false);

  if (d <= n) {
    Matrix cov = multiply(centered.transpose(), centered);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) cov(i, j) /= denom;
    const auto eig = symmetric_eigen(cov);
    for (std::size_t c = 0; c < k; ++c) {
      model.explained_variance[c] = std::max(0.0, eig.values[c]);
      for (std::size_t j = 0; j < d; ++j) model.components(c, j) = eig.vectors(j, c);
      resolved[c] = true;
    }
  } else {
    const Matrix gram = multiply_transposed(centered, centered);
    const auto eig = symmetric_eigen(gram);
    const double floor = std::max(eig.values.front(), 0.0) * 1e-13 * static_cast<double>(n);
    for (std::size_t c = 0; c < k; ++c) {
      const double lambda = eig.values[c];
      model.explained_variance[c] = std::max(0.0, lambda / denom);
      if (lambda <= floor) continue;
      auto row = model.components.row(c);
      for (std::size_t i = 0; i < n; ++i) {
        const double u = eig.vectors(i, c);
        const auto xr = centered.row(i);
        for (std::size_t j = 0; j < d; ++j) row[j] += u * xr[j];
      }
      resolved[c] = true;
    }
  }

  // Orthonormalize in order; directions of numerically zero variance are
  // completed from the standard basis.
  std::size_t next_basis = 0;
  for (std::size_t c = 0; c < k; ++c) {
    auto row = model.components.row(c);
    if (resolved[c]) {
      orthogonalize(row, model.components, c);
      const double len = norm(row);
      if (len > 1e-8) {
        for (auto& v : row) v /= len;
      } else {
        resolved[c] = false;
      }
    }
    while (!resolved[c]) {
      if (next_basis >= d) throw NumericalError("pca_fit: cannot complete orthonormal basis");
      std::fill(row.begin(), row.end(), 0.0);
      row[next_basis++] = 1.0;
      orthogonalize(row, model.components, c);
      const double len = norm(row);
      if (len > 0.5) {
        for (auto& v : row) v /= len;
        resolved[c] = true;
      }
    }
    std::size_t arg = 0;
    for (std::size_t j = 1; j < d; ++j)
      if (std::abs(row[j]) > std::abs(row[arg])) arg = j;
    if (row[arg] < 0.0)
      for (auto& v : row) v = -v;
  }
  return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& x) {
  if (x.cols() != model.dimension())
    throw std::invalid_argument("pca_transform: expected " + std::to_string(model.dimension()) +
                                " columns, got " + std::to_string(x.cols()));
  Matrix out(x.rows(), model.k());
  std::vector<double> centered(x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) centered[j] = x(i, j) - model.mean[j];
    for (std::size_t c = 0; c < model.k(); ++c) out(i, c) = dot(centered, model.components.row(c));
  }
  return out;
}

Matrix pca_reconstruct(const PcaModel& model, const Matrix& z) {
  if (z.cols() != model.k()) throw std::invalid_argument("pca_reconstruct: column count mismatch");
  Matrix out = multiply(z, model.components);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += model.mean[j];
  return out;
}

void save_model(const std::filesystem::path& path, const PcaModel& model,
                const std::string& header_comment) {
  std::ostringstream out;
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  out << "section,index,values\n";
  auto emit = [&](const char* section, std::size_t index, std::span<const double> values) {
    out << section << ',' << index;
    for (double v : values) out << ',' << text::format_double(v);
    out << '\n';
  };
  emit("mean", 0, model.mean);
  emit("variance", 0, model.explained_variance);
  for (std::size_t c = 0; c < model.k(); ++c) emit("component", c, model.components.row(c));
  text::write_file(path, out.str());
}

PcaModel load_model(const std::filesystem::path& path) {
  const auto lines = text::read_data_lines(path);
  PcaModel model;
  std::vector<std::vector<double>> components;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = text::split_csv_line(lines[li]);
    if (fields.size() < 2) throw DataError("pca model: malformed line " + std::to_string(li + 1));
    std::vector<double> values;
    for (std::size_t f = 2; f < fields.size(); ++f) {
      double v = 0.0;
      if (!text::parse_double(fields[f], v)) throw DataError("pca model: bad number '" + fields[f] + "'");
      values.push_back(v);
    }
    if (fields[0] == "mean")
      model.mean = std::move(values);
    else if (fields[0] == "variance")
      model.explained_variance = std::move(values);
    else if (fields[0] == "component")
      components.push_back(std::move(values));
    else
      throw DataError("pca model: unknown section '" + fields[0] + "'");
  }
  model.components = Matrix::from_rows(components);
  if (model.components.cols() != model.mean.size() ||
      model.components.rows() != model.explained_variance.size())
    throw DataError("pca model: inconsistent section sizes in " + path.string());
  return model;
}

}  // namespace hawkqk::pca
