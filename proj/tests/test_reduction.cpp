#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hawkqk/error.hpp"
#include "hawkqk/pca.hpp"
#include "oracles.hpp"

using namespace hawkqk;
using namespace hawkqk::pca;

namespace {

Eigen::MatrixXd covariance(const Matrix& x) {
  const Eigen::MatrixXd m = oracle::to_eigen(x);
  const Eigen::MatrixXd centered = m.rowwise() - m.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(m.rows() - 1);
}

double frobenius_error(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
  return std::sqrt(s);
}

}  // namespace

TEST(SymmetricEigen, MatchesEigenSolver) {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 2u, 5u, 12u}) {
    const auto a = oracle::random_matrix(n, n, rng);
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s(i, j) = a(i, j) + a(j, i);
    const auto got = symmetric_eigen(s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::to_eigen(s));
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(got.values[i], es.eigenvalues()(n - 1 - i), 1e-10);
    // A v = lambda v
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) {
        double av = 0.0;
        for (std::size_t k = 0; k < n; ++k) av += s(r, k) * got.vectors(k, c);
        EXPECT_NEAR(av, got.values[c] * got.vectors(r, c), 1e-10);
      }
  }
  EXPECT_THROW(symmetric_eigen(Matrix(2, 3)), std::invalid_argument);
}

TEST(Pca, CollinearPointsGiveDiagonalComponent) {
  const auto x = Matrix::from_rows({{0, 0}, {1, 1}, {2, 2}, {-3, -3}});
  const auto m = pca_fit(x, 2);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(m.components(0, 0)), s, 1e-12);
  EXPECT_NEAR(std::abs(m.components(0, 1)), s, 1e-12);
  const double total = m.explained_variance[0] + m.explained_variance[1];
  EXPECT_NEAR(m.explained_variance[0] / total, 1.0, 1e-12);
}

TEST(Pca, OrthonormalComponents) {
  std::mt19937_64 rng(2);
  for (auto [n, d, k] : std::vector<std::array<std::size_t, 3>>{{6, 40, 6}, {30, 5, 5}, {10, 10, 4}, {3, 50, 3}}) {
    const auto m = pca_fit(oracle::random_matrix(n, d, rng), k);
    const auto g = multiply_transposed(m.components, m.components);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) EXPECT_NEAR(g(i, j), i == j ? 1.0 : 0.0, 1e-10);
  }
}

TEST(Pca, GramTrickMatchesDirectCovariance) {
  std::mt19937_64 rng(3);
  const auto x = oracle::random_matrix(6, 40, rng);
  const auto m = pca_fit(x, 6);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance(x));
  const auto ev = es.eigenvalues();
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(m.explained_variance[i], ev(39 - i), 1e-8);
  // Rank n-1 after centering; the sixth direction carries no variance.
  EXPECT_NEAR(m.explained_variance[5], 0.0, 1e-8);
}

TEST(Pca, ProjectedVarianceEqualsExplainedVariance) {
  std::mt19937_64 rng(4);
  for (auto [n, d] : std::vector<std::pair<std::size_t, std::size_t>>{{6, 40}, {25, 8}}) {
    const auto x = oracle::random_matrix(n, d, rng);
    const std::size_t k = std::min<std::size_t>(4, n);
    const auto m = pca_fit(x, k);
    const auto z = pca_transform(m, x);
    for (std::size_t c = 0; c < k; ++c) {
      double mean = 0.0, var = 0.0;
      for (std::size_t r = 0; r < n; ++r) mean += z(r, c);
      mean /= static_cast<double>(n);
      for (std::size_t r = 0; r < n; ++r) var += (z(r, c) - mean) * (z(r, c) - mean);
      var /= static_cast<double>(n - 1);
      EXPECT_NEAR(mean, 0.0, 1e-10);
      EXPECT_NEAR(var, m.explained_variance[c], 1e-8);
    }
  }
}

TEST(Pca, SignRuleMakesLargestEntryPositive) {
  std::mt19937_64 rng(5);
  const auto m = pca_fit(oracle::random_matrix(12, 7, rng), 5);
  for (std::size_t c = 0; c < m.k(); ++c) {
    const auto row = m.components.row(c);
    const auto it = std::max_element(row.begin(), row.end(),
                                     [](double a, double b) { return std::abs(a) < std::abs(b); });
    EXPECT_GT(*it, 0.0);
  }
}

TEST(Pca, MeanRowMapsToZeroAndFullRankIsIsometry) {
  std::mt19937_64 rng(6);
  const auto x = oracle::random_matrix(20, 5, rng);
  const auto m = pca_fit(x, 5);
  Matrix mean_row(1, 5);
  for (std::size_t j = 0; j < 5; ++j) mean_row(0, j) = m.mean[j];
  const auto centered = pca_transform(m, mean_row);
  for (double v : centered.values()) EXPECT_NEAR(v, 0.0, 1e-12);

  const auto probe = oracle::random_matrix(4, 5, rng);
  const auto z = pca_transform(m, probe);
  for (std::size_t r = 0; r < 4; ++r) {
    double a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < 5; ++j) a += std::pow(probe(r, j) - m.mean[j], 2);
    for (std::size_t j = 0; j < 5; ++j) b += z(r, j) * z(r, j);
    EXPECT_NEAR(std::sqrt(a), std::sqrt(b), 1e-9);
  }
  const auto back = pca_reconstruct(m, z);
  EXPECT_LT(frobenius_error(back, probe), 1e-9);
}

TEST(Pca, ReconstructionErrorShrinksWithK) {
  std::mt19937_64 rng(7);
  const auto x = oracle::random_matrix(5, 30, rng);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= 5; ++k) {
    const auto m = pca_fit(x, k);
    const double err = frobenius_error(pca_reconstruct(m, pca_transform(m, x)), x);
    EXPECT_LE(err, prev + 1e-12);
    prev = err;
  }
  EXPECT_LT(prev, 1e-9);  // rank of centered data is 4
}

TEST(Pca, SaveLoadRoundTrip) {
  std::mt19937_64 rng(8);
  const auto x = oracle::random_matrix(9, 6, rng);
  const auto m = pca_fit(x, 3);
  const auto dir = oracle::scratch_dir("pca_io");
  save_model(dir / "pca.csv", m, "# header");
  const auto back = load_model(dir / "pca.csv");
  EXPECT_EQ(back.mean, m.mean);
  EXPECT_EQ(back.explained_variance, m.explained_variance);
  EXPECT_EQ(back.components, m.components);
}

TEST(Pca, Errors) {
  EXPECT_THROW(pca_fit(Matrix(1, 3, 1.0), 1), std::invalid_argument);
  EXPECT_THROW(pca_fit(Matrix(4, 3, 1.0), 4), std::invalid_argument);
  EXPECT_THROW(pca_fit(Matrix(4, 3, 1.0), 0), std::invalid_argument);
  EXPECT_THROW(pca_fit(Matrix(4, 3, 1.0), 2), DataError);
  std::mt19937_64 rng(9);
  const auto m = pca_fit(oracle::random_matrix(5, 3, rng), 2);
  EXPECT_THROW(pca_transform(m, Matrix(2, 4)), std::invalid_argument);
  EXPECT_THROW(load_model("/nonexistent/pca.csv"), std::exception);
}
