#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "error.hpp"
#include "oracles.hpp"
#include "pca.hpp"

using namespace sfc;

TEST_CASE("points on one axis") {
  Matrix x(3, 2);
  x << 1, 0, 2, 0, 3, 0;
  const auto m = fit_pca(x, 2);
  CHECK(m.components(0, 0) == doctest::Approx(1.0));
  CHECK(m.components(0, 1) == doctest::Approx(0.0));
  CHECK(m.explained_variance[0] == doctest::Approx(1.0));
  CHECK(m.explained_variance[1] == doctest::Approx(0.0));
  CHECK(m.rank_deficient);

  const auto m1 = fit_pca(x, 1);
  CHECK_FALSE(m1.rank_deficient);
  const Matrix z = transform_pca(m1, x);
  CHECK(z(0, 0) == doctest::Approx(-1.0));
  CHECK(z(1, 0) == doctest::Approx(0.0));
  CHECK(z(2, 0) == doctest::Approx(1.0));
  CHECK(transform_pca(m1, m1.mean).norm() == 0.0);
}

TEST_CASE("argument errors") {
  Matrix x(3, 2);
  x << 1, 0, 2, 0, 3, 0;
  CHECK_THROWS_AS(fit_pca(x, 0), ArgumentError);
  CHECK_THROWS_AS(fit_pca(x, 3), ArgumentError);
  CHECK_THROWS_AS(fit_pca(Matrix::Ones(1, 4), 1), ArgumentError);
  Matrix wide = Matrix::Ones(3, 5);
  CHECK_THROWS_AS(fit_pca(wide, 3), ArgumentError);  // d > N - 1
  const auto m = fit_pca(x, 1);
  CHECK_THROWS_AS(transform_pca(m, Matrix(Matrix::Ones(2, 3))), ArgumentError);
}

TEST_CASE("full rank transform reconstructs the data") {
  Xoshiro256 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = oracle::random_matrix(rng, 12, 5);
    const auto m = fit_pca(x, 5);
    const Matrix back = inverse_transform_pca(m, transform_pca(m, x));
    CHECK((back - x).norm() <= 1e-8 * x.norm());
  }
}

TEST_CASE("random 20x6 matches the covariance eigendecomposition") {
  Xoshiro256 rng(6);
  const Matrix x = oracle::random_matrix(rng, 20, 6);
  const auto m = fit_pca(x, 3);
  const auto ref = oracle::covariance_pca(x);
  for (Eigen::Index k = 0; k < 3; ++k) {
    CHECK(m.explained_variance[k] == doctest::Approx(ref.variances[k]).epsilon(1e-8));
    const Vector c = m.components.row(k).transpose();
    const double align = std::abs(c.dot(ref.directions.col(k)));
    CHECK(align == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("orthonormality, variance accounting and oracle equivalence") {
  Xoshiro256 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = 1 + static_cast<Eigen::Index>(rng.below(10));
    const auto n = 2 + static_cast<Eigen::Index>(rng.below(49));
    Matrix x = oracle::random_matrix(rng, n, d);
    x.col(0) *= 5.0;  // spread the spectrum
    const auto full = static_cast<std::size_t>(std::min(d, n - 1));
    const auto m = fit_pca(x, full);

    const Matrix gram = m.components * m.components.transpose();
    CHECK((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= 1e-10);

    const Vector mean = x.colwise().mean().transpose();
    const double total = (x.rowwise() - mean.transpose()).squaredNorm() /
                         static_cast<double>(n - 1);
    CHECK(std::abs(m.explained_variance.sum() - total) <= 1e-8 * total);

    for (Eigen::Index k = 1; k < m.explained_variance.size(); ++k)
      CHECK(m.explained_variance[k] <= m.explained_variance[k - 1]);
    CHECK(m.explained_variance.minCoeff() >= 0.0);

    const auto ref = oracle::covariance_pca(x);
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(full); ++k) {
      CHECK(std::abs(m.explained_variance[k] - ref.variances[k]) <=
            1e-8 * std::max(1.0, ref.variances[0]));
      const bool distinct =
          (k == 0 || ref.variances[k - 1] - ref.variances[k] > 1e-3) &&
          (k + 1 >= ref.variances.size() || ref.variances[k] - ref.variances[k + 1] > 1e-3);
      if (distinct) {
        const Vector c = m.components.row(k).transpose();
        CHECK(std::abs(std::abs(c.dot(ref.directions.col(k))) - 1.0) <= 1e-8);
      }
    }
  }
}

TEST_CASE("reconstruction error does not grow with d") {
  Xoshiro256 rng(12);
  const Matrix x = oracle::random_matrix(rng, 30, 8);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t d = 1; d <= 8; ++d) {
    const auto m = fit_pca(x, d);
    const double err = (inverse_transform_pca(m, transform_pca(m, x)) - x).norm();
    CHECK(err <= prev + 1e-10);
    prev = err;
  }
}

TEST_CASE("sign convention makes the largest entry positive") {
  Xoshiro256 rng(15);
  const Matrix x = oracle::random_matrix(rng, 25, 7);
  const auto m = fit_pca(x, 4);
  for (Eigen::Index r = 0; r < m.components.rows(); ++r) {
    Eigen::Index best = 0;
    m.components.row(r).cwiseAbs().maxCoeff(&best);
    CHECK(m.components(r, best) > 0);
  }
  // Negating the data flips nothing in the stored components.
  const auto neg = fit_pca(-x, 4);
  CHECK((neg.components - m.components).norm() <= 1e-10);
}

TEST_CASE("json round trip") {
  Xoshiro256 rng(18);
  const Matrix x = oracle::random_matrix(rng, 10, 4);
  const auto m = fit_pca(x, 2);
  const auto back = pca_from_json(Json::parse(pca_to_json(m).dump()));
  CHECK(back.mean == m.mean);
  CHECK(back.components == m.components);
  CHECK(back.explained_variance == m.explained_variance);
}
