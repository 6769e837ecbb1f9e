#include "oracles.hpp"

#include <tfcsp/csp.hpp>
#include <tfcsp/errors.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace tfcsp;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

double off_diag_max(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd o = m;
  o.diagonal().setZero();
  return max_abs(o);
}

std::vector<SymMatrix> random_class_covs(int m, int n, std::mt19937_64& rng, double cond = 100.0) {
  std::vector<SymMatrix> covs;
  for (int c = 0; c < m; ++c) covs.push_back(oracle::random_spd(n, rng, cond));
  return covs;
}

}  // namespace

TEST(Covariance, SingleChannelIsOne) {
  Eigen::MatrixXd x(1, 5);
  x << 1, -2, 3, 0.5, 4;
  const SymMatrix c = trial_covariance(x);
  ASSERT_EQ(c.rows(), 1);
  EXPECT_DOUBLE_EQ(c(0, 0), 1.0);
}

TEST(Covariance, OrthogonalEqualPowerRows) {
  Eigen::MatrixXd x(2, 4);
  x << 1, 0, -1, 0, 0, 1, 0, -1;
  const SymMatrix c = trial_covariance(x);
  EXPECT_TRUE(c.isApprox(Eigen::Matrix2d(Eigen::Vector2d(0.5, 0.5).asDiagonal())));
}

TEST(Covariance, MatchesElementwiseOracle) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd x = oracle::gaussian(3, 50, rng);
  const SymMatrix c = trial_covariance(x);
  EXPECT_LE(max_abs(c - oracle::covariance_elementwise(x)), 1e-12);
  EXPECT_NEAR(c.trace(), 1.0, 1e-15);
  EXPECT_TRUE(is_symmetric(c));
}

TEST(Covariance, ZeroTrialIsDegenerate) {
  EXPECT_THROW(trial_covariance(Eigen::MatrixXd::Zero(3, 10)), DegenerateTrialError);
}

TEST(MeanCovariance, Examples) {
  std::vector<SymMatrix> one{Eigen::Matrix2d(Eigen::Vector2d(0.3, 0.7).asDiagonal())};
  EXPECT_EQ(mean_covariance(one), one[0]);
  std::vector<SymMatrix> two{Eigen::Matrix2d(Eigen::Vector2d(1, 0).asDiagonal()),
                             Eigen::Matrix2d(Eigen::Vector2d(0, 1).asDiagonal())};
  EXPECT_TRUE(mean_covariance(two).isApprox(Eigen::Matrix2d(Eigen::Vector2d(0.5, 0.5).asDiagonal())));
  EXPECT_THROW(mean_covariance(std::vector<SymMatrix>{}), ArgumentError);
}

TEST(MeanCovariance, TraceStaysOne) {
  std::mt19937_64 rng(3);
  const auto covs = random_class_covs(10, 5, rng);
  EXPECT_NEAR(mean_covariance(covs).trace(), 1.0, 1e-12);
}

TEST(Whitening, IdentityComposite) {
  const Whitening w = whitening_from_composite(Eigen::MatrixXd::Identity(3, 3));
  EXPECT_LE(max_abs(w.transform * w.composite * w.transform.transpose() - Eigen::MatrixXd::Identity(3, 3)), 1e-8);
  EXPECT_LE(max_abs(w.transform.cwiseAbs() * w.transform.cwiseAbs().transpose() - Eigen::MatrixXd::Identity(3, 3)),
            1e-8);
}

TEST(Whitening, DiagonalClosedForm) {
  const Whitening w = whitening_from_composite(Eigen::Matrix2d(Eigen::Vector2d(4, 1).asDiagonal()));
  // Rows are a signed permutation of diag(0.5, 1).
  Eigen::MatrixXd p = w.transform.cwiseAbs();
  if (p(0, 0) < p(0, 1)) p.row(0).swap(p.row(1));
  EXPECT_NEAR(p(0, 0), 0.5, 1e-8);
  EXPECT_NEAR(p(1, 1), 1.0, 1e-8);
  EXPECT_NEAR(p(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(p(1, 0), 0.0, 1e-12);
}

TEST(Whitening, IdentityPropertyUpToConditionMillion) {
  std::mt19937_64 rng(4);
  for (double cond : {1.0, 10.0, 1e3, 1e6}) {
    for (int rep = 0; rep < 10; ++rep) {
      const SymMatrix c = oracle::random_spd(6, rng, cond);
      const Whitening w = whitening_from_composite(c);
      EXPECT_LE(max_abs(w.transform * w.composite * w.transform.transpose() - Eigen::MatrixXd::Identity(6, 6)),
                1e-8)
          << "cond " << cond;
      EXPECT_LE(max_abs(w.composite - c), 1e-9 * c.trace());
    }
  }
}

TEST(Whitening, IndefiniteCompositeIsConditioningError) {
  EXPECT_THROW(whitening_from_composite(Eigen::Matrix2d(Eigen::Vector2d(1.0, -0.5).asDiagonal())), ConditioningError);
}

TEST(TwoClassCsp, EqualClassesGiveHalf) {
  const SymMatrix c = Eigen::Matrix2d(Eigen::Vector2d(0.6, 0.4).asDiagonal());
  const CspModel m = csp_two_class(c, c, 2);
  EXPECT_LE((m.class_eigen.row(0).array() - 0.5).abs().maxCoeff(), 1e-8);
}

TEST(TwoClassCsp, CommutingDiagonalClosedForm) {
  const SymMatrix l = Eigen::Matrix2d(Eigen::Vector2d(3, 1).asDiagonal()) / 4.0;
  const SymMatrix r = Eigen::Matrix2d(Eigen::Vector2d(1, 3).asDiagonal()) / 4.0;
  const CspModel m = csp_two_class(l, r, 2);
  EXPECT_NEAR(m.class_eigen(0, 0), 0.75, 1e-8);
  EXPECT_NEAR(m.class_eigen(0, 1), 0.25, 1e-8);
  EXPECT_NEAR(m.class_eigen(1, 0), 0.25, 1e-8);
  EXPECT_NEAR(m.class_eigen(1, 1), 0.75, 1e-8);
}

TEST(TwoClassCsp, RandomPairSatisfiesIdentity) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const auto covs = random_class_covs(2, 6, rng);
    const CspModel m = csp_two_class(covs[0], covs[1], 6);
    const Eigen::MatrixXd& p = m.whitening;
    const Eigen::MatrixXd& u = m.rotation;
    const Eigen::MatrixXd wl = u.transpose() * p * m.class_covariances[0] * p.transpose() * u;
    const Eigen::MatrixXd wr = u.transpose() * p * m.class_covariances[1] * p.transpose() * u;
    EXPECT_LE(off_diag_max(wl), 1e-8);
    EXPECT_LE(off_diag_max(wr), 1e-8);
    EXPECT_LE(((m.class_eigen.row(0) + m.class_eigen.row(1)).array() - 1.0).abs().maxCoeff(), 1e-8);
    EXPECT_LE(max_abs(p * m.composite * p.transpose() - Eigen::MatrixXd::Identity(6, 6)), 1e-8);
    EXPECT_LE(max_abs(m.projection - u.transpose() * p), 1e-12);
    for (Eigen::Index j = 1; j < 6; ++j) EXPECT_GE(m.class_eigen(0, j - 1), m.class_eigen(0, j));
  }
}

TEST(MulticlassCsp, ClassEigenSumToOneProperty) {
  std::mt19937_64 rng(6);
  for (int classes : {2, 3, 4, 5}) {
    for (int rep = 0; rep < 8; ++rep) {
      const auto covs = random_class_covs(classes, 6, rng);
      const CspModel m = multiclass_csp(covs, 4);
      EXPECT_LE((m.class_eigen.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-6);
      EXPECT_LE(max_abs(m.rotation.transpose() * m.rotation - Eigen::MatrixXd::Identity(6, 6)), 1e-8);
      EXPECT_LE(max_abs(m.whitening * m.composite * m.whitening.transpose() - Eigen::MatrixXd::Identity(6, 6)),
                1e-8);
      std::vector<int> sel = m.selected_rows;
      std::sort(sel.begin(), sel.end());
      EXPECT_EQ(std::adjacent_find(sel.begin(), sel.end()), sel.end());
      for (int r : sel) EXPECT_TRUE(r >= 0 && r < 6);
    }
  }
}

TEST(MulticlassCsp, TwoClassesMatchTwoClassCsp) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const auto covs = random_class_covs(2, 6, rng);
    const CspModel a = csp_two_class(covs[0], covs[1], 4);
    const CspModel b = multiclass_csp(covs, 4);
    EXPECT_LE(oracle::row_space_distance(a.selected_filters(), b.selected_filters()), 1e-6);
    std::vector<double> la, lb;
    for (int r : a.selected_rows) la.push_back(a.class_eigen(0, r));
    for (int r : b.selected_rows) lb.push_back(b.class_eigen(0, r));
    std::sort(la.begin(), la.end());
    std::sort(lb.begin(), lb.end());
    for (std::size_t i = 0; i < la.size(); ++i) EXPECT_NEAR(la[i], lb[i], 1e-8);
  }
}

TEST(MulticlassCsp, EqualCovariancesSelectLowestRows) {
  std::mt19937_64 rng(8);
  const SymMatrix c = oracle::random_spd(6, rng);
  const std::vector<SymMatrix> covs{c, c, c};
  const CspModel m = multiclass_csp(covs, 4);
  EXPECT_LE(dispersion_scores(m.class_eigen).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(m.selected_rows, (std::vector<int>{0, 1, 2, 3}));
}

TEST(MulticlassCsp, InflatedChannelPairsAreRecovered) {
  std::mt19937_64 rng(9);
  const int n = 8, classes = 4;
  const Eigen::MatrixXd mix = oracle::random_orthogonal(n, rng);
  std::vector<SymMatrix> covs;
  for (int c = 0; c < classes; ++c) {
    Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
    d(2 * c) = d(2 * c + 1) = 6.0;
    SymMatrix cov = mix * d.asDiagonal() * mix.transpose();
    covs.push_back(cov / cov.trace());
  }
  const CspModel m = multiclass_csp(covs, 8);
  ASSERT_EQ(m.feature_count(), 8);
  for (int c = 0; c < classes; ++c) {
    Eigen::Index best;
    m.class_eigen.row(c).maxCoeff(&best);
    Eigen::RowVectorXd src = m.projection.row(best) * mix;  // filter in source coordinates
    src.normalize();
    const double aligned = std::hypot(src(2 * c), src(2 * c + 1));
    EXPECT_GT(aligned, 0.9) << "class " << c;
  }
}

TEST(MulticlassCsp, TooManyFeaturesRejected) {
  std::mt19937_64 rng(10);
  const auto covs = random_class_covs(3, 4, rng);
  EXPECT_THROW(multiclass_csp(covs, 5), ArgumentError);
  EXPECT_THROW(multiclass_csp(std::span<const SymMatrix>(covs.data(), 1), 2), ArgumentError);
}

TEST(SelectByScore, TiesGoToLowerIndex) {
  Eigen::VectorXd s(5);
  s << 0.1, 0.3, 0.3, 0.05, 0.3;
  EXPECT_EQ(select_by_score(s, 3), (std::vector<int>{1, 2, 4}));
  EXPECT_EQ(select_by_score(s, 4), (std::vector<int>{1, 2, 4, 0}));
}

TEST(Features, EqualProjectedVarianceGivesUniformLog) {
  std::mt19937_64 rng(11);
  const auto covs = random_class_covs(3, 5, rng);
  const CspModel m = multiclass_csp(covs, 3);
  const int t = 64;
  Eigen::MatrixXd z(5, t);
  for (int k = 0; k < 5; ++k)
    for (int i = 0; i < t; ++i) z(k, i) = std::cos(2.0 * std::numbers::pi * (k + 1) * i / t);
  const Eigen::MatrixXd x = m.projection.inverse() * z;
  const Eigen::VectorXd f = extract_features(m, x);
  ASSERT_EQ(f.size(), 3);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(f(i), std::log(1.0 / 3.0), 1e-10);
}

TEST(Features, ScaleInvariance) {
  std::mt19937_64 rng(12);
  const auto covs = random_class_covs(4, 8, rng);
  const CspModel m = multiclass_csp(covs);
  const Eigen::MatrixXd x = oracle::gaussian(8, 250, rng);
  const Eigen::VectorXd f = extract_features(m, x);
  for (double c : {1e-3, 0.5, 7.0, 1e4}) EXPECT_LE((extract_features(m, c * x) - f).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Features, MatchDenseOracle) {
  std::mt19937_64 rng(13);
  const auto covs = random_class_covs(4, 8, rng);
  const CspModel m = multiclass_csp(covs);
  const Eigen::MatrixXd x = oracle::gaussian(8, 250, rng);
  const Eigen::VectorXd f = extract_features(m, x);
  std::vector<double> var;
  for (int r : m.selected_rows) {
    std::vector<double> z(250, 0.0);
    for (int i = 0; i < 250; ++i)
      for (int c = 0; c < 8; ++c) z[static_cast<std::size_t>(i)] += m.projection(r, c) * x(c, i);
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= 250.0;
    double s = 0.0;
    for (double v : z) s += (v - mean) * (v - mean);
    var.push_back(s / 249.0);
  }
  double total = 0.0;
  for (double v : var) total += v;
  for (std::size_t j = 0; j < var.size(); ++j) EXPECT_NEAR(f(static_cast<Eigen::Index>(j)), std::log(var[j] / total), 1e-10);
}

TEST(Features, WrongChannelCountAndZeroTrial) {
  std::mt19937_64 rng(14);
  const auto covs = random_class_covs(2, 4, rng);
  const CspModel m = multiclass_csp(covs, 2);
  EXPECT_THROW(extract_features(m, Eigen::MatrixXd::Ones(3, 10)), DimensionError);
  EXPECT_THROW(extract_features(m, Eigen::MatrixXd::Zero(4, 10)), DegenerateTrialError);
}
