#pragma once

#include <Eigen/Dense>

#include <span>

namespace tfcsp {

inline constexpr double kGnbVarianceFloor = 1e-9;

struct GnbModel {
  Eigen::MatrixXd means;      // M x d
  Eigen::MatrixXd variances;  // M x d, >= floor
  Eigen::VectorXd class_priors;

  int class_count() const { return static_cast<int>(means.rows()); }
  Eigen::Index dims() const { return means.cols(); }
};

// Per-class, per-feature Gaussian (maximum-likelihood variance, floored).
GnbModel gnb_train(const Eigen::MatrixXd& features, std::span<const int> labels, int class_count,
                   double variance_floor = kGnbVarianceFloor);

// log prior + sum of per-feature Gaussian log-likelihoods.
Eigen::VectorXd gnb_scores(const GnbModel& model, const Eigen::VectorXd& x);
int gnb_predict(const GnbModel& model, const Eigen::VectorXd& x);

}  // namespace tfcsp
