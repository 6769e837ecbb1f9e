#pragma once

#include <Eigen/Dense>

#include <span>

namespace tfcsp {

inline constexpr double kLdaRidge = 1e-3;

// Multiclass linear discriminant with a pooled within-class covariance.
struct LdaModel {
  Eigen::MatrixXd class_means;                 // M x d
  Eigen::MatrixXd shared_covariance_inverse;   // d x d
  Eigen::VectorXd class_priors;                // M

  int class_count() const { return static_cast<int>(class_means.rows()); }
  Eigen::Index dims() const { return class_means.cols(); }
};

// `features` is n x d (one sample per row), labels in [0, class_count).
// Pooled covariance gets ridge * trace/d on the diagonal (ridge alone if the
// scatter is zero). Throws TrainingError if any class has no samples.
LdaModel lda_train(const Eigen::MatrixXd& features, std::span<const int> labels, int class_count,
                   double ridge = kLdaRidge);

// Discriminant scores x^T S^-1 mu_c - mu_c^T S^-1 mu_c / 2 + log prior_c.
Eigen::VectorXd lda_scores(const LdaModel& model, const Eigen::VectorXd& x);

// Argmax of lda_scores, lower class index on ties. Throws DimensionError.
int lda_predict(const LdaModel& model, const Eigen::VectorXd& x);

}  // namespace tfcsp
