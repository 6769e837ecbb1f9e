#include "tfcsp/lda.hpp"

#include "tfcsp/errors.hpp"
#include "train_checks.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace tfcsp {

namespace detail {

std::vector<int> check_training_set(const Eigen::MatrixXd& features, std::span<const int> labels, int class_count,
                                    const char* who) {
  if (class_count < 2) throw TrainingError(std::string(who) + ": need at least 2 classes");
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw DimensionError(std::string(who) + ": feature rows and labels differ in length");
  }
  if (!features.allFinite()) throw TrainingError(std::string(who) + ": non-finite features");
  std::vector<int> counts(static_cast<std::size_t>(class_count), 0);
  for (int y : labels) {
    if (y < 0 || y >= class_count) throw TrainingError(std::string(who) + ": label out of range");
    ++counts[static_cast<std::size_t>(y)];
  }
  for (int c = 0; c < class_count; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw TrainingError(std::string(who) + ": class " + std::to_string(c) + " has no training samples");
    }
  }
  return counts;
}

int argmax_lowest(const Eigen::VectorXd& scores) {
  int best = 0;
  for (Eigen::Index c = 1; c < scores.size(); ++c) {
    if (scores(c) > scores(best)) best = static_cast<int>(c);
  }
  return best;
}

}  // namespace detail

LdaModel lda_train(const Eigen::MatrixXd& features, std::span<const int> labels, int class_count, double ridge) {
  const auto counts = detail::check_training_set(features, labels, class_count, "lda_train");
  const Eigen::Index d = features.cols();
  const auto n = static_cast<double>(features.rows());

  LdaModel model;
  model.class_means = Eigen::MatrixXd::Zero(class_count, d);
  model.class_priors.resize(class_count);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    model.class_means.row(labels[i]) += features.row(static_cast<Eigen::Index>(i));
  }
  for (int c = 0; c < class_count; ++c) {
    model.class_means.row(c) /= counts[static_cast<std::size_t>(c)];
    model.class_priors(c) = counts[static_cast<std::size_t>(c)] / n;
  }

  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Eigen::RowVectorXd r = features.row(static_cast<Eigen::Index>(i)) - model.class_means.row(labels[i]);
    scatter.noalias() += r.transpose() * r;
  }
  const double dof = std::max(1.0, n - class_count);
  scatter /= dof;
  const double tr = scatter.trace();
  const double lambda = tr > 0.0 ? ridge * tr / static_cast<double>(d) : ridge;
  scatter.diagonal().array() += lambda;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(scatter);
  if (ldlt.info() != Eigen::Success) throw TrainingError("lda_train: pooled covariance not invertible");
  model.shared_covariance_inverse = ldlt.solve(Eigen::MatrixXd::Identity(d, d));
  model.shared_covariance_inverse =
      0.5 * (model.shared_covariance_inverse + model.shared_covariance_inverse.transpose());
  return model;
}

Eigen::VectorXd lda_scores(const LdaModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.dims()) {
    throw DimensionError("lda: feature has " + std::to_string(x.size()) + " dims, model expects " +
                         std::to_string(model.dims()));
  }
  Eigen::VectorXd s(model.class_count());
  for (int c = 0; c < model.class_count(); ++c) {
    const Eigen::VectorXd mu = model.class_means.row(c).transpose();
    const Eigen::VectorXd w = model.shared_covariance_inverse * mu;
    s(c) = x.dot(w) - 0.5 * mu.dot(w) + std::log(model.class_priors(c));
  }
  return s;
}

int lda_predict(const LdaModel& model, const Eigen::VectorXd& x) {
  return detail::argmax_lowest(lda_scores(model, x));
}

}  // namespace tfcsp
