#include "tfcsp/gnb.hpp"

#include "tfcsp/errors.hpp"
#include "train_checks.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace tfcsp {

GnbModel gnb_train(const Eigen::MatrixXd& features, std::span<const int> labels, int class_count,
                   double variance_floor) {
  const auto counts = detail::check_training_set(features, labels, class_count, "gnb_train");
  const Eigen::Index d = features.cols();
  GnbModel model;
  model.means = Eigen::MatrixXd::Zero(class_count, d);
  model.variances = Eigen::MatrixXd::Zero(class_count, d);
  model.class_priors.resize(class_count);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    model.means.row(labels[i]) += features.row(static_cast<Eigen::Index>(i));
  }
  for (int c = 0; c < class_count; ++c) model.means.row(c) /= counts[static_cast<std::size_t>(c)];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    model.variances.row(labels[i]) +=
        (features.row(static_cast<Eigen::Index>(i)) - model.means.row(labels[i])).array().square().matrix();
  }
  for (int c = 0; c < class_count; ++c) {
    model.variances.row(c) /= counts[static_cast<std::size_t>(c)];
    model.class_priors(c) = counts[static_cast<std::size_t>(c)] / static_cast<double>(features.rows());
  }
  model.variances = model.variances.cwiseMax(variance_floor);
  return model;
}

Eigen::VectorXd gnb_scores(const GnbModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.dims()) {
    throw DimensionError("gnb: feature has " + std::to_string(x.size()) + " dims, model expects " +
                         std::to_string(model.dims()));
  }
  Eigen::VectorXd s(model.class_count());
  for (int c = 0; c < model.class_count(); ++c) {
    const Eigen::ArrayXd var = model.variances.row(c).transpose().array();
    const Eigen::ArrayXd diff = x.array() - model.means.row(c).transpose().array();
    s(c) = std::log(model.class_priors(c)) -
           0.5 * ((2.0 * std::numbers::pi * var).log() + diff.square() / var).sum();
  }
  return s;
}

int gnb_predict(const GnbModel& model, const Eigen::VectorXd& x) {
  return detail::argmax_lowest(gnb_scores(model, x));
}

}  // namespace tfcsp
