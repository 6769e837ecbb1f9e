#include "tfcsp/csp.hpp"

#include "tfcsp/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tfcsp {
namespace {

Whitening whiten_conditioned(const SymMatrix& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  if (es.info() != Eigen::Success) throw ConditioningError("composite covariance eigendecomposition failed");
  const Eigen::VectorXd& lambda = es.eigenvalues();
  if (!lambda.allFinite() || lambda.minCoeff() <= kMinWhitenedEigenvalue) {
    throw ConditioningError("composite covariance is rank deficient (smallest eigenvalue " +
                            std::to_string(lambda.minCoeff()) + ")");
  }
  Whitening w;
  w.transform = lambda.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  w.composite = c;
  w.eigenvalues = lambda;
  return w;
}

void check_square(const SymMatrix& m, Eigen::Index n, const char* what) {
  if (m.rows() != n || m.cols() != n) throw DimensionError(std::string(what) + ": dimension mismatch");
  if (!m.allFinite()) throw ArgumentError(std::string(what) + ": non-finite entries");
}

// Conditions each class mean with an equal share of the composite ridge so the
// conditioned class covariances still sum exactly to the whitened composite.
std::vector<SymMatrix> condition_classes(std::span<const SymMatrix> class_covs, SymMatrix& composite) {
  const Eigen::Index n = class_covs.front().rows();
  composite = SymMatrix::Zero(n, n);
  for (const auto& c : class_covs) {
    check_square(c, n, "class covariance");
    composite += c;
  }
  const double share = composite_ridge(composite) / static_cast<double>(class_covs.size());
  std::vector<SymMatrix> out;
  out.reserve(class_covs.size());
  for (const auto& c : class_covs) {
    SymMatrix cc = c;
    cc.diagonal().array() += share;
    out.push_back(std::move(cc));
  }
  composite = SymMatrix::Zero(n, n);
  for (const auto& c : out) composite += c;
  return out;
}

void finish_model(CspModel& model, int n_features) {
  model.projection = model.rotation.transpose() * model.whitening;
  model.class_eigen.resize(static_cast<Eigen::Index>(model.class_covariances.size()), model.projection.rows());
  for (std::size_t c = 0; c < model.class_covariances.size(); ++c) {
    const Eigen::MatrixXd d = model.projection * model.class_covariances[c] * model.projection.transpose();
    model.class_eigen.row(static_cast<Eigen::Index>(c)) = d.diagonal().transpose();
  }
  model.selected_rows = select_by_score(dispersion_scores(model.class_eigen), n_features);
}

}  // namespace

bool is_symmetric(const SymMatrix& m, double tol) {
  return m.rows() == m.cols() && (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

SymMatrix trial_covariance(const Eigen::MatrixXd& x) {
  if (x.cols() < 2) throw RangeError("trial_covariance: need at least 2 samples");
  SymMatrix c = x * x.transpose();
  const double tr = c.trace();
  if (!(tr > 0.0) || !std::isfinite(tr)) throw DegenerateTrialError("trial_covariance: zero-energy trial");
  c /= tr;
  return c;
}

SymMatrix mean_covariance(std::span<const SymMatrix> covs) {
  if (covs.empty()) throw ArgumentError("mean_covariance: empty list");
  SymMatrix acc = SymMatrix::Zero(covs.front().rows(), covs.front().cols());
  for (const auto& c : covs) {
    if (c.rows() != acc.rows() || c.cols() != acc.cols()) throw DimensionError("mean_covariance: dimension mismatch");
    acc += c;
  }
  return acc / static_cast<double>(covs.size());
}

double composite_ridge(const SymMatrix& c) { return kCompositeRidge * c.trace() / static_cast<double>(c.rows()); }

Whitening whitening_from_composite(const SymMatrix& c) {
  check_square(c, c.rows(), "composite covariance");
  SymMatrix conditioned = c;
  conditioned.diagonal().array() += composite_ridge(c);
  return whiten_conditioned(conditioned);
}

Eigen::MatrixXd CspModel::selected_filters() const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(selected_rows.size()), projection.cols());
  for (std::size_t i = 0; i < selected_rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = projection.row(selected_rows[i]);
  }
  return out;
}

Eigen::VectorXd dispersion_scores(const Eigen::MatrixXd& class_eigen) {
  const double uniform = 1.0 / static_cast<double>(class_eigen.rows());
  return (class_eigen.array() - uniform).square().colwise().sum().transpose();
}

std::vector<int> select_by_score(const Eigen::VectorXd& scores, int n) {
  std::vector<int> idx(static_cast<std::size_t>(scores.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> key(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) key[i] = std::round(scores(static_cast<Eigen::Index>(i)) / 1e-12);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return key[static_cast<std::size_t>(a)] > key[static_cast<std::size_t>(b)];
  });
  idx.resize(static_cast<std::size_t>(std::min<Eigen::Index>(n, scores.size())));
  return idx;
}

CspModel csp_two_class(const SymMatrix& left, const SymMatrix& right, int n_features) {
  const Eigen::Index n = left.rows();
  if (n_features < 1 || n_features > n) {
    throw ArgumentError("csp_two_class: n_features " + std::to_string(n_features) + " outside [1, " +
                        std::to_string(n) + "]");
  }
  const SymMatrix pair[] = {left, right};
  CspModel model;
  model.class_count = 2;
  model.class_covariances = condition_classes(pair, model.composite);
  const Whitening w = whiten_conditioned(model.composite);
  model.whitening = w.transform;

  SymMatrix wl = w.transform * model.class_covariances[0] * w.transform.transpose();
  wl = 0.5 * (wl + wl.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(wl);
  if (es.info() != Eigen::Success) throw ConditioningError("csp_two_class: eigendecomposition failed");
  // Eigen sorts ascending; flip to descending lambda_L.
  model.rotation = es.eigenvectors().rowwise().reverse();
  finish_model(model, n_features);
  return model;
}

CspModel multiclass_csp(std::span<const SymMatrix> class_covs, int n_features, const JadOptions& jad_opts) {
  if (class_covs.size() < 2) throw ArgumentError("multiclass_csp: need at least 2 classes");
  const Eigen::Index n = class_covs.front().rows();
  if (n_features < 1 || n_features > n) {
    throw ArgumentError("multiclass_csp: n_features " + std::to_string(n_features) + " outside [1, " +
                        std::to_string(n) + "]");
  }
  CspModel model;
  model.class_count = static_cast<int>(class_covs.size());
  model.class_covariances = condition_classes(class_covs, model.composite);
  const Whitening w = whiten_conditioned(model.composite);
  model.whitening = w.transform;

  std::vector<Eigen::MatrixXd> whitened;
  whitened.reserve(class_covs.size());
  for (const auto& c : model.class_covariances) {
    Eigen::MatrixXd m = w.transform * c * w.transform.transpose();
    whitened.push_back(0.5 * (m + m.transpose()));
  }
  const JadResult j = jad(whitened, jad_opts);
  model.rotation = j.rotation;
  model.jad_converged = j.converged;
  finish_model(model, n_features);
  return model;
}

Eigen::VectorXd extract_features(const CspModel& model, const Eigen::MatrixXd& x) {
  if (x.rows() != model.channels()) {
    throw DimensionError("extract_features: trial has " + std::to_string(x.rows()) + " channels, model expects " +
                         std::to_string(model.channels()));
  }
  if (x.cols() < 2) throw RangeError("extract_features: need at least 2 samples");
  const Eigen::MatrixXd z = model.selected_filters() * x;
  const Eigen::VectorXd mean = z.rowwise().mean();
  const Eigen::VectorXd var =
      (z.colwise() - mean).rowwise().squaredNorm() / static_cast<double>(x.cols() - 1);
  const double total = var.sum();
  if (!(total > 0.0) || !std::isfinite(total) || (var.array() <= 0.0).any()) {
    throw DegenerateTrialError("extract_features: zero projected variance");
  }
  return (var / total).array().log().matrix();
}

}  // namespace tfcsp
