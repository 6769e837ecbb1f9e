#include "tfcsp/evaluation.hpp"

#include "tfcsp/errors.hpp"

namespace tfcsp {

double cohen_kappa(const ConfusionMatrix& confusion) {
  if (confusion.size() == 0 || confusion.rows() != confusion.cols()) {
    throw ArgumentError("cohen_kappa: confusion matrix must be square and non-empty");
  }
  const auto total = static_cast<double>(confusion.sum());
  if (!(total > 0.0)) throw ArgumentError("cohen_kappa: confusion matrix has no counts");
  const double p_o = static_cast<double>(confusion.trace()) / total;
  double p_e = 0.0;
  for (Eigen::Index c = 0; c < confusion.rows(); ++c) {
    p_e += static_cast<double>(confusion.row(c).sum()) * static_cast<double>(confusion.col(c).sum());
  }
  p_e /= total * total;
  if (p_e == 1.0) return 0.0;
  return (p_o - p_e) / (1.0 - p_e);
}

EvalReport make_report(const ConfusionMatrix& confusion, std::string method, std::string classifier) {
  EvalReport r;
  r.method = std::move(method);
  r.classifier = std::move(classifier);
  r.confusion = confusion;
  r.kappa = cohen_kappa(confusion);
  r.accuracy = static_cast<double>(confusion.trace()) / static_cast<double>(confusion.sum());
  r.per_class_recall.resize(static_cast<std::size_t>(confusion.rows()), 0.0);
  for (Eigen::Index c = 0; c < confusion.rows(); ++c) {
    const long long row = confusion.row(c).sum();
    if (row > 0) {
      r.per_class_recall[static_cast<std::size_t>(c)] =
          static_cast<double>(confusion(c, c)) / static_cast<double>(row);
    }
  }
  return r;
}

}  // namespace tfcsp
