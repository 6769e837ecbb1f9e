#include "tfcsp/mutual_info.hpp"

#include "tfcsp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tfcsp {

double mutual_information(std::span<const double> feature, std::span<const int> labels, int class_count,
                          int bins) {
  if (feature.size() != labels.size()) throw DimensionError("mutual_information: length mismatch");
  if (bins < 1 || class_count < 1) throw ArgumentError("mutual_information: bins and classes must be >= 1");
  const std::size_t n = feature.size();
  if (n == 0) return 0.0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return feature[a] < feature[b]; });

  const auto nb = static_cast<std::size_t>(bins);
  const auto nc = static_cast<std::size_t>(class_count);
  std::vector<double> joint(nb * nc, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t bin = std::min(nb - 1, r * nb / n);
    const int y = labels[order[r]];
    if (y < 0 || y >= class_count) throw ArgumentError("mutual_information: label out of range");
    joint[bin * nc + static_cast<std::size_t>(y)] += 1.0;
  }
  std::vector<double> pb(nb, 0.0), pc(nc, 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t c = 0; c < nc; ++c) {
      pb[b] += joint[b * nc + c];
      pc[c] += joint[b * nc + c];
    }
  }
  const double total = static_cast<double>(n);
  double mi = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t c = 0; c < nc; ++c) {
      const double j = joint[b * nc + c];
      if (j > 0.0) mi += (j / total) * std::log(j * total / (pb[b] * pc[c]));
    }
  }
  return std::max(0.0, mi);
}

Eigen::VectorXd mutual_information_scores(const Eigen::MatrixXd& features, std::span<const int> labels,
                                          int class_count, int bins) {
  Eigen::VectorXd out(features.cols());
  std::vector<double> col(static_cast<std::size_t>(features.rows()));
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    for (Eigen::Index i = 0; i < features.rows(); ++i) col[static_cast<std::size_t>(i)] = features(i, j);
    out(j) = mutual_information(col, labels, class_count, bins);
  }
  return out;
}

}  // namespace tfcsp
