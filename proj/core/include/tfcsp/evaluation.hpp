#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace tfcsp {

using ConfusionMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Chance-corrected agreement (p_o - p_e) / (1 - p_e) with empirical
// marginals; rows are true classes, columns predictions. Returns 0 when
// p_e == 1. Throws ArgumentError for an empty or all-zero matrix.
double cohen_kappa(const ConfusionMatrix& confusion);

struct EvalReport {
  std::string method;
  std::string classifier;
  ConfusionMatrix confusion;
  double accuracy{0};
  double kappa{0};
  std::vector<double> per_class_recall;  // 0 for classes absent from the truth

  long long total() const { return confusion.sum(); }
};

EvalReport make_report(const ConfusionMatrix& confusion, std::string method = {}, std::string classifier = {});

}  // namespace tfcsp
