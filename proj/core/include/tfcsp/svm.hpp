#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace tfcsp {

struct SvmOptions {
  double c{1.0};
  double gamma{0.0};        // <= 0: 1 / (d * mean per-feature variance)
  double tolerance{1e-3};   // KKT violation tolerance
  int max_passes{0};        // <= 0: 10 * n; one pass = n working-pair updates
};

// One binary RBF machine separating class_pos (+1) from class_neg (-1).
// decision(x) = sum_i dual_coef_i * exp(-gamma |sv_i - x|^2) + bias.
struct BinarySvm {
  int class_pos{0};
  int class_neg{1};
  Eigen::MatrixXd support_vectors;  // one per row
  Eigen::VectorXd dual_coef;        // alpha_i * y_i, |.| <= C
  double bias{0};
  bool converged{true};
  int iterations{0};
};

struct SvmModel {
  std::vector<BinarySvm> machines;  // one per class pair (a < b), lexicographic
  double gamma{1.0};
  double c{1.0};
  int class_count{2};
  Eigen::Index dims{0};

  bool converged() const;
};

double rbf_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double gamma);

// Default kernel width 1 / (d * mean per-feature variance); 1/d for constant features.
double default_gamma(const Eigen::MatrixXd& features);

// Solves the binary dual with sequential minimal optimization (maximal-gain
// working pair, second-order selection). Labels must be +1/-1. A machine is
// flagged non-converged if the KKT gap is still above tolerance at the pass
// limit, or if a zero-curvature pair (identical points with opposite labels)
// had to be stepped.
BinarySvm train_binary_svm(const Eigen::MatrixXd& x, std::span<const int> y, double c, double gamma,
                           double tolerance, long max_iterations);

double svm_decision(const BinarySvm& m, const Eigen::VectorXd& x, double gamma);

// One-vs-one training over all class pairs. Throws TrainingError if a class
// has no samples.
SvmModel svm_train(const Eigen::MatrixXd& features, std::span<const int> labels, int class_count,
                   const SvmOptions& opts = {});

// Majority vote (a machine whose decision is exactly 0 abstains); ties go to
// the larger summed |decision| over won machines, then the lower class index.
int svm_predict(const SvmModel& model, const Eigen::VectorXd& x);

}  // namespace tfcsp
