#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace tfcsp {

struct JadOptions {
  double tol{1e-9};  // a rotation is applied only when |sin(theta)| exceeds this
  int max_sweeps{100};
};

struct JadResult {
  Eigen::MatrixXd rotation;  // orthogonal U; U^T A_k U approximately diagonal
  bool converged{false};
  int sweeps{0};
  // cost_history[0] is the cost of the inputs; entry s is the cost after sweep s.
  std::vector<double> cost_history;

  double final_cost() const { return cost_history.empty() ? 0.0 : cost_history.back(); }
};

// Sum over all matrices of the squared off-diagonal entries of U^T A U.
double off_diagonal_cost(std::span<const Eigen::MatrixXd> mats, const Eigen::MatrixXd& u);

// Joint approximate diagonalization of real symmetric matrices by Jacobi
// plane rotations. Each rotation angle is the closed-form minimizer of the
// summed off-diagonal energy for its index pair, so the cost never rises
// within a sweep. Stops once a full sweep applies no rotation; otherwise
// returns the last iterate with converged = false after max_sweeps.
JadResult jad(std::span<const Eigen::MatrixXd> mats, const JadOptions& opts = {});

}  // namespace tfcsp
