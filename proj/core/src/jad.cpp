#include "tfcsp/jad.hpp"

#include "tfcsp/errors.hpp"

#include <cmath>

namespace tfcsp {

double off_diagonal_cost(std::span<const Eigen::MatrixXd> mats, const Eigen::MatrixXd& u) {
  double cost = 0.0;
  for (const auto& a : mats) {
    const Eigen::MatrixXd d = u.transpose() * a * u;
    cost += d.squaredNorm() - d.diagonal().squaredNorm();
  }
  return cost;
}

JadResult jad(std::span<const Eigen::MatrixXd> mats, const JadOptions& opts) {
  if (mats.empty()) throw ArgumentError("jad: need at least one matrix");
  const Eigen::Index n = mats.front().rows();
  for (const auto& a : mats) {
    if (a.rows() != n || a.cols() != n) throw DimensionError("jad: matrices must share a square dimension");
  }

  std::vector<Eigen::MatrixXd> work(mats.begin(), mats.end());
  JadResult result;
  result.rotation = Eigen::MatrixXd::Identity(n, n);
  result.cost_history.push_back(off_diagonal_cost(mats, result.rotation));
  Eigen::MatrixXd& v = result.rotation;

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    const Eigen::MatrixXd v_before = v;
    const std::vector<Eigen::MatrixXd> work_before = work;
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        // 2x2 Gram matrix of (a_pp - a_qq, a_pq + a_qp) over all matrices.
        double g11 = 0.0, g12 = 0.0, g22 = 0.0;
        for (const auto& a : work) {
          const double d = a(p, p) - a(q, q);
          const double o = a(p, q) + a(q, p);
          g11 += d * d;
          g12 += d * o;
          g22 += o * o;
        }
        const double ton = g11 - g22;
        const double toff = 2.0 * g12;
        const double theta = 0.5 * std::atan2(toff, ton + std::hypot(ton, toff));
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        if (std::abs(s) <= opts.tol) continue;
        rotated = true;

        for (auto& a : work) {
          for (Eigen::Index k = 0; k < n; ++k) {
            const double ap = a(p, k), aq = a(q, k);
            a(p, k) = c * ap + s * aq;
            a(q, k) = -s * ap + c * aq;
          }
          for (Eigen::Index k = 0; k < n; ++k) {
            const double ap = a(k, p), aq = a(k, q);
            a(k, p) = c * ap + s * aq;
            a(k, q) = -s * ap + c * aq;
          }
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vp = v(k, p), vq = v(k, q);
          v(k, p) = c * vp + s * vq;
          v(k, q) = -s * vp + c * vq;
        }
      }
    }
    if (!rotated) {
      result.converged = true;
      break;
    }
    // Cost is measured on the inputs so the history is exact for the returned U.
    const double cost = off_diagonal_cost(mats, v);
    if (cost > result.cost_history.back()) {
      // Rotations are below rounding resolution; keep the previous iterate.
      v = v_before;
      work = work_before;
      result.converged = true;
      break;
    }
    ++result.sweeps;
    result.cost_history.push_back(cost);
  }
  return result;
}

}  // namespace tfcsp
