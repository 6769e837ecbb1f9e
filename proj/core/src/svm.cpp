#include "tfcsp/svm.hpp"

#include "tfcsp/errors.hpp"
#include "train_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tfcsp {
namespace {

constexpr double kTau = 1e-12;

}  // namespace

bool SvmModel::converged() const {
  return std::all_of(machines.begin(), machines.end(), [](const BinarySvm& m) { return m.converged; });
}

double rbf_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double gamma) {
  return std::exp(-gamma * (a - b).squaredNorm());
}

double default_gamma(const Eigen::MatrixXd& features) {
  const Eigen::Index d = features.cols();
  if (d == 0) return 1.0;
  double mean_var = 0.0;
  if (features.rows() > 1) {
    const Eigen::RowVectorXd mu = features.colwise().mean();
    mean_var = (features.rowwise() - mu).array().square().colwise().sum().mean() /
               static_cast<double>(features.rows());
  }
  return mean_var > 0.0 ? 1.0 / (static_cast<double>(d) * mean_var) : 1.0 / static_cast<double>(d);
}

BinarySvm train_binary_svm(const Eigen::MatrixXd& x, std::span<const int> y, double c, double gamma,
                           double tolerance, long max_iterations) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      k(i, j) = k(j, i) = std::exp(-gamma * (x.row(i) - x.row(j)).squaredNorm());
    }
  }
  auto yy = [&](Eigen::Index i) { return static_cast<double>(y[static_cast<std::size_t>(i)]); };
  auto q = [&](Eigen::Index i, Eigen::Index j) { return yy(i) * yy(j) * k(i, j); };

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);
  auto in_up = [&](Eigen::Index t) { return (yy(t) > 0 && alpha(t) < c) || (yy(t) < 0 && alpha(t) > 0); };
  auto in_low = [&](Eigen::Index t) { return (yy(t) > 0 && alpha(t) > 0) || (yy(t) < 0 && alpha(t) < c); };

  BinarySvm out;
  out.converged = false;
  bool degenerate = false;
  long iter = 0;
  for (; iter < max_iterations; ++iter) {
    // Maximal violating index i from the "up" set.
    Eigen::Index i = -1;
    double gmax = -std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (in_up(t) && -yy(t) * grad(t) > gmax) {
        gmax = -yy(t) * grad(t);
        i = t;
      }
    }
    // Partner j from the "low" set by second-order gain; track the gap too.
    Eigen::Index j = -1;
    double gmin = std::numeric_limits<double>::infinity();
    double best_gain = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = -yy(t) * grad(t);
      gmin = std::min(gmin, v);
      if (i < 0) continue;
      const double b = gmax - v;
      if (b > 0.0) {
        double a = k(i, i) + k(t, t) - 2.0 * k(i, t);
        if (a <= 0.0) a = kTau;
        if (-(b * b) / a < best_gain) {
          best_gain = -(b * b) / a;
          j = t;
        }
      }
    }
    if (i < 0 || j < 0 || gmax - gmin < tolerance) {
      out.converged = true;
      break;
    }

    const double ai_old = alpha(i), aj_old = alpha(j);
    if (yy(i) != yy(j)) {
      double quad = k(i, i) + k(j, j) + 2.0 * q(i, j);
      if (quad <= kTau) {
        quad = kTau;
        degenerate = true;
      }
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0) {
        if (alpha(j) < 0) { alpha(j) = 0; alpha(i) = diff; }
      } else {
        if (alpha(i) < 0) { alpha(i) = 0; alpha(j) = -diff; }
      }
      if (diff > 0) {
        if (alpha(i) > c) { alpha(i) = c; alpha(j) = c - diff; }
      } else {
        if (alpha(j) > c) { alpha(j) = c; alpha(i) = c + diff; }
      }
    } else {
      double quad = k(i, i) + k(j, j) - 2.0 * q(i, j);
      if (quad <= kTau) {
        quad = kTau;
        degenerate = true;
      }
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > c) {
        if (alpha(i) > c) { alpha(i) = c; alpha(j) = sum - c; }
      } else {
        if (alpha(j) < 0) { alpha(j) = 0; alpha(i) = sum; }
      }
      if (sum > c) {
        if (alpha(j) > c) { alpha(j) = c; alpha(i) = sum - c; }
      } else {
        if (alpha(i) < 0) { alpha(i) = 0; alpha(j) = sum; }
      }
    }
    const double di = alpha(i) - ai_old, dj = alpha(j) - aj_old;
    for (Eigen::Index t = 0; t < n; ++t) grad(t) += q(i, t) * di + q(j, t) * dj;
  }
  out.iterations = static_cast<int>(iter);
  if (degenerate) out.converged = false;

  // Bias from free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  int n_free = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = yy(t) * grad(t);
    if (alpha(t) >= c) {
      if (yy(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha(t) <= 0) {
      if (yy(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  double rho = 0.0;
  if (n_free > 0) rho = sum_free / n_free;
  else if (std::isfinite(ub) && std::isfinite(lb)) rho = (ub + lb) / 2.0;
  else if (std::isfinite(ub)) rho = ub;
  else if (std::isfinite(lb)) rho = lb;
  out.bias = -rho;

  std::vector<Eigen::Index> sv;
  for (Eigen::Index t = 0; t < n; ++t) {
    if (alpha(t) > 0.0) sv.push_back(t);
  }
  out.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), x.cols());
  out.dual_coef.resize(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t s = 0; s < sv.size(); ++s) {
    out.support_vectors.row(static_cast<Eigen::Index>(s)) = x.row(sv[s]);
    out.dual_coef(static_cast<Eigen::Index>(s)) = alpha(sv[s]) * yy(sv[s]);
  }
  return out;
}

double svm_decision(const BinarySvm& m, const Eigen::VectorXd& x, double gamma) {
  double f = m.bias;
  for (Eigen::Index s = 0; s < m.support_vectors.rows(); ++s) {
    f += m.dual_coef(s) * std::exp(-gamma * (m.support_vectors.row(s).transpose() - x).squaredNorm());
  }
  return f;
}

SvmModel svm_train(const Eigen::MatrixXd& features, std::span<const int> labels, int class_count,
                   const SvmOptions& opts) {
  detail::check_training_set(features, labels, class_count, "svm_train");
  if (!(opts.c > 0.0)) throw TrainingError("svm_train: C must be positive");
  SvmModel model;
  model.class_count = class_count;
  model.c = opts.c;
  model.dims = features.cols();
  model.gamma = opts.gamma > 0.0 ? opts.gamma : default_gamma(features);

  for (int a = 0; a < class_count; ++a) {
    for (int b = a + 1; b < class_count; ++b) {
      std::vector<Eigen::Index> rows;
      std::vector<int> y;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == a || labels[i] == b) {
          rows.push_back(static_cast<Eigen::Index>(i));
          y.push_back(labels[i] == a ? 1 : -1);
        }
      }
      const Eigen::MatrixXd x = features(rows, Eigen::all);
      const long n = static_cast<long>(rows.size());
      const long passes = opts.max_passes > 0 ? opts.max_passes : 10 * n;
      BinarySvm m = train_binary_svm(x, y, opts.c, model.gamma, opts.tolerance, passes * n);
      m.class_pos = a;
      m.class_neg = b;
      model.machines.push_back(std::move(m));
    }
  }
  return model;
}

int svm_predict(const SvmModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.dims) {
    throw DimensionError("svm: feature has " + std::to_string(x.size()) + " dims, model expects " +
                         std::to_string(model.dims));
  }
  std::vector<int> votes(static_cast<std::size_t>(model.class_count), 0);
  std::vector<double> strength(static_cast<std::size_t>(model.class_count), 0.0);
  for (const auto& m : model.machines) {
    const double d = svm_decision(m, x, model.gamma);
    if (d > 0.0) {
      ++votes[static_cast<std::size_t>(m.class_pos)];
      strength[static_cast<std::size_t>(m.class_pos)] += d;
    } else if (d < 0.0) {
      ++votes[static_cast<std::size_t>(m.class_neg)];
      strength[static_cast<std::size_t>(m.class_neg)] -= d;
    }
  }
  int best = 0;
  for (int c = 1; c < model.class_count; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    const auto bu = static_cast<std::size_t>(best);
    if (votes[cu] > votes[bu] || (votes[cu] == votes[bu] && strength[cu] > strength[bu])) best = c;
  }
  return best;
}

}  // namespace tfcsp
