#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

namespace aim {

/// Returns f(x); writes the gradient when `grad` is non-null.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct MinimizeOptions {
  double gradient_tolerance = 1e-8;
  int max_iterations = 5000;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string message;
};

/// BFGS with a strong-Wolfe line search.
MinimizeResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const MinimizeOptions& options = {});

}  // namespace aim
