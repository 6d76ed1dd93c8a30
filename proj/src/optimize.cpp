#include "aim/optimize.hpp"

#include <cmath>

#include <ceres/ceres.h>
#include <glog/logging.h>

namespace aim {

namespace {

class CeresObjective final : public ceres::FirstOrderFunction {
 public:
  CeresObjective(const Objective& f, int n, int* evaluations) : f_(f), n_(n), evaluations_(evaluations) {}

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    const Eigen::Map<const Eigen::VectorXd> x(parameters, n_);
    ++*evaluations_;
    if (gradient == nullptr) {
      cost[0] = f_(x, nullptr);
      return std::isfinite(cost[0]);
    }
    Eigen::VectorXd g(n_);
    cost[0] = f_(x, &g);
    Eigen::Map<Eigen::VectorXd>(gradient, n_) = g;
    return std::isfinite(cost[0]) && g.allFinite();
  }

  int NumParameters() const override { return n_; }

 private:
  const Objective& f_;
  int n_;
  int* evaluations_;
};

// line-search warnings also land in summary.message
void quiet_solver_logs() {
  static const bool once = [] {
    FLAGS_minloglevel = google::GLOG_ERROR;
    return true;
  }();
  (void)once;
}

}  // namespace

MinimizeResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const MinimizeOptions& options) {
  quiet_solver_logs();
  MinimizeResult result;
  if (x0.size() == 0) {
    result.x = x0;
    result.value = f(x0, nullptr);
    result.evaluations = 1;
    result.converged = true;
    result.message = "no parameters";
    return result;
  }

  const int n = static_cast<int>(x0.size());
  // GradientProblem takes ownership of the function object.
  ceres::GradientProblem problem(new CeresObjective(f, n, &result.evaluations));
  ceres::GradientProblemSolver::Options opts;
  opts.line_search_direction_type = ceres::BFGS;
  opts.line_search_type = ceres::WOLFE;
  opts.gradient_tolerance = options.gradient_tolerance;
  opts.function_tolerance = 1e-16;
  opts.parameter_tolerance = 1e-16;
  opts.max_num_iterations = options.max_iterations;
  opts.logging_type = ceres::SILENT;

  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(opts, problem, x0.data(), &summary);

  result.x = std::move(x0);
  result.value = summary.final_cost;
  result.iterations = static_cast<int>(summary.iterations.size()) - 1;
  result.converged = summary.termination_type == ceres::CONVERGENCE;
  result.message = summary.message;
  return result;
}

}  // namespace aim
