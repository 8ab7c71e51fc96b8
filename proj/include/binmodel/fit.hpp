#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "binmodel/detection.hpp"
#include "binmodel/experiments.hpp"

namespace binmodel {

// 1 - Σ(y - f)^2 / Σ(y - ȳ)^2. Throws UndefinedRSquared if the observations have no variance,
// InvalidParameter on length mismatch or fewer than two points.
double r_squared(std::span<const double> observed, std::span<const double> predicted);

struct NelderMeadOptions {
  int max_evaluations = 2000;
  double f_tol = 1e-12;   // spread of vertex values
  double x_tol = 1e-8;    // simplex diameter
  double initial_step = 0.4;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> best_trace;  // best vertex value after each iteration
};

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start, const NelderMeadOptions& opts = {});

struct Interval {
  double lo;
  double hi;
};

struct FitBounds {
  Interval rho_hat{0.5, 0.999};
  Interval sigma_bin{0.01, 2.0};
  Interval sigma_mon{0.01, 3.0};
};

struct FitOptions {
  FitBounds bounds{};
  std::optional<DetectionParams> initial;  // defaults to the experiment's table values
  NelderMeadOptions simplex{};
  RunOptions run{};
  int restarts = 2;  // re-seeded simplex runs from the best point so far
};

struct FitResult {
  std::string experiment;
  DetectionParams params;
  double r_squared = 0.0;
  double sse = 0.0;
  std::size_t n_points = 0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // objective after each accepted simplex iteration
};

// Least-squares fit of (ρ̂, σ_bin, σ_mon) to one experiment's data on its native ordinate.
// Requires at least four data points.
FitResult fit_params(const ExperimentDef& def, std::span<const DigitizedDatum> data,
                     const FitOptions& opts = {});

// One parameter set for several experiments, minimizing the summed unexplained variance
// fraction Σ_e SSE_e / SST_e. The reported R² pools the SNR-ordinate experiments.
FitResult fit_global(std::span<const ExperimentDef> defs, std::span<const DigitizedDatum> data,
                     const FitOptions& opts = {});

}  // namespace binmodel
