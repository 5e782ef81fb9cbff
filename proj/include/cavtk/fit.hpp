#pragma once

// Damped least squares (Levenberg-Marquardt) for the small nonlinear fits in
// this toolkit.  Parameter counts are tiny (<= 6), so the normal equations are
// solved directly; bounds are enforced by clamping trial steps.

#include <functional>
#include <utility>
#include <vector>

namespace cavtk::fit {

using ModelFn = std::function<double(const std::vector<double>&, double)>;

struct Options {
    int max_iterations = 300;
    double initial_damping = 1e-3;
    // Relative chi-square improvement below which an accepted step counts as
    // converged (two such steps in a row end the iteration).
    double ftol = 1e-12;
};

struct Result {
    std::vector<double> params;
    std::vector<double> sigma; // sqrt of covariance diagonal; empty if singular
    double chi2 = 0.0;
    int dof = 0;
    bool converged = false;
    int iterations = 0;
};

// Minimizes sum_i ((y_i - model(params, x_i)) / sigma_i)^2.  When
// `absolute_sigma` is false the covariance is rescaled by chi2/dof, which is
// the right thing for unit weights where only relative errors are known.
Result levenberg_marquardt(const ModelFn& model, const std::vector<double>& x,
                           const std::vector<double>& y,
                           const std::vector<double>& sigma,
                           std::vector<double> start,
                           const std::vector<std::pair<double, double>>& bounds,
                           bool absolute_sigma = true,
                           const Options& options = {});

// Runs the solver from several starts and keeps the best chi-square; ties are
// broken toward the earlier start so results stay deterministic.
Result best_of_starts(const ModelFn& model, const std::vector<double>& x,
                      const std::vector<double>& y,
                      const std::vector<double>& sigma,
                      const std::vector<std::vector<double>>& starts,
                      const std::vector<std::pair<double, double>>& bounds,
                      bool absolute_sigma = true, const Options& options = {});

} // namespace cavtk::fit
