#include "cavtk/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cavtk::fit {

namespace {

// Gaussian elimination with partial pivoting; a is n x n row-major and is
// destroyed.  Returns false when the pivot vanishes.
bool solve_linear(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (std::abs(a[piv * n + col]) < 1e-300) return false;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
            std::swap(b[col], b[piv]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * b[c];
        b[r] = s / a[r * n + r];
    }
    return true;
}

// Full inverse via elimination on an augmented identity, for the covariance.
bool invert(std::vector<double> a, std::vector<double>& inv, int n) {
    inv.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (std::abs(a[piv * n + col]) < 1e-300) return false;
        if (piv != col)
            for (int c = 0; c < n; ++c) {
                std::swap(a[col * n + c], a[piv * n + c]);
                std::swap(inv[col * n + c], inv[piv * n + c]);
            }
        const double d = a[col * n + col];
        for (int c = 0; c < n; ++c) {
            a[col * n + c] /= d;
            inv[col * n + c] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r * n + col];
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a[r * n + c] -= f * a[col * n + c];
                inv[r * n + c] -= f * inv[col * n + c];
            }
        }
    }
    return true;
}

double clampv(double v, const std::pair<double, double>& b) {
    return std::min(std::max(v, b.first), b.second);
}

} // namespace

Result levenberg_marquardt(const ModelFn& model, const std::vector<double>& x,
                           const std::vector<double>& y,
                           const std::vector<double>& sigma,
                           std::vector<double> start,
                           const std::vector<std::pair<double, double>>& bounds,
                           bool absolute_sigma, const Options& options) {
    const std::size_t m = x.size();
    const int n = static_cast<int>(start.size());
    if (y.size() != m || sigma.size() != m)
        throw std::invalid_argument("fit: x, y, sigma must have equal length");
    if (bounds.size() != start.size())
        throw std::invalid_argument("fit: one bound pair per parameter required");
    if (m < start.size())
        throw std::invalid_argument("fit: fewer points than parameters");
    for (std::size_t i = 0; i < m; ++i)
        if (!(sigma[i] > 0.0))
            throw std::invalid_argument("fit: sigma must be positive");

    for (int j = 0; j < n; ++j) start[j] = clampv(start[j], bounds[j]);

    auto chi2_of = [&](const std::vector<double>& p) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double r = (y[i] - model(p, x[i])) / sigma[i];
            s += r * r;
        }
        return s;
    };

    Result res;
    res.params = start;
    res.chi2 = chi2_of(start);
    res.dof = static_cast<int>(m) - n;

    std::vector<double> jac(m * n); // rows already divided by sigma
    std::vector<double> resid(m);
    double damping = options.initial_damping;
    int calm = 0;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        res.iterations = iter + 1;
        for (std::size_t i = 0; i < m; ++i)
            resid[i] = (y[i] - model(res.params, x[i])) / sigma[i];
        for (int j = 0; j < n; ++j) {
            const double h =
                1e-6 * std::max(std::abs(res.params[j]), 1e-6);
            auto pp = res.params, pm = res.params;
            pp[j] = clampv(res.params[j] + h, bounds[j]);
            pm[j] = clampv(res.params[j] - h, bounds[j]);
            const double span = pp[j] - pm[j];
            for (std::size_t i = 0; i < m; ++i)
                jac[i * n + j] =
                    span > 0.0
                        ? (model(pp, x[i]) - model(pm, x[i])) / (span * sigma[i])
                        : 0.0;
        }

        std::vector<double> jtj(static_cast<std::size_t>(n) * n, 0.0);
        std::vector<double> jtr(n, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (int a = 0; a < n; ++a) {
                jtr[a] += jac[i * n + a] * resid[i];
                for (int b = a; b < n; ++b)
                    jtj[a * n + b] += jac[i * n + a] * jac[i * n + b];
            }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < a; ++b) jtj[a * n + b] = jtj[b * n + a];

        bool stepped = false;
        for (int grow = 0; grow < 40; ++grow) {
            auto lhs = jtj;
            auto rhs = jtr;
            for (int a = 0; a < n; ++a)
                lhs[a * n + a] +=
                    damping * std::max(jtj[a * n + a], 1e-12);
            if (!solve_linear(lhs, rhs, n)) {
                damping *= 7.0;
                continue;
            }
            auto trial = res.params;
            double move = 0.0;
            for (int a = 0; a < n; ++a) {
                trial[a] = clampv(res.params[a] + rhs[a], bounds[a]);
                move = std::max(move,
                                std::abs(trial[a] - res.params[a]) /
                                    (std::abs(res.params[a]) + 1e-12));
            }
            const double c2 = chi2_of(trial);
            if (c2 <= res.chi2) {
                const double gain = res.chi2 - c2;
                res.params = trial;
                res.chi2 = c2;
                damping = std::max(damping / 3.0, 1e-12);
                stepped = true;
                if (gain < options.ftol * std::max(res.chi2, 1e-30) ||
                    move < 1e-11)
                    ++calm;
                else
                    calm = 0;
                break;
            }
            damping *= 7.0;
        }
        if (!stepped || calm >= 2) {
            res.converged = stepped || calm >= 2 || res.chi2 == 0.0;
            if (!stepped && iter == 0) res.converged = false;
            break;
        }
        res.converged = true;
    }

    // Covariance from the curvature at the optimum (no damping).
    for (std::size_t i = 0; i < m; ++i)
        resid[i] = (y[i] - model(res.params, x[i])) / sigma[i];
    for (int j = 0; j < n; ++j) {
        const double h = 1e-6 * std::max(std::abs(res.params[j]), 1e-6);
        auto pp = res.params, pm = res.params;
        pp[j] = clampv(res.params[j] + h, bounds[j]);
        pm[j] = clampv(res.params[j] - h, bounds[j]);
        const double span = pp[j] - pm[j];
        for (std::size_t i = 0; i < m; ++i)
            jac[i * n + j] =
                span > 0.0
                    ? (model(pp, x[i]) - model(pm, x[i])) / (span * sigma[i])
                    : 0.0;
    }
    std::vector<double> jtj(static_cast<std::size_t>(n) * n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                jtj[a * n + b] += jac[i * n + a] * jac[i * n + b];
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < a; ++b) jtj[a * n + b] = jtj[b * n + a];
    std::vector<double> cov;
    if (invert(jtj, cov, n)) {
        const double scale =
            absolute_sigma || res.dof <= 0 ? 1.0 : res.chi2 / res.dof;
        res.sigma.resize(n);
        for (int a = 0; a < n; ++a)
            res.sigma[a] = std::sqrt(std::max(cov[a * n + a] * scale, 0.0));
    }
    return res;
}

Result best_of_starts(const ModelFn& model, const std::vector<double>& x,
                      const std::vector<double>& y,
                      const std::vector<double>& sigma,
                      const std::vector<std::vector<double>>& starts,
                      const std::vector<std::pair<double, double>>& bounds,
                      bool absolute_sigma, const Options& options) {
    if (starts.empty()) throw std::invalid_argument("fit: no starting points");
    Result best;
    best.chi2 = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        Result r = levenberg_marquardt(model, x, y, sigma, s, bounds,
                                       absolute_sigma, options);
        if (r.chi2 < best.chi2) best = r;
    }
    return best;
}

} // namespace cavtk::fit
