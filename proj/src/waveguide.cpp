#include "cavtk/waveguide.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cavtk/cavity.hpp"
#include "cavtk/quadrature.hpp"

namespace cavtk::waveguide {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Dispersion residual in x = kappa * b for the even TE0 branch:
//   g(x) = x tan(x) - sqrt(V^2 - x^2)
// with one sign change on (0, min(V, pi/2)).
double dispersion(double x, double v) {
    return x * std::tan(x) - std::sqrt(std::max(v * v - x * x, 0.0));
}

// Regula falsi with the Illinois weighting, falling back to bisection when
// the secant step leaves the bracket.  The residual is smooth here, so this
// converges superlinearly while keeping the bracket guarantee.
double solve_dispersion(double v) {
    double lo = 0.0;
    double hi = v < kPi / 2.0 ? v : std::nextafter(kPi / 2.0, 0.0);
    double flo = -v; // limit of g at x -> 0+
    double fhi = dispersion(hi, v);
    double side = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
        double x = (flo * hi - fhi * lo) / (flo - fhi);
        if (!(x > lo) || !(x < hi)) x = 0.5 * (lo + hi);
        const double fx = dispersion(x, v);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (fhi > 0.0)) {
            hi = x;
            fhi = fx;
            if (side > 0.0) flo *= 0.5;
            side = 1.0;
        } else {
            lo = x;
            flo = fx;
            if (side < 0.0) fhi *= 0.5;
            side = -1.0;
        }
    }
    return 0.5 * (lo + hi);
}

// Radius where the field amplitude falls to `level` times its axis value.
double level_radius(const SlabMode& m, double level) {
    const double edge = std::cos(m.kappa_per_nm * m.half_width_nm);
    if (edge <= level) return std::acos(level) / m.kappa_per_nm;
    return m.half_width_nm + std::log(edge / level) / m.gamma_per_nm;
}

// Width of the least-squares Gaussian a exp(-y^2/w^2).  For fixed w the best
// amplitude is the normalized overlap, so only the overlap ratio
// (int E g)^2 / w needs to be maximized; golden-section is enough because the
// ratio is unimodal in w.
double gaussian_fit_radius(const SlabMode& m) {
    const double ymax = m.half_width_nm + 45.0 / m.gamma_per_nm;
    auto score = [&](double w) {
        const auto ov = quad::integrate(
            [&](double y) { return m.field(y) * std::exp(-(y / w) * (y / w)); },
            0.0, ymax, 1e-10);
        return ov.value * ov.value / w;
    };
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 2.0, b = 20.0 * ymax;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = score(x1), f2 = score(x2);
    for (int i = 0; i < 140; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = score(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = score(x1);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

double SlabMode::field(double y_nm) const {
    const double y = std::abs(y_nm);
    if (y <= half_width_nm)
        return amplitude_core * std::cos(kappa_per_nm * y);
    return amplitude_core * std::cos(kappa_per_nm * half_width_nm) *
           std::exp(-gamma_per_nm * (y - half_width_nm));
}

SlabMode solve_fundamental_mode(double half_width_nm, double guide_index,
                                double lambda_nm) {
    if (!(half_width_nm > 0.0) || !std::isfinite(half_width_nm))
        throw std::invalid_argument("solve_fundamental_mode: half-width must be positive");
    if (!(guide_index > 1.0) || !std::isfinite(guide_index))
        throw std::invalid_argument("solve_fundamental_mode: guide index must exceed the air cladding");
    if (!(lambda_nm > 0.0) || !std::isfinite(lambda_nm))
        throw std::invalid_argument("solve_fundamental_mode: wavelength must be positive");

    SlabMode m;
    m.half_width_nm = half_width_nm;
    m.guide_index = guide_index;
    m.lambda_nm = lambda_nm;

    const double k0 = 2.0 * kPi / lambda_nm;
    const double v = k0 * half_width_nm *
                     std::sqrt(guide_index * guide_index - 1.0);
    const double x = solve_dispersion(v);
    m.kappa_per_nm = x / half_width_nm;
    m.gamma_per_nm = std::sqrt(std::max(v * v - x * x, 0.0)) / half_width_nm;

    // 1 + (gamma/k0)^2 keeps precision when the mode barely hangs on and
    // gamma is many orders below k0.
    const double rel = m.gamma_per_nm / k0;
    m.n_eff = std::sqrt(1.0 + rel * rel);
    m.beta_per_nm = m.n_eff * k0;
    m.near_cutoff = m.n_eff - 1.0 < 1e-10;

    // Closed-form norm of cos core plus exponential tails.
    const double c = std::cos(x);
    const double core = half_width_nm * (1.0 + std::sin(2.0 * x) / (2.0 * x));
    const double tails = c * c / m.gamma_per_nm;
    m.amplitude_core = 1.0 / std::sqrt(core + tails);

    m.mode_radius_nm = level_radius(m, std::exp(-2.0));
    return m;
}

double mode_radius_nm(const SlabMode& m, RadiusDefinition def) {
    switch (def) {
    case RadiusDefinition::FieldInverseE2:
        return level_radius(m, std::exp(-2.0));
    case RadiusDefinition::IntensityInverseE2:
        return level_radius(m, std::exp(-1.0));
    case RadiusDefinition::GaussianFit:
        return gaussian_fit_radius(m);
    }
    throw std::logic_error("mode_radius: unknown definition");
}

ConfinementSweep confinement_sweep(double half_width_from_nm,
                                   double half_width_to_nm, int samples,
                                   double guide_index, double lambda_nm,
                                   RadiusDefinition def) {
    if (!(half_width_from_nm > 0.0) || !(half_width_to_nm > half_width_from_nm))
        throw std::invalid_argument("confinement_sweep: need 0 < from < to");
    if (samples < 2)
        throw std::invalid_argument("confinement_sweep: need at least two samples");

    ConfinementSweep sweep;
    sweep.points.reserve(static_cast<std::size_t>(samples));
    const double step =
        (half_width_to_nm - half_width_from_nm) / (samples - 1);
    sweep.min_radius_nm = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double b = half_width_from_nm + step * i;
        const SlabMode m = solve_fundamental_mode(b, guide_index, lambda_nm);
        const double r = mode_radius_nm(m, def);
        sweep.points.push_back({b, r});
        if (r < sweep.min_radius_nm) {
            sweep.min_radius_nm = r;
            sweep.best_half_width_nm = b;
        }
    }
    return sweep;
}

HybridPurcell hybrid_purcell(double n_eff, double mode_radius_nm,
                             double lambda_nm, double q_eff) {
    if (!(n_eff > 0.0) || !(mode_radius_nm > 0.0) || !(lambda_nm > 0.0) ||
        !(q_eff > 0.0))
        throw std::invalid_argument("hybrid_purcell: inputs must be positive");
    HybridPurcell h;
    const double volume_nm3 =
        kPi * mode_radius_nm * mode_radius_nm * lambda_nm / (8.0 * n_eff);
    const double unit = lambda_nm / n_eff;
    h.volume_lambda_eff3 = volume_nm3 / (unit * unit * unit);
    const double volume_vacuum_lambda3 =
        h.volume_lambda_eff3 / (n_eff * n_eff * n_eff);
    h.c_eff = cavity::purcell_simple(lambda_nm, n_eff,
                                     std::numeric_limits<double>::infinity(),
                                     q_eff, volume_vacuum_lambda3);
    return h;
}

} // namespace cavtk::waveguide
