#include "cavtk/dipole.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cavtk/quadrature.hpp"

namespace cavtk::dipole {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

// reflections seen from the host, field convention (PEC: rs=-1, rp=+1)
struct SideRefl {
    cplx rs{0.0, 0.0};
    cplx rp{0.0, 0.0};
};

SideRefl reflect(const Boundary& b, double lambda_nm, double q) {
    SideRefl out;
    if (b.is_open()) return out;
    if (b.is_ideal()) {
        out.rs = {-1.0, 0.0};
        out.rp = {+1.0, 0.0};
        return out;
    }
    const auto* s = b.layers();
    out.rs = multilayer::amplitude_response(*s, lambda_nm, q, multilayer::Polarization::TE).r;
    out.rp = -multilayer::amplitude_response(*s, lambda_nm, q, multilayer::Polarization::TM).r;
    return out;
}

void check_host_match(const Boundary& b, double host_index, double lambda_nm) {
    const auto* s = b.layers();
    if (!s) return;
    const cplx n = s->layers.front().material.index(lambda_nm);
    if (std::abs(n - cplx(host_index, 0.0)) > 1e-9)
        throw std::invalid_argument(
            "dipole: stack incident medium must be index-matched to the host");
}

// Angular spectra of the two dipole orientations at in-plane u, with
// l1 = sqrt(1 - u^2) supplied by the caller on the correct branch
// (real for propagating, i|.| for evanescent u).
struct Kernels {
    cplx perp{0.0, 0.0};
    cplx par{0.0, 0.0};
};

Kernels kernels(const DipoleEnvironment& env, double lambda_nm, double u, cplx l1) {
    const double k = 2.0 * kPi / lambda_nm * env.host_index;
    const double q = env.host_index * u;
    const auto rb = reflect(env.below, lambda_nm, q);
    const auto rt = reflect(env.above, lambda_nm, q);
    const cplx i2kl1(0.0, 2.0 * k);
    const cplx eb = std::exp(i2kl1 * l1 * env.height_nm);
    const bool top = !env.above.is_open();
    const cplx et = top ? std::exp(i2kl1 * l1 * (env.gap_nm - env.height_nm)) : cplx(0.0);

    const cplx as = rb.rs * eb, ap = rb.rp * eb;
    const cplx bs = rt.rs * et, bp = rt.rp * et;
    const cplx ds = top ? 1.0 - rb.rs * rt.rs * eb * et : cplx(1.0);
    const cplx dp = top ? 1.0 - rb.rp * rt.rp * eb * et : cplx(1.0);

    Kernels out;
    out.perp = 1.5 * (u * u * u / l1) * (ap + bp + 2.0 * ap * bp) / dp;
    out.par = 0.75 * (u / l1) *
              ((as + bs + 2.0 * as * bs) / ds - l1 * l1 * (ap + bp - 2.0 * ap * bp) / dp);
    return out;
}

enum class Axis { Perp, Par };

// propagating part: u = sin t, t in [0, pi/2); the 1/l1 in the
// kernels cancels against the Jacobian cos t
double radiative_integral(const DipoleEnvironment& env, double lambda_nm, Axis axis,
                          double rel_tol) {
    auto f = [&](double t) {
        const double u = std::sin(t), l1 = std::cos(t);
        const Kernels k = kernels(env, lambda_nm, u, cplx(l1, 0.0));
        return (axis == Axis::Perp ? k.perp : k.par).real() * l1;
    };
    return quad::integrate(f, 0.0, 0.5 * kPi, rel_tol).value;
}

// evanescent part: u = cosh s in geometrically growing windows; the
// loop stops once a window contributes below 1e-11 of the running
// total, which bounds the dropped tail by the geometric decay of the
// integrand
double evanescent_integral(const DipoleEnvironment& env, double lambda_nm, Axis axis,
                           double rel_tol, double radiative_part) {
    auto f = [&](double s) {
        const double u = std::cosh(s), sh = std::sinh(s);
        const Kernels k = kernels(env, lambda_nm, u, cplx(0.0, sh));
        return (axis == Axis::Perp ? k.perp : k.par).real() * sh;
    };
    double total = 0.0;
    double u_lo = 1.0;
    for (int w = 0; w < 40; ++w) {
        const double u_hi = 1.0 + 0.5 * std::pow(2.0, w);
        const double part =
            quad::integrate(f, std::acosh(u_lo), std::acosh(u_hi), rel_tol).value;
        total += part;
        const double scale = std::max(std::abs(1.0 + radiative_part + total), 1e-3);
        if (w >= 2 && std::abs(part) < 1e-11 * scale) break;
        u_lo = u_hi;
    }
    return total;
}

struct AxisRates {
    double total = 1.0;
    double radiative = 1.0;
};

AxisRates axis_rates(const DipoleEnvironment& env, double lambda_nm, Axis axis,
                     double rel_tol) {
    const double rad = radiative_integral(env, lambda_nm, axis, rel_tol);
    const double ev = evanescent_integral(env, lambda_nm, axis, rel_tol, rad);
    return {1.0 + rad + ev, 1.0 + rad};
}

void check_env(const DipoleEnvironment& env, double lambda_nm) {
    env.validate();
    check_host_match(env.below, env.host_index, lambda_nm);
    check_host_match(env.above, env.host_index, lambda_nm);
}

}  // namespace

Boundary Boundary::ideal_mirror() {
    Boundary b;
    b.ideal_ = true;
    return b;
}

Boundary Boundary::stack(multilayer::LayerStack s) {
    s.validate();
    Boundary b;
    b.stack_ = std::move(s);
    return b;
}

void DipoleEnvironment::validate() const {
    if (!(host_index > 0.0) || !std::isfinite(host_index))
        throw std::invalid_argument("dipole: host index must be positive and finite");
    if (!(height_nm >= 0.0)) throw std::invalid_argument("dipole: height must be >= 0");
    if (!above.is_open() && !(gap_nm >= height_nm))
        throw std::invalid_argument("dipole: gap must be >= dipole height");
}

DecayRates relative_decay_rate(const DipoleEnvironment& env, double lambda_nm,
                               Orientation orientation, double rel_tol) {
    if (!(lambda_nm > 0.0)) throw std::invalid_argument("dipole: bad wavelength");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("dipole: bad tolerance");
    check_env(env, lambda_nm);
    switch (orientation) {
        case Orientation::Perpendicular: {
            const auto a = axis_rates(env, lambda_nm, Axis::Perp, rel_tol);
            return {a.total, a.radiative};
        }
        case Orientation::Parallel: {
            const auto a = axis_rates(env, lambda_nm, Axis::Par, rel_tol);
            return {a.total, a.radiative};
        }
        case Orientation::Isotropic:
        default: {
            const auto pe = axis_rates(env, lambda_nm, Axis::Perp, rel_tol);
            const auto pa = axis_rates(env, lambda_nm, Axis::Par, rel_tol);
            return {(pe.total + 2.0 * pa.total) / 3.0,
                    (pe.radiative + 2.0 * pa.radiative) / 3.0};
        }
    }
}

double nonradiative_fraction(const DecayRates& rates) {
    if (!(rates.total > 0.0)) throw std::invalid_argument("dipole: nonpositive total rate");
    return (rates.total - rates.radiative) / rates.total;
}

double collection_efficiency(const DipoleEnvironment& env, double lambda_nm,
                             double numerical_aperture, Orientation orientation,
                             double rel_tol) {
    if (!(numerical_aperture > 0.0))
        throw std::invalid_argument("dipole: NA must be positive");
    check_env(env, lambda_nm);
    const auto* below = env.below.layers();
    if (!below)
        throw std::invalid_argument("dipole: collection needs a lower stack");
    const cplx n_exit = below->layers.back().material.index(lambda_nm);
    if (numerical_aperture > n_exit.real() + 1e-12)
        throw std::domain_error("dipole: NA exceeds the exit index");

    const double nh = env.host_index;
    const double k = 2.0 * kPi / lambda_nm * nh;
    const bool top = !env.above.is_open();

    // per-axis angular power density transmitted through the lower
    // stack, in units of the homogeneous-host rate
    auto f = [&](double t, Axis axis) {
        const double u = std::sin(t), l1 = std::cos(t);
        const double q = nh * u;
        const double ts =
            multilayer::amplitude_response(*below, lambda_nm, q, multilayer::Polarization::TE)
                .transmitted_power;
        const double tp =
            multilayer::amplitude_response(*below, lambda_nm, q, multilayer::Polarization::TM)
                .transmitted_power;
        double dress_s = 1.0, dress_p_even = 1.0, dress_p_odd = 1.0;
        if (top) {
            const auto rb = reflect(env.below, lambda_nm, q);
            const auto rt = reflect(env.above, lambda_nm, q);
            const cplx i2kl1(0.0, 2.0 * k * l1);
            const cplx eb = std::exp(i2kl1 * env.height_nm);
            const cplx et = std::exp(i2kl1 * (env.gap_nm - env.height_nm));
            dress_s = std::norm((1.0 + rt.rs * et) / (1.0 - rb.rs * rt.rs * eb * et));
            dress_p_even = std::norm((1.0 + rt.rp * et) / (1.0 - rb.rp * rt.rp * eb * et));
            dress_p_odd = std::norm((1.0 - rt.rp * et) / (1.0 - rb.rp * rt.rp * eb * et));
        }
        const double w_par_s = 0.375 * u / l1;
        const double w_par_p = 0.375 * u * l1;
        const double w_perp = 0.75 * u * u * u / l1;
        const double ch_par = w_par_s * ts * dress_s + w_par_p * tp * dress_p_odd;
        const double ch_perp = w_perp * tp * dress_p_even;
        return (axis == Axis::Perp ? ch_perp : ch_par) * l1;
    };

    const double t_max = std::asin(std::min(numerical_aperture / nh, 1.0));
    auto collect = [&](Axis a) {
        return quad::integrate([&](double t) { return f(t, a); }, 0.0, t_max, rel_tol).value;
    };

    switch (orientation) {
        case Orientation::Perpendicular:
            return collect(Axis::Perp);
        case Orientation::Parallel:
            return collect(Axis::Par);
        case Orientation::Isotropic:
        default:
            return (collect(Axis::Perp) + 2.0 * collect(Axis::Par)) / 3.0;
    }
}

std::vector<SpectrumPoint> purcell_spectrum(const DipoleEnvironment& env,
                                            const std::vector<double>& lambda_grid_nm,
                                            Orientation orientation, double rel_tol) {
    if (lambda_grid_nm.empty())
        throw std::invalid_argument("dipole: empty wavelength grid");
    DipoleEnvironment bare = env;
    bare.above = Boundary::open();
    std::vector<SpectrumPoint> out;
    out.reserve(lambda_grid_nm.size());
    for (double lam : lambda_grid_nm) {
        SpectrumPoint p;
        p.lambda_nm = lam;
        p.with_cavity = relative_decay_rate(env, lam, orientation, rel_tol).total;
        p.mirror_only = relative_decay_rate(bare, lam, orientation, rel_tol).total;
        out.push_back(p);
    }
    return out;
}

double spectral_average_enhancement(const std::vector<SpectrumPoint>& curves,
                                    const cavity::EmissionSpectrum& s) {
    if (curves.size() < 2)
        throw std::invalid_argument("spectral average: need at least two grid points");
    for (std::size_t i = 1; i < curves.size(); ++i)
        if (!(curves[i].lambda_nm > curves[i - 1].lambda_nm))
            throw std::invalid_argument("spectral average: grid must ascend");
    const double lo = curves.front().lambda_nm, hi = curves.back().lambda_nm;
    if (s.weight_fraction(lo, hi) < 0.99)
        throw std::domain_error("spectral average: grid covers < 99% of the emission weight");

    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i < curves.size(); ++i) {
        const auto& a = curves[i - 1];
        const auto& b = curves[i];
        const double h = b.lambda_nm - a.lambda_nm;
        const double fa = a.with_cavity / a.mirror_only * s(a.lambda_nm);
        const double fb = b.with_cavity / b.mirror_only * s(b.lambda_nm);
        num += 0.5 * h * (fa + fb);
        den += 0.5 * h * (s(a.lambda_nm) + s(b.lambda_nm));
    }
    return num / den;
}

std::vector<LifetimePoint> lifetime_curve(const DipoleEnvironment& env,
                                          const std::vector<double>& air_gaps_nm,
                                          const cavity::EmissionSpectrum& s,
                                          Orientation orientation, double rel_tol,
                                          int n_lambda) {
    if (air_gaps_nm.empty()) throw std::invalid_argument("lifetime curve: empty gap list");
    for (std::size_t i = 0; i < air_gaps_nm.size(); ++i) {
        if (!(air_gaps_nm[i] > 0.0))
            throw std::invalid_argument("lifetime curve: gaps must be positive");
        if (i > 0 && !(air_gaps_nm[i] > air_gaps_nm[i - 1]))
            throw std::invalid_argument("lifetime curve: gaps must ascend");
    }
    if (n_lambda < 3) throw std::invalid_argument("lifetime curve: need >= 3 wavelengths");

    // widen the window until it holds >= 99.3% of the emission weight
    double half = 0.5 * s.fwhm_nm();
    while (s.weight_fraction(s.center_nm() - half, s.center_nm() + half) < 0.993)
        half *= 1.25;
    std::vector<double> grid(n_lambda);
    for (int i = 0; i < n_lambda; ++i)
        grid[i] = s.center_nm() - half + 2.0 * half * i / (n_lambda - 1);

    DipoleEnvironment bare = env;
    bare.above = Boundary::open();
    std::vector<double> mirror_only(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        mirror_only[i] = relative_decay_rate(bare, grid[i], orientation, rel_tol).total;

    DipoleEnvironment cav = env;
    std::vector<LifetimePoint> out;
    out.reserve(air_gaps_nm.size());
    std::vector<SpectrumPoint> curves(grid.size());
    for (double gap : air_gaps_nm) {
        cav.gap_nm = gap;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            curves[i].lambda_nm = grid[i];
            curves[i].with_cavity = relative_decay_rate(cav, grid[i], orientation, rel_tol).total;
            curves[i].mirror_only = mirror_only[i];
        }
        out.push_back({gap, 1.0 / spectral_average_enhancement(curves, s)});
    }
    return out;
}

double purcell_from_lifetimes(double tau_free_ns, double tau_cavity_ns) {
    if (!(tau_free_ns > 0.0) || !(tau_cavity_ns > 0.0))
        throw std::invalid_argument("purcell_from_lifetimes: lifetimes must be positive");
    return tau_free_ns / tau_cavity_ns - 1.0;
}

double ideal_mirror_parallel(double z_nm, double lambda_nm) {
    const double x = 4.0 * kPi * z_nm / lambda_nm;
    return 1.0 - 1.5 * (std::sin(x) / x + std::cos(x) / (x * x) - std::sin(x) / (x * x * x));
}

double ideal_mirror_perpendicular(double z_nm, double lambda_nm) {
    const double x = 4.0 * kPi * z_nm / lambda_nm;
    return 1.0 + 3.0 * (std::sin(x) / (x * x * x) - std::cos(x) / (x * x));
}

}  // namespace cavtk::dipole
