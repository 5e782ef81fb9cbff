#include "cavtk/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cavtk::cavity {

namespace {
constexpr double kPi = std::numbers::pi;
}

EmissionSpectrum EmissionSpectrum::gaussian_1e_full_width(double center_nm, double width_nm) {
    if (!(center_nm > 0.0) || !(width_nm > 0.0))
        throw std::invalid_argument("spectrum: center and width must be positive");
    EmissionSpectrum s;
    s.shape_ = Shape::Gaussian;
    s.center_ = center_nm;
    s.width_ = width_nm;
    return s;
}

EmissionSpectrum EmissionSpectrum::lorentzian_fwhm(double center_nm, double fwhm_nm) {
    if (!(center_nm > 0.0) || !(fwhm_nm > 0.0))
        throw std::invalid_argument("spectrum: center and width must be positive");
    EmissionSpectrum s;
    s.shape_ = Shape::Lorentzian;
    s.center_ = center_nm;
    s.width_ = fwhm_nm;
    return s;
}

double EmissionSpectrum::operator()(double lambda_nm) const {
    const double x = lambda_nm - center_;
    if (shape_ == Shape::Gaussian) {
        const double half = 0.5 * width_;  // 1/e half width
        return amplitude_ * std::exp(-(x * x) / (half * half));
    }
    const double hw = 0.5 * width_;
    return amplitude_ * hw * hw / (x * x + hw * hw);
}

double EmissionSpectrum::weight_fraction(double lo_nm, double hi_nm) const {
    if (!(hi_nm > lo_nm)) throw std::invalid_argument("weight_fraction: empty window");
    if (shape_ == Shape::Gaussian) {
        const double half = 0.5 * width_;
        return 0.5 * (std::erf((hi_nm - center_) / half) - std::erf((lo_nm - center_) / half));
    }
    const double hw = 0.5 * width_;
    return (std::atan((hi_nm - center_) / hw) - std::atan((lo_nm - center_) / hw)) / kPi;
}

EmissionSpectrum EmissionSpectrum::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
    EmissionSpectrum s = *this;
    s.amplitude_ *= factor;
    return s;
}

double EmissionSpectrum::fwhm_nm() const {
    if (shape_ == Shape::Gaussian) return width_ * std::sqrt(std::numbers::ln2);
    return width_;
}

double EmissionSpectrum::q_emitter() const { return center_ / fwhm_nm(); }

double mode_waist_um(double r_c_um, double d_nm, double lambda_nm) {
    if (!(d_nm > 0.0) || !(lambda_nm > 0.0) || !(r_c_um > 0.0))
        throw std::invalid_argument("mode_waist: inputs must be positive");
    const double d_um = d_nm * 1e-3;
    if (d_um >= r_c_um)
        throw std::domain_error("mode_waist: unstable geometry, d >= r_c");
    const double lam_um = lambda_nm * 1e-3;
    return std::sqrt(lam_um / kPi * std::sqrt(r_c_um * d_um - d_um * d_um));
}

ModeVolume mode_volume(double w0_um, double d_nm, double lambda_nm) {
    if (!(w0_um > 0.0) || !(d_nm > 0.0) || !(lambda_nm > 0.0))
        throw std::invalid_argument("mode_volume: inputs must be positive");
    ModeVolume v;
    const double d_um = d_nm * 1e-3;
    v.um3 = kPi * w0_um * w0_um * d_um / 4.0;
    const double lam_um = lambda_nm * 1e-3;
    v.lambda3 = v.um3 / (lam_um * lam_um * lam_um);
    return v;
}

CavityGeometry resonance_lengths(int q, double lambda_nm, double r_c_um, double phi_rad) {
    if (q < 1) throw std::invalid_argument("resonance_lengths: q must be >= 1");
    if (!(lambda_nm > 0.0)) throw std::invalid_argument("resonance_lengths: bad wavelength");
    if (!(phi_rad >= 0.0) || phi_rad >= kPi)
        throw std::invalid_argument("resonance_lengths: phi must lie in [0, pi)");
    const double r_c_nm = r_c_um * 1e3;

    double d = q * lambda_nm / 2.0;
    double zeta = 0.0;
    if (std::isfinite(r_c_um)) {
        for (int it = 0; it < 100; ++it) {
            if (d >= r_c_nm)
                throw std::domain_error("resonance_lengths: no stable solution with d < r_c");
            zeta = std::acos(std::sqrt(1.0 - d / r_c_nm));
            const double next = lambda_nm / 2.0 * (q + zeta / kPi);
            if (std::abs(next - d) < 1e-6) {
                d = next;
                break;
            }
            d = next;
        }
        zeta = std::acos(std::sqrt(1.0 - d / r_c_nm));
        d = lambda_nm / 2.0 * (q + zeta / kPi);
    }

    CavityGeometry g;
    g.radius_of_curvature_um = r_c_um;
    g.optical_length_nm = d;
    g.air_gap_nm = lambda_nm / 2.0 * (q + (zeta - phi_rad) / kPi);
    g.mode_order = q;
    g.wavelength_nm = lambda_nm;
    if (!(g.air_gap_nm > 0.0))
        throw std::domain_error("resonance_lengths: phase correction exceeds the air gap");
    return g;
}

double length_from_single_resonance(double lambda_nm, int q) {
    if (q < 1 || !(lambda_nm > 0.0))
        throw std::invalid_argument("length_from_single_resonance: bad input");
    return q * lambda_nm / 2.0;
}

LengthCalibration length_from_spectrum(std::vector<double> lam) {
    if (lam.size() < 2)
        throw std::invalid_argument("length_from_spectrum: need at least two resonances");
    std::sort(lam.begin(), lam.end(), std::greater<>());
    for (double l : lam)
        if (!(l > 0.0)) throw std::invalid_argument("length_from_spectrum: bad wavelength");
    if (lam.front() - lam.back() < 1e-9)
        throw std::invalid_argument("length_from_spectrum: resonances must be distinct");

    // adjacent pair gives the first estimate; integer orders then
    // refine d as the least-squares mean of q lambda/2
    const double d0 = lam[0] * lam[1] / (2.0 * (lam[0] - lam[1]));
    LengthCalibration cal;
    cal.mode_orders.reserve(lam.size());
    double sum = 0.0;
    for (double l : lam) {
        const int q = std::max(1, static_cast<int>(std::lround(2.0 * d0 / l)));
        cal.mode_orders.push_back(q);
        sum += q * l / 2.0;
    }
    cal.optical_length_nm = sum / static_cast<double>(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
        const double res = std::abs(cal.optical_length_nm - cal.mode_orders[i] * lam[i] / 2.0);
        cal.residual_nm = std::max(cal.residual_nm, res);
        if (res > lam[i] / 20.0)
            throw std::runtime_error("length_from_spectrum: no consistent mode assignment");
    }
    return cal;
}

double airy_transmission(const multilayer::LayerStack& m1, const multilayer::LayerStack& m2,
                         double lambda_nm, double d_nm) {
    using multilayer::Polarization;
    const auto a1 = multilayer::amplitude_response(m1, lambda_nm, 0.0, Polarization::TE);
    const auto a2 = multilayer::amplitude_response(m2, lambda_nm, 0.0, Polarization::TE);
    const auto n_gap = m1.layers.front().material.index(lambda_nm);
    const double k = 2.0 * kPi / lambda_nm * n_gap.real();
    const std::complex<double> loop =
        a1.r * a2.r * std::exp(std::complex<double>(0.0, 2.0 * k * d_nm));
    return a1.transmitted_power * a2.transmitted_power / std::norm(1.0 - loop);
}

std::vector<AirySample> transmission_length_scan(const multilayer::LayerStack& m1,
                                                 const multilayer::LayerStack& m2,
                                                 double lambda_nm, double d_from_nm,
                                                 double d_to_nm, int samples) {
    if (samples < 2 || !(d_from_nm < d_to_nm) || !(d_from_nm > 0.0))
        throw std::invalid_argument("transmission_length_scan: bad range");
    std::vector<AirySample> out(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double d = d_from_nm + (d_to_nm - d_from_nm) * i / (samples - 1);
        out[static_cast<std::size_t>(i)] = {d, airy_transmission(m1, m2, lambda_nm, d)};
    }
    return out;
}

std::vector<AirySample> transmission_wavelength_scan(const multilayer::LayerStack& m1,
                                                     const multilayer::LayerStack& m2,
                                                     double d_nm, double lambda_from_nm,
                                                     double lambda_to_nm, int samples) {
    if (samples < 2 || !(lambda_from_nm < lambda_to_nm) || !(lambda_from_nm > 0.0))
        throw std::invalid_argument("transmission_wavelength_scan: bad range");
    std::vector<AirySample> out(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double l = lambda_from_nm + (lambda_to_nm - lambda_from_nm) * i / (samples - 1);
        out[static_cast<std::size_t>(i)] = {l, airy_transmission(m1, m2, l, d_nm)};
    }
    return out;
}

double purcell_simple(double lambda_nm, double n, double q_cavity, double q_emitter,
                      double volume_lambda3) {
    if (!(lambda_nm > 0.0) || !(n > 0.0) || !(q_cavity > 0.0) || !(q_emitter > 0.0) ||
        !(volume_lambda3 > 0.0))
        throw std::invalid_argument("purcell_simple: inputs must be positive");
    const double q_eff = 1.0 / (1.0 / q_cavity + 1.0 / q_emitter);
    return 3.0 * q_eff / (4.0 * kPi * kPi * n * n * n * volume_lambda3);
}

double collection_beta(double c_eff) {
    if (!(c_eff >= 0.0)) throw std::invalid_argument("collection_beta: C must be >= 0");
    return c_eff / (c_eff + 1.0);
}

double enhancement_ratio(double c_eff, double eta_c, double eta_omega) {
    if (!(c_eff >= 0.0) || !(eta_c >= 0.0) || eta_c > 1.0 || !(eta_omega > 0.0) ||
        eta_omega > 1.0)
        throw std::invalid_argument("enhancement_ratio: inputs out of range");
    return c_eff * eta_c / eta_omega;
}

double psf_size_um(double w0_um, double lambda_e_nm, double lambda_nm) {
    if (!(w0_um > 0.0) || !(lambda_e_nm > 0.0) || !(lambda_nm > 0.0))
        throw std::invalid_argument("psf_size: inputs must be positive");
    const double we = std::sqrt(lambda_e_nm / lambda_nm) * w0_um;
    return we * w0_um / std::sqrt(we * we + w0_um * w0_um);
}

}  // namespace cavtk::cavity
