#include "cavtk/multilayer.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cavtk::multilayer {

namespace {

using cplx = std::complex<double>;

cplx kz_component(cplx n, double q, double k0) {
    cplx v = std::sqrt(n * n - q * q) * k0;
    if (v.imag() < 0.0) v = -v;
    if (std::abs(v.imag()) < 1e-15 * std::abs(v.real()) && v.real() < 0.0) v = -v;
    return v;
}

cplx admittance(cplx n, double q, double k0, Polarization pol) {
    const cplx kz = kz_component(n, q, k0);
    if (pol == Polarization::TE) return kz / k0;
    return n * n * k0 / kz;
}

}  // namespace

void LayerStack::validate() const {
    if (layers.size() < 2)
        throw std::invalid_argument("stack needs at least the two terminal half-spaces");
    const auto inf = std::numeric_limits<double>::infinity();
    if (layers.front().thickness_nm != inf || layers.back().thickness_nm != inf)
        throw std::invalid_argument("first and last layer must be semi-infinite");
    for (std::size_t i = 1; i + 1 < layers.size(); ++i) {
        const double d = layers[i].thickness_nm;
        if (!(d >= 0.0) || d == inf)
            throw std::invalid_argument("interior layer thickness must be finite and >= 0");
    }
}

LayerStack LayerStack::between(const Material& incident, std::vector<Layer> interior,
                               const Material& exit) {
    const auto inf = std::numeric_limits<double>::infinity();
    LayerStack s;
    s.layers.reserve(interior.size() + 2);
    s.layers.push_back({incident, inf});
    for (auto& l : interior) s.layers.push_back(std::move(l));
    s.layers.push_back({exit, inf});
    s.validate();
    return s;
}

AmplitudeResponse amplitude_response(const LayerStack& stack, double lambda_nm,
                                     double in_plane_index, Polarization pol) {
    stack.validate();
    if (!(lambda_nm > 0.0)) throw std::invalid_argument("wavelength must be positive");
    const double k0 = 2.0 * std::numbers::pi / lambda_nm;
    const double q = in_plane_index;

    // Transfer of the tangential field pair (U, V) through each
    // interior layer. Large imaginary phases are clamped and the
    // running matrix rescaled (sigma tracks the dropped log factor);
    // r is scale invariant, transmitted power carries e^{-2 sigma}.
    cplx m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
    double sigma = 0.0;
    for (std::size_t i = 1; i + 1 < stack.layers.size(); ++i) {
        const auto& layer = stack.layers[i];
        if (layer.thickness_nm == 0.0) continue;
        const cplx n = layer.material.index(lambda_nm);
        cplx delta = kz_component(n, q, k0) * layer.thickness_nm;
        if (delta.imag() > 700.0) delta = cplx(delta.real(), 700.0);
        const cplx eta = admittance(n, q, k0, pol);
        const cplx c = std::cos(delta);
        const cplx s = std::sin(delta);
        const cplx i01 = cplx(0.0, -1.0) * s / eta;
        const cplx i10 = cplx(0.0, -1.0) * s * eta;
        const cplx a00 = m00 * c + m01 * i10;
        const cplx a01 = m00 * i01 + m01 * c;
        const cplx a10 = m10 * c + m11 * i10;
        const cplx a11 = m10 * i01 + m11 * c;
        m00 = a00; m01 = a01; m10 = a10; m11 = a11;
        const double big = std::max(std::max(std::abs(m00), std::abs(m01)),
                                    std::max(std::abs(m10), std::abs(m11)));
        if (big > 1e50) {
            const double inv = 1.0 / big;
            m00 *= inv; m01 *= inv; m10 *= inv; m11 *= inv;
            sigma += std::log(big);
        }
    }

    const cplx eta_in = admittance(stack.layers.front().material.index(lambda_nm), q, k0, pol);
    const cplx eta_out = admittance(stack.layers.back().material.index(lambda_nm), q, k0, pol);
    const cplx b = m00 + m01 * eta_out;
    const cplx c = m10 + m11 * eta_out;
    const cplx denom = eta_in * b + c;

    AmplitudeResponse out;
    out.r = (eta_in * b - c) / denom;
    if (eta_in.real() > 0.0 && sigma < 300.0) {
        out.transmitted_power =
            4.0 * eta_in.real() * eta_out.real() / std::norm(denom) * std::exp(-2.0 * sigma);
    }
    return out;
}

StackResponse stack_response(const LayerStack& stack, double lambda_nm,
                             double angle_rad, Polarization pol) {
    stack.validate();
    const cplx n_inc = stack.layers.front().material.index(lambda_nm);
    if (std::abs(n_inc.imag()) > 1e-12)
        throw std::invalid_argument("incident half-space must be transparent");
    if (!(angle_rad >= 0.0) || angle_rad >= std::numbers::pi / 2.0)
        throw std::invalid_argument("incidence angle must lie in [0, pi/2)");

    const double q = n_inc.real() * std::sin(angle_rad);
    const auto amp = amplitude_response(stack, lambda_nm, q, pol);

    StackResponse res;
    res.reflectivity = std::norm(amp.r);
    res.transmissivity = amp.transmitted_power;
    res.absorption = 1.0 - res.reflectivity - res.transmissivity;
    res.reflection_phase = -std::arg(amp.r);
    if (res.reflection_phase <= -std::numbers::pi)
        res.reflection_phase += 2.0 * std::numbers::pi;
    return res;
}

double finesse_from_losses(double T1, double T2, double A1, double A2, double S) {
    for (double v : {T1, T2, A1, A2, S})
        if (!(v >= 0.0) || v >= 1.0)
            throw std::invalid_argument("losses must lie in [0, 1)");
    const double total = T1 + T2 + A1 + A2 + S;
    if (total <= 0.0) throw std::invalid_argument("total loss must be positive");
    if (total >= 1.0)
        throw std::domain_error("low-loss finesse formula invalid: round-trip loss >= 1");
    return 2.0 * std::numbers::pi / total;
}

double outcoupling_efficiency(double T1, double T2, double A1, double A2) {
    for (double v : {T1, T2, A1, A2})
        if (!(v >= 0.0) || v >= 1.0)
            throw std::invalid_argument("losses must lie in [0, 1)");
    const double total = T1 + T2 + A1 + A2;
    if (total <= 0.0) throw std::domain_error("outcoupling undefined for zero total loss");
    return T1 / total;
}

}  // namespace cavtk::multilayer
