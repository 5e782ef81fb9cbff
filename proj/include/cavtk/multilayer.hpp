#pragma once

// Plane-wave response of planar layer stacks (transfer-matrix method).
//
// Conventions, fixed across the whole library:
//   - time dependence e^{-i omega t}; absorbing media have Im(n) >= 0;
//   - normal components k_z = k0 sqrt(n^2 - q^2) take the branch with
//     Im >= 0 (decaying into the stack), q being the conserved
//     in-plane index (n_inc sin theta for propagating incidence);
//   - the reported reflection phase is the phase lag, phi = -arg(r),
//     so an ideal metal gives phi = +pi.

#include <complex>
#include <vector>

#include "cavtk/materials.hpp"

namespace cavtk::multilayer {

enum class Polarization { TE, TM };

struct Layer {
    Material material;
    double thickness_nm = 0.0;  // infinity marks a terminal half-space
};

// First and last layer must be semi-infinite; interior layers finite.
struct LayerStack {
    std::vector<Layer> layers;

    void validate() const;  // throws std::invalid_argument on malformed stacks
    static LayerStack between(const Material& incident, std::vector<Layer> interior,
                              const Material& exit);
};

struct StackResponse {
    double reflectivity = 0.0;      // R
    double transmissivity = 0.0;    // T, with half-space impedance factors
    double absorption = 0.0;        // A = 1 - R - T
    double reflection_phase = 0.0;  // phi = -arg(r), in (-pi, pi]
};

// Complex amplitude response at in-plane index q (may exceed every
// layer index; evanescent waves and thick absorbers are handled by
// internal rescaling). The Fresnel coefficients follow the
// admittance convention for both polarizations.
struct AmplitudeResponse {
    std::complex<double> r;
    double transmitted_power = 0.0;  // meaningful for transparent exit half-spaces
};

AmplitudeResponse amplitude_response(const LayerStack& stack, double lambda_nm,
                                     double in_plane_index, Polarization pol);

// Power response for propagating incidence from the first half-space
// (which must be transparent). Angle in radians, measured in the
// incident medium.
StackResponse stack_response(const LayerStack& stack, double lambda_nm,
                             double angle_rad, Polarization pol);

// Low-loss Fabry-Perot finesse 2*pi / (T1 + T2 + A1 + A2 + S).
// Throws when the summed loss reaches 1 (formula out of its domain).
double finesse_from_losses(double T1, double T2, double A1, double A2, double S = 0.0);

// Fraction of cavity photons leaving through mirror 1:
// T1 / (T1 + T2 + A1 + A2). Throws on zero total loss.
double outcoupling_efficiency(double T1, double T2, double A1, double A2);

}  // namespace cavtk::multilayer
