#pragma once

// Fabry-Perot mode geometry and the scalar cavity-enhancement
// formulas: Gaussian-mode waist and volume, resonance conditions with
// Gouy and mirror-phase corrections, Airy transmission, length
// calibration from resonance combs, point-spread-function size, and
// the Q-based Purcell chain.

#include <vector>

#include "cavtk/multilayer.hpp"

namespace cavtk::cavity {

struct CavityGeometry {
    double radius_of_curvature_um = 0.0;  // +inf for plane-plane
    double optical_length_nm = 0.0;       // d, includes Gouy correction
    double air_gap_nm = 0.0;              // d0, geometric mirror separation
    int mode_order = 0;                   // q >= 1
    double wavelength_nm = 0.0;
};

// Emitter spectral density S(lambda), unnormalized. Two shapes are
// used in practice: a Gaussian parameterized by its full width at the
// 1/e points and a Lorentzian parameterized by its FWHM. The emitter
// quality factor is center / FWHM for either shape.
class EmissionSpectrum {
public:
    static EmissionSpectrum gaussian_1e_full_width(double center_nm, double width_nm);
    static EmissionSpectrum lorentzian_fwhm(double center_nm, double fwhm_nm);

    double operator()(double lambda_nm) const;
    double center_nm() const { return center_; }
    double fwhm_nm() const;
    double q_emitter() const;  // center / FWHM

    // fraction of the total spectral weight inside [lo, hi]
    double weight_fraction(double lo_nm, double hi_nm) const;

    // same shape, overall amplitude multiplied; weighted averages
    // over S must not depend on this
    EmissionSpectrum scaled(double factor) const;

private:
    enum class Shape { Gaussian, Lorentzian };
    Shape shape_ = Shape::Gaussian;
    double center_ = 0.0;
    double width_ = 0.0;  // 1/e full width (Gaussian) or FWHM (Lorentzian)
    double amplitude_ = 1.0;
};

// w0 = sqrt(lambda/pi * sqrt(r_c d - d^2)), returned in um.
double mode_waist_um(double r_c_um, double d_nm, double lambda_nm);

struct ModeVolume {
    double um3 = 0.0;
    double lambda3 = 0.0;  // in units of lambda^3 at the given wavelength
};
// V = pi w0^2 d / 4.
ModeVolume mode_volume(double w0_um, double d_nm, double lambda_nm);

// Solves d = lambda/2 (q + zeta/pi) with zeta = arccos sqrt(1 - d/r_c)
// self-consistently, then applies the mean mirror-phase deviation:
// d0 = lambda/2 (q + (zeta - phi)/pi). phi in [0, pi).
CavityGeometry resonance_lengths(int q, double lambda_nm, double r_c_um, double phi_rad);

struct LengthCalibration {
    double optical_length_nm = 0.0;
    std::vector<int> mode_orders;  // one per input wavelength
    double residual_nm = 0.0;      // worst |d - q lambda/2|
};

// Recovers d from a set of simultaneous resonance wavelengths
// (two or more, any order). Throws when no integer assignment fits
// within lambda/20.
LengthCalibration length_from_spectrum(std::vector<double> resonance_wavelengths_nm);

// Single-resonance variant with a known mode order.
double length_from_single_resonance(double lambda_nm, int q);

struct AirySample {
    double x = 0.0;  // scanned quantity: length in nm, or wavelength in nm
    double transmission = 0.0;
};

// Two-mirror Airy transmission. Each mirror stack is described from
// the intracavity (gap) side; the gap medium is the incident
// half-space of both stacks and must match.
std::vector<AirySample> transmission_length_scan(const multilayer::LayerStack& mirror1,
                                                 const multilayer::LayerStack& mirror2,
                                                 double lambda_nm, double d_from_nm,
                                                 double d_to_nm, int samples);
std::vector<AirySample> transmission_wavelength_scan(const multilayer::LayerStack& mirror1,
                                                     const multilayer::LayerStack& mirror2,
                                                     double d_nm, double lambda_from_nm,
                                                     double lambda_to_nm, int samples);
double airy_transmission(const multilayer::LayerStack& mirror1,
                         const multilayer::LayerStack& mirror2, double lambda_nm, double d_nm);

// Effective Purcell factor from quality factors and the mode volume
// in units of lambda^3: Q_eff = (1/Q_c + 1/Q_em)^-1,
// C = 3 (lambda/n)^3 / (4 pi^2) * Q_eff / V.
double purcell_simple(double lambda_nm, double n, double q_cavity, double q_emitter,
                      double volume_lambda3);

// beta = C / (C + 1).
double collection_beta(double c_eff);

// Expected count-rate ratio cavity/free-space: C * eta_c / eta_Omega.
double enhancement_ratio(double c_eff, double eta_c, double eta_omega);

// Detection spot size in a scanning-cavity map: the excitation spot
// w_e = sqrt(lambda_e/lambda) w0 (same cavity, excitation wavelength
// lambda_e) multiplied with the emission mode w0 gives
// w_det = w_e w0 / sqrt(w_e^2 + w0^2). All waists in um.
double psf_size_um(double w0_um, double lambda_e_nm, double lambda_nm);

}  // namespace cavtk::cavity
