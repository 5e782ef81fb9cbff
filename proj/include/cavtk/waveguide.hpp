#pragma once

// Fundamental TE mode of a symmetric dielectric slab in air, plus the
// mode-volume / Purcell estimate for an emitter coupled to that mode.
//
// Geometry: a slab of index n_d occupying |y| <= b (b is the half-width),
// air on both sides.  The even TE0 mode has no cutoff, so a guided solution
// with n_eff in (1, n_d) exists for every b > 0; for very small b the mode
// delocalizes and n_eff approaches 1.

#include <vector>

namespace cavtk::waveguide {

// Transverse extent of the mode, measured from the slab axis.  The primary
// definition is the point where the field amplitude has dropped to 1/e^2 of
// its on-axis value; the other two are provided for comparison since "mode
// radius" conventions differ between groups.
enum class RadiusDefinition {
    FieldInverseE2,      // |E(w)| = e^-2 |E(0)|
    IntensityInverseE2,  // |E(w)|^2 = e^-2 |E(0)|^2
    GaussianFit,         // 1/e^2 intensity radius of the best-fit Gaussian
};

struct SlabMode {
    double half_width_nm = 0.0;
    double guide_index = 0.0;
    double lambda_nm = 0.0;

    double n_eff = 0.0;        // effective index, in (1, guide_index)
    double beta_per_nm = 0.0;  // propagation constant n_eff * 2 pi / lambda
    double kappa_per_nm = 0.0; // transverse wavenumber inside the slab
    double gamma_per_nm = 0.0; // decay constant in the air cladding
    double mode_radius_nm = 0.0; // field 1/e^2 radius (primary definition)

    // The dispersion root sits within tolerance of n_eff = 1: the mode is
    // effectively unguided and the reported n_eff is the limit value.
    bool near_cutoff = false;

    // Normalized transverse field profile, integral of E^2 over y equal to 1.
    // Continuous with continuous derivative at |y| = b.
    double field(double y_nm) const;

    double amplitude_core = 0.0; // normalization constant of the cosine part
};

// Solves kappa tan(kappa b) = gamma for the even TE0 mode.  Uses a
// safeguarded regula falsi on x = kappa b; the bracket (0, min(V, pi/2))
// always contains exactly one root.
SlabMode solve_fundamental_mode(double half_width_nm, double guide_index,
                                double lambda_nm);

double mode_radius_nm(const SlabMode& mode, RadiusDefinition def);

struct SweepPoint {
    double half_width_nm = 0.0;
    double mode_radius_nm = 0.0;
};

// Mode radius versus half-width over a uniform grid.  The radius diverges for
// thin slabs (weak guiding) and grows linearly for thick ones, so there is a
// confinement optimum in between.
struct ConfinementSweep {
    std::vector<SweepPoint> points;
    double best_half_width_nm = 0.0;
    double min_radius_nm = 0.0;
};

ConfinementSweep confinement_sweep(double half_width_from_nm,
                                   double half_width_to_nm, int samples,
                                   double guide_index, double lambda_nm,
                                   RadiusDefinition def =
                                       RadiusDefinition::FieldInverseE2);

// Effective mode volume pi w0^2 lambda / (8 n_eff) for a hybrid
// emitter-on-waveguide geometry, expressed in units of (lambda / n_eff)^3,
// and the resulting Purcell factor for a given effective quality factor.
struct HybridPurcell {
    double volume_lambda_eff3 = 0.0;
    double c_eff = 0.0;
};

HybridPurcell hybrid_purcell(double n_eff, double mode_radius_nm,
                             double lambda_nm, double q_eff);

} // namespace cavtk::waveguide
