#pragma once

// Spontaneous-emission rates of a point dipole between planar stacks,
// computed from the plane-wave expansion of the dipole field with the
// stack reflection coefficients of multilayer.hpp. All rates are
// relative to the same dipole in an unbounded host medium.
//
// The in-plane integration variable u is the sine of the emission
// angle in the host; u < 1 are propagating waves, u > 1 the
// evanescent near field. Reflection coefficients use the field
// convention in which an ideal mirror has r_s = -1, r_p = +1 (note
// the sign flip against the admittance convention of multilayer).

#include <complex>
#include <optional>
#include <vector>

#include "cavtk/cavity.hpp"
#include "cavtk/multilayer.hpp"

namespace cavtk::dipole {

enum class Orientation { Parallel, Perpendicular, Isotropic };

// One side of the host region. Open means the host continues as a
// half-space; a stack is a planar coating whose incident half-space
// must be index-matched to the host; the ideal mirror reflects
// without loss or phase dispersion at every angle.
class Boundary {
public:
    static Boundary open() { return Boundary{}; }
    static Boundary ideal_mirror();
    static Boundary stack(multilayer::LayerStack s);

    bool is_open() const { return !ideal_ && !stack_.has_value(); }
    bool is_ideal() const { return ideal_; }
    const multilayer::LayerStack* layers() const { return stack_ ? &*stack_ : nullptr; }

private:
    bool ideal_ = false;
    std::optional<multilayer::LayerStack> stack_;
};

// Dipole at height z above the lower boundary, inside a host of real
// index n_host. When the upper boundary is present the host region
// has total thickness gap_nm (so the dipole sits gap - z below it).
struct DipoleEnvironment {
    double host_index = 1.0;
    Boundary below = Boundary::open();
    Boundary above = Boundary::open();
    double gap_nm = 0.0;     // required when above is not open
    double height_nm = 0.0;  // z >= 0

    void validate() const;  // throws std::invalid_argument
};

struct DecayRates {
    double total = 1.0;      // full LDOS rate, including absorbed power
    double radiative = 1.0;  // propagating (u < 1) part only
};

// Relative decay rates by orientation; Isotropic is the exact average
// (perpendicular + 2 parallel) / 3. rel_tol steers the adaptive
// quadrature; the evanescent tail is summed in geometrically growing
// windows until it falls below 1e-11 of the running total.
DecayRates relative_decay_rate(const DipoleEnvironment& env, double lambda_nm,
                               Orientation orientation, double rel_tol = 1e-6);

// (total - radiative) / total: the part of the emission that never
// reaches the host's far field, i.e. stack absorption plus near-field
// power launched beyond the host light cone.
double nonradiative_fraction(const DecayRates& rates);

// Power collected through the lower stack within the numerical
// aperture (in-plane index <= NA), referenced to the emission rate of
// the same dipole in an unbounded host: a hemisphere in a homogeneous
// medium gives exactly 0.5. Dressing by the upper boundary, if any,
// is included. Throws std::domain_error when NA exceeds the exit
// index.
double collection_efficiency(const DipoleEnvironment& env, double lambda_nm,
                             double numerical_aperture, Orientation orientation,
                             double rel_tol = 1e-6);

struct SpectrumPoint {
    double lambda_nm = 0.0;
    double with_cavity = 1.0;  // C: total rate, both boundaries
    double mirror_only = 1.0;  // C_m: upper boundary removed
};

// C(lambda) and C_m(lambda) on the given grid. C_m removes the upper
// boundary, leaving the lower mirror alone.
std::vector<SpectrumPoint> purcell_spectrum(const DipoleEnvironment& env,
                                            const std::vector<double>& lambda_grid_nm,
                                            Orientation orientation, double rel_tol = 1e-6);

// Emission-weighted rate enhancement <C/C_m>_S on a common ascending
// grid. The grid must cover at least 99% of the spectral weight of S,
// otherwise std::domain_error. Insensitive to rescaling of S.
double spectral_average_enhancement(const std::vector<SpectrumPoint>& curves,
                                    const cavity::EmissionSpectrum& s);

struct LifetimePoint {
    double air_gap_nm = 0.0;
    double tau_ratio = 1.0;  // tau / tau_mirror = 1 / <C/C_m>_S
};

// Spectrally averaged lifetime versus mirror separation. The
// wavelength grid spans the emission line out to >= 99% weight with
// n_lambda points; C_m(lambda) is computed once and shared. env gives
// the boundaries and dipole height; its gap_nm is ignored.
std::vector<LifetimePoint> lifetime_curve(const DipoleEnvironment& env,
                                          const std::vector<double>& air_gaps_nm,
                                          const cavity::EmissionSpectrum& s,
                                          Orientation orientation, double rel_tol = 1e-6,
                                          int n_lambda = 15);

// Effective enhancement from measured lifetimes, tau_free / tau_cav - 1.
double purcell_from_lifetimes(double tau_free_ns, double tau_cavity_ns);

// Measured reference lifetimes of the studied emitters, inputs to the
// extraction helpers above and nothing else.
inline constexpr double kFreeSpaceLifetimeNs = 34.0;
inline constexpr double kOnMirrorLifetimeNs = 18.9;

// Closed-form rates above an ideal mirror, used as oracles.
double ideal_mirror_parallel(double z_nm, double lambda_nm);
double ideal_mirror_perpendicular(double z_nm, double lambda_nm);

}  // namespace cavtk::dipole
