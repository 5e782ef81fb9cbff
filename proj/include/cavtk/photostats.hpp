#pragma once

// Photon statistics: second-order correlation models, saturation curves,
// lifetime decays, a 3-level emitter simulator with closed-form g2 mapping,
// coincidence histogramming, and count-rate budget arithmetic.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cavtk::photostats {

// g2(tau) = 1 + p (b e^{-|tau|/tau2} - (1+b) e^{-|tau|/tau1}).
// p is the correlation contrast (g2(0) = 1 - p), b the bunching amplitude
// fed by a shelving state, tau1 the antibunching and tau2 the bunching time.
struct G2Model {
    double p = 0.0;
    double b = 0.0;
    double tau1_ns = 1.0;
    double tau2_ns = 1.0;
    double operator()(double tau_ns) const;
    // p in [0,1], times positive, b nonnegative, and the curve never goes
    // negative (checked on a dense grid spanning both time scales).
    void validate() const;
};

// K(I) = K_inf I / (I_sat + I) + a I, count rate versus excitation intensity.
struct SaturationModel {
    double k_inf = 0.0; // counts/s
    double i_sat = 1.0; // W/m^2
    double a = 0.0;     // counts/s per W/m^2
    double operator()(double intensity_w_m2) const;
    double background_subtracted(double intensity_w_m2) const;
};

enum class DecayKind { Mono, Stretched };

// amplitude exp(-(t/tau)^beta) + background; beta = 1 for a plain
// exponential.  mean_lifetime integrates the normalized decay,
// tau Gamma(1 + 1/beta), which is the number to compare across fits with
// different beta.
struct DecayModel {
    DecayKind kind = DecayKind::Mono;
    double tau_ns = 1.0;
    double beta = 1.0;
    double amplitude = 1.0;
    double background = 0.0;
    double operator()(double t_ns) const;
    double mean_lifetime_ns() const;
};

struct Histogram {
    std::vector<double> edges_ns; // counts.size() + 1, ascending
    std::vector<std::uint64_t> counts;
    // Normalized correlation estimate with per-bin uncertainties; norm is the
    // expected coincidence count in a full-width bin for uncorrelated light.
    // Empty / zero unless the histogram came from coincidence_histogram or
    // was synthesized with the same bookkeeping.
    std::vector<double> g2;
    std::vector<double> g2_sigma;
    double norm = 0.0;
    // Integer-lag histograms carry explicit bin centers (the mean lag of the
    // bin); otherwise the edge midpoint is used.
    std::vector<double> centers_ns;
    double center_ns(std::size_t i) const;
    std::uint64_t total_counts() const;
};

struct PhotonDataset {
    std::vector<std::uint64_t> timestamps_ns; // sorted
    Histogram histogram;
    double duration_ns = 0.0;
    double excitation_power_w = 0.0;
    double repetition_rate_hz = 0.0;
};

struct FitQuality {
    double chi2 = 0.0;
    int dof = 0;
    bool converged = false;
    int iterations = 0;
    double chi2_per_dof() const;
};

struct G2Fit {
    G2Model model;
    std::array<double, 4> sigma{}; // p, b, tau1, tau2
    double g2_zero = 1.0;          // from the model, not the raw bin
    FitQuality quality;
};

struct SaturationFit {
    SaturationModel model;
    std::array<double, 3> sigma{}; // k_inf, i_sat, a
    // Set when the data do not constrain the saturation knee (all intensities
    // well below i_sat, or the uncertainty swallows the value).
    bool ill_conditioned = false;
    FitQuality quality;
};

struct DecayFit {
    DecayModel model;
    std::array<double, 4> sigma{}; // amplitude, tau, beta, background
    bool short_tail = false;       // histogram span under 3 fitted lifetimes
    FitQuality quality;
};

// Weighted fits with Poisson errors sqrt(max(count, 1)) and a deterministic
// five-point multistart seeded from moment heuristics.
G2Fit fit_g2(const Histogram& hist);
SaturationFit fit_saturation(const std::vector<double>& intensity_w_m2,
                             const std::vector<double>& rate_hz,
                             const std::vector<double>& sigma_hz = {});
DecayFit fit_lifetime(const Histogram& hist, DecayKind kind);

// Dip classification; 0.5 for clean data, 0.7 once a known background floor
// lifts the dip.
bool single_emitter(double g2_zero, double threshold = 0.5);

// Ground - excited - shelving level scheme, rates in 1/ns.  Photons are
// emitted on the excited-to-ground transition.
struct ThreeLevelRates {
    double pump_per_ns = 0.0;
    double emission_per_ns = 0.0;
    double shelving_per_ns = 0.0;
    double deshelving_per_ns = 0.0;
    void validate() const;
};

double excited_state_population(const ThreeLevelRates& rates); // steady state
double photon_rate_per_ns(const ThreeLevelRates& rates);

// Closed-form g2 of the 3-level scheme.  signal_fraction is the emitter's
// share of the detected rate; uncorrelated background dilutes the contrast as
// p = signal_fraction^2 and leaves b and the time constants untouched.
G2Model g2_from_rates(const ThreeLevelRates& rates, double signal_fraction = 1.0);

// Inverse mapping for a given emission rate, taking the weak-shelving root of
// the resulting quadratic.  Throws when no positive rate set reproduces the
// model.
ThreeLevelRates rates_from_g2(const G2Model& model, double emission_per_ns);

// Deterministic random stream: identical sequences on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform(); // in (0, 1)
    double exponential(double rate_per_ns);
    std::uint64_t poisson(double mean);

private:
    std::mt19937_64 engine_;
};

// Continuous-time Markov simulation plus independent Poisson background;
// bit-reproducible for a fixed seed.
PhotonDataset simulate_emitter(const ThreeLevelRates& rates,
                               double background_per_ns, double duration_ns,
                               std::uint64_t seed);
// Convenience wrapper: realizes the model via rates_from_g2 and adds the
// background implied by p (< 1 means diluted contrast).
PhotonDataset simulate_emitter(const G2Model& model, double emission_per_ns,
                               double duration_ns, std::uint64_t seed);

// All ordered pairs with separation below `window_ns`, binned by integer lag;
// g2 normalized by the uncorrelated expectation N^2 / T per nanosecond of
// lag.  Because timestamps are whole nanoseconds, the binwidth must be a
// whole number too, and zero lag carries only half the pair density of any
// other lag; the first bin's normalization and center account for that.
Histogram coincidence_histogram(const std::vector<std::uint64_t>& timestamps_ns,
                                double binwidth_ns, double window_ns);

// I = 8 P / (pi w^2 T1): peak intracavity excitation intensity from the power
// arriving at the incoupling mirror of transmission T1.
double excitation_intensity_w_m2(double power_w, double waist_um,
                                 double mirror_transmission);
double power_for_intensity_w(double intensity_w_m2, double waist_um,
                             double mirror_transmission);

struct CountBudget {
    double detection_efficiency = 0.0; // path efficiency times detector QE
    double first_lens_rate_hz = 0.0;   // detected rate corrected for both
};
CountBudget count_budget(double detected_rate_hz, double path_efficiency,
                         double detector_qe);

// Timestamp streams: binary little-endian unsigned 64-bit nanoseconds
// (byte order fixed regardless of host), or one decimal value per line.
void write_timestamps_binary(const std::string& path,
                             const std::vector<std::uint64_t>& ts);
std::vector<std::uint64_t> read_timestamps_binary(const std::string& path);
void write_timestamps_csv(const std::string& path,
                          const std::vector<std::uint64_t>& ts);
std::vector<std::uint64_t> read_timestamps_csv(const std::string& path);

} // namespace cavtk::photostats
