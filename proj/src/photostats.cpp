#include "cavtk/photostats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cavtk/fit.hpp"

namespace cavtk::photostats {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

double G2Model::operator()(double tau_ns) const {
    const double t = std::abs(tau_ns);
    return 1.0 + p * (b * std::exp(-t / tau2_ns) -
                      (1.0 + b) * std::exp(-t / tau1_ns));
}

void G2Model::validate() const {
    require(p >= 0.0 && p <= 1.0, "g2 model: p must lie in [0, 1]");
    require(b >= 0.0, "g2 model: bunching amplitude must be nonnegative");
    require(tau1_ns > 0.0 && tau2_ns > 0.0, "g2 model: times must be positive");
    const double tmax = 12.0 * std::max(tau1_ns, tau2_ns);
    for (int i = 0; i <= 4800; ++i) {
        if ((*this)(tmax * i / 4800.0) < -1e-9)
            throw std::invalid_argument("g2 model: curve dips below zero");
    }
}

double SaturationModel::operator()(double intensity_w_m2) const {
    return k_inf * intensity_w_m2 / (i_sat + intensity_w_m2) +
           a * intensity_w_m2;
}

double SaturationModel::background_subtracted(double intensity_w_m2) const {
    return k_inf * intensity_w_m2 / (i_sat + intensity_w_m2);
}

double DecayModel::operator()(double t_ns) const {
    const double e = kind == DecayKind::Mono ? 1.0 : beta;
    return amplitude * std::exp(-std::pow(t_ns / tau_ns, e)) + background;
}

double DecayModel::mean_lifetime_ns() const {
    const double e = kind == DecayKind::Mono ? 1.0 : beta;
    return tau_ns * std::tgamma(1.0 + 1.0 / e);
}

double Histogram::center_ns(std::size_t i) const {
    if (!centers_ns.empty()) return centers_ns.at(i);
    return 0.5 * (edges_ns.at(i) + edges_ns.at(i + 1));
}

std::uint64_t Histogram::total_counts() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double FitQuality::chi2_per_dof() const {
    return dof > 0 ? chi2 / dof : std::numeric_limits<double>::quiet_NaN();
}

// ---- fits -------------------------------------------------------------

G2Fit fit_g2(const Histogram& hist) {
    const std::size_t n = hist.counts.size();
    require(n >= 20, "fit_g2: need at least 20 bins");
    require(hist.g2.size() == n && hist.norm > 0.0,
            "fit_g2: normalized correlation estimate required");

    std::vector<double> x(n), y(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = hist.center_ns(i);
        y[i] = hist.g2[i];
        s[i] = hist.g2_sigma.size() == n
                   ? hist.g2_sigma[i]
                   : std::sqrt(static_cast<double>(
                         std::max<std::uint64_t>(hist.counts[i], 1))) /
                         hist.norm;
    }
    const double bw = hist.edges_ns[1] - hist.edges_ns[0];
    const double span = hist.edges_ns.back() - hist.edges_ns.front();

    double ymin = y[0], ymax = y[0], xmax = x[0];
    for (std::size_t i = 0; i < n; ++i) {
        ymin = std::min(ymin, y[i]);
        if (y[i] > ymax) {
            ymax = y[i];
            xmax = x[i];
        }
    }
    const double p0 = std::clamp(1.0 - ymin, 0.05, 1.0);
    double tau_half = 2.0 * bw;
    for (std::size_t i = 0; i < n; ++i)
        if (y[i] >= 1.0 - p0 / 2.0) {
            tau_half = std::max(x[i], bw / 2.0);
            break;
        }
    const double t1 = std::max(tau_half / std::log(2.0), bw / 2.0);
    const double b0 =
        std::clamp((ymax - 1.0) / std::max(p0, 0.1), 0.05, 5.0);
    const double t2 = std::max(5.0 * t1, xmax);

    const std::vector<std::pair<double, double>> bounds = {
        {0.0, 1.0}, {0.0, 10.0}, {bw / 4.0, span}, {bw / 4.0, 10.0 * span}};
    std::vector<std::vector<double>> starts;
    for (const auto& [f1, f2] : {std::pair{1.0, 1.0},
                                {0.5, 1.0},
                                {2.0, 1.0},
                                {1.0, 0.4},
                                {1.0, 2.5}})
        starts.push_back({p0, b0, t1 * f1, t2 * f2});

    auto model = [](const std::vector<double>& q, double tau) {
        return G2Model{q[0], q[1], q[2], q[3]}(tau);
    };
    const auto r = fit::best_of_starts(model, x, y, s, starts, bounds);

    G2Fit out;
    out.model = {r.params[0], r.params[1], r.params[2], r.params[3]};
    for (int i = 0; i < 4; ++i)
        out.sigma[i] = r.sigma.empty() ? 0.0 : r.sigma[i];
    out.g2_zero = 1.0 - out.model.p;
    out.quality = {r.chi2, r.dof, r.converged, r.iterations};
    return out;
}

SaturationFit fit_saturation(const std::vector<double>& intensity_w_m2,
                             const std::vector<double>& rate_hz,
                             const std::vector<double>& sigma_hz) {
    const std::size_t n = intensity_w_m2.size();
    require(rate_hz.size() == n, "fit_saturation: length mismatch");
    require(n >= 5, "fit_saturation: need at least 5 points");
    const bool absolute = !sigma_hz.empty();
    std::vector<double> s = sigma_hz;
    if (s.empty()) s.assign(n, 1.0);
    require(s.size() == n, "fit_saturation: sigma length mismatch");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return intensity_w_m2[a] < intensity_w_m2[b];
    });
    const double imax = intensity_w_m2[order.back()];
    require(imax > 0.0, "fit_saturation: intensities must extend above zero");
    double kmax = 0.0;
    for (const double k : rate_hz) kmax = std::max(kmax, k);
    require(kmax > 0.0, "fit_saturation: rates must extend above zero");

    double ihalf = imax / 3.0;
    for (const std::size_t i : order)
        if (rate_hz[i] >= kmax / 2.0) {
            ihalf = std::max(intensity_w_m2[i], imax * 1e-6);
            break;
        }
    const std::size_t la = order[n - 2], lb = order[n - 1];
    double a0 = 0.0;
    if (intensity_w_m2[lb] > intensity_w_m2[la])
        a0 = std::max(0.0, (rate_hz[lb] - rate_hz[la]) /
                               (intensity_w_m2[lb] - intensity_w_m2[la]));

    const std::vector<std::pair<double, double>> bounds = {
        {kmax * 1e-6, kmax * 1e4},
        {imax * 1e-6, imax * 1e4},
        {0.0, 1e4 * kmax / imax}};
    const std::vector<std::vector<double>> starts = {
        {kmax, ihalf, a0},
        {1.3 * kmax, ihalf, 0.0},
        {kmax, 0.5 * ihalf, a0},
        {kmax, 2.0 * ihalf, 0.5 * a0},
        {0.8 * kmax, 0.3 * ihalf, 2.0 * a0 + kmax / imax * 1e-6}};

    auto model = [](const std::vector<double>& q, double i) {
        return SaturationModel{q[0], q[1], q[2]}(i);
    };
    const auto r = fit::best_of_starts(model, intensity_w_m2, rate_hz, s,
                                       starts, bounds, absolute);

    SaturationFit out;
    out.model = {r.params[0], r.params[1], r.params[2]};
    for (int i = 0; i < 3; ++i)
        out.sigma[i] = r.sigma.empty() ? 0.0 : r.sigma[i];
    out.ill_conditioned = out.model.i_sat > 0.8 * imax ||
                          (!r.sigma.empty() && r.sigma[1] > out.model.i_sat);
    out.quality = {r.chi2, r.dof, r.converged, r.iterations};
    return out;
}

DecayFit fit_lifetime(const Histogram& hist, DecayKind kind) {
    const std::size_t n = hist.counts.size();
    require(n >= 8, "fit_lifetime: need at least 8 bins");
    std::vector<double> x(n), y(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = hist.center_ns(i);
        y[i] = static_cast<double>(hist.counts[i]);
        s[i] = std::sqrt(static_cast<double>(
            std::max<std::uint64_t>(hist.counts[i], 1)));
    }
    const double bw = hist.edges_ns[1] - hist.edges_ns[0];
    const double span = hist.edges_ns.back() - hist.edges_ns.front();

    const std::size_t tail = std::max<std::size_t>(3, n / 10);
    double bg0 = 0.0;
    for (std::size_t i = n - tail; i < n; ++i) bg0 += y[i];
    bg0 /= tail;
    double ymax = 0.0;
    for (const double v : y) ymax = std::max(ymax, v);
    const double a0 = std::max(ymax - bg0, 1e-9);
    double tau0 = span / 3.0;
    for (std::size_t i = 0; i < n; ++i)
        if (y[i] <= bg0 + a0 / std::exp(1.0)) {
            tau0 = std::max(x[i], bw / 2.0);
            break;
        }

    fit::Result r;
    if (kind == DecayKind::Mono) {
        const std::vector<std::pair<double, double>> bounds = {
            {a0 * 1e-6, a0 * 1e6}, {bw / 10.0, 100.0 * span}, {0.0, ymax}};
        std::vector<std::vector<double>> starts;
        for (const double f : {1.0, 0.5, 2.0, 1.3, 0.8})
            starts.push_back({a0, tau0 * f, std::max(bg0, 0.0)});
        auto model = [](const std::vector<double>& q, double t) {
            return DecayModel{DecayKind::Mono, q[1], 1.0, q[0], q[2]}(t);
        };
        r = fit::best_of_starts(model, x, y, s, starts, bounds);
    } else {
        const std::vector<std::pair<double, double>> bounds = {
            {a0 * 1e-6, a0 * 1e6},
            {bw / 10.0, 100.0 * span},
            {0.05, 1.0},
            {0.0, ymax}};
        std::vector<std::vector<double>> starts;
        for (const auto& [ft, b] : {std::pair{1.0, 0.95},
                                   {1.0, 0.7},
                                   {0.6, 0.85},
                                   {1.5, 0.5},
                                   {1.0, 0.99}})
            starts.push_back({a0, tau0 * ft, b, std::max(bg0, 0.0)});
        auto model = [](const std::vector<double>& q, double t) {
            return DecayModel{DecayKind::Stretched, q[1], q[2], q[0], q[3]}(t);
        };
        r = fit::best_of_starts(model, x, y, s, starts, bounds);
    }

    DecayFit out;
    if (kind == DecayKind::Mono) {
        out.model = {DecayKind::Mono, r.params[1], 1.0, r.params[0],
                     r.params[2]};
        out.sigma = {r.sigma.empty() ? 0.0 : r.sigma[0],
                     r.sigma.empty() ? 0.0 : r.sigma[1], 0.0,
                     r.sigma.empty() ? 0.0 : r.sigma[2]};
    } else {
        out.model = {DecayKind::Stretched, r.params[1], r.params[2],
                     r.params[0], r.params[3]};
        for (int i = 0; i < 4; ++i)
            out.sigma[i] = r.sigma.empty()
                               ? 0.0
                               : r.sigma[i == 0 ? 0 : (i == 1 ? 1 : (i == 2 ? 2 : 3))];
    }
    out.short_tail = span < 3.0 * out.model.tau_ns;
    out.quality = {r.chi2, r.dof, r.converged, r.iterations};
    return out;
}

bool single_emitter(double g2_zero, double threshold) {
    require(threshold > 0.0 && threshold < 1.0,
            "single_emitter: threshold must lie in (0, 1)");
    return g2_zero < threshold;
}

// ---- 3-level emitter --------------------------------------------------

void ThreeLevelRates::validate() const {
    require(pump_per_ns > 0.0, "rates: pump must be positive");
    require(emission_per_ns > 0.0, "rates: emission must be positive");
    require(shelving_per_ns >= 0.0, "rates: shelving must be nonnegative");
    require(deshelving_per_ns >= 0.0, "rates: deshelving must be nonnegative");
    if (shelving_per_ns > 0.0)
        require(deshelving_per_ns > 0.0,
                "rates: a populated shelf needs a deshelving path");
}

double excited_state_population(const ThreeLevelRates& r) {
    r.validate();
    if (r.shelving_per_ns == 0.0)
        return r.pump_per_ns / (r.pump_per_ns + r.emission_per_ns);
    const double bsum = r.deshelving_per_ns * (r.pump_per_ns +
                                               r.emission_per_ns +
                                               r.shelving_per_ns) +
                        r.pump_per_ns * r.shelving_per_ns;
    return r.pump_per_ns * r.deshelving_per_ns / bsum;
}

double photon_rate_per_ns(const ThreeLevelRates& r) {
    return r.emission_per_ns * excited_state_population(r);
}

G2Model g2_from_rates(const ThreeLevelRates& r, double signal_fraction) {
    r.validate();
    require(signal_fraction > 0.0 && signal_fraction <= 1.0,
            "g2_from_rates: signal fraction must lie in (0, 1]");
    const double p_dilute = signal_fraction * signal_fraction;
    if (r.shelving_per_ns == 0.0) {
        const double lam = r.pump_per_ns + r.emission_per_ns;
        return {p_dilute, 0.0, 1.0 / lam, 10.0 / lam};
    }
    const double a = r.pump_per_ns + r.emission_per_ns + r.shelving_per_ns +
                     r.deshelving_per_ns;
    const double bsum = r.deshelving_per_ns * (r.pump_per_ns +
                                               r.emission_per_ns +
                                               r.shelving_per_ns) +
                        r.pump_per_ns * r.shelving_per_ns;
    const double disc = std::sqrt(a * a / 4.0 - bsum);
    const double lam1 = a / 2.0 + disc; // fast
    const double lam2 = a / 2.0 - disc; // slow
    const double einf = r.pump_per_ns * r.deshelving_per_ns / bsum;
    // E(0) = 0, E'(0) = pump pin the transient coefficients.
    const double c1 = (r.pump_per_ns - lam2 * einf) / (lam2 - lam1);
    const double c2 = -einf - c1;
    return {p_dilute, c2 / einf, 1.0 / lam1, 1.0 / lam2};
}

ThreeLevelRates rates_from_g2(const G2Model& m, double emission_per_ns) {
    require(emission_per_ns > 0.0, "rates_from_g2: emission must be positive");
    require(m.tau1_ns > 0.0 && m.tau2_ns > 0.0,
            "rates_from_g2: times must be positive");
    const double lam1 = 1.0 / m.tau1_ns;
    const double lam2 = 1.0 / m.tau2_ns;
    if (m.b == 0.0) {
        const double pump = lam1 - emission_per_ns;
        require(pump > 0.0,
                "rates_from_g2: emission rate exceeds the antibunching rate");
        return {pump, emission_per_ns, 0.0, 0.0};
    }
    require(lam1 > lam2,
            "rates_from_g2: antibunching must be the faster time scale");
    const double k31 =
        lam1 * lam2 / (lam2 + (1.0 + m.b) * (lam1 - lam2));
    const double sum3 = lam1 + lam2 - k31;      // pump + emission + shelving
    const double prod = lam1 * lam2 - k31 * sum3; // pump * shelving
    const double q = sum3 - emission_per_ns;
    const double disc = q * q - 4.0 * prod;
    if (!(q > 0.0) || !(prod > 0.0) || !(disc >= 0.0))
        throw std::invalid_argument(
            "rates_from_g2: no positive 3-level rates realize this model");
    const double shelving = (q - std::sqrt(disc)) / 2.0; // weak-shelving root
    const double pump = q - shelving;
    ThreeLevelRates r{pump, emission_per_ns, shelving, k31};
    r.validate();
    return r;
}

// ---- random stream ----------------------------------------------------

double Rng::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::exponential(double rate_per_ns) {
    require(rate_per_ns > 0.0, "rng: exponential rate must be positive");
    return -std::log(uniform()) / rate_per_ns;
}

std::uint64_t Rng::poisson(double mean) {
    require(mean >= 0.0, "rng: poisson mean must be nonnegative");
    std::uint64_t total = 0;
    // Knuth's product method needs exp(-mean) to stay representable.
    while (mean > 500.0) {
        total += poisson(500.0);
        mean -= 500.0;
    }
    const double limit = std::exp(-mean);
    double prod = uniform();
    while (prod > limit) {
        ++total;
        prod *= uniform();
    }
    return total;
}

// ---- simulation -------------------------------------------------------

PhotonDataset simulate_emitter(const ThreeLevelRates& rates,
                               double background_per_ns, double duration_ns,
                               std::uint64_t seed) {
    rates.validate();
    require(background_per_ns >= 0.0, "simulate: background must be nonnegative");
    require(duration_ns > 0.0, "simulate: duration must be positive");

    Rng rng(seed);
    std::vector<std::uint64_t> signal;
    signal.reserve(static_cast<std::size_t>(
        photon_rate_per_ns(rates) * duration_ns * 1.1) + 16);
    enum { kGround, kExcited, kShelf } state = kGround;
    double t = 0.0;
    while (true) {
        if (state == kGround) {
            t += rng.exponential(rates.pump_per_ns);
            if (t > duration_ns) break;
            state = kExcited;
        } else if (state == kExcited) {
            const double out = rates.emission_per_ns + rates.shelving_per_ns;
            t += rng.exponential(out);
            if (t > duration_ns) break;
            if (rng.uniform() * out < rates.emission_per_ns) {
                state = kGround;
                signal.push_back(static_cast<std::uint64_t>(std::llround(t)));
            } else {
                state = kShelf;
            }
        } else {
            t += rng.exponential(rates.deshelving_per_ns);
            if (t > duration_ns) break;
            state = kGround;
        }
    }

    std::vector<std::uint64_t> bg;
    if (background_per_ns > 0.0) {
        double tb = 0.0;
        while (true) {
            tb += rng.exponential(background_per_ns);
            if (tb > duration_ns) break;
            bg.push_back(static_cast<std::uint64_t>(std::llround(tb)));
        }
    }

    PhotonDataset out;
    out.duration_ns = duration_ns;
    out.timestamps_ns.resize(signal.size() + bg.size());
    std::merge(signal.begin(), signal.end(), bg.begin(), bg.end(),
               out.timestamps_ns.begin());
    return out;
}

PhotonDataset simulate_emitter(const G2Model& model, double emission_per_ns,
                               double duration_ns, std::uint64_t seed) {
    require(model.p > 0.0 && model.p <= 1.0,
            "simulate: model contrast must lie in (0, 1]");
    const ThreeLevelRates rates = rates_from_g2(model, emission_per_ns);
    const double rho = std::sqrt(model.p);
    const double bg = photon_rate_per_ns(rates) * (1.0 - rho) / rho;
    return simulate_emitter(rates, bg, duration_ns, seed);
}

Histogram coincidence_histogram(const std::vector<std::uint64_t>& ts,
                                double binwidth_ns, double window_ns) {
    require(!ts.empty(), "coincidence_histogram: empty photon stream");
    require(binwidth_ns >= 1.0 &&
                binwidth_ns == std::floor(binwidth_ns),
            "coincidence_histogram: binwidth must be a whole number of "
            "nanoseconds for integer timestamps");
    require(window_ns >= binwidth_ns,
            "coincidence_histogram: window must cover at least one bin");
    require(std::is_sorted(ts.begin(), ts.end()),
            "coincidence_histogram: timestamps must be sorted");
    const std::uint64_t w = static_cast<std::uint64_t>(binwidth_ns);
    const std::size_t nb =
        static_cast<std::size_t>(std::llround(window_ns / binwidth_ns));
    const std::uint64_t window_lags = nb * w;
    const double total_time = static_cast<double>(ts.back() - ts.front());
    require(total_time > 0.0, "coincidence_histogram: stream spans zero time");

    Histogram h;
    // Edges offset by one half: bin k holds the integer lags
    // {k w, ..., k w + w - 1}.
    h.edges_ns.resize(nb + 1);
    for (std::size_t i = 0; i <= nb; ++i)
        h.edges_ns[i] = static_cast<double>(i) * binwidth_ns - 0.5;
    h.counts.assign(nb, 0);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t j = i + 1; j < ts.size(); ++j) {
            const std::uint64_t d = ts[j] - ts[i];
            if (d >= window_lags) break;
            ++h.counts[static_cast<std::size_t>(d / w)];
        }
    }

    // Rounding maps a continuous separation s to integer lags with a unit
    // triangular kernel, so every lag collects one nanosecond of pair
    // density except lag zero, which only sees s in (0, 1) and collects half
    // of it (mean true separation one third).
    const double n = static_cast<double>(ts.size());
    const double per_ns = n * n / total_time;
    const double wd = static_cast<double>(w);
    h.norm = per_ns * wd;
    h.g2.resize(nb);
    h.g2_sigma.resize(nb);
    h.centers_ns.resize(nb);
    for (std::size_t k = 0; k < nb; ++k) {
        const double width = k == 0 ? wd - 0.5 : wd;
        const double expect = per_ns * width;
        h.g2[k] = static_cast<double>(h.counts[k]) / expect;
        h.g2_sigma[k] =
            std::sqrt(static_cast<double>(
                std::max<std::uint64_t>(h.counts[k], 1))) /
            expect;
        h.centers_ns[k] =
            k == 0 ? (1.0 / 6.0 + wd * (wd - 1.0) / 2.0) / (wd - 0.5)
                   : static_cast<double>(k) * wd + (wd - 1.0) / 2.0;
    }
    return h;
}

// ---- budgets ----------------------------------------------------------

double excitation_intensity_w_m2(double power_w, double waist_um,
                                 double mirror_transmission) {
    require(power_w > 0.0 && waist_um > 0.0, "intensity: inputs must be positive");
    require(mirror_transmission > 0.0 && mirror_transmission <= 1.0,
            "intensity: transmission must lie in (0, 1]");
    const double w_m = waist_um * 1e-6;
    return 8.0 * power_w / (kPi * w_m * w_m * mirror_transmission);
}

double power_for_intensity_w(double intensity_w_m2, double waist_um,
                             double mirror_transmission) {
    require(intensity_w_m2 > 0.0 && waist_um > 0.0,
            "intensity: inputs must be positive");
    require(mirror_transmission > 0.0 && mirror_transmission <= 1.0,
            "intensity: transmission must lie in (0, 1]");
    const double w_m = waist_um * 1e-6;
    return intensity_w_m2 * kPi * w_m * w_m * mirror_transmission / 8.0;
}

CountBudget count_budget(double detected_rate_hz, double path_efficiency,
                         double detector_qe) {
    require(detected_rate_hz >= 0.0, "budget: rate must be nonnegative");
    require(path_efficiency > 0.0 && path_efficiency <= 1.0 &&
                detector_qe > 0.0 && detector_qe <= 1.0,
            "budget: efficiencies must lie in (0, 1]");
    CountBudget b;
    b.detection_efficiency = path_efficiency * detector_qe;
    b.first_lens_rate_hz = detected_rate_hz / b.detection_efficiency;
    return b;
}

// ---- timestamp streams ------------------------------------------------

void write_timestamps_binary(const std::string& path,
                             const std::vector<std::uint64_t>& ts) {
    std::ofstream f(path, std::ios::binary);
    require(f.good(), "timestamps: cannot open file for writing");
    for (const std::uint64_t v : ts) {
        unsigned char bytes[8];
        for (int i = 0; i < 8; ++i)
            bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
        f.write(reinterpret_cast<const char*>(bytes), 8);
    }
    require(f.good(), "timestamps: write failed");
}

std::vector<std::uint64_t> read_timestamps_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    require(f.good(), "timestamps: cannot open file");
    std::vector<std::uint64_t> ts;
    unsigned char bytes[8];
    while (f.read(reinterpret_cast<char*>(bytes), 8)) {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
        ts.push_back(v);
    }
    require(f.gcount() == 0, "timestamps: trailing partial record");
    return ts;
}

void write_timestamps_csv(const std::string& path,
                          const std::vector<std::uint64_t>& ts) {
    std::ofstream f(path);
    require(f.good(), "timestamps: cannot open file for writing");
    f << "timestamp_ns\n";
    for (const std::uint64_t v : ts) f << v << "\n";
    require(f.good(), "timestamps: write failed");
}

std::vector<std::uint64_t> read_timestamps_csv(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), "timestamps: cannot open file");
    std::vector<std::uint64_t> ts;
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first && (line[0] < '0' || line[0] > '9')) {
            first = false; // header row
            continue;
        }
        first = false;
        try {
            ts.push_back(std::stoull(line));
        } catch (const std::exception&) {
            throw std::invalid_argument("timestamps: bad line: " + line);
        }
    }
    return ts;
}

} // namespace cavtk::photostats
