#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "cavtk/photostats.hpp"

using namespace cavtk;
using photostats::DecayKind;
using photostats::G2Model;
using photostats::Histogram;
using photostats::Rng;
using photostats::ThreeLevelRates;

namespace {

Histogram synth_g2_hist(const G2Model& m, double bw, std::size_t nb,
                        double norm, Rng& rng) {
    Histogram h;
    h.edges_ns.resize(nb + 1);
    for (std::size_t i = 0; i <= nb; ++i) h.edges_ns[i] = i * bw;
    h.norm = norm;
    h.counts.resize(nb);
    h.g2.resize(nb);
    h.g2_sigma.resize(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        const double mean = norm * std::max(m(h.center_ns(i)), 0.0);
        h.counts[i] = rng.poisson(mean);
        h.g2[i] = static_cast<double>(h.counts[i]) / norm;
        h.g2_sigma[i] = std::sqrt(static_cast<double>(
                            std::max<std::uint64_t>(h.counts[i], 1))) /
                        norm;
    }
    return h;
}

Histogram synth_decay_hist(const std::vector<std::pair<double, double>>& comps,
                           double bg, double bw, std::size_t nb, Rng& rng) {
    Histogram h;
    h.edges_ns.resize(nb + 1);
    for (std::size_t i = 0; i <= nb; ++i) h.edges_ns[i] = i * bw;
    h.counts.resize(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        double mean = bg;
        for (const auto& [amp, tau] : comps)
            mean += amp * std::exp(-h.center_ns(i) / tau);
        h.counts[i] = rng.poisson(mean);
    }
    return h;
}

double normal(Rng& rng) {
    return std::sqrt(-2.0 * std::log(rng.uniform())) *
           std::cos(2.0 * 3.14159265358979323846 * rng.uniform());
}

} // namespace

TEST_CASE("g2 model algebra") {
    const G2Model m{0.73, 0.5, 20.0, 200.0};
    CHECK(m(0.0) == doctest::Approx(1.0 - 0.73).epsilon(1e-15));
    CHECK(m(35.0) == doctest::Approx(m(-35.0)).epsilon(1e-15));
    CHECK(m(1e7) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(photostats::single_emitter(m(0.0)));
    CHECK_NOTHROW(m.validate());

    // Bunching shoulder rises above one between the two time scales.
    CHECK(m(400.0) > 1.0);
}

TEST_CASE("g2 model validation") {
    CHECK_THROWS_AS((G2Model{1.2, 0.0, 10.0, 100.0}.validate()),
                    std::invalid_argument);
    CHECK_THROWS_AS((G2Model{0.5, -0.1, 10.0, 100.0}.validate()),
                    std::invalid_argument);
    CHECK_THROWS_AS((G2Model{0.5, 0.5, -1.0, 100.0}.validate()),
                    std::invalid_argument);
    // Strong bunching decaying faster than the dip recovers pushes the curve
    // negative in between.
    CHECK_THROWS_AS((G2Model{1.0, 3.0, 50.0, 5.0}.validate()),
                    std::invalid_argument);
}

TEST_CASE("count budget arithmetic") {
    const auto b = photostats::count_budget(6.9e5, 0.67, 0.65);
    CHECK(b.detection_efficiency == doctest::Approx(0.4355).epsilon(1e-12));
    CHECK(b.first_lens_rate_hz == doctest::Approx(1.584386e6).epsilon(1e-4));
    CHECK(std::abs(b.first_lens_rate_hz - 1.6e6) < 0.5e5);

    const auto lossless = photostats::count_budget(1234.0, 1.0, 1.0);
    CHECK(lossless.first_lens_rate_hz == doctest::Approx(1234.0).epsilon(1e-15));

    CHECK(5.7e5 / 1.5e5 == doctest::Approx(3.8).epsilon(1e-12));
    CHECK_THROWS_AS(photostats::count_budget(1.0, 0.0, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(photostats::count_budget(1.0, 0.5, 1.2),
                    std::invalid_argument);
}

TEST_CASE("excitation intensity formula") {
    const double i0 = photostats::excitation_intensity_w_m2(27.157e-6, 0.97, 0.15);
    CHECK(i0 == doctest::Approx(0.49e9).epsilon(1e-4));
    CHECK(photostats::excitation_intensity_w_m2(2 * 27.157e-6, 0.97, 0.15) ==
          doctest::Approx(2 * i0).epsilon(1e-12));
    CHECK(photostats::excitation_intensity_w_m2(27.157e-6, 0.97 / 2, 0.15) ==
          doctest::Approx(4 * i0).epsilon(1e-12));

    const double p = photostats::power_for_intensity_w(0.49e9, 0.97, 0.15);
    CHECK(p == doctest::Approx(27.157e-6).epsilon(1e-3));
    CHECK(std::abs(p - 27e-6) < 0.5e-6);
    CHECK(photostats::excitation_intensity_w_m2(p, 0.97, 0.15) ==
          doctest::Approx(0.49e9).epsilon(1e-12));
}

TEST_CASE("three-level rates map to a g2 model and back") {
    const ThreeLevelRates r{0.01, 1.0 / 12.0, 0.004, 0.002};
    CHECK(photostats::excited_state_population(r) ==
          doctest::Approx(0.085227).epsilon(1e-4));
    CHECK(photostats::photon_rate_per_ns(r) ==
          doctest::Approx(0.007102).epsilon(1e-4));

    const auto m = photostats::g2_from_rates(r);
    CHECK(m.p == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.b == doctest::Approx(0.216122).epsilon(1e-4));
    CHECK(m.tau1_ns == doctest::Approx(10.3187).epsilon(1e-4));
    CHECK(m.tau2_ns == doctest::Approx(412.977).epsilon(1e-4));
    CHECK_NOTHROW(m.validate());

    const auto back = photostats::rates_from_g2(m, r.emission_per_ns);
    CHECK(back.pump_per_ns == doctest::Approx(r.pump_per_ns).epsilon(1e-9));
    CHECK(back.shelving_per_ns ==
          doctest::Approx(r.shelving_per_ns).epsilon(1e-9));
    CHECK(back.deshelving_per_ns ==
          doctest::Approx(r.deshelving_per_ns).epsilon(1e-9));

    // Uncorrelated background dilutes the contrast quadratically.
    const auto diluted = photostats::g2_from_rates(r, 0.6);
    CHECK(diluted.p == doctest::Approx(0.36).epsilon(1e-12));
    CHECK(diluted.b == doctest::Approx(m.b).epsilon(1e-12));

    // No shelf, no bunching.
    const auto two = photostats::g2_from_rates({0.005, 0.1, 0.0, 0.0});
    CHECK(two.b == 0.0);
    CHECK(two.tau1_ns == doctest::Approx(1.0 / 0.105).epsilon(1e-12));

    CHECK_THROWS_AS(photostats::rates_from_g2(G2Model{1.0, 0.0, 100.0, 1000.0},
                                              1.0),
                    std::invalid_argument);
}

TEST_CASE("simulation is reproducible and respects its duration") {
    const ThreeLevelRates r{0.01, 1.0 / 12.0, 0.004, 0.002};
    const auto a = photostats::simulate_emitter(r, 1e-4, 2e6, 42);
    const auto b = photostats::simulate_emitter(r, 1e-4, 2e6, 42);
    const auto c = photostats::simulate_emitter(r, 1e-4, 2e6, 43);
    CHECK(a.timestamps_ns == b.timestamps_ns);
    CHECK(a.timestamps_ns != c.timestamps_ns);
    CHECK(a.duration_ns == 2e6);
    CHECK(!a.timestamps_ns.empty());
    CHECK(std::is_sorted(a.timestamps_ns.begin(), a.timestamps_ns.end()));
    CHECK(a.timestamps_ns.back() <= 2e6 + 1);

    // Roughly the analytic photon rate.
    const double rate = photostats::photon_rate_per_ns(r) + 1e-4;
    CHECK(std::abs(static_cast<double>(a.timestamps_ns.size()) / 2e6 - rate) <
          0.05 * rate);
}

TEST_CASE("simulated histogram matches the analytic correlation") {
    const ThreeLevelRates r{0.01, 1.0 / 12.0, 0.004, 0.002};
    const double duration = 1.41e8; // about 1e6 detections
    const auto data = photostats::simulate_emitter(r, 0.0, duration, 2024);
    CHECK(data.timestamps_ns.size() > 9e5);

    const auto h =
        photostats::coincidence_histogram(data.timestamps_ns, 5.0, 2000.0);
    CHECK(h.counts.size() == 400);
    const auto m = photostats::g2_from_rates(r);
    double chi2 = 0.0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        const double z = (h.g2[i] - m(h.center_ns(i))) / h.g2_sigma[i];
        chi2 += z * z;
    }
    const double per_dof = chi2 / static_cast<double>(h.counts.size());
    CHECK(per_dof > 0.8);
    CHECK(per_dof < 1.2);

    // The fitted model recovers the rate-derived parameters.
    const auto fit = photostats::fit_g2(h);
    CHECK(fit.quality.converged);
    CHECK(std::abs(fit.model.p - m.p) < std::max(3.0 * fit.sigma[0], 0.03));
    CHECK(std::abs(fit.model.b - m.b) < 3.0 * fit.sigma[1]);
    CHECK(std::abs(fit.model.tau1_ns - m.tau1_ns) < 3.0 * fit.sigma[2]);
    CHECK(std::abs(fit.model.tau2_ns - m.tau2_ns) < 3.0 * fit.sigma[3]);
}

TEST_CASE("uncorrelated and merged streams") {
    // Plain Poisson light: flat correlation.
    Rng rng(7);
    std::vector<std::uint64_t> ts;
    double t = 0.0;
    while (true) {
        t += rng.exponential(0.005);
        if (t > 2e7) break;
        ts.push_back(static_cast<std::uint64_t>(std::llround(t)));
    }
    const auto hp = photostats::coincidence_histogram(ts, 5.0, 1000.0);
    double mean = 0.0;
    for (std::size_t i = 0; i < hp.g2.size(); ++i) {
        CHECK(std::abs(hp.g2[i] - 1.0) < 4.5 * hp.g2_sigma[i]);
        mean += hp.g2[i];
    }
    mean /= static_cast<double>(hp.g2.size());
    CHECK(std::abs(mean - 1.0) < 0.01);

    // Two independent single emitters merged: the dip fills to one half.
    const ThreeLevelRates two{0.005, 0.1, 0.0, 0.0};
    auto s1 = photostats::simulate_emitter(two, 0.0, 3e7, 11).timestamps_ns;
    const auto s2 = photostats::simulate_emitter(two, 0.0, 3e7, 12).timestamps_ns;
    std::vector<std::uint64_t> merged(s1.size() + s2.size());
    std::merge(s1.begin(), s1.end(), s2.begin(), s2.end(), merged.begin());
    const auto hm = photostats::coincidence_histogram(merged, 3.0, 300.0);
    const auto fit = photostats::fit_g2(hm);
    CHECK(std::abs(fit.g2_zero - 0.5) < 0.05);
}

TEST_CASE("rebinning conserves total pair counts") {
    const ThreeLevelRates r{0.01, 1.0 / 12.0, 0.004, 0.002};
    const auto data = photostats::simulate_emitter(r, 0.0, 5e6, 99);
    const auto coarse =
        photostats::coincidence_histogram(data.timestamps_ns, 10.0, 1000.0);
    const auto fine =
        photostats::coincidence_histogram(data.timestamps_ns, 5.0, 1000.0);
    CHECK(coarse.total_counts() == fine.total_counts());
    CHECK(fine.counts.size() == 2 * coarse.counts.size());

    CHECK_THROWS_AS(photostats::coincidence_histogram({}, 5.0, 1000.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        photostats::coincidence_histogram(data.timestamps_ns, 2.5, 1000.0),
        std::invalid_argument);
    CHECK_THROWS_AS(photostats::coincidence_histogram({50, 20}, 5.0, 100.0),
                    std::invalid_argument);
}

TEST_CASE("g2 fit recovers the reference parameters") {
    const G2Model truth{0.73, 0.5, 20.0, 200.0};
    Rng rng(314);
    const auto h = synth_g2_hist(truth, 8.0, 250, 400.0, rng);
    const auto fit = photostats::fit_g2(h);
    CHECK(fit.quality.converged);
    CHECK(std::abs(fit.model.p - truth.p) < 3.0 * fit.sigma[0]);
    CHECK(std::abs(fit.model.b - truth.b) < 3.0 * fit.sigma[1]);
    CHECK(std::abs(fit.model.tau1_ns - truth.tau1_ns) < 3.0 * fit.sigma[2]);
    CHECK(std::abs(fit.model.tau2_ns - truth.tau2_ns) < 3.0 * fit.sigma[3]);
    CHECK(fit.g2_zero == doctest::Approx(1.0 - fit.model.p).epsilon(1e-12));
    CHECK(fit.quality.chi2_per_dof() > 0.7);
    CHECK(fit.quality.chi2_per_dof() < 1.3);
    CHECK(photostats::single_emitter(fit.g2_zero));
}

TEST_CASE("flat histogram fits to zero contrast") {
    const G2Model flat{0.0, 0.0, 10.0, 100.0};
    Rng rng(555);
    const auto h = synth_g2_hist(flat, 5.0, 100, 1000.0, rng);
    const auto fit = photostats::fit_g2(h);
    CHECK(fit.model.p < 0.05);
    CHECK(fit.g2_zero > 0.95);
}

TEST_CASE("g2 round trip across twenty parameter draws") {
    Rng rng(20240811);
    int failures = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const G2Model truth{0.3 + 0.65 * rng.uniform(),
                            0.1 + 1.9 * rng.uniform(),
                            5.0 + 45.0 * rng.uniform(),
                            100.0 + 400.0 * rng.uniform()};
        const double span = std::max(10.0 * truth.tau1_ns, 5.0 * truth.tau2_ns);
        const auto h = synth_g2_hist(truth, span / 250.0, 250, 400.0, rng);
        const auto fit = photostats::fit_g2(h);
        const double z0 = std::abs(fit.model.p - truth.p) / fit.sigma[0];
        const double z1 = std::abs(fit.model.b - truth.b) / fit.sigma[1];
        const double z2 =
            std::abs(fit.model.tau1_ns - truth.tau1_ns) / fit.sigma[2];
        const double z3 =
            std::abs(fit.model.tau2_ns - truth.tau2_ns) / fit.sigma[3];
        if (!fit.quality.converged || z0 >= 3.0 || z1 >= 3.0 || z2 >= 3.0 ||
            z3 >= 3.0)
            ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("saturation model identities and fits") {
    const photostats::SaturationModel truth{6.9e5, 0.49e9, 1e-4};
    CHECK(truth(truth.i_sat) ==
          doctest::Approx(truth.k_inf / 2.0 + truth.a * truth.i_sat)
              .epsilon(1e-12));
    const photostats::SaturationModel pure{6.9e5, 0.49e9, 0.0};
    CHECK(pure(1e15) == doctest::Approx(6.9e5).epsilon(1e-5));

    // Background-subtracted curve: monotone, bounded by the plateau.
    double prev = 0.0;
    for (double i = 1e7; i < 1e10; i *= 1.5) {
        const double v = truth.background_subtracted(i);
        CHECK(v > prev);
        CHECK(v < truth.k_inf);
        prev = v;
    }

    Rng rng(808);
    std::vector<double> in, k, s;
    for (double i = 0.05e9; i <= 3.0e9; i *= 1.45) {
        const double mean = truth(i);
        in.push_back(i);
        s.push_back(0.02 * mean);
        k.push_back(mean + s.back() * normal(rng));
    }
    const auto fit = photostats::fit_saturation(in, k, s);
    CHECK(fit.quality.converged);
    CHECK_FALSE(fit.ill_conditioned);
    CHECK(std::abs(fit.model.k_inf - truth.k_inf) < 3.0 * fit.sigma[0]);
    CHECK(std::abs(fit.model.i_sat - truth.i_sat) < 3.0 * fit.sigma[1]);
    CHECK(std::abs(fit.model.a - truth.a) < 3.0 * fit.sigma[2]);

    // All intensities far below the knee leave it unconstrained.
    std::vector<double> in2, k2, s2;
    for (double i = 1e6; i <= 2e7; i *= 1.6) {
        in2.push_back(i);
        k2.push_back(truth(i) * (1.0 + 0.01 * normal(rng)));
        s2.push_back(0.01 * truth(i));
    }
    CHECK(photostats::fit_saturation(in2, k2, s2).ill_conditioned);

    CHECK_THROWS_AS(photostats::fit_saturation({1.0, 2.0}, {1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("lifetime fits") {
    Rng rng(1717);
    const auto mono = synth_decay_hist({{2000.0, 19.3}}, 5.0, 0.4, 300, rng);
    const auto fit = photostats::fit_lifetime(mono, DecayKind::Mono);
    CHECK(fit.quality.converged);
    CHECK_FALSE(fit.short_tail);
    CHECK(fit.model.tau_ns == doctest::Approx(19.3).epsilon(0.02));
    CHECK(std::abs(fit.model.tau_ns - 19.3) < 3.0 * fit.sigma[1]);
    CHECK(fit.model.mean_lifetime_ns() ==
          doctest::Approx(fit.model.tau_ns).epsilon(1e-12));

    // Nested model: stretched fit of a plain exponential pushes beta to one.
    const auto st = photostats::fit_lifetime(mono, DecayKind::Stretched);
    CHECK(st.model.beta > 0.95);

    // Gamma(3) = 2: at beta one half the mean is twice the scale.
    const photostats::DecayModel half{DecayKind::Stretched, 10.0, 0.5, 1.0, 0.0};
    CHECK(half.mean_lifetime_ns() == doctest::Approx(20.0).epsilon(1e-12));

    // A two-component mixture lands between the components when forced mono.
    Rng rng2(1718);
    const auto mixA =
        synth_decay_hist({{10000.0, 10.0}, {10000.0, 30.0}}, 20.0, 0.25, 600,
                         rng2);
    const auto mixB =
        synth_decay_hist({{10000.0, 5.0}, {10000.0, 15.0}}, 20.0, 0.25, 600,
                         rng2);
    const auto monoA = photostats::fit_lifetime(mixA, DecayKind::Mono);
    const auto monoB = photostats::fit_lifetime(mixB, DecayKind::Mono);
    CHECK(monoA.model.tau_ns > 10.0);
    CHECK(monoA.model.tau_ns < 30.0);

    // The stretched mean lifetime weights the slow component more strongly,
    // so it reports a larger swing between the two settings.
    const auto stA = photostats::fit_lifetime(mixA, DecayKind::Stretched);
    const auto stB = photostats::fit_lifetime(mixB, DecayKind::Stretched);
    CHECK(stA.model.beta < 1.0);
    const double mono_swing = monoA.model.tau_ns / monoB.model.tau_ns;
    const double st_swing =
        stA.model.mean_lifetime_ns() / stB.model.mean_lifetime_ns();
    CHECK(st_swing > mono_swing);

    // Short acquisition window trips the reliability flag.
    Rng rng3(1719);
    const auto shorth = synth_decay_hist({{2000.0, 19.3}}, 5.0, 0.4, 100, rng3);
    CHECK(photostats::fit_lifetime(shorth, DecayKind::Mono).short_tail);

    Histogram tiny;
    tiny.edges_ns = {0.0, 1.0, 2.0};
    tiny.counts = {5, 3};
    CHECK_THROWS_AS(photostats::fit_lifetime(tiny, DecayKind::Mono),
                    std::invalid_argument);
}

TEST_CASE("timestamp files round trip") {
    const std::vector<std::uint64_t> ts{0, 17, 17, 3141592653589793238ull,
                                        18446744073709551615ull};
    photostats::write_timestamps_binary("ts_roundtrip.bin", ts);
    CHECK(photostats::read_timestamps_binary("ts_roundtrip.bin") == ts);

    // Fixed record size: 8 bytes per timestamp, low byte first.
    std::ifstream f("ts_roundtrip.bin", std::ios::binary | std::ios::ate);
    CHECK(static_cast<std::size_t>(f.tellg()) == 8 * ts.size());
    f.seekg(8);
    char byte = 0;
    f.get(byte);
    CHECK(static_cast<unsigned char>(byte) == 17);
    f.close();

    photostats::write_timestamps_csv("ts_roundtrip.csv", ts);
    CHECK(photostats::read_timestamps_csv("ts_roundtrip.csv") == ts);

    std::ofstream bad("ts_partial.bin", std::ios::binary);
    const char junk[12] = {};
    bad.write(junk, 12);
    bad.close();
    CHECK_THROWS_AS(photostats::read_timestamps_binary("ts_partial.bin"),
                    std::invalid_argument);
    std::remove("ts_roundtrip.bin");
    std::remove("ts_roundtrip.csv");
    std::remove("ts_partial.bin");
}

TEST_CASE("single emitter classification thresholds") {
    CHECK(photostats::single_emitter(0.27));
    CHECK_FALSE(photostats::single_emitter(0.6));
    CHECK(photostats::single_emitter(0.6, 0.7));
    CHECK_THROWS_AS(photostats::single_emitter(0.3, 1.5),
                    std::invalid_argument);
}
