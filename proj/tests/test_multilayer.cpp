#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cavtk/materials.hpp"
#include "cavtk/multilayer.hpp"

using namespace cavtk;
using namespace cavtk::multilayer;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// air | glass cap | silver film | glass substrate, seen from the air side
LayerStack silver_mirror(double cap_nm, double film_nm) {
    return LayerStack::between(air(), {{glass(), cap_nm}, {silver(), film_nm}}, glass());
}

}  // namespace

TEST_CASE("empty stack: vacuum against vacuum") {
    const auto s = LayerStack::between(air(), {}, air());
    const auto r = stack_response(s, 690.0, 0.0, Polarization::TE);
    CHECK(r.reflectivity < 1e-12);
    CHECK(r.transmissivity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.absorption) < 1e-12);
}

TEST_CASE("single interface matches the Fresnel oracle") {
    const auto n15 = Material::constant("n15", {1.5, 0.0});
    const auto s = LayerStack::between(air(), {}, n15);
    const auto r = stack_response(s, 690.0, 0.0, Polarization::TE);
    CHECK(r.reflectivity == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(r.transmissivity == doctest::Approx(0.96).epsilon(1e-12));

    // oblique TE against the textbook formula
    const double th = 0.6;
    const double tht = std::asin(std::sin(th) / 1.5);
    const double rs = (std::cos(th) - 1.5 * std::cos(tht)) / (std::cos(th) + 1.5 * std::cos(tht));
    const auto ro = stack_response(s, 690.0, th, Polarization::TE);
    CHECK(ro.reflectivity == doctest::Approx(rs * rs).epsilon(1e-12));

    // TM Brewster angle: vanishing reflectivity
    const double brewster = std::atan(1.5);
    const auto rb = stack_response(s, 690.0, brewster, Polarization::TM);
    CHECK(rb.reflectivity < 1e-20);
}

TEST_CASE("fiber-mirror coating budget at 700 nm") {
    const auto m = silver_mirror(20.0, 33.0);
    const auto r = stack_response(m, 700.0, 0.0, Polarization::TE);
    CHECK(r.transmissivity == doctest::Approx(0.08).epsilon(0.25));   // 8% +- 2
    CHECK(r.absorption == doctest::Approx(0.04).epsilon(0.5));        // 4% +- 2
    CHECK(r.reflection_phase / kPi == doctest::Approx(0.72).epsilon(0.07));

    const auto back = silver_mirror(20.0, 60.0);
    const auto rb = stack_response(back, 700.0, 0.0, Polarization::TE);
    CHECK(rb.transmissivity == doctest::Approx(0.008).epsilon(0.65)); // 0.8% +- 0.5
    CHECK(rb.absorption == doctest::Approx(0.03).epsilon(0.7));       // 3% +- 2
    CHECK(rb.reflection_phase / kPi == doctest::Approx(0.72).epsilon(0.07));
}

TEST_CASE("energy conservation for lossless stacks") {
    const auto s = LayerStack::between(
        air(), {{glass(), 120.0}, {diamond(), 75.0}, {glass(), 310.0}}, diamond());
    for (double lam : {500.0, 575.0, 650.0, 725.0, 800.0}) {
        for (double deg : {0.0, 20.0, 45.0, 70.0, 89.0}) {
            for (auto pol : {Polarization::TE, Polarization::TM}) {
                const auto r = stack_response(s, lam, deg * kPi / 180.0, pol);
                CHECK(std::abs(r.reflectivity + r.transmissivity - 1.0) < 1e-9);
                CHECK(std::abs(r.absorption) < 1e-9);
            }
        }
    }
}

TEST_CASE("absorbing stacks keep R, T, A inside [0,1]") {
    const auto m = silver_mirror(20.0, 33.0);
    for (double lam = 500.0; lam <= 800.0; lam += 25.0) {
        for (double deg : {0.0, 30.0, 60.0, 85.0}) {
            for (auto pol : {Polarization::TE, Polarization::TM}) {
                const auto r = stack_response(m, lam, deg * kPi / 180.0, pol);
                CHECK(r.reflectivity >= 0.0);
                CHECK(r.reflectivity <= 1.0);
                CHECK(r.transmissivity >= 0.0);
                CHECK(r.absorption >= 0.0);
                CHECK(r.absorption <= 1.0);
                CHECK(r.reflection_phase <= kPi);
                CHECK(r.reflection_phase > -kPi);
            }
        }
    }
}

TEST_CASE("transmission is reciprocal at fixed in-plane index") {
    const auto fwd = silver_mirror(20.0, 33.0);
    const auto rev = LayerStack::between(glass(), {{silver(), 33.0}, {glass(), 20.0}}, air());
    for (double q : {0.0, 0.3, 0.7, 0.95}) {
        for (auto pol : {Polarization::TE, Polarization::TM}) {
            const auto a = amplitude_response(fwd, 700.0, q, pol);
            const auto b = amplitude_response(rev, 700.0, q, pol);
            CHECK(a.transmitted_power == doctest::Approx(b.transmitted_power).epsilon(1e-10));
        }
    }
}

TEST_CASE("zero-thickness layers are no-ops") {
    const auto plain = silver_mirror(20.0, 33.0);
    auto padded = LayerStack::between(
        air(), {{diamond(), 0.0}, {glass(), 20.0}, {air(), 0.0}, {silver(), 33.0}}, glass());
    for (auto pol : {Polarization::TE, Polarization::TM}) {
        const auto a = stack_response(plain, 700.0, 0.4, pol);
        const auto b = stack_response(padded, 700.0, 0.4, pol);
        CHECK(a.reflectivity == doctest::Approx(b.reflectivity).epsilon(1e-12));
        CHECK(a.transmissivity == doctest::Approx(b.transmissivity).epsilon(1e-12));
        CHECK(a.reflection_phase == doctest::Approx(b.reflection_phase).epsilon(1e-12));
    }
}

TEST_CASE("TE and TM coincide at normal incidence") {
    const auto m = silver_mirror(20.0, 60.0);
    const auto te = stack_response(m, 650.0, 0.0, Polarization::TE);
    const auto tm = stack_response(m, 650.0, 0.0, Polarization::TM);
    CHECK(te.reflectivity == doctest::Approx(tm.reflectivity).epsilon(1e-12));
    CHECK(te.transmissivity == doctest::Approx(tm.transmissivity).epsilon(1e-12));
    CHECK(te.reflection_phase == doctest::Approx(tm.reflection_phase).epsilon(1e-12));
}

TEST_CASE("thick ideal-metal-like silver tends to the phase-lag pi convention") {
    // a very thick film reflects like bulk silver; the phase lag stays
    // in (0, pi) and approaches pi as the index grows purely imaginary
    const auto bulk = LayerStack::between(air(), {{silver(), 500.0}}, glass());
    const auto r = stack_response(bulk, 700.0, 0.0, Polarization::TE);
    CHECK(r.reflection_phase > 0.5 * kPi);
    CHECK(r.reflection_phase < kPi);
    CHECK(r.transmissivity < 1e-6);
}

TEST_CASE("evanescent in-plane index yields zero transmitted power") {
    const auto s = LayerStack::between(air(), {{glass(), 100.0}}, air());
    const auto a = amplitude_response(s, 690.0, 1.8, Polarization::TE);
    CHECK(a.transmitted_power == 0.0);
    CHECK(std::abs(a.r) <= 1.0 + 1e-12);
}

TEST_CASE("stack validation") {
    LayerStack bad;
    bad.layers = {{air(), 100.0}, {air(), kInf}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    LayerStack inner;
    inner.layers = {{air(), kInf}, {glass(), kInf}, {air(), kInf}};
    CHECK_THROWS_AS(inner.validate(), std::invalid_argument);
    CHECK_THROWS_AS(
        (void)stack_response(LayerStack::between(air(), {}, air()), -1.0, 0.0, Polarization::TE),
        std::invalid_argument);
    // absorbing incident half-space rejected
    const auto s = LayerStack::between(silver(), {}, air());
    CHECK_THROWS_AS((void)stack_response(s, 700.0, 0.0, Polarization::TE), std::invalid_argument);
}

TEST_CASE("wavelength outside the silver table is reported") {
    const auto m = silver_mirror(20.0, 33.0);
    CHECK_THROWS_AS((void)stack_response(m, 420.0, 0.0, Polarization::TE), std::out_of_range);
}

TEST_CASE("finesse from round-trip losses") {
    CHECK(finesse_from_losses(0.08, 0.008, 0.04, 0.03) == doctest::Approx(39.79).epsilon(1e-3));
    for (double x : {0.01, 0.1, 0.5}) {
        CHECK(finesse_from_losses(0.5 * x, 0.5 * x, 0.0, 0.0) ==
              doctest::Approx(2.0 * kPi / x).epsilon(1e-12));
    }
    CHECK_THROWS_AS(finesse_from_losses(0.5, 0.3, 0.2, 0.1), std::domain_error);
    CHECK_THROWS_AS(finesse_from_losses(0.0, 0.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(finesse_from_losses(-0.1, 0.1, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("outcoupling efficiency") {
    CHECK(outcoupling_efficiency(0.08, 0.008, 0.04, 0.03) == doctest::Approx(0.5063).epsilon(1e-3));
    CHECK(outcoupling_efficiency(0.2, 0.0, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(outcoupling_efficiency(0.0, 0.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("computed mirror pair lands in the measured finesse band") {
    const auto m1 = stack_response(silver_mirror(20.0, 33.0), 700.0, 0.0, Polarization::TE);
    const auto m2 = stack_response(silver_mirror(20.0, 60.0), 700.0, 0.0, Polarization::TE);
    const double f = finesse_from_losses(m1.transmissivity, m2.transmissivity,
                                         m1.absorption, m2.absorption);
    CHECK(f > 36.0);
    CHECK(f < 46.0);
    const double eta = outcoupling_efficiency(m1.transmissivity, m2.transmissivity,
                                              m1.absorption, m2.absorption);
    CHECK(eta == doctest::Approx(0.51).epsilon(0.06));
}
