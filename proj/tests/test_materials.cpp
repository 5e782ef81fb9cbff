#include <doctest.h>

#include <complex>
#include <stdexcept>

#include "cavtk/materials.hpp"

using cavtk::Material;

TEST_CASE("built-in constants") {
    CHECK(cavtk::air().index(690.0) == std::complex<double>(1.0, 0.0));
    CHECK(cavtk::glass().index(690.0) == std::complex<double>(1.46, 0.0));
    CHECK(cavtk::diamond().index(690.0) == std::complex<double>(2.4, 0.0));
}

TEST_CASE("silver model hits its pinned film values") {
    const auto n700 = cavtk::silver().index(700.0);
    CHECK(n700.real() == doctest::Approx(0.13).epsilon(1e-4));
    CHECK(n700.imag() == doctest::Approx(4.50).epsilon(1e-4));

    const auto n532 = cavtk::silver().index(532.0);
    CHECK(n532.real() == doctest::Approx(0.13).epsilon(5e-3));
    CHECK(n532.imag() == doctest::Approx(3.25).epsilon(5e-3));

    // handbook cross-checks, looser: evaporated-film tabulations
    const auto n633 = cavtk::silver().index(633.0);
    CHECK(n633.real() == doctest::Approx(0.13).epsilon(0.1));
    CHECK(n633.imag() == doctest::Approx(4.01).epsilon(0.02));
    const auto n500 = cavtk::silver().index(500.0);
    CHECK(n500.imag() == doctest::Approx(3.00).epsilon(0.02));
    const auto n800 = cavtk::silver().index(800.0);
    CHECK(n800.imag() == doctest::Approx(5.22).epsilon(0.02));
}

TEST_CASE("silver range is 450-850 nm and enforced") {
    CHECK(cavtk::silver().covers(500.0));
    CHECK(cavtk::silver().covers(800.0));
    // modest extrapolation margin beyond the anchored 500-800 nm band
    CHECK(cavtk::silver().covers(450.0));
    CHECK(cavtk::silver().covers(850.0));
    CHECK_FALSE(cavtk::silver().covers(449.0));
    CHECK_THROWS_AS((void)cavtk::silver().index(440.0), std::out_of_range);
    CHECK_THROWS_AS((void)cavtk::silver().index(851.0), std::out_of_range);
}

TEST_CASE("table interpolation is linear in both parts") {
    auto m = Material::table("t", {600.0, 700.0}, {{1.0, 0.2}, {3.0, 0.6}});
    const auto mid = m.index(650.0);
    CHECK(mid.real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mid.imag() == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(m.index(600.0) == std::complex<double>(1.0, 0.2));
    CHECK(m.index(700.0) == std::complex<double>(3.0, 0.6));
    CHECK_THROWS_AS((void)m.index(599.9), std::out_of_range);
}

TEST_CASE("table construction rejects bad input") {
    CHECK_THROWS_AS(Material::table("t", {700.0, 600.0}, {{1, 0}, {1, 0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Material::table("t", {600.0, 600.0}, {{1, 0}, {1, 0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Material::table("t", {600.0}, {{1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Material::table("t", {600.0, 700.0}, {{1, 0}, {1, -0.1}}),
                    std::invalid_argument);
}

TEST_CASE("csv parsing skips comments and header") {
    const std::string text =
        "# silver sample\n"
        "wavelength_nm,n_real,n_imag\n"
        "600,0.13,3.9\n"
        "700, 0.13, 4.5\n";
    auto m = Material::from_csv_text("csv", text);
    CHECK(m.index(700.0).imag() == doctest::Approx(4.5));
    CHECK(m.index(650.0).imag() == doctest::Approx(4.2));
    CHECK_THROWS(Material::from_csv_text("bad", "600,0.1,3\nnot,a,row\n"));
}

TEST_CASE("registry resolves names and aliases") {
    CHECK(cavtk::find_material("silver") == &cavtk::silver());
    CHECK(cavtk::find_material("Ag") == &cavtk::silver());
    CHECK(cavtk::find_material("vacuum") == &cavtk::air());
    CHECK(cavtk::find_material("silica") == &cavtk::glass());
    CHECK(cavtk::find_material("diamond") == &cavtk::diamond());
    CHECK(cavtk::find_material("unobtainium") == nullptr);
}
