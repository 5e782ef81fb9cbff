#pragma once

// Wavelength-dependent complex refractive indices.
//
// Convention: time dependence e^{-i omega t}, absorbing media have
// Im(n) >= 0. Wavelengths are vacuum wavelengths in nanometres.

#include <complex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cavtk {

class Material {
public:
    Material();  // vacuum, n = 1

    static Material constant(std::string name, std::complex<double> n);

    // Tabulated index, linear interpolation in both parts. The grid
    // must be strictly increasing with at least two samples.
    static Material table(std::string name, std::vector<double> lambda_nm,
                          std::vector<std::complex<double>> n);

    // CSV columns: wavelength_nm, n_real, n_imag. Lines starting with
    // '#' and an optional header row are skipped.
    static Material from_csv(const std::string& path);
    static Material from_csv_text(std::string name, const std::string& text);

    // Closed-form dispersion valid on [lo, hi] nm.
    static Material analytic(std::string name, std::complex<double> (*f)(double),
                             double lo, double hi);

    const std::string& name() const { return name_; }
    std::complex<double> index(double lambda_nm) const;  // throws std::out_of_range
    bool covers(double lambda_nm) const;
    double min_lambda_nm() const;
    double max_lambda_nm() const;

private:
    struct Constant {
        std::complex<double> n;
    };
    struct Table {
        std::vector<double> lam;
        std::vector<std::complex<double>> n;
    };
    struct Analytic {
        std::complex<double> (*f)(double);
        double lo, hi;
    };

    std::string name_;
    std::variant<Constant, Table, Analytic> disp_;
};

// Built-in materials. Glass is dispersionless fused silica n=1.46,
// diamond n=2.4; silver uses a smooth two-parameter dielectric model
// matched to tabulated evaporated-film data on 500-800 nm (see
// materials.cpp) and accepted on 450-850 nm, the smooth form
// extrapolating across the margins.
const Material& air();
const Material& glass();
const Material& diamond();
const Material& silver();

// Registry lookup over the built-ins (accepts a few aliases such as
// "vacuum" and "silica"). Returns nullptr when unknown.
const Material* find_material(std::string_view name);

}  // namespace cavtk
