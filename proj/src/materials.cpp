#include "cavtk/materials.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cavtk {

Material::Material() : name_("vacuum"), disp_(Constant{{1.0, 0.0}}) {}

Material Material::constant(std::string name, std::complex<double> n) {
    if (n.imag() < 0.0) throw std::invalid_argument("material " + name + ": Im(n) must be >= 0");
    Material m;
    m.name_ = std::move(name);
    m.disp_ = Constant{n};
    return m;
}

Material Material::table(std::string name, std::vector<double> lambda_nm,
                         std::vector<std::complex<double>> n) {
    if (lambda_nm.size() != n.size() || lambda_nm.size() < 2)
        throw std::invalid_argument("material " + name + ": need >= 2 matched samples");
    for (std::size_t i = 0; i + 1 < lambda_nm.size(); ++i)
        if (!(lambda_nm[i] < lambda_nm[i + 1]))
            throw std::invalid_argument("material " + name + ": wavelength grid must be strictly increasing");
    for (const auto& v : n)
        if (v.imag() < 0.0)
            throw std::invalid_argument("material " + name + ": Im(n) must be >= 0");
    Material m;
    m.name_ = std::move(name);
    m.disp_ = Table{std::move(lambda_nm), std::move(n)};
    return m;
}

Material Material::from_csv_text(std::string name, const std::string& text) {
    std::vector<double> lam;
    std::vector<std::complex<double>> n;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double l, re, im;
        if (!(row >> l >> re >> im)) {
            // tolerate one non-numeric header row
            if (lam.empty()) continue;
            throw std::runtime_error(name + ": malformed CSV row at line " + std::to_string(lineno));
        }
        lam.push_back(l);
        n.emplace_back(re, im);
    }
    return table(std::move(name), std::move(lam), std::move(n));
}

Material Material::from_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open material file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_csv_text(path, ss.str());
}

Material Material::analytic(std::string name, std::complex<double> (*f)(double),
                            double lo, double hi) {
    if (!f || !(lo < hi))
        throw std::invalid_argument("material " + name + ": bad analytic definition");
    Material m;
    m.name_ = std::move(name);
    m.disp_ = Analytic{f, lo, hi};
    return m;
}

std::complex<double> Material::index(double lambda_nm) const {
    if (const auto* c = std::get_if<Constant>(&disp_)) return c->n;
    if (const auto* a = std::get_if<Analytic>(&disp_)) {
        if (lambda_nm < a->lo || lambda_nm > a->hi)
            throw std::out_of_range(name_ + ": wavelength " + std::to_string(lambda_nm) +
                                    " nm outside dispersion range");
        return a->f(lambda_nm);
    }
    const auto& t = std::get<Table>(disp_);
    if (lambda_nm < t.lam.front() || lambda_nm > t.lam.back())
        throw std::out_of_range(name_ + ": wavelength " + std::to_string(lambda_nm) +
                                " nm outside dispersion table");
    const auto it = std::upper_bound(t.lam.begin(), t.lam.end(), lambda_nm);
    const std::size_t hi = std::min<std::size_t>(it - t.lam.begin(), t.lam.size() - 1);
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    if (hi == lo) return t.n[lo];
    const double w = (lambda_nm - t.lam[lo]) / (t.lam[hi] - t.lam[lo]);
    return (1.0 - w) * t.n[lo] + w * t.n[hi];
}

bool Material::covers(double lambda_nm) const {
    return lambda_nm >= min_lambda_nm() && lambda_nm <= max_lambda_nm();
}

double Material::min_lambda_nm() const {
    if (const auto* t = std::get_if<Table>(&disp_)) return t->lam.front();
    if (const auto* a = std::get_if<Analytic>(&disp_)) return a->lo;
    return 0.0;
}

double Material::max_lambda_nm() const {
    if (const auto* t = std::get_if<Table>(&disp_)) return t->lam.back();
    if (const auto* a = std::get_if<Analytic>(&disp_)) return a->hi;
    return std::numeric_limits<double>::infinity();
}

namespace {

// Evaporated-silver dielectric function, smooth two-term model
//   eps'(lambda)  = 2.7013 - 46.8049 (lambda/um)^2
//   eps''(lambda) = 1.17 (lambda/700nm)^1.1858
// pinned to n+ik = 0.13+4.50i at 700 nm and 0.13+3.25i at 532 nm and
// consistent with tabulated thin-film values across 500-800 nm
// (e.g. 0.130+4.01i at 633 nm). The quadratic real part is the
// free-electron (Drude) wavelength dependence; the power-law
// imaginary part interpolates the measured loss.
std::complex<double> silver_index(double lambda_nm) {
    const double lam_um = lambda_nm * 1e-3;
    const double eps_re = 2.7013 - 46.8049 * lam_um * lam_um;
    const double eps_im = 1.17 * std::pow(lambda_nm / 700.0, 1.1858);
    std::complex<double> n = std::sqrt(std::complex<double>(eps_re, eps_im));
    if (n.imag() < 0.0) n = -n;
    return n;
}

}  // namespace

const Material& air() {
    static const Material m = Material::constant("air", {1.0, 0.0});
    return m;
}

const Material& glass() {
    static const Material m = Material::constant("glass", {1.46, 0.0});
    return m;
}

const Material& diamond() {
    static const Material m = Material::constant("diamond", {2.4, 0.0});
    return m;
}

const Material& silver() {
    // Anchored to data on 500-800 nm; the smooth Drude-like form
    // extrapolates safely a little beyond, which broadband spectral
    // averages over red emitters need.
    static const Material m = Material::analytic("silver", &silver_index, 450.0, 850.0);
    return m;
}

const Material* find_material(std::string_view name) {
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (key == "air" || key == "vacuum") return &air();
    if (key == "glass" || key == "silica" || key == "fused_silica") return &glass();
    if (key == "diamond") return &diamond();
    if (key == "silver" || key == "ag") return &silver();
    return nullptr;
}

}  // namespace cavtk
