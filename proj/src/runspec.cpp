#include "cavtk/runspec.hpp"

#include <complex>
#include <filesystem>
#include <limits>

namespace cavtk::cli {

MaterialMap custom_materials(Config& cfg) {
    MaterialMap out;
    for (const std::string& key : cfg.keys_with_prefix("material.")) {
        const std::string name = key.substr(std::string("material.").size());
        if (name.empty()) throw ConfigError("material key with empty name: " + key);
        const auto tokens = split_tokens(cfg.require_string(key));
        if (tokens.empty()) throw ConfigError(key + ": empty definition");
        if (tokens[0] == "csv") {
            if (tokens.size() != 2) throw ConfigError(key + ": expected 'csv <path>'");
            std::filesystem::path p(tokens[1]);
            if (p.is_relative()) p = std::filesystem::path(cfg.base_dir()) / p;
            if (!std::filesystem::exists(p))
                throw ConfigError(key + ": no such file: " + p.string());
            out.insert_or_assign(name, Material::from_csv(p.string()));
        } else if (tokens.size() <= 2) {
            const double re = parse_double(tokens[0], key);
            const double im = tokens.size() == 2 ? parse_double(tokens[1], key) : 0.0;
            if (re <= 0.0 || im < 0.0)
                throw ConfigError(key + ": need Re n > 0 and Im n >= 0");
            out.insert_or_assign(name, Material::constant(name, {re, im}));
        } else {
            throw ConfigError(key + ": expected 'n_re [n_im]' or 'csv <path>'");
        }
    }
    return out;
}

const Material& resolve_material(const std::string& name, const MaterialMap& extra) {
    const auto it = extra.find(name);
    if (it != extra.end()) return it->second;
    const Material* m = find_material(name);
    if (m == nullptr) throw ConfigError("unknown material '" + name + "'");
    return *m;
}

multilayer::LayerStack parse_stack(const std::string& text, const MaterialMap& extra) {
    const auto fields = split_fields(text);
    if (fields.size() < 2)
        throw ConfigError("stack needs at least two half-spaces: '" + text + "'");
    multilayer::LayerStack stack;
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto tokens = split_tokens(fields[i]);
        const bool edge = i == 0 || i + 1 == fields.size();
        if (edge) {
            if (tokens.size() != 1)
                throw ConfigError("half-space field must be a bare material name: '" +
                                  fields[i] + "'");
            stack.layers.push_back({resolve_material(tokens[0], extra), inf});
        } else {
            if (tokens.size() != 2)
                throw ConfigError("layer field must be 'material thickness_nm': '" +
                                  fields[i] + "'");
            const double t = parse_double(tokens[1], "layer '" + fields[i] + "'");
            if (!(t > 0.0) || !std::isfinite(t))
                throw ConfigError("layer thickness must be positive: '" + fields[i] + "'");
            stack.layers.push_back({resolve_material(tokens[0], extra), t});
        }
    }
    stack.validate();
    return stack;
}

dipole::Boundary parse_boundary(const std::string& text, const MaterialMap& extra) {
    if (text == "open") return dipole::Boundary::open();
    if (text == "ideal") return dipole::Boundary::ideal_mirror();
    if (text.find('|') == std::string::npos)
        throw ConfigError("boundary must be 'open', 'ideal', or a stack: '" + text + "'");
    return dipole::Boundary::stack(parse_stack(text, extra));
}

dipole::DipoleEnvironment environment_from_config(Config& cfg, const MaterialMap& extra) {
    dipole::DipoleEnvironment env;
    env.host_index = cfg.get_double("host_index", 1.0);
    if (cfg.has("below")) env.below = parse_boundary(cfg.require_string("below"), extra);
    if (cfg.has("above")) env.above = parse_boundary(cfg.require_string("above"), extra);
    env.gap_nm = cfg.get_double("gap_nm", 0.0);
    env.height_nm = cfg.require_double("height_nm");
    env.validate();
    return env;
}

cavity::EmissionSpectrum spectrum_from_config(Config& cfg) {
    const std::string shape = cfg.require_string("spectrum");
    const double center = cfg.require_double("spectrum_center_nm");
    const double width = cfg.require_double("spectrum_width_nm");
    if (shape == "gaussian") return cavity::EmissionSpectrum::gaussian_1e_full_width(center, width);
    if (shape == "lorentzian") return cavity::EmissionSpectrum::lorentzian_fwhm(center, width);
    throw ConfigError("spectrum must be gaussian or lorentzian, got '" + shape + "'");
}

dipole::Orientation parse_orientation(const std::string& text) {
    if (text == "parallel") return dipole::Orientation::Parallel;
    if (text == "perpendicular") return dipole::Orientation::Perpendicular;
    if (text == "isotropic") return dipole::Orientation::Isotropic;
    throw ConfigError("orientation must be parallel, perpendicular, or isotropic");
}

multilayer::Polarization parse_polarization(const std::string& text) {
    if (text == "te" || text == "s") return multilayer::Polarization::TE;
    if (text == "tm" || text == "p") return multilayer::Polarization::TM;
    throw ConfigError("polarization must be te or tm");
}

}  // namespace cavtk::cli
