#pragma once

// Builders turning config values into domain objects: material
// registries, layer stacks, dipole environments, emission spectra.
//
// Stack syntax, pipe-separated half-spaces and layers:
//   air | glass 20 | silver 33 | glass
// First and last fields are bare material names (semi-infinite),
// interior fields are "material thickness_nm". Custom materials come
// from `material.<name>` keys: a constant index "n_re [n_im]" or
// "csv <path>" for a tabulated file (path relative to the config).

#include <map>
#include <string>

#include "cavtk/cavity.hpp"
#include "cavtk/config.hpp"
#include "cavtk/dipole.hpp"
#include "cavtk/materials.hpp"
#include "cavtk/multilayer.hpp"

namespace cavtk::cli {

using MaterialMap = std::map<std::string, Material>;

// Consumes every material.* key of the config.
MaterialMap custom_materials(Config& cfg);

// Custom names shadow the built-in registry.
const Material& resolve_material(const std::string& name, const MaterialMap& extra);

multilayer::LayerStack parse_stack(const std::string& text, const MaterialMap& extra);

// "open", "ideal", or a stack string.
dipole::Boundary parse_boundary(const std::string& text, const MaterialMap& extra);

// Keys: host_index (default 1), below, above (default open), gap_nm,
// height_nm (required).
dipole::DipoleEnvironment environment_from_config(Config& cfg, const MaterialMap& extra);

// Keys: spectrum = gaussian | lorentzian, spectrum_center_nm,
// spectrum_width_nm (1/e full width for gaussian, FWHM for lorentzian).
cavity::EmissionSpectrum spectrum_from_config(Config& cfg);

dipole::Orientation parse_orientation(const std::string& text);
multilayer::Polarization parse_polarization(const std::string& text);

}  // namespace cavtk::cli
