#pragma once

// Output artifacts: CSV tables and key/value reports, each carrying a
// provenance header (tool version, config hash, seed when one was
// used). No timestamps anywhere, so identical runs produce identical
// bytes. Also the CSV readers for data fed back into the tool.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cavtk/photostats.hpp"

namespace cavtk::cli {

inline constexpr const char* kToolVersion = "cavtk 1.0.0";

enum class Format { Csv, Json };
Format parse_format(const std::string& text);

struct Provenance {
    std::string config_hash;  // 16 hex digits
    std::optional<std::uint64_t> seed;
};

// Deterministic shortest-ish rendering, 10 significant digits.
std::string format_double(double v);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    // extra scalars: comment lines in CSV, fields in JSON
    std::vector<std::pair<std::string, std::string>> notes;
};

struct Report {
    std::vector<std::pair<std::string, std::string>> items;  // value pre-rendered
    void add(const std::string& key, double v);
    void add(const std::string& key, const std::string& v);
    void add(const std::string& key, bool v);
    void add(const std::string& key, const std::vector<double>& v);  // pipe-joined in CSV
};

// Both return the path written: out_dir/name.csv or .json. The
// directory is created if missing.
std::string write_table(const std::string& out_dir, const std::string& name, Format f,
                        const Provenance& prov, const Table& t);
std::string write_report(const std::string& out_dir, const std::string& name, Format f,
                         const Provenance& prov, const Report& r);

// Inverse of the coincidence-histogram table artifact; restores
// edges, counts, g2, sigma, centers and norm.
photostats::Histogram read_histogram_csv(const std::string& path);

// Decay histograms: either "t_ns,counts" rows on a uniform grid of
// bin centers, or "t_lo_ns,t_hi_ns,counts" with contiguous edges.
photostats::Histogram read_decay_csv(const std::string& path);

struct SaturationData {
    std::vector<double> intensity_w_m2;
    std::vector<double> rate_hz;
    std::vector<double> sigma_hz;  // empty when the file has no third column
};
// Columns: intensity_w_m2, rate_hz [, sigma_hz].
SaturationData read_saturation_csv(const std::string& path);

}  // namespace cavtk::cli
