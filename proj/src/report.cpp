#include "cavtk/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cavtk/config.hpp"
#include "json.hpp"

namespace cavtk::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f.good()) throw std::runtime_error("cannot open for writing: " + path);
    f << body;
    if (!f.good()) throw std::runtime_error("write failed: " + path);
}

std::string artifact_path(const std::string& out_dir, const std::string& name, Format f) {
    std::filesystem::create_directories(out_dir);
    return (std::filesystem::path(out_dir) / (name + (f == Format::Csv ? ".csv" : ".json")))
        .string();
}

void csv_provenance(std::ostringstream& out, const Provenance& prov) {
    out << "# " << kToolVersion << "\n";
    out << "# config_fnv1a64 = " << prov.config_hash << "\n";
    if (prov.seed) out << "# seed = " << *prov.seed << "\n";
}

ordered_json json_provenance(const Provenance& prov) {
    ordered_json j;
    j["tool"] = kToolVersion;
    j["config_fnv1a64"] = prov.config_hash;
    if (prov.seed) j["seed"] = *prov.seed;
    return j;
}

// Values rendered by format_double parse back; everything else stays
// a string in JSON.
ordered_json typed(const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos == v.size()) return d;
    } catch (const std::exception&) {
    }
    return v;
}

}  // namespace

Format parse_format(const std::string& text) {
    if (text == "csv") return Format::Csv;
    if (text == "json") return Format::Json;
    throw ConfigError("format must be csv or json, got '" + text + "'");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void Report::add(const std::string& key, double v) { items.emplace_back(key, format_double(v)); }
void Report::add(const std::string& key, const std::string& v) { items.emplace_back(key, v); }
void Report::add(const std::string& key, bool v) {
    items.emplace_back(key, v ? "true" : "false");
}
void Report::add(const std::string& key, const std::vector<double>& v) {
    std::string joined;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i != 0) joined += " | ";
        joined += format_double(v[i]);
    }
    items.emplace_back(key, joined);
}

std::string write_table(const std::string& out_dir, const std::string& name, Format f,
                        const Provenance& prov, const Table& t) {
    const std::string path = artifact_path(out_dir, name, f);
    if (f == Format::Csv) {
        std::ostringstream out;
        csv_provenance(out, prov);
        for (const auto& [k, v] : t.notes) out << "# " << k << " = " << v << "\n";
        for (std::size_t c = 0; c < t.columns.size(); ++c)
            out << t.columns[c] << (c + 1 == t.columns.size() ? "\n" : ",");
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                out << format_double(row[c]) << (c + 1 == row.size() ? "\n" : ",");
        }
        write_file(path, out.str());
    } else {
        ordered_json j = json_provenance(prov);
        for (const auto& [k, v] : t.notes) j[k] = typed(v);
        j["columns"] = t.columns;
        j["rows"] = t.rows;
        write_file(path, j.dump(2) + "\n");
    }
    return path;
}

std::string write_report(const std::string& out_dir, const std::string& name, Format f,
                         const Provenance& prov, const Report& r) {
    const std::string path = artifact_path(out_dir, name, f);
    if (f == Format::Csv) {
        std::ostringstream out;
        csv_provenance(out, prov);
        out << "key,value\n";
        for (const auto& [k, v] : r.items) out << k << "," << v << "\n";
        write_file(path, out.str());
    } else {
        ordered_json j = json_provenance(prov);
        for (const auto& [k, v] : r.items) j[k] = typed(v);
        write_file(path, j.dump(2) + "\n");
    }
    return path;
}

namespace {

struct CsvBody {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, double> notes;
};

CsvBody read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f.good()) throw std::runtime_error("cannot open: " + path);
    CsvBody body;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            // "# key = value" notes; other comments are free-form
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::istringstream key_in(line.substr(1, eq - 1));
            std::string key;
            key_in >> key;
            std::string rest;
            const bool more = static_cast<bool>(key_in >> rest);
            try {
                if (!key.empty() && !more)
                    body.notes[key] = std::stod(line.substr(eq + 1));
            } catch (const std::exception&) {
            }
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream in(line);
        std::string cell;
        while (std::getline(in, cell, ',')) cells.push_back(cell);
        if (body.columns.empty()) {
            bool numeric = true;
            try {
                (void)std::stod(cells.at(0));
            } catch (const std::exception&) {
                numeric = false;
            }
            if (!numeric) {
                body.columns = cells;
                continue;
            }
            for (std::size_t i = 0; i < cells.size(); ++i)
                body.columns.push_back("col" + std::to_string(i));
        }
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_double(c, path + ": cell"));
        if (row.size() != body.columns.size())
            throw std::runtime_error(path + ": ragged row: " + line);
        body.rows.push_back(std::move(row));
    }
    if (body.rows.empty()) throw std::runtime_error(path + ": no data rows");
    return body;
}

int column_of(const CsvBody& body, const std::string& name, const std::string& path) {
    for (std::size_t i = 0; i < body.columns.size(); ++i)
        if (body.columns[i] == name) return static_cast<int>(i);
    throw std::runtime_error(path + ": missing column '" + name + "'");
}

}  // namespace

photostats::Histogram read_histogram_csv(const std::string& path) {
    const CsvBody body = read_csv(path);
    const int lo = column_of(body, "lag_lo_ns", path);
    const int hi = column_of(body, "lag_hi_ns", path);
    const int center = column_of(body, "lag_center_ns", path);
    const int counts = column_of(body, "counts", path);
    const int g2 = column_of(body, "g2", path);
    const int sigma = column_of(body, "g2_sigma", path);
    photostats::Histogram h;
    const auto norm = body.notes.find("norm");
    if (norm == body.notes.end())
        throw std::runtime_error(path + ": missing '# norm = ...' annotation");
    h.norm = norm->second;
    h.edges_ns.push_back(body.rows.front()[lo]);
    for (const auto& row : body.rows) {
        if (std::abs(row[lo] - h.edges_ns.back()) > 1e-9)
            throw std::runtime_error(path + ": bins are not contiguous");
        h.edges_ns.push_back(row[hi]);
        h.counts.push_back(static_cast<std::uint64_t>(std::llround(row[counts])));
        h.g2.push_back(row[g2]);
        h.g2_sigma.push_back(row[sigma]);
        h.centers_ns.push_back(row[center]);
    }
    return h;
}

photostats::Histogram read_decay_csv(const std::string& path) {
    const CsvBody body = read_csv(path);
    photostats::Histogram h;
    if (body.columns.size() == 2) {
        const int t = column_of(body, "t_ns", path);
        const int counts = column_of(body, "counts", path);
        if (body.rows.size() < 2) throw std::runtime_error(path + ": need two or more bins");
        const double dt = body.rows[1][t] - body.rows[0][t];
        if (!(dt > 0.0)) throw std::runtime_error(path + ": t_ns must ascend");
        for (std::size_t i = 0; i < body.rows.size(); ++i) {
            const double c = body.rows[i][t];
            const double expected = body.rows[0][t] + dt * static_cast<double>(i);
            if (std::abs(c - expected) > 1e-6 * dt)
                throw std::runtime_error(path + ": t_ns grid is not uniform");
            if (i == 0) h.edges_ns.push_back(c - 0.5 * dt);
            h.edges_ns.push_back(c + 0.5 * dt);
            h.counts.push_back(
                static_cast<std::uint64_t>(std::llround(body.rows[i][counts])));
        }
    } else {
        const int lo = column_of(body, "t_lo_ns", path);
        const int hi = column_of(body, "t_hi_ns", path);
        const int counts = column_of(body, "counts", path);
        h.edges_ns.push_back(body.rows.front()[lo]);
        for (const auto& row : body.rows) {
            if (std::abs(row[lo] - h.edges_ns.back()) > 1e-9)
                throw std::runtime_error(path + ": bins are not contiguous");
            h.edges_ns.push_back(row[hi]);
            h.counts.push_back(static_cast<std::uint64_t>(std::llround(row[counts])));
        }
    }
    return h;
}

SaturationData read_saturation_csv(const std::string& path) {
    const CsvBody body = read_csv(path);
    const int i_col = column_of(body, "intensity_w_m2", path);
    const int k_col = column_of(body, "rate_hz", path);
    int s_col = -1;
    for (std::size_t i = 0; i < body.columns.size(); ++i)
        if (body.columns[i] == "sigma_hz") s_col = static_cast<int>(i);
    SaturationData out;
    for (const auto& row : body.rows) {
        out.intensity_w_m2.push_back(row[i_col]);
        out.rate_hz.push_back(row[k_col]);
        if (s_col >= 0) out.sigma_hz.push_back(row[s_col]);
    }
    return out;
}

}  // namespace cavtk::cli
