// End-to-end tests of the command line tool: each subcommand runs as a
// subprocess on the shipped example configs and the artifacts are read
// back. CAVTK_CLI_PATH, CAVTK_CONFIG_DIR and CAVTK_DATA_DIR come from
// the build system.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path& work_root() {
    static const fs::path root = [] {
        fs::path p = fs::temp_directory_path() / "cavtk_test_cli";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

fs::path fresh_dir(const std::string& label) {
    const fs::path p = work_root() / label;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path log = work_root() / ("log_" + std::to_string(counter++) + ".txt");
    const std::string cmd = std::string("\"") + CAVTK_CLI_PATH + "\" " + args + " > \"" +
                            log.string() + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.output = slurp(log);
    return r;
}

std::string config(const std::string& name) {
    return std::string(CAVTK_CONFIG_DIR) + "/" + name;
}

std::string data_file(const std::string& name) {
    return std::string(CAVTK_DATA_DIR) + "/" + name;
}

// key,value artifact reader; provenance and note comments keep their
// '#' prefix stripped and land in the same map.
std::map<std::string, std::string> read_report(const fs::path& p) {
    std::map<std::string, std::string> out;
    std::ifstream f(p);
    REQUIRE(f.good());
    std::string line;
    while (std::getline(f, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find(" = ");
            if (eq != std::string::npos)
                out[line.substr(2, eq - 2)] = line.substr(eq + 3);
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos || line == "key,value") continue;
        out[line.substr(0, comma)] = line.substr(comma + 1);
    }
    return out;
}

double as_double(const std::map<std::string, std::string>& m, const std::string& key) {
    const auto it = m.find(key);
    REQUIRE_MESSAGE(it != m.end(), "missing key: " << key);
    return std::stod(it->second);
}

struct Csv {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> notes;
};

Csv read_table(const fs::path& p) {
    Csv out;
    std::ifstream f(p);
    REQUIRE(f.good());
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find(" = ");
            if (eq != std::string::npos && line.rfind("# ", 0) == 0)
                out.notes[line.substr(2, eq - 2)] = line.substr(eq + 3);
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (out.columns.empty()) {
            out.columns = cells;
            continue;
        }
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(std::stod(c));
        out.rows.push_back(row);
    }
    return out;
}

std::size_t column(const Csv& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name) return i;
    FAIL("no column " << name);
    return 0;
}

}  // namespace

TEST_CASE("bare invocation prints usage and uses the config-error code") {
    const auto r = run_cli("");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("Usage") != std::string::npos);
    CHECK(r.output.find("reproduce-paper") != std::string::npos);
}

TEST_CASE("help and version exit cleanly") {
    CHECK(run_cli("--help").exit_code == 0);
    const auto v = run_cli("--version");
    CHECK(v.exit_code == 0);
    CHECK(v.output.find("cavtk") != std::string::npos);
}

TEST_CASE("unknown subcommand is a usage error") {
    CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("empty config fails before any computation") {
    const auto dir = fresh_dir("empty_cfg");
    const fs::path cfg = dir / "empty.conf";
    std::ofstream(cfg) << "";
    const auto r = run_cli("coating --config \"" + cfg.string() + "\" --out \"" +
                           dir.string() + "\"");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("\"error\":\"config\"") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected by name") {
    const auto dir = fresh_dir("unknown_key");
    const auto r = run_cli("coating --config " + config("coating_finesse.conf") +
                           " --set typo_key=1 --out \"" + dir.string() + "\"");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("typo_key") != std::string::npos);
    CHECK(fs::is_empty(dir));  // rejected before any artifact was written
}

TEST_CASE("missing input files are reported as config errors") {
    const auto dir = fresh_dir("missing_input");
    const auto r = run_cli("photons --config " + config("photons_fit_sat.conf") +
                           " --set input=/no/such/file.csv --out \"" + dir.string() + "\"");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("no such file") != std::string::npos);
}

TEST_CASE("coating response sweep: artifact, values, reproducibility") {
    const auto a = fresh_dir("coating_a");
    const auto b = fresh_dir("coating_b");
    const std::string base = "coating --config " + config("coating_response.conf");
    const auto r = run_cli(base + " --out \"" + a.string() + "\"");
    CHECK(r.exit_code == 0);

    const fs::path artifact = a / "coating_response.csv";
    REQUIRE(fs::exists(artifact));
    CHECK(slurp(artifact).rfind("# cavtk 1.0.0\n", 0) == 0);  // provenance header first
    const auto t = read_table(artifact);
    CHECK(t.notes.count("config_fnv1a64") == 1);
    REQUIRE(t.rows.size() == 126);
    const auto lam = column(t, "lambda_nm");
    const auto trans = column(t, "transmissivity");
    const auto refl = column(t, "reflectivity");
    const auto abs_col = column(t, "absorption");
    bool saw_700 = false;
    for (const auto& row : t.rows) {
        CHECK(row[refl] + row[trans] + row[abs_col] == doctest::Approx(1.0).epsilon(1e-9));
        if (row[lam] == 700.0) {
            saw_700 = true;
            CHECK(row[trans] == doctest::Approx(0.0798).epsilon(0.03));
        }
    }
    CHECK(saw_700);

    // Same config, same bytes.
    CHECK(run_cli(base + " --out \"" + b.string() + "\"").exit_code == 0);
    CHECK(slurp(artifact) == slurp(b / "coating_response.csv"));
}

TEST_CASE("coating finesse report in csv and json") {
    const auto dir = fresh_dir("finesse");
    const std::string base = "coating --config " + config("coating_finesse.conf") +
                             " --out \"" + dir.string() + "\"";
    CHECK(run_cli(base).exit_code == 0);
    const auto rep = read_report(dir / "coating_finesse.csv");
    CHECK(as_double(rep, "finesse") == doctest::Approx(40.8).epsilon(0.02));
    CHECK(as_double(rep, "eta_c") == doctest::Approx(0.518).epsilon(0.02));
    CHECK(as_double(rep, "T1") == doctest::Approx(0.0798).epsilon(0.02));
    CHECK(as_double(rep, "A2") == doctest::Approx(0.0289).epsilon(0.05));

    CHECK(run_cli(base + " --format json").exit_code == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "coating_finesse.json"));
    CHECK(j.at("finesse").get<double>() == doctest::Approx(40.8).epsilon(0.02));
    CHECK(j.at("config_fnv1a64").get<std::string>().size() == 16);
    CHECK(j.at("tool").get<std::string>() == "cavtk 1.0.0");
}

TEST_CASE("shipped silver table reproduces the built-in model") {
    const auto dir = fresh_dir("silver_table");
    const std::string base = "coating --config " + config("coating_finesse.conf") +
                             " --out \"" + dir.string() + "\"";
    CHECK(run_cli(base).exit_code == 0);
    const double builtin = as_double(read_report(dir / "coating_finesse.csv"), "finesse");

    CHECK(run_cli(base + " --set 'material.silver=csv " + data_file("silver_nk.csv") + "'")
              .exit_code == 0);
    const double tabulated = as_double(read_report(dir / "coating_finesse.csv"), "finesse");
    CHECK(tabulated == doctest::Approx(builtin).epsilon(1e-3));
}

TEST_CASE("cavity geometry report") {
    const auto dir = fresh_dir("geometry");
    CHECK(run_cli("cavity --config " + config("cavity_geometry.conf") + " --out \"" +
                  dir.string() + "\"")
              .exit_code == 0);
    const auto rep = read_report(dir / "cavity_geometry.csv");
    CHECK(as_double(rep, "air_gap_nm") == doctest::Approx(260.0).epsilon(0.02));
    CHECK(as_double(rep, "waist_um") == doctest::Approx(1.105).epsilon(0.02));
    CHECK(as_double(rep, "volume_lambda3") == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("cavity transmission scans") {
    const auto dir = fresh_dir("scans");
    CHECK(run_cli("cavity --config " + config("cavity_length_scan.conf") + " --out \"" +
                  dir.string() + "\"")
              .exit_code == 0);
    const auto t = read_table(dir / "cavity_length_scan.csv");
    REQUIRE(t.rows.size() == 651);
    double peak = 0.0;
    for (const auto& row : t.rows) peak = std::max(peak, row[column(t, "transmission")]);
    CHECK(peak > 0.1);  // resonances stand far above the background

    CHECK(run_cli("cavity --config " + config("cavity_wavelength_scan.conf") + " --out \"" +
                  dir.string() + "\"")
              .exit_code == 0);
    CHECK(read_table(dir / "cavity_wavelength_scan.csv").rows.size() == 241);
}

TEST_CASE("cavity length calibration, success and failure") {
    const auto dir = fresh_dir("calibrate");
    const std::string base = "cavity --config " + config("cavity_calibrate.conf") +
                             " --out \"" + dir.string() + "\"";
    CHECK(run_cli(base).exit_code == 0);
    const auto rep = read_report(dir / "cavity_calibration.csv");
    CHECK(as_double(rep, "optical_length_nm") == doctest::Approx(1050.0).epsilon(0.001));
    CHECK(rep.at("mode_orders") == "2 | 3 | 4");

    // No integer mode assignment fits this triple.
    const auto bad = run_cli(base + " --set 'resonances_nm=1050 | 700 | 612'");
    CHECK(bad.exit_code == 3);
    CHECK(bad.output.find("\"error\":\"numerical\"") != std::string::npos);
}

TEST_CASE("cavity psf table") {
    const auto dir = fresh_dir("psf");
    CHECK(run_cli("cavity --config " + config("cavity_psf.conf") + " --out \"" +
                  dir.string() + "\"")
              .exit_code == 0);
    const auto t = read_table(dir / "cavity_psf.csv");
    REQUIRE(t.rows.size() == 9);
    for (const auto& row : t.rows)
        CHECK(row[column(t, "psf_um")] < row[column(t, "waist_um")]);
}

TEST_CASE("ldos decay point and sweep") {
    const auto dir = fresh_dir("decay");
    const std::string base = "ldos --config " + config("ldos_decay.conf");
    CHECK(run_cli(base + " --out \"" + dir.string() + "\"").exit_code == 0);
    const auto rep = read_report(dir / "ldos_decay.csv");
    CHECK(as_double(rep, "total") > 0.3);
    CHECK(as_double(rep, "nonradiative_fraction") < 0.05);

    CHECK(run_cli(base + " --set sweep=gap --set from_nm=31 --set to_nm=91" +
                  " --set samples=3 --out \"" + dir.string() + "\"")
              .exit_code == 0);
    const auto t = read_table(dir / "ldos_decay.csv");
    REQUIRE(t.rows.size() == 3);
    CHECK(t.columns[0] == "gap_nm");
    for (const auto& row : t.rows) CHECK(row[column(t, "total")] > 0.1);
}

TEST_CASE("ldos collection efficiency matches the half-space reference") {
    const auto dir = fresh_dir("collection");
    CHECK(run_cli("ldos --config " + config("ldos_collection.conf") + " --out \"" +
                  dir.string() + "\"")
              .exit_code == 0);
    const auto rep = read_report(dir / "ldos_collection.csv");
    CHECK(as_double(rep, "collection_efficiency") == doctest::Approx(0.1627).epsilon(0.02));
}

TEST_CASE("ldos lifetime curve artifact") {
    const auto dir = fresh_dir("lifetime");
    CHECK(run_cli("ldos --config " + config("ldos_lifetime.conf") + " --out \"" +
                  dir.string() + "\"")
              .exit_code == 0);
    const auto t = read_table(dir / "ldos_lifetime.csv");
    REQUIRE(t.rows.size() == 5);
    CHECK(t.columns[0] == "d0_nm");
    for (const auto& row : t.rows) {
        CHECK(row[column(t, "tau_ratio")] > 0.2);
        CHECK(row[column(t, "tau_ratio")] < 3.0);
    }
}

TEST_CASE("ldos spectrum with emitter-weighted note") {
    const auto dir = fresh_dir("spectrum");
    CHECK(run_cli("ldos --config " + config("ldos_spectrum.conf") + " --out \"" +
                  dir.string() + "\"")
              .exit_code == 0);
    const auto t = read_table(dir / "ldos_spectrum.csv");
    REQUIRE(t.rows.size() == 12);
    REQUIRE(t.notes.count("spectral_average_enhancement") == 1);
    CHECK(std::stod(t.notes.at("spectral_average_enhancement")) > 0.1);
}

TEST_CASE("waveguide mode and hybrid reports") {
    const auto dir = fresh_dir("waveguide");
    CHECK(run_cli("waveguide --config " + config("waveguide_mode.conf") + " --out \"" +
                  dir.string() + "\"")
              .exit_code == 0);
    const auto mode = read_report(dir / "waveguide_mode.csv");
    CHECK(as_double(mode, "n_eff") == doctest::Approx(1.9526).epsilon(0.001));
    CHECK(mode.at("near_cutoff") == "false");

    CHECK(run_cli("waveguide --config " + config("waveguide_hybrid.conf") + " --out \"" +
                  dir.string() + "\"")
              .exit_code == 0);
    const auto hybrid = read_report(dir / "waveguide_hybrid.csv");
    CHECK(as_double(hybrid, "c_eff") == doctest::Approx(8.38).epsilon(0.01));
    CHECK(as_double(hybrid, "volume_lambda_eff3") == doctest::Approx(0.0725).epsilon(0.01));
}

TEST_CASE("waveguide confinement sweep with optimum notes") {
    const auto dir = fresh_dir("sweep");
    CHECK(run_cli("waveguide --config " + config("waveguide_sweep.conf") + " --out \"" +
                  dir.string() + "\"")
              .exit_code == 0);
    const auto t = read_table(dir / "waveguide_sweep.csv");
    REQUIRE(t.rows.size() == 181);
    CHECK(std::stod(t.notes.at("best_b_nm")) == doctest::Approx(70.0).epsilon(0.05));
    CHECK(std::stod(t.notes.at("min_radius_nm")) == doctest::Approx(173.2).epsilon(0.02));
}

TEST_CASE("photon pipeline: simulate, histogram, correlation fit") {
    const auto a = fresh_dir("photons_a");
    const auto b = fresh_dir("photons_b");
    const std::string sim = "photons --config " + config("photons_simulate.conf");
    CHECK(run_cli(sim + " --out \"" + a.string() + "\"").exit_code == 0);
    CHECK(run_cli(sim + " --out \"" + b.string() + "\"").exit_code == 0);
    REQUIRE(fs::exists(a / "timestamps.bin"));
    CHECK(slurp(a / "timestamps.bin") == slurp(b / "timestamps.bin"));

    const auto rep = read_report(a / "photons_simulate.csv");
    CHECK(as_double(rep, "n_photons") > 1e5);
    CHECK(rep.at("seed") == "7");

    // A different seed produces a different stream.
    CHECK(run_cli(sim + " --seed 9 --out \"" + b.string() + "\"").exit_code == 0);
    CHECK(slurp(a / "timestamps.bin") != slurp(b / "timestamps.bin"));
    CHECK(read_report(b / "photons_simulate.csv").at("seed") == "9");

    const std::string input = (a / "timestamps.bin").string();
    CHECK(run_cli("photons --config " + config("photons_histogram.conf") +
                  " --set input=\"" + input + "\" --out \"" + a.string() + "\"")
              .exit_code == 0);
    const auto h = read_table(a / "photons_histogram.csv");
    REQUIRE(h.rows.size() == 400);
    CHECK(std::stod(h.notes.at("norm")) > 0.0);
    // Antibunching at short lag, recovery at long lag.
    CHECK(h.rows.front()[column(h, "g2")] < 0.5);
    CHECK(h.rows.back()[column(h, "g2")] == doctest::Approx(1.0).epsilon(0.2));

    CHECK(run_cli("photons --config " + config("photons_fit_g2.conf") +
                  " --set histogram_csv=\"" + (a / "photons_histogram.csv").string() +
                  "\" --out \"" + a.string() + "\"")
              .exit_code == 0);
    const auto fit = read_report(a / "photons_fit_g2.csv");
    CHECK(as_double(fit, "p") > 0.9);
    CHECK(as_double(fit, "tau1_ns") > 5.0);
    CHECK(as_double(fit, "tau1_ns") < 20.0);
    CHECK(as_double(fit, "chi2_per_dof") > 0.5);
    CHECK(as_double(fit, "chi2_per_dof") < 1.6);
    CHECK(fit.at("single_emitter") == "true");
    CHECK(fit.at("converged") == "true");
}

TEST_CASE("photons saturation fit on the shipped example data") {
    const auto dir = fresh_dir("satfit");
    CHECK(run_cli("photons --config " + config("photons_fit_sat.conf") + " --set input=\"" +
                  data_file("saturation_example.csv") + "\" --out \"" + dir.string() + "\"")
              .exit_code == 0);
    const auto rep = read_report(dir / "photons_fit_sat.csv");
    CHECK(as_double(rep, "K_inf") == doctest::Approx(6.9e5).epsilon(0.08));
    CHECK(as_double(rep, "I_sat") == doctest::Approx(4.9e8).epsilon(0.25));
    CHECK(rep.at("ill_conditioned") == "false");
    CHECK(rep.at("converged") == "true");
}

TEST_CASE("photons lifetime fit on the shipped example data") {
    const auto dir = fresh_dir("lifetimefit");
    CHECK(run_cli("photons --config " + config("photons_fit_lifetime.conf") +
                  " --set input=\"" + data_file("decay_example.csv") + "\" --out \"" +
                  dir.string() + "\"")
              .exit_code == 0);
    const auto rep = read_report(dir / "photons_fit_lifetime.csv");
    CHECK(as_double(rep, "tau_ns") == doctest::Approx(12.5).epsilon(0.05));
    CHECK(rep.at("short_tail") == "false");
}

TEST_CASE("photons budget and intensity reports") {
    const auto dir = fresh_dir("budget");
    CHECK(run_cli("photons --config " + config("photons_budget.conf") + " --out \"" +
                  dir.string() + "\"")
              .exit_code == 0);
    const auto rep = read_report(dir / "photons_budget.csv");
    CHECK(as_double(rep, "first_lens_rate_hz") == doctest::Approx(1.5844e6).epsilon(0.001));

    CHECK(run_cli("photons --config " + config("photons_intensity.conf") + " --out \"" +
                  dir.string() + "\"")
              .exit_code == 0);
    const auto in = read_report(dir / "photons_intensity.csv");
    CHECK(as_double(in, "intensity_w_m2") == doctest::Approx(2.63e10).epsilon(0.01));
}

TEST_CASE("reproduce-paper subset exits cleanly and writes the report") {
    const auto dir = fresh_dir("reproduce");
    const auto r = run_cli("reproduce-paper --config " + config("reproduce_fast.conf") +
                           " --out \"" + dir.string() + "\"");
    CHECK(r.exit_code == 0);
    for (int n = 1; n <= 4; ++n)
        CHECK(r.output.find("criterion " + std::to_string(n)) != std::string::npos);

    const fs::path report = dir / "reproduction_report.csv";
    REQUIRE(fs::exists(report));
    const auto text = slurp(report);
    CHECK(text.find("criterion,title,check,value,target,pass") != std::string::npos);
    for (int n = 1; n <= 4; ++n)
        CHECK(text.find("\n" + std::to_string(n) + ",") != std::string::npos);
}
