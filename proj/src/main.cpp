// Batch front-end: every module exposed as a subcommand driven by a
// flat key = value config file, emitting CSV or JSON artifacts with a
// provenance header. Exit codes: 0 success, 2 config error,
// 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cavtk/cavity.hpp"
#include "cavtk/config.hpp"
#include "cavtk/dipole.hpp"
#include "cavtk/multilayer.hpp"
#include "cavtk/photostats.hpp"
#include "cavtk/report.hpp"
#include "cavtk/reproduction.hpp"
#include "cavtk/runspec.hpp"
#include "cavtk/waveguide.hpp"

namespace {

using namespace cavtk;
using cli::Config;
using cli::ConfigError;

constexpr double kPi = std::numbers::pi;

struct RunContext {
    Config cfg;
    std::string out_dir = ".";
    cli::Format format = cli::Format::Csv;
    std::optional<std::uint64_t> seed;  // --seed, overrides the config key
    cli::Provenance prov;
};

std::vector<double> linspace(double from, double to, long long samples) {
    if (samples < 2) throw ConfigError("samples must be >= 2 for a sweep");
    if (!(to > from)) throw ConfigError("sweep range must ascend");
    std::vector<double> out(static_cast<std::size_t>(samples));
    for (long long i = 0; i < samples; ++i)
        out[static_cast<std::size_t>(i)] =
            from + (to - from) * static_cast<double>(i) / static_cast<double>(samples - 1);
    return out;
}

void emit_table(RunContext& ctx, const std::string& name, const cli::Table& t) {
    std::printf("wrote %s\n",
                cli::write_table(ctx.out_dir, name, ctx.format, ctx.prov, t).c_str());
}

void emit_report(RunContext& ctx, const std::string& name, const cli::Report& r) {
    std::printf("wrote %s\n",
                cli::write_report(ctx.out_dir, name, ctx.format, ctx.prov, r).c_str());
}

// Input paths resolve as typed (relative to the working directory)
// and must exist before any computation starts.
std::string require_input_file(Config& cfg, const std::string& key) {
    const std::string path = cfg.require_string(key);
    if (!std::filesystem::exists(path))
        throw ConfigError("key '" + key + "': no such file: " + path);
    return path;
}

// ---- coating ---------------------------------------------------------

void run_coating(RunContext& ctx) {
    Config& cfg = ctx.cfg;
    const std::string task = cfg.get_string("task", "response");
    auto extra = cli::custom_materials(cfg);
    if (task == "response") {
        const auto stack = cli::parse_stack(cfg.require_string("stack"), extra);
        const auto pol = cli::parse_polarization(cfg.get_string("polarization", "te"));
        const double angle = cfg.get_double("angle_deg", 0.0) * kPi / 180.0;
        std::vector<double> lams;
        if (cfg.has("lambda_nm"))
            lams = {cfg.require_double("lambda_nm")};
        else
            lams = linspace(cfg.require_double("lambda_from_nm"),
                            cfg.require_double("lambda_to_nm"), cfg.require_int("samples"));
        cfg.reject_unknown();
        cli::Table t;
        t.columns = {"lambda_nm", "reflectivity", "transmissivity", "absorption",
                     "phase_over_pi"};
        for (double lam : lams) {
            const auto r = multilayer::stack_response(stack, lam, angle, pol);
            t.rows.push_back({lam, r.reflectivity, r.transmissivity, r.absorption,
                              r.reflection_phase / kPi});
        }
        emit_table(ctx, "coating_response", t);
    } else if (task == "finesse") {
        const auto s1 = cli::parse_stack(cfg.require_string("stack1"), extra);
        const auto s2 = cli::parse_stack(cfg.require_string("stack2"), extra);
        const double lam = cfg.require_double("lambda_nm");
        const double extra_loss = cfg.get_double("extra_loss", 0.0);
        cfg.reject_unknown();
        const auto r1 = multilayer::stack_response(s1, lam, 0.0, multilayer::Polarization::TE);
        const auto r2 = multilayer::stack_response(s2, lam, 0.0, multilayer::Polarization::TE);
        cli::Report rep;
        rep.add("lambda_nm", lam);
        rep.add("T1", r1.transmissivity);
        rep.add("A1", r1.absorption);
        rep.add("phase1_over_pi", r1.reflection_phase / kPi);
        rep.add("T2", r2.transmissivity);
        rep.add("A2", r2.absorption);
        rep.add("phase2_over_pi", r2.reflection_phase / kPi);
        rep.add("finesse",
                multilayer::finesse_from_losses(r1.transmissivity, r2.transmissivity,
                                                r1.absorption, r2.absorption, extra_loss));
        rep.add("eta_c",
                multilayer::outcoupling_efficiency(r1.transmissivity, r2.transmissivity,
                                                   r1.absorption, r2.absorption));
        emit_report(ctx, "coating_finesse", rep);
    } else {
        throw ConfigError("coating: unknown task '" + task + "' (response, finesse)");
    }
}

// ---- cavity ----------------------------------------------------------

void run_cavity(RunContext& ctx) {
    Config& cfg = ctx.cfg;
    const std::string task = cfg.require_string("task");
    auto extra = cli::custom_materials(cfg);
    if (task == "geometry") {
        const int q = static_cast<int>(cfg.require_int("q"));
        const double lam = cfg.require_double("lambda_nm");
        const double r_c = cfg.require_double("r_c_um");
        const double phi = cfg.get_double("phi_over_pi", 0.0) * kPi;
        cfg.reject_unknown();
        const auto g = cavity::resonance_lengths(q, lam, r_c, phi);
        const double w0 = cavity::mode_waist_um(r_c, g.optical_length_nm, lam);
        const auto v = cavity::mode_volume(w0, g.optical_length_nm, lam);
        cli::Report rep;
        rep.add("mode_order", static_cast<double>(q));
        rep.add("lambda_nm", lam);
        rep.add("r_c_um", r_c);
        rep.add("optical_length_nm", g.optical_length_nm);
        rep.add("air_gap_nm", g.air_gap_nm);
        rep.add("waist_um", w0);
        rep.add("volume_um3", v.um3);
        rep.add("volume_lambda3", v.lambda3);
        emit_report(ctx, "cavity_geometry", rep);
    } else if (task == "length_scan" || task == "wavelength_scan") {
        const auto s1 = cli::parse_stack(cfg.require_string("stack1"), extra);
        const auto s2 = cli::parse_stack(cfg.require_string("stack2"), extra);
        cli::Table t;
        if (task == "length_scan") {
            const double lam = cfg.require_double("lambda_nm");
            const double from = cfg.require_double("d_from_nm");
            const double to = cfg.require_double("d_to_nm");
            const int samples = static_cast<int>(cfg.require_int("samples"));
            cfg.reject_unknown();
            t.columns = {"d_nm", "transmission"};
            for (const auto& s : cavity::transmission_length_scan(s1, s2, lam, from, to, samples))
                t.rows.push_back({s.x, s.transmission});
            emit_table(ctx, "cavity_length_scan", t);
        } else {
            const double d = cfg.require_double("d_nm");
            const double from = cfg.require_double("lambda_from_nm");
            const double to = cfg.require_double("lambda_to_nm");
            const int samples = static_cast<int>(cfg.require_int("samples"));
            cfg.reject_unknown();
            t.columns = {"lambda_nm", "transmission"};
            for (const auto& s :
                 cavity::transmission_wavelength_scan(s1, s2, d, from, to, samples))
                t.rows.push_back({s.x, s.transmission});
            emit_table(ctx, "cavity_wavelength_scan", t);
        }
    } else if (task == "calibrate") {
        std::vector<double> lams;
        for (const auto& f : cli::split_fields(cfg.require_string("resonances_nm")))
            lams.push_back(cli::parse_double(f, "resonances_nm"));
        cfg.reject_unknown();
        const auto cal = cavity::length_from_spectrum(lams);
        cli::Report rep;
        rep.add("optical_length_nm", cal.optical_length_nm);
        rep.add("residual_nm", cal.residual_nm);
        std::vector<double> orders(cal.mode_orders.begin(), cal.mode_orders.end());
        rep.add("mode_orders", orders);
        emit_report(ctx, "cavity_calibration", rep);
    } else if (task == "psf") {
        const double r_c = cfg.require_double("r_c_um");
        const double lam = cfg.require_double("lambda_nm");
        const double lam_e = cfg.require_double("lambda_e_nm");
        const auto ds = linspace(cfg.require_double("d_from_nm"), cfg.require_double("d_to_nm"),
                                 cfg.require_int("samples"));
        cfg.reject_unknown();
        cli::Table t;
        t.columns = {"d_nm", "waist_um", "psf_um"};
        for (double d : ds) {
            const double w0 = cavity::mode_waist_um(r_c, d, lam);
            t.rows.push_back({d, w0, cavity::psf_size_um(w0, lam_e, lam)});
        }
        emit_table(ctx, "cavity_psf", t);
    } else {
        throw ConfigError("cavity: unknown task '" + task +
                          "' (geometry, length_scan, wavelength_scan, calibrate, psf)");
    }
}

// ---- ldos ------------------------------------------------------------

void run_ldos(RunContext& ctx) {
    Config& cfg = ctx.cfg;
    const std::string task = cfg.require_string("task");
    auto extra = cli::custom_materials(cfg);
    const auto orientation =
        cli::parse_orientation(cfg.get_string("orientation", "isotropic"));
    const double rel_tol = cfg.get_double("rel_tol", 1e-6);
    if (task == "decay") {
        auto env = cli::environment_from_config(cfg, extra);
        const double lam = cfg.require_double("lambda_nm");
        if (cfg.has("sweep")) {
            const std::string sweep = cfg.require_string("sweep");
            if (sweep != "height" && sweep != "gap")
                throw ConfigError("sweep must be height or gap");
            const auto xs = linspace(cfg.require_double("from_nm"), cfg.require_double("to_nm"),
                                     cfg.require_int("samples"));
            cfg.reject_unknown();
            cli::Table t;
            t.columns = {sweep == "height" ? "height_nm" : "gap_nm", "total", "radiative",
                         "nonradiative_fraction"};
            for (double x : xs) {
                (sweep == "height" ? env.height_nm : env.gap_nm) = x;
                const auto r = dipole::relative_decay_rate(env, lam, orientation, rel_tol);
                t.rows.push_back({x, r.total, r.radiative, dipole::nonradiative_fraction(r)});
            }
            emit_table(ctx, "ldos_decay", t);
        } else {
            cfg.reject_unknown();
            const auto r = dipole::relative_decay_rate(env, lam, orientation, rel_tol);
            cli::Report rep;
            rep.add("lambda_nm", lam);
            rep.add("total", r.total);
            rep.add("radiative", r.radiative);
            rep.add("nonradiative_fraction", dipole::nonradiative_fraction(r));
            emit_report(ctx, "ldos_decay", rep);
        }
    } else if (task == "lifetime") {
        auto env = cli::environment_from_config(cfg, extra);
        const auto line = cli::spectrum_from_config(cfg);
        const auto gaps = linspace(cfg.require_double("gap_from_nm"),
                                   cfg.require_double("gap_to_nm"), cfg.require_int("samples"));
        const int n_lambda = static_cast<int>(cfg.get_int("n_lambda", 15));
        cfg.reject_unknown();
        const auto curve = dipole::lifetime_curve(env, gaps, line, orientation, rel_tol, n_lambda);
        cli::Table t;
        t.columns = {"d0_nm", "tau_ratio"};
        for (const auto& p : curve) t.rows.push_back({p.air_gap_nm, p.tau_ratio});
        emit_table(ctx, "ldos_lifetime", t);
    } else if (task == "collection") {
        auto env = cli::environment_from_config(cfg, extra);
        const double lam = cfg.require_double("lambda_nm");
        const double na = cfg.require_double("na");
        cfg.reject_unknown();
        cli::Report rep;
        rep.add("lambda_nm", lam);
        rep.add("na", na);
        rep.add("collection_efficiency",
                dipole::collection_efficiency(env, lam, na, orientation, rel_tol));
        emit_report(ctx, "ldos_collection", rep);
    } else if (task == "spectrum") {
        auto env = cli::environment_from_config(cfg, extra);
        const auto grid = linspace(cfg.require_double("lambda_from_nm"),
                                   cfg.require_double("lambda_to_nm"), cfg.require_int("samples"));
        const bool averaged = cfg.has("spectrum");
        cavity::EmissionSpectrum line = cavity::EmissionSpectrum::gaussian_1e_full_width(1.0, 1.0);
        if (averaged) line = cli::spectrum_from_config(cfg);
        cfg.reject_unknown();
        const auto sp = dipole::purcell_spectrum(env, grid, orientation, rel_tol);
        cli::Table t;
        t.columns = {"lambda_nm", "with_cavity", "mirror_only"};
        for (const auto& p : sp) t.rows.push_back({p.lambda_nm, p.with_cavity, p.mirror_only});
        if (averaged)
            t.notes.emplace_back("spectral_average_enhancement",
                                 cli::format_double(dipole::spectral_average_enhancement(sp, line)));
        emit_table(ctx, "ldos_spectrum", t);
    } else {
        throw ConfigError("ldos: unknown task '" + task +
                          "' (decay, lifetime, collection, spectrum)");
    }
}

// ---- waveguide -------------------------------------------------------

waveguide::RadiusDefinition parse_radius_def(const std::string& text) {
    if (text == "field") return waveguide::RadiusDefinition::FieldInverseE2;
    if (text == "intensity") return waveguide::RadiusDefinition::IntensityInverseE2;
    if (text == "gaussian") return waveguide::RadiusDefinition::GaussianFit;
    throw ConfigError("radius must be field, intensity, or gaussian");
}

void run_waveguide(RunContext& ctx) {
    Config& cfg = ctx.cfg;
    const std::string task = cfg.require_string("task");
    if (task == "mode") {
        const double b = cfg.require_double("b_nm");
        const double n_guide = cfg.require_double("n_guide");
        const double lam = cfg.require_double("lambda_nm");
        const auto def = parse_radius_def(cfg.get_string("radius", "field"));
        cfg.reject_unknown();
        const auto m = waveguide::solve_fundamental_mode(b, n_guide, lam);
        cli::Report rep;
        rep.add("b_nm", b);
        rep.add("n_eff", m.n_eff);
        rep.add("beta_per_nm", m.beta_per_nm);
        rep.add("kappa_per_nm", m.kappa_per_nm);
        rep.add("gamma_per_nm", m.gamma_per_nm);
        rep.add("mode_radius_nm", waveguide::mode_radius_nm(m, def));
        rep.add("near_cutoff", m.near_cutoff);
        emit_report(ctx, "waveguide_mode", rep);
    } else if (task == "sweep") {
        const double from = cfg.require_double("b_from_nm");
        const double to = cfg.require_double("b_to_nm");
        const int samples = static_cast<int>(cfg.require_int("samples"));
        const double n_guide = cfg.require_double("n_guide");
        const double lam = cfg.require_double("lambda_nm");
        const auto def = parse_radius_def(cfg.get_string("radius", "field"));
        cfg.reject_unknown();
        const auto sweep = waveguide::confinement_sweep(from, to, samples, n_guide, lam, def);
        cli::Table t;
        t.columns = {"b_nm", "n_eff", "mode_radius_nm"};
        for (const auto& p : sweep.points) {
            const auto m = waveguide::solve_fundamental_mode(p.half_width_nm, n_guide, lam);
            t.rows.push_back({p.half_width_nm, m.n_eff, p.mode_radius_nm});
        }
        t.notes.emplace_back("best_b_nm", cli::format_double(sweep.best_half_width_nm));
        t.notes.emplace_back("min_radius_nm", cli::format_double(sweep.min_radius_nm));
        emit_table(ctx, "waveguide_sweep", t);
    } else if (task == "hybrid") {
        const double lam = cfg.require_double("lambda_nm");
        const double q_eff = cfg.require_double("q_eff");
        double n_eff = 0.0, radius = 0.0;
        if (cfg.has("b_nm")) {
            const double b = cfg.require_double("b_nm");
            const double n_guide = cfg.require_double("n_guide");
            const auto def = parse_radius_def(cfg.get_string("radius", "field"));
            cfg.reject_unknown();
            const auto m = waveguide::solve_fundamental_mode(b, n_guide, lam);
            n_eff = m.n_eff;
            radius = waveguide::mode_radius_nm(m, def);
        } else {
            n_eff = cfg.require_double("n_eff");
            radius = cfg.require_double("mode_radius_nm");
            cfg.reject_unknown();
        }
        const auto h = waveguide::hybrid_purcell(n_eff, radius, lam, q_eff);
        cli::Report rep;
        rep.add("n_eff", n_eff);
        rep.add("mode_radius_nm", radius);
        rep.add("q_eff", q_eff);
        rep.add("volume_lambda_eff3", h.volume_lambda_eff3);
        rep.add("c_eff", h.c_eff);
        emit_report(ctx, "waveguide_hybrid", rep);
    } else {
        throw ConfigError("waveguide: unknown task '" + task + "' (mode, sweep, hybrid)");
    }
}

// ---- photons ---------------------------------------------------------

std::vector<std::uint64_t> load_timestamps(Config& cfg) {
    const std::string path = require_input_file(cfg, "input");
    std::string fmt = cfg.get_string("input_format", "auto");
    if (fmt == "auto")
        fmt = path.size() >= 4 && path.substr(path.size() - 4) == ".csv" ? "csv" : "binary";
    if (fmt == "binary") return photostats::read_timestamps_binary(path);
    if (fmt == "csv") return photostats::read_timestamps_csv(path);
    throw ConfigError("input_format must be auto, binary, or csv");
}

void add_quality(cli::Report& rep, const photostats::FitQuality& q) {
    rep.add("chi2", q.chi2);
    rep.add("dof", static_cast<double>(q.dof));
    rep.add("chi2_per_dof", q.chi2_per_dof());
    rep.add("converged", q.converged);
}

void run_photons(RunContext& ctx) {
    Config& cfg = ctx.cfg;
    const std::string task = cfg.require_string("task");
    if (task == "simulate") {
        const double duration = cfg.require_double("duration_ns");
        const std::uint64_t seed =
            ctx.seed.value_or(static_cast<std::uint64_t>(cfg.get_int("seed", 1)));
        ctx.prov.seed = seed;
        const std::string out_name = cfg.get_string("output", "timestamps.bin");
        photostats::PhotonDataset data;
        if (cfg.has("p")) {
            photostats::G2Model m;
            m.p = cfg.require_double("p");
            m.b = cfg.require_double("b");
            m.tau1_ns = cfg.require_double("tau1_ns");
            m.tau2_ns = cfg.require_double("tau2_ns");
            const double emission = cfg.require_double("emission_per_ns");
            cfg.reject_unknown();
            data = photostats::simulate_emitter(m, emission, duration, seed);
        } else {
            photostats::ThreeLevelRates r;
            r.pump_per_ns = cfg.require_double("pump_per_ns");
            r.emission_per_ns = cfg.require_double("emission_per_ns");
            r.shelving_per_ns = cfg.require_double("shelving_per_ns");
            r.deshelving_per_ns = cfg.require_double("deshelving_per_ns");
            const double bg = cfg.get_double("background_per_ns", 0.0);
            cfg.reject_unknown();
            data = photostats::simulate_emitter(r, bg, duration, seed);
        }
        std::filesystem::create_directories(ctx.out_dir);
        const std::string path = (std::filesystem::path(ctx.out_dir) / out_name).string();
        const bool csv = out_name.size() >= 4 && out_name.substr(out_name.size() - 4) == ".csv";
        if (csv)
            photostats::write_timestamps_csv(path, data.timestamps_ns);
        else
            photostats::write_timestamps_binary(path, data.timestamps_ns);
        std::printf("wrote %s\n", path.c_str());
        cli::Report rep;
        rep.add("n_photons", static_cast<double>(data.timestamps_ns.size()));
        rep.add("duration_ns", data.duration_ns);
        rep.add("mean_rate_per_ns",
                static_cast<double>(data.timestamps_ns.size()) / data.duration_ns);
        rep.add("seed", static_cast<double>(seed));
        rep.add("timestamps", out_name);
        emit_report(ctx, "photons_simulate", rep);
    } else if (task == "histogram" || task == "fit-g2") {
        photostats::Histogram h;
        if (task == "fit-g2" && cfg.has("histogram_csv")) {
            h = cli::read_histogram_csv(require_input_file(cfg, "histogram_csv"));
            cfg.reject_unknown();
        } else {
            const auto ts = load_timestamps(cfg);
            const double bw = cfg.require_double("binwidth_ns");
            const double window = cfg.require_double("window_ns");
            cfg.reject_unknown();
            h = photostats::coincidence_histogram(ts, bw, window);
        }
        if (task == "histogram") {
            cli::Table t;
            t.columns = {"lag_lo_ns", "lag_hi_ns", "lag_center_ns", "counts", "g2", "g2_sigma"};
            for (std::size_t i = 0; i < h.counts.size(); ++i)
                t.rows.push_back({h.edges_ns[i], h.edges_ns[i + 1], h.center_ns(i),
                                  static_cast<double>(h.counts[i]), h.g2[i], h.g2_sigma[i]});
            t.notes.emplace_back("norm", cli::format_double(h.norm));
            t.notes.emplace_back("total_counts",
                                 cli::format_double(static_cast<double>(h.total_counts())));
            emit_table(ctx, "photons_histogram", t);
        } else {
            const auto fit = photostats::fit_g2(h);
            cli::Report rep;
            rep.add("p", fit.model.p);
            rep.add("b", fit.model.b);
            rep.add("tau1_ns", fit.model.tau1_ns);
            rep.add("tau2_ns", fit.model.tau2_ns);
            rep.add("sigma_p", fit.sigma[0]);
            rep.add("sigma_b", fit.sigma[1]);
            rep.add("sigma_tau1_ns", fit.sigma[2]);
            rep.add("sigma_tau2_ns", fit.sigma[3]);
            rep.add("g2_zero", fit.g2_zero);
            rep.add("single_emitter", photostats::single_emitter(fit.g2_zero));
            add_quality(rep, fit.quality);
            emit_report(ctx, "photons_fit_g2", rep);
        }
    } else if (task == "fit-sat") {
        const auto data = cli::read_saturation_csv(require_input_file(cfg, "input"));
        cfg.reject_unknown();
        const auto fit =
            photostats::fit_saturation(data.intensity_w_m2, data.rate_hz, data.sigma_hz);
        cli::Report rep;
        rep.add("K_inf", fit.model.k_inf);
        rep.add("I_sat", fit.model.i_sat);
        rep.add("a", fit.model.a);
        rep.add("sigma_K_inf", fit.sigma[0]);
        rep.add("sigma_I_sat", fit.sigma[1]);
        rep.add("sigma_a", fit.sigma[2]);
        rep.add("ill_conditioned", fit.ill_conditioned);
        add_quality(rep, fit.quality);
        emit_report(ctx, "photons_fit_sat", rep);
    } else if (task == "fit-lifetime") {
        const auto h = cli::read_decay_csv(require_input_file(cfg, "input"));
        const std::string kind_s = cfg.get_string("kind", "mono");
        if (kind_s != "mono" && kind_s != "stretched")
            throw ConfigError("kind must be mono or stretched");
        cfg.reject_unknown();
        const auto fit = photostats::fit_lifetime(
            h, kind_s == "mono" ? photostats::DecayKind::Mono : photostats::DecayKind::Stretched);
        cli::Report rep;
        rep.add("tau_ns", fit.model.tau_ns);
        rep.add("beta", fit.model.beta);
        rep.add("amplitude", fit.model.amplitude);
        rep.add("background", fit.model.background);
        rep.add("sigma_amplitude", fit.sigma[0]);
        rep.add("sigma_tau_ns", fit.sigma[1]);
        rep.add("sigma_beta", fit.sigma[2]);
        rep.add("sigma_background", fit.sigma[3]);
        rep.add("mean_lifetime_ns", fit.model.mean_lifetime_ns());
        rep.add("short_tail", fit.short_tail);
        add_quality(rep, fit.quality);
        emit_report(ctx, "photons_fit_lifetime", rep);
    } else if (task == "budget") {
        const double rate = cfg.require_double("detected_rate_hz");
        const double path_eff = cfg.require_double("path_efficiency");
        const double qe = cfg.require_double("detector_qe");
        cfg.reject_unknown();
        const auto b = photostats::count_budget(rate, path_eff, qe);
        cli::Report rep;
        rep.add("detected_rate_hz", rate);
        rep.add("detection_efficiency", b.detection_efficiency);
        rep.add("first_lens_rate_hz", b.first_lens_rate_hz);
        emit_report(ctx, "photons_budget", rep);
    } else if (task == "intensity") {
        const double waist = cfg.require_double("waist_um");
        const double t1 = cfg.require_double("mirror_transmission");
        double power = 0.0, intensity = 0.0;
        if (cfg.has("power_w")) {
            power = cfg.require_double("power_w");
            cfg.reject_unknown();
            intensity = photostats::excitation_intensity_w_m2(power, waist, t1);
        } else {
            intensity = cfg.require_double("intensity_w_m2");
            cfg.reject_unknown();
            power = photostats::power_for_intensity_w(intensity, waist, t1);
        }
        cli::Report rep;
        rep.add("power_w", power);
        rep.add("intensity_w_m2", intensity);
        rep.add("waist_um", waist);
        rep.add("mirror_transmission", t1);
        emit_report(ctx, "photons_intensity", rep);
    } else {
        throw ConfigError("photons: unknown task '" + task +
                          "' (simulate, histogram, fit-g2, fit-sat, fit-lifetime, budget, "
                          "intensity)");
    }
}

// ---- reproduce-paper -------------------------------------------------

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void run_reproduce(RunContext& ctx) {
    Config& cfg = ctx.cfg;
    reproduction::Options opts;
    if (cfg.has("criteria"))
        for (const auto& f : cli::split_fields(cfg.require_string("criteria")))
            opts.criteria.push_back(static_cast<int>(cli::parse_double(f, "criteria")));
    cfg.reject_unknown();

    const auto results = reproduction::run_reference_checks(opts);
    int passed = 0;
    for (const auto& r : results) {
        std::printf("[%s] criterion %d: %s (%.1f s)\n", r.pass() ? "PASS" : "FAIL", r.number,
                    r.title.c_str(), r.seconds);
        for (const auto& ch : r.checks)
            if (!ch.pass)
                std::printf("       %s = %s, want %s\n", ch.name.c_str(),
                            cli::format_double(ch.value).c_str(), ch.target.c_str());
        if (r.pass()) ++passed;
    }
    std::printf("criteria passed: %d of %zu\n", passed, results.size());

    std::filesystem::create_directories(ctx.out_dir);
    if (ctx.format == cli::Format::Csv) {
        const auto path =
            (std::filesystem::path(ctx.out_dir) / "reproduction_report.csv").string();
        std::ofstream f(path, std::ios::binary);
        f << "# " << cli::kToolVersion << "\n";
        f << "# config_fnv1a64 = " << ctx.prov.config_hash << "\n";
        f << "criterion,title,check,value,target,pass\n";
        for (const auto& r : results)
            for (const auto& ch : r.checks)
                f << r.number << "," << csv_quote(r.title) << "," << ch.name << ","
                  << cli::format_double(ch.value) << "," << csv_quote(ch.target) << ","
                  << (ch.pass ? 1 : 0) << "\n";
        if (!f.good()) throw std::runtime_error("write failed: " + path);
        std::printf("wrote %s\n", path.c_str());
    } else {
        const auto path =
            (std::filesystem::path(ctx.out_dir) / "reproduction_report.json").string();
        std::ofstream f(path, std::ios::binary);
        f << "{\n  \"tool\": \"" << cli::kToolVersion << "\",\n";
        f << "  \"config_fnv1a64\": \"" << ctx.prov.config_hash << "\",\n  \"criteria\": [\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& r = results[i];
            f << "    {\"criterion\": " << r.number << ", \"title\": \"" << r.title
              << "\", \"pass\": " << (r.pass() ? "true" : "false")
              << ", \"seconds\": " << cli::format_double(r.seconds) << ", \"checks\": [\n";
            for (std::size_t j = 0; j < r.checks.size(); ++j) {
                const auto& ch = r.checks[j];
                f << "      {\"name\": \"" << ch.name
                  << "\", \"value\": " << cli::format_double(ch.value) << ", \"target\": \""
                  << ch.target << "\", \"pass\": " << (ch.pass ? "true" : "false") << "}"
                  << (j + 1 == r.checks.size() ? "\n" : ",\n");
            }
            f << "    ]}" << (i + 1 == results.size() ? "\n" : ",\n");
        }
        f << "  ]\n}\n";
        if (!f.good()) throw std::runtime_error("write failed: " + path);
        std::printf("wrote %s\n", path.c_str());
    }
}

// ---- driver ----------------------------------------------------------

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n' || c == '\r' || c == '\t')
            out += ' ';
        else
            out += c;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fiber-microcavity optics and photon-statistics toolkit"};
    app.require_subcommand(0, 1);
    std::string config_path, out_dir = ".", format_s = "csv";
    std::uint64_t seed_value = 0;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "run configuration file (key = value lines)");
    app.add_option("--out", out_dir, "output directory for artifacts")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed_value, "override the config seed");
    app.add_option("--format", format_s, "artifact format: csv or json")
        ->capture_default_str();
    app.add_option("--set", overrides, "override a config entry as key=value (repeatable)");
    app.set_version_flag("--version", cli::kToolVersion);

    app.add_subcommand("coating", "stack reflectivity, transmission, absorption, phase")
        ->fallthrough();
    app.add_subcommand("cavity", "mode geometry, transmission scans, length calibration, PSF")
        ->fallthrough();
    app.add_subcommand("ldos", "dipole decay rates, lifetime curves, collection efficiency")
        ->fallthrough();
    app.add_subcommand("waveguide", "slab mode solving, confinement sweeps, hybrid Purcell")
        ->fallthrough();
    app.add_subcommand("photons", "photon-stream simulation, histograms, fits, budgets")
        ->fallthrough();
    app.add_subcommand("reproduce-paper", "run the built-in reference checks, report pass/fail")
        ->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help / --version
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "{\"error\":\"config\",\"message\":\"%s\"}\n",
                     json_escape(e.what()).c_str());
        return 2;
    }

    const auto subs = app.get_subcommands();
    if (subs.empty()) {
        std::fputs(app.help().c_str(), stdout);
        return 2;
    }
    const std::string name = subs.front()->get_name();

    try {
        RunContext ctx;
        if (!config_path.empty())
            ctx.cfg = Config::from_file(config_path);
        else if (name != "reproduce-paper")
            throw ConfigError("--config is required for '" + name + "'");
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set needs key=value, got '" + kv + "'");
            ctx.cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        ctx.out_dir = out_dir;
        std::error_code dir_ec;
        std::filesystem::create_directories(ctx.out_dir, dir_ec);
        if (dir_ec || !std::filesystem::is_directory(ctx.out_dir))
            throw ConfigError("cannot create output directory: " + ctx.out_dir);
        ctx.format = cli::parse_format(format_s);
        if (seed_opt->count() > 0) ctx.seed = seed_value;
        ctx.prov.config_hash = ctx.cfg.hash_hex();

        if (name == "coating")
            run_coating(ctx);
        else if (name == "cavity")
            run_cavity(ctx);
        else if (name == "ldos")
            run_ldos(ctx);
        else if (name == "waveguide")
            run_waveguide(ctx);
        else if (name == "photons")
            run_photons(ctx);
        else
            run_reproduce(ctx);
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "{\"error\":\"config\",\"message\":\"%s\"}\n",
                     json_escape(e.what()).c_str());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "{\"error\":\"numerical\",\"message\":\"%s\"}\n",
                     json_escape(e.what()).c_str());
        return 3;
    }
}
