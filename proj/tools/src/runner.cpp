#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include "experiment.hpp"
#include "ringbec/dynamics.hpp"
#include "ringbec/io.hpp"
#include "ringbec/observables.hpp"
#include "ringbec/spectrum.hpp"

#ifndef RINGBEC_VERSION
#define RINGBEC_VERSION "unknown"
#endif

namespace ringbec::cli {

namespace fs = std::filesystem;

namespace {

struct FileEntry {
    fs::path path;  ///< relative to the output root
    std::string kind;
    std::string config_hash;
};

struct RunResult {
    std::vector<FileEntry> files;
    std::optional<ConservationReport> conservation;
    json summary;
};

json conservation_json(const ConservationReport& c) {
    return {{"norm_drift", c.norm_drift},
            {"energy_drift", c.energy_drift},
            {"lz_drift", c.lz_drift},
            {"flagged", c.flagged}};
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("error writing " + path.string());
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

RunResult run_spectrum(const ExperimentSpec& spec, const fs::path& root, const fs::path& rel, const std::string& hash) {
    const double eps = validate_config(spec.run).epsilon();
    const auto grid = linspace(spec.spectrum.kappa_min, spec.spectrum.kappa_max, spec.spectrum.kappa_points);
    const auto rows = stability_chart(eps, grid, spec.spectrum.modes);
    RunResult res;
    write_stability_csv(root / rel / "stability.csv", rows);
    res.files.push_back({rel / "stability.csv", "stability", hash});

    json modes = json::array();
    for (int m : spec.spectrum.modes) {
        json e = {{"m", m}, {"omega_plus_at_kappa_min", omega_plus(m, eps)}, {"lz_plus", lz_plus_per_particle(m, eps)}};
        if (m != 0 && eps > 0) {
            const auto w = instability_window(m, eps);
            const auto g = max_growth(m, eps);
            e["window"] = {w.low, w.high};
            e["kappa_star"] = g.kappa_star;
            e["gamma_max"] = g.gamma_max;
        }
        modes.push_back(e);
    }
    json overlaps = json::array();
    if (eps > 0)
        for (int m : spec.spectrum.modes)
            for (int n : spec.spectrum.modes)
                if (0 < m && m < n && instability_window(m, eps).overlaps(instability_window(n, eps))) {
                    const auto a = instability_window(m, eps), b = instability_window(n, eps);
                    overlaps.push_back({{"modes", {m, n}}, {"range", {std::max(a.low, b.low), std::min(a.high, b.high)}}});
                }
    res.summary = {{"epsilon", eps}, {"modes", modes}, {"overlaps", overlaps}};
    write_json(root / rel / "spectrum.json", res.summary);
    res.files.push_back({rel / "spectrum.json", "spectrum_report", hash});
    return res;
}

json fit_json(const Trajectory& traj, int m, double epsilon, double kappa) {
    json j = {{"m", m}, {"gamma_analytic", omega_minus(m, epsilon, kappa).growth_rate()}};
    try {
        const auto f = fit_growth_rate(traj, m);
        j["gamma_fit"] = f.rate;
        j["residual"] = f.residual;
        j["window"] = {f.tau_a, f.tau_b};
        j["saturated"] = f.saturated;
    } catch (const std::domain_error& e) {
        j["gamma_fit"] = nullptr;
        j["error"] = e.what();
    }
    return j;
}

struct Evolved {
    CheckedConfig config;
    Trajectory trajectory;
};

Evolved evolve_run(const ExperimentSpec& spec) {
    auto checked = validate_config(spec.run);
    const auto s0 = init_state(checked);
    return {checked, evolve(s0, checked.integrator(), model_for(checked, s0))};
}

RunResult run_evolve(const ExperimentSpec& spec, const fs::path& root, const fs::path& rel, const std::string& hash) {
    const auto [cfg, traj] = evolve_run(spec);
    RunResult res;
    write_trajectory_csv(root / rel / "trajectory.csv", traj);
    res.files.push_back({rel / "trajectory.csv", "trajectory", hash});
    res.conservation = traj.conservation;

    json fits = json::array();
    for (int m = 1; m <= std::min(cfg.seed_mode_cutoff(), 3); ++m) fits.push_back(fit_json(traj, m, cfg.epsilon(), cfg.kappa()));
    res.summary = {{"conservation", conservation_json(traj.conservation)},
                   {"gamma_actual", traj.model.gamma},
                   {"steps", {{"accepted", traj.stats.accepted}, {"rejected", traj.stats.rejected}}},
                   {"fits", fits}};
    write_json(root / rel / "evolve.json", res.summary);
    res.files.push_back({rel / "evolve.json", "evolve_report", hash});
    return res;
}

int fastest_mode(const CheckedConfig& cfg) {
    int best = 1;
    double rate = -1.0;
    for (int m = 1; m <= std::max(cfg.seed_mode_cutoff(), 1); ++m) {
        const double g = omega_minus(m, cfg.epsilon(), cfg.kappa()).growth_rate();
        if (g > rate) {
            rate = g;
            best = m;
        }
    }
    return best;
}

RunResult run_onset(const ExperimentSpec& spec, const fs::path& root, const fs::path& rel, const std::string& hash) {
    const auto [cfg, traj] = evolve_run(spec);
    RunResult res;
    write_trajectory_csv(root / rel / "trajectory.csv", traj);
    res.files.push_back({rel / "trajectory.csv", "trajectory", hash});
    res.conservation = traj.conservation;

    const auto on = detect_onset(traj, spec.onset.threshold);
    const int m = spec.onset.fit_mode.value_or(fastest_mode(cfg));
    const json fit = fit_json(traj, m, cfg.epsilon(), cfg.kappa());
    const double g = fit["gamma_analytic"].get<double>();
    res.summary = {{"reached", on.reached},
                   {"tau_osc", number_or_null(on.tau_osc)},
                   {"max_imbalance", on.max_imbalance},
                   {"josephson_frequency", number_or_null(on.josephson_frequency)},
                   {"lz_amplitude", on.lz_amplitude},
                   {"fit_mode", m},
                   {"gamma_fit", fit["gamma_fit"]},
                   {"gamma_analytic", g},
                   {"residual", fit.value("residual", json(nullptr))},
                   {"tau_osc_estimate", g > 0 && cfg.seed_magnitude() > 0 ? json(tau_osc_estimate(cfg, g)) : json(nullptr)},
                   {"threshold", spec.onset.threshold},
                   {"conservation", conservation_json(traj.conservation)}};
    write_json(root / rel / "onset.json", res.summary);
    res.files.push_back({rel / "onset.json", "onset_report", hash});
    return res;
}

RunResult run_tof(const ExperimentSpec& spec, const fs::path& root, const fs::path& rel, const std::string& hash) {
    auto checked = validate_config(spec.run);
    auto settings = checked.integrator();
    ModeState state = init_state(checked);
    const auto model = model_for(checked, state);

    RunResult res;
    Trajectory snapshots;
    snapshots.model = model;
    json images = json::array();
    for (double tau : spec.tof.taus) {
        state = integrate_to(state, tau, settings, model);
        snapshots.samples.push_back({state, conserved_quantities(state, model)});
        const auto img = tof_image(state, spec.tof.ring, spec.tof.k_max, spec.tof.resolution, spec.tof.convention,
                                   spec.threads);
        const std::string stem = "tof_tau" + format_double(tau);
        write_tof_csv(root / rel / (stem + ".csv"), img);
        write_tof_pgm(root / rel / (stem + ".pgm"), img);
        res.files.push_back({rel / (stem + ".csv"), "tof_csv", hash});
        res.files.push_back({rel / (stem + ".pgm"), "tof_pgm", hash});
        images.push_back({{"tau", tau}, {"csv", stem + ".csv"}, {"pgm", stem + ".pgm"}});
    }
    if (spec.tof.taus.front() > 0.0) {
        // Drift is measured from the initial state, not the first image.
        ModeState s0 = init_state(checked);
        snapshots.samples.insert(snapshots.samples.begin(), {s0, conserved_quantities(s0, model)});
    }
    assess_conservation(snapshots, settings);
    res.conservation = snapshots.conservation;
    res.summary = {{"ring", ring_name(spec.tof.ring)},
                   {"k_max", spec.tof.k_max},
                   {"resolution", spec.tof.resolution},
                   {"convention", convention_name(spec.tof.convention)},
                   {"canonical_convention", convention_name(PhaseConvention::jacobi_anger)},
                   {"images", images},
                   {"conservation", conservation_json(snapshots.conservation)}};
    write_json(root / rel / "tof.json", res.summary);
    res.files.push_back({rel / "tof.json", "tof_report", hash});
    return res;
}

units::AxialPotential build_potential(const PotentialSpec& ps, const units::PhysicalParams& p) {
    const double half = ps.half_width > 0 ? ps.half_width : ps.z0 + 10.0 * p.a_z;
    switch (ps.kind) {
        case PotentialSpec::Kind::harmonic: return units::harmonic_well(p, half, ps.points);
        case PotentialSpec::Kind::double_harmonic: return units::double_harmonic_well(p, ps.z0, half, ps.points);
        case PotentialSpec::Kind::tabulated: return ps.table;
        case PotentialSpec::Kind::none: break;
    }
    return {};
}

json units_summary(const ExperimentSpec& spec) {
    const auto p = spec.physical.value_or(units::PhysicalParams{});
    const auto sc = units::scales(p);
    const double gamma = units::gamma_eff(p);
    const double eps = spec.run.epsilon.value_or(2.0);
    json j = {{"E0_J", sc.E0},
              {"E0_nK", sc.E0 / units::k_B * 1e9},
              {"tau0_s", sc.tau0},
              {"tau0_ms", sc.tau0 * 1e3},
              {"gamma", gamma},
              {"epsilon", eps},
              {"N0", gamma > 0 ? json(units::n0_for_epsilon(eps, gamma)) : json(nullptr)},
              {"warnings", units::validity_warnings(p)}};
    if (spec.potential.kind != PotentialSpec::Kind::none) {
        auto q = p;
        q.z0 = spec.potential.kind == PotentialSpec::Kind::double_harmonic ? spec.potential.z0 : p.z0.value_or(0.0);
        q.axial_potential = build_potential(spec.potential, q);
        units::KappaOptions opt;
        opt.reference = spec.potential.reference;
        j["kappa"] = units::kappa_from_potential(q, opt);
        j["kappa_energy_reference"] = spec.potential.reference == units::EnergyReference::on_site ? "on_site" : "as_given";
    }
    return j;
}

RunResult run_units(const ExperimentSpec& spec, const fs::path& root, const fs::path& rel, const std::string& hash) {
    RunResult res;
    res.summary = units_summary(spec);
    write_json(root / rel / "units.json", res.summary);
    res.files.push_back({rel / "units.json", "units_report", hash});
    return res;
}

RunResult run_single(const ExperimentSpec& spec, const fs::path& root, const fs::path& rel, const std::string& hash) {
    fs::create_directories(root / rel);
    switch (spec.mode) {
        case Mode::spectrum: return run_spectrum(spec, root, rel, hash);
        case Mode::evolve: return run_evolve(spec, root, rel, hash);
        case Mode::onset: return run_onset(spec, root, rel, hash);
        case Mode::tof: return run_tof(spec, root, rel, hash);
        case Mode::units: return run_units(spec, root, rel, hash);
        case Mode::sweep: break;
    }
    throw std::logic_error("run_single: sweep is not a single run");
}

ExperimentSpec sweep_point(const ExperimentSpec& spec, double v) {
    ExperimentSpec s = spec;
    s.mode = spec.sweep->run_mode;
    s.sweep.reset();
    const auto& p = spec.sweep->parameter;
    if (p == "kappa") {
        s.run.kappa = v;
    } else if (p == "epsilon") {
        s.run.epsilon = v;
        s.run.gamma.reset();
    } else if (p == "n0") {
        s.run.n0 = v;
    } else if (p == "rng_seed") {
        if (!(v >= 0) || v != std::floor(v) || v > 9.007199254740992e15)
            throw ConfigError("sweep.values", "rng_seed values must be non-negative integers");
        s.run.rng_seed = static_cast<std::uint64_t>(v);
    } else if (p == "seed_magnitude") {
        s.run.seed_magnitude = v;
    } else if (p == "fluctuation_scale") {
        s.run.fluctuation_scale = v;
    }
    return s;
}

RunResult run_sweep(const ExperimentSpec& spec, const fs::path& root) {
    const auto& sw = *spec.sweep;
    std::vector<ExperimentSpec> points;
    std::vector<std::string> hashes;
    for (double v : sw.values) {
        points.push_back(sweep_point(spec, v));
        hashes.push_back(config_hash(points.back()));
    }

    std::vector<RunResult> results(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < points.size();) {
            try {
                const fs::path rel = sw.parameter + "=" + format_double(sw.values[i]);
                results[i] = run_single(points[i], root, rel, hashes[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    {
        const int nt = std::clamp(spec.threads, 1, static_cast<int>(points.size()));
        std::vector<std::jthread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    RunResult merged;
    ConservationReport worst;
    bool any = false;
    std::ofstream csv(root / "sweep.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + (root / "sweep.csv").string());
    csv << sw.parameter << ",flagged,norm_drift,energy_drift,lz_drift";
    if (sw.run_mode == Mode::onset) csv << ",reached,tau_osc,max_imbalance,lz_amplitude,gamma_fit,gamma_analytic";
    csv << '\n';
    auto num = [](const json& j) { return j.is_number() ? format_double(j.get<double>()) : std::string("nan"); };
    for (std::size_t i = 0; i < results.size(); ++i) {
        auto& r = results[i];
        merged.files.insert(merged.files.end(), r.files.begin(), r.files.end());
        if (r.conservation) {
            any = true;
            worst.norm_drift = std::max(worst.norm_drift, r.conservation->norm_drift);
            worst.energy_drift = std::max(worst.energy_drift, r.conservation->energy_drift);
            worst.lz_drift = std::max(worst.lz_drift, r.conservation->lz_drift);
            worst.flagged = worst.flagged || r.conservation->flagged;
        }
        const auto c = r.conservation.value_or(ConservationReport{});
        csv << format_double(sw.values[i]) << ',' << (c.flagged ? 1 : 0) << ',' << format_double(c.norm_drift) << ','
            << format_double(c.energy_drift) << ',' << format_double(c.lz_drift);
        if (sw.run_mode == Mode::onset)
            csv << ',' << (r.summary["reached"].get<bool>() ? 1 : 0) << ',' << num(r.summary["tau_osc"]) << ','
                << num(r.summary["max_imbalance"]) << ',' << num(r.summary["lz_amplitude"]) << ','
                << num(r.summary["gamma_fit"]) << ',' << num(r.summary["gamma_analytic"]);
        csv << '\n';
    }
    csv.close();
    if (!csv) throw std::runtime_error("error writing sweep.csv");
    merged.files.push_back({"sweep.csv", "sweep_summary", config_hash(spec)});
    if (any) merged.conservation = worst;
    return merged;
}

void log_physical(const ExperimentSpec& spec, std::ostream& log) {
    if (!spec.physical || spec.mode == Mode::units) return;
    ExperimentSpec u = spec;
    u.potential.kind = PotentialSpec::Kind::none;
    const auto j = units_summary(u);
    log << "physical: E0 = " << j["E0_J"].get<double>() << " J (" << j["E0_nK"].get<double>() << " nK), tau0 = "
        << j["tau0_ms"].get<double>() << " ms, gamma = " << j["gamma"].get<double>() << ", epsilon = "
        << j["epsilon"].get<double>() << ", N0 = " << j["N0"].dump() << '\n';
    for (const auto& w : j["warnings"]) log << "warning: " << w.get<std::string>() << '\n';
}

}  // namespace

int run(const ExperimentSpec& spec, std::ostream& log) {
    std::string hash;
    json canonical;
    try {
        canonical = canonical_config(spec);
        hash = config_hash(spec);
        if (spec.physical) units::check(*spec.physical);
    } catch (const ConfigError& e) {
        log << e.what() << '\n';
        return exit_config;
    }

    try {
        fs::create_directories(spec.out);
        log_physical(spec, log);
        RunResult res = spec.mode == Mode::sweep ? run_sweep(spec, spec.out) : run_single(spec, spec.out, "", hash);

        json files = json::array();
        for (const auto& f : res.files) {
            files.push_back({{"path", f.path.generic_string()},
                             {"kind", f.kind},
                             {"bytes", fs::file_size(spec.out / f.path)},
                             {"config_hash", f.config_hash}});
        }
        json manifest = {{"schema", manifest_schema},
                         {"tool", "ringbec"},
                         {"version", RINGBEC_VERSION},
                         {"mode", mode_name(spec.mode)},
                         {"preset", spec.preset.empty() ? json(nullptr) : json(spec.preset)},
                         {"config_hash", hash},
                         {"config", canonical},
                         {"files", files}};
        if (res.conservation) manifest["conservation"] = conservation_json(*res.conservation);
        if (spec.mode == Mode::tof) manifest["tof_canonical_convention"] = convention_name(PhaseConvention::jacobi_anger);
        write_json(spec.out / "manifest.json", manifest);

        log << mode_name(spec.mode) << ": wrote " << res.files.size() << " files to " << spec.out.string()
            << " (config " << hash << ")\n";
        if (res.conservation && res.conservation->flagged) {
            const auto& c = *res.conservation;
            log << "conservation check failed: norm drift " << c.norm_drift << ", energy drift " << c.energy_drift
                << ", L_z drift " << c.lz_drift << '\n';
            return exit_conservation;
        }
        return exit_ok;
    } catch (const ConfigError& e) {
        log << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace ringbec::cli
