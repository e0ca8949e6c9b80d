#include <cstdio>
#include <set>

#include "experiment.hpp"
#include "ringbec/io.hpp"

namespace ringbec::cli {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::spectrum: return "spectrum";
        case Mode::evolve: return "evolve";
        case Mode::onset: return "onset";
        case Mode::tof: return "tof";
        case Mode::units: return "units";
        case Mode::sweep: return "sweep";
    }
    return "?";
}

Mode parse_mode(const std::string& name) {
    for (Mode m : {Mode::spectrum, Mode::evolve, Mode::onset, Mode::tof, Mode::units, Mode::sweep})
        if (name == mode_name(m)) return m;
    throw std::invalid_argument("unknown mode '" + name + "'");
}

namespace {

class Reader {
public:
    std::vector<FieldError> errors;

    /// Checks that obj at path is an object holding only allowed keys.
    bool object(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
        if (!obj.is_object()) {
            errors.push_back({path.empty() ? "<root>" : path, "must be an object"});
            return false;
        }
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [key, _] : obj.items())
            if (!ok.count(key)) errors.push_back({join(path, key), "unknown field"});
        return true;
    }

    template <class T>
    void read(const json& obj, const std::string& path, const char* key, T& target) {
        if (!obj.contains(key)) return;
        try {
            target = obj.at(key).get<T>();
        } catch (const json::exception&) {
            errors.push_back({join(path, key), std::string("expected ") + expected<T>()});
        }
    }

    template <class T>
    void read(const json& obj, const std::string& path, const char* key, std::optional<T>& target) {
        if (!obj.contains(key) || obj.at(key).is_null()) return;
        T v{};
        read(obj, path, key, v);
        target = v;
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

private:
    template <class T>
    static const char* expected() {
        if constexpr (std::is_same_v<T, std::string>) return "a string";
        else if constexpr (std::is_same_v<T, bool>) return "a boolean";
        else if constexpr (std::is_integral_v<T>) return "an integer";
        else if constexpr (std::is_floating_point_v<T>) return "a number";
        else return "an array of numbers";
    }
};

void read_run(Reader& r, const json& j, RunConfig& run) {
    if (!r.object(j, "run", {"epsilon", "gamma", "kappa", "n0", "m_max", "seed_magnitude", "seed_mode_cutoff",
                              "fluctuation_scale", "rng_seed"}))
        return;
    r.read(j, "run", "epsilon", run.epsilon);
    r.read(j, "run", "gamma", run.gamma);
    r.read(j, "run", "kappa", run.kappa);
    r.read(j, "run", "n0", run.n0);
    r.read(j, "run", "m_max", run.m_max);
    r.read(j, "run", "seed_magnitude", run.seed_magnitude);
    r.read(j, "run", "seed_mode_cutoff", run.seed_mode_cutoff);
    r.read(j, "run", "fluctuation_scale", run.fluctuation_scale);
    r.read(j, "run", "rng_seed", run.rng_seed);
    // An explicit epsilon without gamma makes epsilon authoritative again.
    if (j.contains("epsilon") && !j.contains("gamma")) run.gamma.reset();
    if (j.contains("gamma") && !j.contains("epsilon")) run.epsilon.reset();
}

void read_integrator(Reader& r, const json& j, IntegratorSettings& s) {
    if (!r.object(j, "integrator", {"method", "dt", "rel_tol", "abs_tol", "sample_interval", "t_end", "min_step",
                                     "max_norm_drift", "max_energy_drift", "max_lz_drift"}))
        return;
    std::string method = method_name(s.method);
    r.read(j, "integrator", "method", method);
    if (method == "rk4") s.method = IntegratorSettings::Method::rk4;
    else if (method == "adaptive") s.method = IntegratorSettings::Method::adaptive;
    else r.errors.push_back({"integrator.method", "must be 'rk4' or 'adaptive'"});
    r.read(j, "integrator", "dt", s.dt);
    r.read(j, "integrator", "rel_tol", s.rel_tol);
    r.read(j, "integrator", "abs_tol", s.abs_tol);
    r.read(j, "integrator", "sample_interval", s.sample_interval);
    r.read(j, "integrator", "t_end", s.t_end);
    r.read(j, "integrator", "min_step", s.min_step);
    r.read(j, "integrator", "max_norm_drift", s.max_norm_drift);
    r.read(j, "integrator", "max_energy_drift", s.max_energy_drift);
    r.read(j, "integrator", "max_lz_drift", s.max_lz_drift);
}

void read_spectrum(Reader& r, const json& j, SpectrumOptions& s) {
    if (!r.object(j, "spectrum", {"kappa_min", "kappa_max", "kappa_points", "modes"})) return;
    r.read(j, "spectrum", "kappa_min", s.kappa_min);
    r.read(j, "spectrum", "kappa_max", s.kappa_max);
    r.read(j, "spectrum", "kappa_points", s.kappa_points);
    r.read(j, "spectrum", "modes", s.modes);
    if (s.kappa_points < 1) r.errors.push_back({"spectrum.kappa_points", "must be >= 1"});
    if (s.kappa_points > 1 && !(s.kappa_max > s.kappa_min))
        r.errors.push_back({"spectrum.kappa_max", "must exceed kappa_min"});
    if (s.modes.empty()) r.errors.push_back({"spectrum.modes", "must not be empty"});
}

Ring parse_ring(Reader& r, const std::string& path, const std::string& name) {
    if (name == "u") return Ring::upper;
    if (name == "d") return Ring::lower;
    r.errors.push_back({path, "must be 'u' or 'd'"});
    return Ring::upper;
}

void read_tof(Reader& r, const json& j, TofOptions& t) {
    if (!r.object(j, "tof", {"tau", "ring", "k_max", "resolution", "convention"})) return;
    r.read(j, "tof", "tau", t.taus);
    std::string ring = ring_name(t.ring);
    r.read(j, "tof", "ring", ring);
    t.ring = parse_ring(r, "tof.ring", ring);
    r.read(j, "tof", "k_max", t.k_max);
    r.read(j, "tof", "resolution", t.resolution);
    std::string conv = convention_name(t.convention);
    r.read(j, "tof", "convention", conv);
    try {
        t.convention = parse_convention(conv);
    } catch (const std::invalid_argument&) {
        r.errors.push_back({"tof.convention", "must be 'jacobi_anger' or 'printed'"});
    }
    if (t.taus.empty()) r.errors.push_back({"tof.tau", "must not be empty"});
    for (std::size_t i = 1; i < t.taus.size(); ++i)
        if (!(t.taus[i] > t.taus[i - 1])) r.errors.push_back({"tof.tau", "must be strictly increasing"});
    if (!t.taus.empty() && t.taus.front() < 0) r.errors.push_back({"tof.tau", "must be >= 0"});
    if (t.resolution < 2) r.errors.push_back({"tof.resolution", "must be >= 2"});
    if (!(t.k_max > 0)) r.errors.push_back({"tof.k_max", "must be > 0"});
}

void read_onset(Reader& r, const json& j, OnsetOptions& o) {
    if (!r.object(j, "onset", {"threshold", "fit_mode"})) return;
    r.read(j, "onset", "threshold", o.threshold);
    r.read(j, "onset", "fit_mode", o.fit_mode);
    if (!(o.threshold > 0 && o.threshold < 1)) r.errors.push_back({"onset.threshold", "must lie in (0, 1)"});
    if (o.fit_mode && *o.fit_mode <= 0) r.errors.push_back({"onset.fit_mode", "must be >= 1"});
}

const std::set<std::string> sweepable{"kappa", "epsilon", "n0", "rng_seed", "seed_magnitude", "fluctuation_scale"};

void read_sweep(Reader& r, const json& j, std::optional<SweepOptions>& out) {
    if (!r.object(j, "sweep", {"parameter", "values", "mode"})) return;
    SweepOptions s = out.value_or(SweepOptions{});
    r.read(j, "sweep", "parameter", s.parameter);
    r.read(j, "sweep", "values", s.values);
    std::string mode = mode_name(s.run_mode);
    r.read(j, "sweep", "mode", mode);
    if (mode == "evolve") s.run_mode = Mode::evolve;
    else if (mode == "onset") s.run_mode = Mode::onset;
    else r.errors.push_back({"sweep.mode", "must be 'evolve' or 'onset'"});
    if (!sweepable.count(s.parameter))
        r.errors.push_back({"sweep.parameter", "must be one of kappa, epsilon, n0, rng_seed, seed_magnitude, fluctuation_scale"});
    if (s.values.empty()) r.errors.push_back({"sweep.values", "must not be empty"});
    std::set<double> seen(s.values.begin(), s.values.end());
    if (seen.size() != s.values.size()) r.errors.push_back({"sweep.values", "must not repeat"});
    out = s;
}

void read_physical(Reader& r, const json& j, std::optional<units::PhysicalParams>& out) {
    if (!r.object(j, "physical", {"atom_mass", "scattering_length", "a_rho", "a_z", "ring_radius", "z0"})) return;
    units::PhysicalParams p = out.value_or(units::PhysicalParams{});
    r.read(j, "physical", "atom_mass", p.atom_mass);
    r.read(j, "physical", "scattering_length", p.scattering_length);
    r.read(j, "physical", "a_rho", p.a_rho);
    r.read(j, "physical", "a_z", p.a_z);
    r.read(j, "physical", "ring_radius", p.ring_radius);
    r.read(j, "physical", "z0", p.z0);
    out = p;
}

void read_potential(Reader& r, const json& j, PotentialSpec& p) {
    if (!r.object(j, "potential", {"type", "z0", "half_width", "points", "z", "v", "energy_reference"})) return;
    std::string type = "none";
    r.read(j, "potential", "type", type);
    if (type == "none") p.kind = PotentialSpec::Kind::none;
    else if (type == "harmonic") p.kind = PotentialSpec::Kind::harmonic;
    else if (type == "double_harmonic") p.kind = PotentialSpec::Kind::double_harmonic;
    else if (type == "tabulated") p.kind = PotentialSpec::Kind::tabulated;
    else r.errors.push_back({"potential.type", "must be none, harmonic, double_harmonic or tabulated"});
    r.read(j, "potential", "z0", p.z0);
    r.read(j, "potential", "half_width", p.half_width);
    r.read(j, "potential", "points", p.points);
    r.read(j, "potential", "z", p.table.z);
    r.read(j, "potential", "v", p.table.v);
    std::string ref = p.reference == units::EnergyReference::on_site ? "on_site" : "as_given";
    r.read(j, "potential", "energy_reference", ref);
    if (ref == "as_given") p.reference = units::EnergyReference::as_given;
    else if (ref == "on_site") p.reference = units::EnergyReference::on_site;
    else r.errors.push_back({"potential.energy_reference", "must be 'as_given' or 'on_site'"});
    if (p.kind == PotentialSpec::Kind::tabulated && p.table.z.size() != p.table.v.size())
        r.errors.push_back({"potential.v", "must have the same length as potential.z"});
}

json integrator_json(const IntegratorSettings& s) {
    return {{"method", method_name(s.method)}, {"dt", s.dt}, {"rel_tol", s.rel_tol}, {"abs_tol", s.abs_tol},
            {"sample_interval", s.sample_interval}, {"t_end", s.t_end}, {"min_step", s.min_step},
            {"max_norm_drift", s.max_norm_drift}, {"max_energy_drift", s.max_energy_drift},
            {"max_lz_drift", s.max_lz_drift}};
}

json run_json(const CheckedConfig& c) {
    return {{"epsilon", c.epsilon()},
            {"gamma", c.gamma()},
            {"kappa", c.kappa()},
            {"n0", c.n0()},
            {"m_max", c.m_max()},
            {"seed_magnitude", c.seed_magnitude()},
            {"seed_mode_cutoff", c.seed_mode_cutoff()},
            {"fluctuation_scale", c.fluctuation_scale()},
            {"rng_seed", c.rng_seed()}};
}

json physical_json(const units::PhysicalParams& p) {
    json j = {{"atom_mass", p.atom_mass}, {"scattering_length", p.scattering_length}, {"a_rho", p.a_rho},
              {"a_z", p.a_z}, {"ring_radius", p.ring_radius}};
    if (p.z0) j["z0"] = *p.z0;
    return j;
}

json potential_json(const PotentialSpec& p) {
    static const char* kinds[] = {"none", "harmonic", "double_harmonic", "tabulated"};
    json j = {{"type", kinds[static_cast<int>(p.kind)]},
              {"energy_reference", p.reference == units::EnergyReference::on_site ? "on_site" : "as_given"}};
    if (p.kind == PotentialSpec::Kind::double_harmonic) j["z0"] = p.z0;
    if (p.kind == PotentialSpec::Kind::harmonic || p.kind == PotentialSpec::Kind::double_harmonic) {
        j["half_width"] = p.half_width;
        j["points"] = p.points;
    }
    if (p.kind == PotentialSpec::Kind::tabulated) {
        j["z"] = p.table.z;
        j["v"] = p.table.v;
    }
    return j;
}

}  // namespace

ExperimentSpec parse_spec(const json& doc, ExperimentSpec base) {
    Reader r;
    if (r.object(doc, "", {"schema", "mode", "run", "integrator", "spectrum", "tof", "onset", "sweep", "physical",
                           "potential"})) {
        if (!doc.contains("schema")) {
            r.errors.push_back({"schema", std::string("missing; expected \"") + config_schema + "\""});
        } else if (!doc.at("schema").is_string() || doc.at("schema").get<std::string>() != config_schema) {
            r.errors.push_back({"schema", std::string("unsupported; expected \"") + config_schema + "\""});
        }
        if (doc.contains("mode")) {
            std::string m;
            r.read(doc, "", "mode", m);
            try {
                base.mode = parse_mode(m);
            } catch (const std::invalid_argument& e) {
                r.errors.push_back({"mode", e.what()});
            }
        }
        if (doc.contains("run")) read_run(r, doc.at("run"), base.run);
        if (doc.contains("integrator")) read_integrator(r, doc.at("integrator"), base.run.integrator);
        if (doc.contains("spectrum")) read_spectrum(r, doc.at("spectrum"), base.spectrum);
        if (doc.contains("tof")) read_tof(r, doc.at("tof"), base.tof);
        if (doc.contains("onset")) read_onset(r, doc.at("onset"), base.onset);
        if (doc.contains("sweep")) read_sweep(r, doc.at("sweep"), base.sweep);
        if (doc.contains("physical")) read_physical(r, doc.at("physical"), base.physical);
        if (doc.contains("potential")) read_potential(r, doc.at("potential"), base.potential);
    }
    if (base.mode == Mode::sweep && !base.sweep) r.errors.push_back({"sweep", "required for mode sweep"});
    if (!r.errors.empty()) throw ConfigError(std::move(r.errors));
    return base;
}

json canonical_config(const ExperimentSpec& spec) {
    json j;
    j["schema"] = config_schema;
    j["mode"] = mode_name(spec.mode);
    const bool needs_run = spec.mode != Mode::spectrum && spec.mode != Mode::units;
    if (spec.mode == Mode::spectrum) {
        if (!spec.run.epsilon && !spec.run.gamma) throw ConfigError("run.epsilon", "required for spectrum");
        const auto checked = validate_config(spec.run);
        j["run"] = {{"epsilon", checked.epsilon()}};
        j["spectrum"] = {{"kappa_min", spec.spectrum.kappa_min},
                         {"kappa_max", spec.spectrum.kappa_max},
                         {"kappa_points", spec.spectrum.kappa_points},
                         {"modes", spec.spectrum.modes}};
    }
    if (needs_run) {
        const auto checked = validate_config(spec.run);
        j["run"] = run_json(checked);
        j["integrator"] = integrator_json(checked.integrator());
    }
    if (spec.mode == Mode::tof)
        j["tof"] = {{"tau", spec.tof.taus},
                    {"ring", ring_name(spec.tof.ring)},
                    {"k_max", spec.tof.k_max},
                    {"resolution", spec.tof.resolution},
                    {"convention", convention_name(spec.tof.convention)}};
    const bool onset_like = spec.mode == Mode::onset || (spec.sweep && spec.sweep->run_mode == Mode::onset);
    if (onset_like) {
        j["onset"] = {{"threshold", spec.onset.threshold}};
        if (spec.onset.fit_mode) j["onset"]["fit_mode"] = *spec.onset.fit_mode;
    }
    if (spec.mode == Mode::sweep && spec.sweep)
        j["sweep"] = {{"parameter", spec.sweep->parameter},
                      {"values", spec.sweep->values},
                      {"mode", mode_name(spec.sweep->run_mode)}};
    if (spec.physical) j["physical"] = physical_json(*spec.physical);
    if (spec.mode == Mode::units) {
        if (spec.run.epsilon) j["run"] = {{"epsilon", *spec.run.epsilon}};
        j["potential"] = potential_json(spec.potential);
    }
    return j;
}

std::string config_hash(const ExperimentSpec& spec) {
    const std::string text = canonical_config(spec).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace ringbec::cli
