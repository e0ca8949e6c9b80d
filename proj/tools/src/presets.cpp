#include "experiment.hpp"

namespace ringbec::cli {

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig1a", "fig1b", "fig2a", "fig2b", "fig3", "fig4", "units-rb87"};
    return names;
}

ExperimentSpec preset(const std::string& name) {
    ExperimentSpec s;
    s.preset = name;
    s.run.epsilon = 2.0;
    if (name == "fig1a" || name == "fig1b") {
        s.mode = Mode::spectrum;
        s.run.epsilon = name == "fig1a" ? 1.0 : 2.0;
        s.spectrum = {0.0, 6.0, 601, {1, 2, 3}};
    } else if (name == "fig2a" || name == "fig2b") {
        s.mode = Mode::evolve;
        s.run.kappa = name == "fig2a" ? 1.6 : 3.2;
        s.run.integrator.t_end = 10.0;
    } else if (name == "fig3") {
        s.mode = Mode::onset;
        s.run.kappa = 2.1;
        s.run.integrator.t_end = 100.0;
        s.onset.fit_mode = 2;
    } else if (name == "fig4") {
        s.mode = Mode::tof;
        s.run.kappa = 1.6;
        s.tof.taus = {0.0, 10.7, 63.5};
        s.run.integrator.t_end = 63.5;
    } else if (name == "units-rb87") {
        s.mode = Mode::units;
        units::PhysicalParams p;  // 87Rb, R = 1.2 um, a_rho = 0.3 um, a_z = 0.5 um, a = 5.2 nm
        s.physical = p;
        s.potential.kind = PotentialSpec::Kind::double_harmonic;
        s.potential.z0 = 2.5 * p.a_z;
        s.potential.reference = units::EnergyReference::on_site;
    } else {
        std::string known;
        for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("preset", "unknown preset '" + name + "' (known: " + known + ")");
    }
    return s;
}

}  // namespace ringbec::cli
