#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "experiment.hpp"

using namespace ringbec;
using namespace ringbec::cli;

namespace {

struct Flags {
    std::string config;
    std::string preset;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    int threads = 1;
    bool print_config = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", f.preset, "start from a named preset");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--seed", f.seed, "rng seed override");
    cmd->add_option("--threads", f.threads, "worker threads for sweeps and TOF images")->check(CLI::PositiveNumber);
    cmd->add_flag("--print-config", f.print_config, "print the canonical config and exit");
}

ExperimentSpec build(const Flags& f, std::optional<Mode> verb) {
    ExperimentSpec spec = f.preset.empty() ? ExperimentSpec{} : preset(f.preset);
    if (verb) spec.mode = *verb;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("config", std::string("invalid JSON: ") + e.what());
        }
        spec = parse_spec(doc, spec);
        if (verb && doc.contains("mode") && spec.mode != *verb)
            throw ConfigError("mode", std::string("config says '") + mode_name(spec.mode) + "' but the verb is '" +
                                            mode_name(*verb) + "'");
    }
    if (f.seed) spec.run.rng_seed = *f.seed;
    spec.out = f.out;
    spec.threads = f.threads;
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ringbec: dynamics of two tunnel-coupled ring condensates"};
    app.require_subcommand(1);
    Flags flags;

    std::vector<std::pair<CLI::App*, Mode>> verbs;
    for (Mode m : {Mode::spectrum, Mode::evolve, Mode::onset, Mode::tof, Mode::units, Mode::sweep}) {
        auto* cmd = app.add_subcommand(mode_name(m));
        add_common(cmd, flags);
        verbs.emplace_back(cmd, m);
    }
    verbs[0].first->description("Bogoliubov spectrum and stability chart");
    verbs[1].first->description("integrate one trajectory");
    verbs[2].first->description("integrate and detect the onset of imbalance oscillations");
    verbs[3].first->description("time-of-flight images at chosen times");
    verbs[4].first->description("physical scales and tunnel coupling");
    verbs[5].first->description("parallel sweep over one run parameter");

    auto* pcmd = app.add_subcommand("preset", "run a named preset, or list them");
    std::string pname;
    pcmd->add_option("name", pname, "preset name");
    add_common(pcmd, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        std::optional<Mode> verb;
        for (auto& [cmd, m] : verbs)
            if (cmd->parsed()) verb = m;
        if (pcmd->parsed()) {
            if (pname.empty()) pname = flags.preset;
            if (pname.empty()) {
                for (const auto& n : preset_names()) std::cout << n << '\n';
                return exit_ok;
            }
            flags.preset = pname;
        }
        const auto spec = build(flags, verb);
        if (flags.print_config) {
            std::cout << canonical_config(spec).dump(2) << '\n';
            return exit_ok;
        }
        return run(spec, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
}
