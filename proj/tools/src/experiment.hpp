#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringbec/tof.hpp"
#include "ringbec/types.hpp"
#include "ringbec/units.hpp"

namespace ringbec::cli {

using json = nlohmann::json;

inline constexpr const char* config_schema = "ringbec.config/1";
inline constexpr const char* manifest_schema = "ringbec.manifest/1";

enum class Mode { spectrum, evolve, onset, tof, units, sweep };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& name);

struct SpectrumOptions {
    double kappa_min = 0.0;
    double kappa_max = 6.0;
    int kappa_points = 601;
    std::vector<int> modes{1, 2, 3};
};

struct TofOptions {
    std::vector<double> taus{0.0};
    Ring ring = Ring::upper;
    double k_max = 12.0;
    int resolution = 201;
    PhaseConvention convention = PhaseConvention::jacobi_anger;
};

struct OnsetOptions {
    double threshold = 0.1;
    std::optional<int> fit_mode;  ///< default: fastest growing seeded mode
};

struct SweepOptions {
    std::string parameter;
    std::vector<double> values;
    Mode run_mode = Mode::evolve;
};

struct PotentialSpec {
    enum class Kind { none, harmonic, double_harmonic, tabulated };
    Kind kind = Kind::none;
    double z0 = 0.0;
    double half_width = 0.0;  ///< 0 selects z0 + 10 a_z
    int points = 16001;
    units::AxialPotential table;
    units::EnergyReference reference = units::EnergyReference::as_given;
};

struct ExperimentSpec {
    Mode mode = Mode::evolve;
    std::string preset;
    RunConfig run;
    SpectrumOptions spectrum;
    TofOptions tof;
    OnsetOptions onset;
    std::optional<SweepOptions> sweep;
    std::optional<units::PhysicalParams> physical;
    PotentialSpec potential;
    std::filesystem::path out = ".";
    int threads = 1;
};

/// Reads a config document. Every problem is collected and thrown as one
/// ConfigError with dotted field paths. Fields absent from the document keep
/// the values already in `base`.
ExperimentSpec parse_spec(const json& doc, ExperimentSpec base = {});

/// Canonical, fully resolved configuration of the parts that affect the
/// outputs of spec.mode. Throws ConfigError if the run parameters are invalid.
json canonical_config(const ExperimentSpec& spec);

/// FNV-1a 64 of the compact canonical dump, as 16 hex digits.
std::string config_hash(const ExperimentSpec& spec);

const std::vector<std::string>& preset_names();
ExperimentSpec preset(const std::string& name);

/// Exit codes of run().
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_conservation = 3;

/// Executes spec, writing outputs and manifest.json into spec.out.
int run(const ExperimentSpec& spec, std::ostream& log);

}  // namespace ringbec::cli
