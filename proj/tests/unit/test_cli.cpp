#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "experiment.hpp"

using namespace ringbec;
using namespace ringbec::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("ringbec_test_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

json base_doc() { return json{{"schema", config_schema}, {"run", {{"epsilon", 2.0}, {"kappa", 1.6}}}}; }

ExperimentSpec short_run(Mode mode, const fs::path& out) {
    auto s = parse_spec(base_doc());
    s.mode = mode;
    s.out = out;
    s.run.integrator.t_end = 1.0;
    s.run.m_max = 6;
    return s;
}

int invoke(const std::string& args) {
    const std::string cmd = std::string(RINGBEC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> error_fields(const json& doc) {
    try {
        parse_spec(doc);
    } catch (const ConfigError& e) {
        std::vector<std::string> fields;
        for (const auto& f : e.errors()) fields.push_back(f.field);
        return fields;
    }
    return {};
}

}  // namespace

TEST_CASE("config parsing reports every bad field") {
    auto doc = base_doc();
    doc["run"]["kappa"] = "x";
    doc["tof"] = {{"ring", "q"}};
    doc["integrator"] = {{"method", "euler"}};
    const auto fields = error_fields(doc);
    CHECK(fields.size() == 3);
    CHECK(std::count(fields.begin(), fields.end(), "run.kappa") == 1);
    CHECK(std::count(fields.begin(), fields.end(), "tof.ring") == 1);
    CHECK(std::count(fields.begin(), fields.end(), "integrator.method") == 1);

    CHECK(error_fields(json{{"run", {{"epsilon", 1.0}}}}) == std::vector<std::string>{"schema"});
    CHECK(error_fields(base_doc()).empty());
}

TEST_CASE("config hash") {
    const auto a = parse_spec(base_doc());
    const auto h = config_hash(a);
    CHECK(h.size() == 16);
    CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(config_hash(parse_spec(base_doc())) == h);

    auto b = a;
    b.run.kappa = 1.6000001;
    CHECK(config_hash(b) != h);
    b = a;
    b.run.rng_seed = 2;
    CHECK(config_hash(b) != h);

    // Output location and thread count do not change the results.
    b = a;
    b.out = "/elsewhere";
    b.threads = 8;
    CHECK(config_hash(b) == h);

    // Both interaction parameters resolve to the same canonical run.
    auto doc = base_doc();
    doc["run"].erase("epsilon");
    doc["run"]["gamma"] = 2.0 * 4.0 * 3.14159265358979323846 / 2e4;
    CHECK(canonical_config(parse_spec(doc))["run"]["epsilon"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("presets") {
    CHECK(preset_names().size() == 7);
    CHECK(preset("fig2b").run.kappa == 3.2);
    CHECK(preset("fig3").run.kappa == 2.1);
    CHECK(preset("fig3").mode == Mode::onset);
    CHECK(preset("fig4").mode == Mode::tof);
    CHECK(preset("fig4").tof.taus.size() > 1);
    CHECK(preset("units-rb87").physical.has_value());
    CHECK_THROWS(preset("fig9"));
    for (const auto& n : preset_names()) CHECK_NOTHROW(canonical_config(preset(n)));
}

TEST_CASE("runs write outputs and a manifest") {
    TempDir dir("run");
    std::ostringstream log;
    REQUIRE(run(short_run(Mode::evolve, dir.path), log) == exit_ok);

    const auto manifest = json::parse(slurp(dir.path / "manifest.json"));
    CHECK(manifest["schema"] == manifest_schema);
    CHECK(manifest["mode"] == "evolve");
    CHECK(manifest["config_hash"] == config_hash(short_run(Mode::evolve, dir.path)));
    CHECK(manifest["conservation"]["flagged"] == false);
    for (const auto& f : manifest["files"]) {
        const fs::path p = dir.path / f["path"].get<std::string>();
        REQUIRE(fs::exists(p));
        CHECK(fs::file_size(p) == f["bytes"].get<std::uintmax_t>());
    }
    CHECK(slurp(dir.path / "trajectory.csv").rfind("tau,", 0) == 0);

    const auto first = slurp(dir.path / "trajectory.csv");
    REQUIRE(run(short_run(Mode::evolve, dir.path), log) == exit_ok);
    CHECK(slurp(dir.path / "trajectory.csv") == first);
}

TEST_CASE("sweeps") {
    TempDir dir("sweep");
    auto s = short_run(Mode::sweep, dir.path);
    s.sweep = SweepOptions{"kappa", {0.5, 1.25}, Mode::evolve};
    s.threads = 2;
    std::ostringstream log;
    REQUIRE(run(s, log) == exit_ok);
    CHECK(fs::exists(dir.path / "kappa=0.5" / "trajectory.csv"));
    CHECK(fs::exists(dir.path / "kappa=1.25" / "trajectory.csv"));
    std::ifstream csv(dir.path / "sweep.csv");
    std::string header, row1, row2;
    std::getline(csv, header);
    std::getline(csv, row1);
    std::getline(csv, row2);
    CHECK(row1.rfind("0.5,", 0) == 0);
    CHECK(row2.rfind("1.25,", 0) == 0);
}

TEST_CASE("command line") {
    TempDir dir("exe");
    const auto cfg = dir.path / "config.json";
    {
        auto doc = base_doc();
        doc["integrator"] = {{"t_end", 0.5}};
        doc["run"]["m_max"] = 6;
        std::ofstream(cfg) << doc.dump();
    }
    CHECK(invoke("evolve --config " + cfg.string() + " --out " + (dir.path / "a").string()) == exit_ok);
    CHECK(fs::exists(dir.path / "a" / "manifest.json"));
    CHECK(invoke("evolve --config " + cfg.string() + " --seed 7 --print-config") == exit_ok);

    const auto bad = dir.path / "bad.json";
    std::ofstream(bad) << R"({"schema":"ringbec.config/1","run":{"kappa":"x"}})";
    CHECK(invoke("evolve --config " + bad.string()) == exit_config);

    const auto conflict = dir.path / "conflict.json";
    std::ofstream(conflict) << R"({"schema":"ringbec.config/1","mode":"tof","run":{"epsilon":1,"kappa":1}})";
    CHECK(invoke("evolve --config " + conflict.string()) == exit_config);

    CHECK(invoke("preset") == exit_ok);
    CHECK(invoke("preset fig9") != exit_ok);
    CHECK(invoke("nonsense") != exit_ok);

    auto tight = base_doc();
    tight["integrator"] = {{"t_end", 0.5}, {"method", "rk4"}, {"dt", 0.05}, {"max_norm_drift", 1e-15}};
    tight["run"]["m_max"] = 6;
    const auto tight_cfg = dir.path / "tight.json";
    std::ofstream(tight_cfg) << tight.dump();
    CHECK(invoke("evolve --config " + tight_cfg.string() + " --out " + (dir.path / "b").string()) == exit_conservation);
}
