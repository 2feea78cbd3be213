#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nld/config.hpp"
#include "nld/error.hpp"

using namespace nld;
using nlohmann::json;

namespace {

std::string error_path(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

json exit_time_doc() {
    return json::parse(R"({
        "kind": "exit-time",
        "problem": {"domain": {"type": "interval", "a": 0, "b": 1}, "drift": "constant-one", "alpha": 0.5},
        "x": [0.2, 0.5],
        "max_order": 2,
        "n_paths": 1000
    })");
}

}  // namespace

TEST_CASE("kind is required and checked first") {
    CHECK(error_path(json::object()) == "/kind");
    CHECK(error_path(json{{"kind", "bogus"}, {"whatever", 1}}) == "/kind");
    CHECK(error_path(json::array()) == "");
}

TEST_CASE("empty config file reports the missing kind") {
    const auto path = std::filesystem::temp_directory_path() / "nld_empty_config.json";
    std::ofstream(path) << "  \n";
    try {
        load_config(path.string());
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.path() == "/kind");
        CHECK(std::string(e.what()) == "/kind: missing required field");
    }
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("a valid exit-time config") {
    const ExperimentConfig cfg = parse_config(exit_time_doc());
    CHECK(cfg.kind == ExperimentKind::ExitTime);
    CHECK(cfg.name == "exit-time");
    CHECK(cfg.output_dir == "out/exit-time");
    CHECK(cfg.x.size() == 2);
    CHECK(cfg.max_order == 2);
    CHECK(cfg.seed == 42);
    REQUIRE(cfg.problem);
    CHECK(cfg.problem->law.alpha() == 0.5);
}

TEST_CASE("errors point at the offending field") {
    json doc = exit_time_doc();
    doc["problem"]["alpha"] = 2.5;
    CHECK(error_path(doc) == "/problem/alpha");

    doc = exit_time_doc();
    doc["x"] = {0.2, 1.5};
    CHECK(error_path(doc) == "/x/1");

    doc = exit_time_doc();
    doc["problem"]["domain"]["typo"] = 1;
    CHECK(error_path(doc) == "/problem/domain/typo");

    doc = exit_time_doc();
    doc["n_paths"] = 10;
    CHECK(error_path(doc) == "/n_paths");

    doc = exit_time_doc();
    doc["checks"] = json::parse(R"([{"name": "c", "rule": "flatness", "factor": 3}])");
    CHECK(error_path(doc) == "/checks/0/rule");

    doc = exit_time_doc();
    doc["checks"] = json::parse(R"([{"name": "c", "rule": "min-ratio", "factor": 0.25, "reference_x": 0.3}])");
    CHECK(error_path(doc) == "/checks/0/reference_x");

    doc = exit_time_doc();
    doc["problem"]["drift"] = "sideways";
    CHECK(error_path(doc).rfind("/problem/drift", 0) == 0);
}

TEST_CASE("overrides and the config hash") {
    ExperimentConfig cfg = parse_config(exit_time_doc());
    const std::string h = config_hash(cfg);
    CHECK(h.size() == 16);
    apply_overrides(cfg, std::nullopt, std::nullopt, 8u, std::string("elsewhere"));
    CHECK(cfg.threads == 8);
    CHECK(cfg.output_dir == "elsewhere");
    CHECK(config_hash(cfg) == h);
    apply_overrides(cfg, 7u, 5000u, std::nullopt, std::nullopt);
    CHECK(cfg.seed == 7);
    CHECK(cfg.n_paths == 5000);
    CHECK(config_hash(cfg) != h);
}

TEST_CASE("other kinds") {
    const json fd = json::parse(R"({
        "kind": "solve-fd", "name": "fd",
        "problem": {"domain": {"type": "interval", "a": 0, "b": 1}, "drift": "example13", "alpha": 0.5,
                    "phi": {"type": "sin_affine", "a": 3, "b": 1.5707963267948966}},
        "times": [0.25, 0.5], "grid": {"N": 100}
    })");
    const ExperimentConfig f = parse_config(fd);
    CHECK(f.grid.N == 100);
    CHECK_FALSE(f.grid.dt.has_value());

    const json barrier = json::parse(R"({
        "kind": "barrier",
        "barrier": {"geometry": "ball-exterior", "radius": 2, "dim": 2, "alphas": [0.5],
                    "thetas": [0.1], "kernel": {"type": "radial", "inner": 2, "outer": 0.5, "transition": 1}}
    })");
    const ExperimentConfig b = parse_config(barrier);
    CHECK(b.barrier.dim == 2);
    CHECK(b.barrier.kernel.kind == KernelSpec::Kind::Radial);

    json bad = barrier;
    bad["barrier"]["thetas"] = json::array();
    CHECK(error_path(bad) == "/barrier/thetas");

    const json ratio = json::parse(R"({
        "kind": "ratio",
        "problem": {"domain": {"type": "interval", "a": 0, "b": 1}, "drift": "constant-one", "alpha": 1.5}
    })");
    CHECK(parse_config(ratio).x.size() == 19);
}
