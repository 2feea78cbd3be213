#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nld/acceptance.hpp"
#include "nld/config.hpp"
#include "nld/experiments.hpp"

using namespace nld;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "nld_experiment_tests";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

json unit_problem(double alpha, const std::string& drift) {
    return {{"domain", {{"type", "interval"}, {"a", 0.0}, {"b", 1.0}}}, {"drift", drift}, {"alpha", alpha}};
}

RunResult run(json doc, const std::string& name) {
    doc["name"] = name;
    doc["output_dir"] = (kRoot / name).string();
    return run_experiment(parse_config(doc));
}

}  // namespace

TEST_CASE("every kind writes its table and manifest") {
    fs::remove_all(kRoot);
    struct Case {
        json doc;
        std::string header;
    };
    const std::vector<std::pair<std::string, Case>> cases{
        {"et", {{{"kind", "exit-time"}, {"problem", unit_problem(1.2, "zero")}, {"x", {0.5}}, {"max_order", 2},
                 {"n_paths", 200}},
                "x,order,mean,stderr,censored_frac"}},
        {"ep", {{{"kind", "exit-position"}, {"problem", unit_problem(0.5, "constant-one")}, {"x", {0.5}},
                 {"eps", {1e-2, 1e-3}}, {"n_paths", 200}},
                "x,eps,component,fraction"}},
        {"mc", {{{"kind", "solve-mc"}, {"problem", unit_problem(0.5, "example13")}, {"x", {0.25, 0.5}},
                 {"times", {0.1, 0.2}}, {"n_paths", 200}},
                "t,x,value,stderr"}},
        {"fd", {{{"kind", "solve-fd"}, {"problem", unit_problem(0.5, "example13")}, {"x", {0.25, 0.5}},
                 {"times", {0.1, 0.2}}, {"grid", {{"N", 50}}}},
                "t,x,value,stderr"}},
        {"br", {{{"kind", "barrier"},
                 {"barrier", {{"geometry", "half-space"}, {"alphas", {0.5}}, {"theta_fractions", {0.25, 0.75}}}}},
                "alpha,theta,distance,value,err_bound"}},
        {"ra", {{{"kind", "ratio"}, {"problem", unit_problem(1.5, "constant-one")}, {"x", {0.25, 0.5}},
                 {"n_paths", 200}},
                "x,e_tau,denominator,ratio,stderr"}},
        {"de", {{{"kind", "decay"}, {"problem", unit_problem(0.5, "minusx")}, {"x", {0.1, 0.05}}, {"t", 0.2},
                 {"n_paths", 200}},
                "x,d_x,u,stderr,ratio_linear,ratio_theta"}},
    };
    for (const auto& [name, c] : cases) {
        CAPTURE(name);
        const RunResult r = run(c.doc, name);
        CHECK(r.exit_code == kExitOk);
        CHECK(r.error.empty());
        CHECK(first_line(kRoot / name / (name + ".csv")) == c.header);
        const json m = json::parse(slurp(kRoot / name / (name + ".manifest.json")));
        CHECK(m["status"] == "ok");
        CHECK(m["config_hash"].get<std::string>().size() == 16);
        CHECK(m.contains("wall_time_s"));
        CHECK(m["seed"] == 42);
    }
    CHECK(fs::exists(kRoot / "ep" / "ep_hist.csv"));
    CHECK(fs::exists(kRoot / "fd" / "fd_grid.csv"));
}

TEST_CASE("failed checks and runtime errors map to exit codes") {
    json doc = {{"kind", "ratio"},
                {"problem", unit_problem(1.5, "constant-one")},
                {"x", {0.05, 0.5}},
                {"n_paths", 200},
                {"checks", {{{"name", "impossible"}, {"rule", "flatness"}, {"factor", 1.0000001}}}}};
    const RunResult r = run(doc, "flat");
    CHECK(r.exit_code == kExitAcceptance);
    REQUIRE(r.checks.size() == 1);
    CHECK_FALSE(r.checks[0].pass);

    json fd = {{"kind", "solve-fd"},
               {"problem", unit_problem(0.5, "minusx")},
               {"times", {0.5}},
               {"grid", {{"N", 99}, {"dt", 0.1}}}};
    const RunResult bad = run(fd, "cfl");
    CHECK(bad.exit_code == kExitRuntime);
    CHECK(bad.error.find("CFL") != std::string::npos);
    const json m = json::parse(slurp(kRoot / "cfl" / "cfl.manifest.json"));
    CHECK(m["status"] == "failed");
}

TEST_CASE("tables are identical across thread counts") {
    json doc = {{"kind", "solve-mc"},
                {"problem", unit_problem(0.5, "minusx")},
                {"x", {0.1, 0.3}},
                {"times", {0.2, 0.4}},
                {"n_paths", 500}};
    doc["threads"] = 1;
    run(doc, "t1");
    doc["threads"] = 6;
    run(doc, "t6");
    CHECK(slurp(kRoot / "t1" / "t1.csv") == slurp(kRoot / "t6" / "t6.csv"));
    CHECK(compare_directories((kRoot / "t1").string(), (kRoot / "t1").string()).empty());
    CHECK(compare_directories((kRoot / "t1").string(), (kRoot / "t6").string()).size() == 4);
}

TEST_CASE("presets parse") {
    for (const std::string& name : preset_names()) {
        CAPTURE(name);
        const auto docs = preset_configs(name);
        CHECK_FALSE(docs.empty());
        for (const json& d : docs) CHECK_NOTHROW(parse_config(d));
    }
    CHECK_THROWS(preset_configs("figure2"));
}

TEST_CASE("shipped config files match the presets") {
    std::size_t count = 0;
    for (const std::string& name : preset_names())
        for (const json& d : preset_configs(name)) {
            const fs::path file = fs::path(NLD_CONFIG_DIR) / (d["name"].get<std::string>() + ".json");
            CAPTURE(file.string());
            REQUIRE(fs::exists(file));
            CHECK(json::parse(slurp(file)) == d);
            ++count;
        }
    CHECK(count == 8);
}
