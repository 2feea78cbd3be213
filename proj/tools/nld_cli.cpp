#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nld/acceptance.hpp"
#include "nld/config.hpp"
#include "nld/error.hpp"
#include "nld/experiments.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> n_paths;
    std::optional<unsigned> threads;
    std::optional<std::string> out;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--n-paths", o.n_paths, "Monte-Carlo paths per point");
    cmd->add_option("--threads", o.threads, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "output directory");
}

int report(const nld::ExperimentConfig& cfg, const nld::RunResult& r) {
    for (const auto& c : r.checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << cfg.name << ' ' << c.name << " | " << c.detail << '\n';
    if (!r.error.empty()) std::cerr << "error: " << cfg.name << ": " << r.error << '\n';
    std::cout << cfg.name << ": " << r.artifacts.size() << " artifact(s) in " << cfg.output_dir << " ("
              << r.wall_time_s << " s)\n";
    return r.exit_code;
}

int combine(int a, int b) {
    if (a == nld::kExitRuntime || b == nld::kExitRuntime) return nld::kExitRuntime;
    return a != nld::kExitOk ? a : b;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal drift-diffusion experiments: Monte-Carlo paths, barrier quadrature, finite differences"};
    app.set_version_flag("--version", std::string(nld::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    Overrides overrides;
    std::vector<std::pair<CLI::App*, nld::ExperimentKind>> kind_cmds;
    for (const std::string& name : nld::kind_names()) {
        CLI::App* cmd = app.add_subcommand(name, "run a " + name + " experiment from a JSON config");
        cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
        add_overrides(cmd, overrides);
        kind_cmds.emplace_back(cmd, nld::parse_kind(name));
    }

    std::string preset_name;
    CLI::App* preset = app.add_subcommand("preset", "run a built-in experiment");
    preset->add_option("name", preset_name, "preset name")->required()->check(CLI::IsMember(nld::preset_names()));
    add_overrides(preset, overrides);

    nld::AcceptanceOptions acc;
    CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--seed", acc.seed, "master seed");
    verify->add_option("--threads", acc.threads, "worker threads")->check(CLI::PositiveNumber);
    verify->add_option("--out", acc.out_dir, "artifact directory");
    verify->add_option("--path-scale", acc.path_scale, "multiplier on Monte-Carlo path counts")
        ->check(CLI::PositiveNumber);
    verify->add_option("--only", acc.only, "criterion numbers to run")->check(CLI::Range(1, 11));
    verify->add_option("--repro-threads", acc.repro_threads, "thread count compared in criterion 11")
        ->check(CLI::PositiveNumber);
    verify->add_option("--repro-scale", acc.repro_scale, "path scale of the criterion 11 reruns")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return nld::kExitConfig;
    }

    if (verify->parsed()) {
        acc.log = &std::cout;
        try {
            const auto rep = nld::run_acceptance(acc);
            int passed = 0;
            for (const auto& r : rep.results) passed += r.pass;
            std::cout << passed << "/" << rep.results.size() << " criteria passed\n";
            return rep.all_pass() ? nld::kExitOk : nld::kExitAcceptance;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return nld::kExitRuntime;
        }
    }

    std::vector<nld::ExperimentConfig> configs;
    try {
        if (preset->parsed()) {
            for (const auto& doc : nld::preset_configs(preset_name)) configs.push_back(nld::parse_config(doc));
        } else {
            for (const auto& [cmd, kind] : kind_cmds) {
                if (!cmd->parsed()) continue;
                nld::ExperimentConfig cfg = nld::load_config(config_path);
                if (cfg.kind != kind)
                    throw nld::ConfigError("/kind", "config is '" + nld::to_string(cfg.kind) + "' but the subcommand is '" +
                                                        nld::to_string(kind) + "'");
                configs.push_back(std::move(cfg));
            }
        }
        for (auto& cfg : configs)
            nld::apply_overrides(cfg, overrides.seed, overrides.n_paths, overrides.threads, overrides.out);
    } catch (const nld::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return nld::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return nld::kExitConfig;
    }

    int code = nld::kExitOk;
    for (const auto& cfg : configs) code = combine(code, report(cfg, nld::run_experiment(cfg)));
    return code;
}
