#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "nld/acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Acceptance suite: one PASS/FAIL line per criterion"};
    nld::AcceptanceOptions opts;
    opts.threads = std::max(1u, std::thread::hardware_concurrency());
    opts.out_dir = "acceptance-out";
    app.add_option("--seed", opts.seed, "master seed");
    app.add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", opts.out_dir, "artifact directory");
    app.add_option("--path-scale", opts.path_scale, "multiplier on Monte-Carlo path counts")->check(CLI::PositiveNumber);
    app.add_option("--only", opts.only, "criterion numbers to run")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    opts.log = &std::cout;
    const auto report = nld::run_acceptance(opts);
    int passed = 0;
    for (const auto& r : report.results) passed += r.pass;
    std::cout << passed << "/" << report.results.size() << " criteria passed\n";
    return report.all_pass() ? 0 : 1;
}
