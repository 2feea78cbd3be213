#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nld {

struct AcceptanceOptions {
    std::uint64_t seed = 42;
    unsigned threads = 1;
    std::string out_dir = "out/acceptance";
    /// Multiplies every Monte-Carlo path count (minimum 1000 paths).
    double path_scale = 1.0;
    /// Criterion numbers to run; empty means all.
    std::vector<int> only;
    std::ostream* log = nullptr;
    /// Criterion 11 reruns the Monte-Carlo criteria at this scale, once with
    /// one thread and once with `repro_threads`, and compares the artifacts.
    unsigned repro_threads = 8;
    double repro_scale = 0.01;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceReport {
    std::vector<CriterionResult> results;
    bool all_pass() const;
};

/// Runs the acceptance criteria and writes one CSV per criterion plus
/// acceptance.manifest.json into out_dir. Artifacts hold no timings or thread
/// counts, so a rerun with the same seed reproduces them byte for byte.
/// Prints one "[PASS]" or "[FAIL]" line per criterion to `log`.
AcceptanceReport run_acceptance(const AcceptanceOptions& opts);

/// Byte comparison of every regular file under two directories. Returns the
/// relative paths that differ or exist on one side only.
std::vector<std::string> compare_directories(const std::string& a, const std::string& b);

}  // namespace nld
