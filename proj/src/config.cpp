#include "nld/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nld/error.hpp"

namespace nld {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path, msg); }

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    expect_object(j, path);
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) fail(path + "/" + k, "unknown field");
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    expect_object(j, path);
    if (!j.contains(key)) fail(path + "/" + key, "missing required field");
    return j.at(key);
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

double number(const json& obj, const std::string& key, const std::string& path) {
    return as_number(require(obj, key, path), path + "/" + key);
}

double number_or(const json& obj, const std::string& key, const std::string& path, double def) {
    return obj.contains(key) ? as_number(obj.at(key), path + "/" + key) : def;
}

std::uint64_t count_or(const json& obj, const std::string& key, const std::string& path, std::uint64_t def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(path + "/" + key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string string_of(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

bool bool_or(const json& obj, const std::string& key, const std::string& path, bool def) {
    if (!obj.contains(key)) return def;
    if (!obj.at(key).is_boolean()) fail(path + "/" + key, "expected true or false");
    return obj.at(key).get<bool>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "/" + std::to_string(i)));
    return out;
}

std::vector<double> numbers_or(const json& obj, const std::string& key, const std::string& path,
                               std::vector<double> def) {
    return obj.contains(key) ? numbers(obj.at(key), path + "/" + key) : def;
}

Domain parse_domain(const json& j, const std::string& path) {
    const std::string type = string_of(require(j, "type", path), path + "/type");
    try {
        if (type == "interval") {
            allow_keys(j, path, {"type", "a", "b"});
            return Domain(Interval{number(j, "a", path), number(j, "b", path)});
        }
        if (type == "ball") {
            allow_keys(j, path, {"type", "center", "radius"});
            return Domain(Ball{numbers(require(j, "center", path), path + "/center"), number(j, "radius", path)});
        }
        if (type == "half-space") {
            allow_keys(j, path, {"type", "normal", "offset"});
            return Domain(HalfSpace{numbers(require(j, "normal", path), path + "/normal"), number(j, "offset", path)});
        }
    } catch (const ParameterError& e) {
        fail(path, e.what());
    }
    fail(path + "/type", "unknown domain type '" + type + "' (interval, ball, half-space)");
}

Drift parse_drift(const json& j, const std::string& path, int dim) {
    try {
        if (j.is_string()) return Drift::preset(j.get<std::string>(), dim);
        expect_object(j, path);
        if (j.contains("preset")) {
            allow_keys(j, path, {"preset"});
            return Drift::preset(string_of(j.at("preset"), path + "/preset"), dim);
        }
        allow_keys(j, path, {"matrix", "offset"});
        std::vector<double> A;
        const json& m = require(j, "matrix", path);
        if (m.is_array() && !m.empty() && m[0].is_array()) {
            for (std::size_t r = 0; r < m.size(); ++r) {
                auto row = numbers(m[r], path + "/matrix/" + std::to_string(r));
                A.insert(A.end(), row.begin(), row.end());
            }
        } else {
            A = numbers(m, path + "/matrix");
        }
        return Drift(dim, A, numbers(require(j, "offset", path), path + "/offset"));
    } catch (const ParameterError& e) {
        fail(path, e.what());
    }
}

QuadratureConfig parse_quadrature(const json& j, const std::string& path) {
    allow_keys(j, path, {"split_radius", "rel_tol", "abs_tol", "outer_cutoff", "max_panels", "symmetric_inner"});
    QuadratureConfig q;
    q.split_radius = number_or(j, "split_radius", path, q.split_radius);
    q.rel_tol = number_or(j, "rel_tol", path, q.rel_tol);
    q.abs_tol = number_or(j, "abs_tol", path, q.abs_tol);
    q.outer_cutoff = number_or(j, "outer_cutoff", path, q.outer_cutoff);
    q.max_panels = static_cast<int>(count_or(j, "max_panels", path, q.max_panels));
    q.symmetric_inner = bool_or(j, "symmetric_inner", path, q.symmetric_inner);
    try {
        q.validate();
    } catch (const ParameterError& e) {
        fail(path, e.what());
    }
    return q;
}

KernelSpec parse_kernel(const json& j, const std::string& path) {
    const std::string type = string_of(require(j, "type", path), path + "/type");
    if (type == "constant") {
        allow_keys(j, path, {"type"});
        return KernelSpec::constant();
    }
    if (type == "radial") {
        allow_keys(j, path, {"type", "inner", "outer", "transition"});
        try {
            return KernelSpec::radial(number(j, "inner", path), number(j, "outer", path),
                                      number_or(j, "transition", path, 1.0));
        } catch (const ParameterError& e) {
            fail(path, e.what());
        }
    }
    fail(path + "/type", "unknown kernel type '" + type + "' (constant, radial)");
}

BarrierSweep parse_barrier(const json& j, const std::string& path) {
    allow_keys(j, path,
               {"geometry", "radius", "a", "b", "value", "kernel", "alphas", "thetas", "theta_fractions", "distances",
                "dim"});
    BarrierSweep s;
    const std::string g = string_of(require(j, "geometry", path), path + "/geometry");
    if (g == "half-space")
        s.geometry = HalfSpaceBarrier{};
    else if (g == "ball-exterior")
        s.geometry = BallExteriorBarrier{number_or(j, "radius", path, 1.0)};
    else if (g == "interval")
        s.geometry = IntervalBarrier{number_or(j, "a", path, 0.0), number_or(j, "b", path, 1.0)};
    else if (g == "constant")
        s.geometry = ConstantBarrier{number_or(j, "value", path, 1.0)};
    else
        fail(path + "/geometry", "unknown geometry '" + g + "' (half-space, ball-exterior, interval, constant)");
    if (j.contains("kernel")) s.kernel = parse_kernel(j.at("kernel"), path + "/kernel");
    s.alphas = numbers(require(j, "alphas", path), path + "/alphas");
    if (s.alphas.empty()) fail(path + "/alphas", "needs at least one value");
    for (std::size_t i = 0; i < s.alphas.size(); ++i)
        if (!(s.alphas[i] > 0.0 && s.alphas[i] < 2.0)) fail(path + "/alphas/" + std::to_string(i), "alpha must lie in (0,2)");
    s.thetas = numbers_or(j, "thetas", path, {});
    s.theta_fractions = numbers_or(j, "theta_fractions", path, {});
    if (s.thetas.empty() && s.theta_fractions.empty())
        fail(path + "/thetas", "give thetas or theta_fractions");
    s.distances = numbers_or(j, "distances", path, {1.0});
    for (std::size_t i = 0; i < s.distances.size(); ++i)
        if (!(s.distances[i] > 0.0)) fail(path + "/distances/" + std::to_string(i), "distances must be positive");
    s.dim = static_cast<int>(count_or(j, "dim", path, 1));
    if (s.dim < 1) fail(path + "/dim", "dimension must be positive");
    return s;
}

PathConfig parse_paths(const json& j, const std::string& path, PathConfig base) {
    allow_keys(j, path, {"dt_base", "dt_min", "adaptive", "horizon", "touch_eps", "jump_threshold"});
    PathConfig p = base;
    p.dt_base = number_or(j, "dt_base", path, p.dt_base);
    p.dt_min = number_or(j, "dt_min", path, p.dt_min);
    p.adaptive = bool_or(j, "adaptive", path, p.adaptive);
    p.horizon = number_or(j, "horizon", path, p.horizon);
    if (j.contains("touch_eps")) {
        p.touch_eps = number(j, "touch_eps", path);
        if (!j.contains("jump_threshold")) p.jump_threshold = 10.0 * p.touch_eps;
    }
    p.jump_threshold = number_or(j, "jump_threshold", path, p.jump_threshold);
    try {
        p.validate();
    } catch (const ParameterError& e) {
        fail(path, e.what());
    }
    return p;
}

std::vector<Point> parse_points(const json& j, const std::string& path, int dim) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of points");
    std::vector<Point> pts;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "/" + std::to_string(i);
        Point x = j[i].is_array() ? numbers(j[i], p) : Point{as_number(j[i], p)};
        if (static_cast<int>(x.size()) != dim) fail(p, "point dimension does not match the domain");
        pts.push_back(std::move(x));
    }
    return pts;
}

CheckSpec parse_check(const json& j, const std::string& path) {
    allow_keys(j, path, {"name", "rule", "component", "eps", "below", "above", "monotone", "factor", "reference_x"});
    CheckSpec c;
    c.rule = string_of(require(j, "rule", path), path + "/rule");
    c.name = j.contains("name") ? string_of(j.at("name"), path + "/name") : c.rule;
    if (c.rule == "touch-fraction") {
        c.component = string_of(require(j, "component", path), path + "/component");
        c.eps = number(j, "eps", path);
        if (j.contains("below")) c.below = number(j, "below", path);
        if (j.contains("above")) c.above = number(j, "above", path);
        c.monotone = bool_or(j, "monotone", path, false);
        if (!c.below && !c.above && !c.monotone) fail(path, "touch-fraction needs below, above or monotone");
    } else if (c.rule == "flatness") {
        c.factor = number(j, "factor", path);
    } else if (c.rule == "min-ratio") {
        c.factor = number(j, "factor", path);
        c.reference_x = number(j, "reference_x", path);
    } else {
        fail(path + "/rule", "unknown rule '" + c.rule + "' (touch-fraction, flatness, min-ratio)");
    }
    return c;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::string to_string(ExperimentKind kind) { return kind_names().at(static_cast<std::size_t>(kind)); }

const std::vector<std::string>& kind_names() {
    static const std::vector<std::string> names{"exit-time", "exit-position", "solve-mc", "solve-fd",
                                                "barrier",   "ratio",         "decay"};
    return names;
}

ExperimentKind parse_kind(const std::string& name) {
    const auto& names = kind_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<ExperimentKind>(i);
    fail("/kind", "unknown kind '" + name + "'");
}

DataFunction parse_data_function(const json& j, const std::string& path) {
    const std::string type = string_of(require(j, "type", path), path + "/type");
    DataFunction f = DataFunction::zero();
    if (type == "zero") {
        allow_keys(j, path, {"type"});
        return f;
    }
    if (type == "constant") {
        allow_keys(j, path, {"type", "value", "decay"});
        f = DataFunction::constant(number(j, "value", path));
    } else if (type == "sin_affine") {
        allow_keys(j, path, {"type", "a", "b", "decay"});
        f = DataFunction::sin_affine(number(j, "a", path), number(j, "b", path));
    } else if (type == "polynomial") {
        allow_keys(j, path, {"type", "coeffs", "decay"});
        f = DataFunction::polynomial(numbers(require(j, "coeffs", path), path + "/coeffs"));
    } else {
        fail(path + "/type", "unknown data function '" + type + "' (zero, constant, sin_affine, polynomial)");
    }
    if (j.contains("decay")) {
        try {
            f = f.with_exp_decay(number(j, "decay", path));
        } catch (const ParameterError& e) {
            fail(path + "/decay", e.what());
        }
    }
    return f;
}

ProblemSpec parse_problem(const json& j, const std::string& path) {
    allow_keys(j, path, {"domain", "drift", "alpha", "phi", "f"});
    Domain domain = parse_domain(require(j, "domain", path), path + "/domain");
    const int dim = domain.dim();
    Drift drift = j.contains("drift") ? parse_drift(j.at("drift"), path + "/drift", dim) : Drift::zero(dim);
    const double alpha = number(j, "alpha", path);
    std::optional<StableLaw> law;
    try {
        law.emplace(alpha, dim);
    } catch (const ParameterError& e) {
        fail(path + "/alpha", e.what());
    }
    ProblemSpec p{domain, drift, *law};
    if (j.contains("phi")) p.phi = parse_data_function(j.at("phi"), path + "/phi");
    if (j.contains("f")) p.f = parse_data_function(j.at("f"), path + "/f");
    try {
        p.validate();
    } catch (const ParameterError& e) {
        fail(path, e.what());
    }
    return p;
}

ExperimentConfig parse_config(const json& doc) {
    expect_object(doc, "");
    const std::string kind_name = string_of(require(doc, "kind", ""), "/kind");
    ExperimentConfig cfg;
    cfg.kind = parse_kind(kind_name);
    allow_keys(doc, "",
               {"name", "kind", "problem", "paths", "quadrature", "barrier", "grid", "x", "times", "t", "theta",
                "max_order", "eps", "checks", "n_paths", "seed", "threads", "output_dir"});
    cfg.name = doc.contains("name") ? string_of(doc.at("name"), "/name") : kind_name;
    if (cfg.name.empty() || cfg.name.find_first_of("/\\") != std::string::npos)
        fail("/name", "name must be a non-empty file-name-safe string");
    cfg.n_paths = count_or(doc, "n_paths", "", 10000);
    cfg.seed = count_or(doc, "seed", "", 42);
    cfg.threads = static_cast<unsigned>(count_or(doc, "threads", "", 1));
    if (cfg.threads == 0) fail("/threads", "needs at least one thread");
    cfg.output_dir = doc.contains("output_dir") ? string_of(doc.at("output_dir"), "/output_dir") : "out/" + cfg.name;

    const bool needs_problem = cfg.kind != ExperimentKind::Barrier;
    if (needs_problem) {
        cfg.problem = parse_problem(require(doc, "problem", ""), "/problem");
        const ProblemSpec& p = *cfg.problem;
        PathConfig base = PathConfig::defaults_for(p.domain, p.law);
        cfg.paths = doc.contains("paths") ? parse_paths(doc.at("paths"), "/paths", base) : base;
    } else if (doc.contains("problem")) {
        fail("/problem", "barrier experiments take no problem");
    }
    if (doc.contains("quadrature")) cfg.quadrature = parse_quadrature(doc.at("quadrature"), "/quadrature");

    const int dim = needs_problem ? cfg.problem->domain.dim() : 1;
    auto need_x = [&] { cfg.x = parse_points(require(doc, "x", ""), "/x", dim); };
    auto inside = [&] {
        for (std::size_t i = 0; i < cfg.x.size(); ++i)
            if (!cfg.problem->domain.contains(cfg.x[i])) fail("/x/" + std::to_string(i), "point lies outside D");
    };
    auto need_paths = [&] {
        if (cfg.n_paths < 100) fail("/n_paths", "at least 100 paths are required");
    };

    switch (cfg.kind) {
        case ExperimentKind::ExitTime: {
            need_x();
            inside();
            need_paths();
            cfg.max_order = static_cast<int>(count_or(doc, "max_order", "", 1));
            if (cfg.max_order < 1) fail("/max_order", "must be at least 1");
            break;
        }
        case ExperimentKind::ExitPosition: {
            need_x();
            inside();
            need_paths();
            cfg.eps = numbers(require(doc, "eps", ""), "/eps");
            if (cfg.eps.empty()) fail("/eps", "needs at least one tolerance");
            for (std::size_t i = 0; i < cfg.eps.size(); ++i)
                if (!(cfg.eps[i] > 0.0)) fail("/eps/" + std::to_string(i), "must be positive");
            break;
        }
        case ExperimentKind::SolveMc:
        case ExperimentKind::SolveFd: {
            cfg.times = numbers(require(doc, "times", ""), "/times");
            if (cfg.times.empty()) fail("/times", "needs at least one time");
            for (std::size_t i = 0; i < cfg.times.size(); ++i) {
                if (!(cfg.times[i] >= 0.0)) fail("/times/" + std::to_string(i), "must be non-negative");
                if (i > 0 && !(cfg.times[i] > cfg.times[i - 1]))
                    fail("/times/" + std::to_string(i), "times must be strictly increasing");
            }
            if (cfg.kind == ExperimentKind::SolveMc) {
                need_x();
                inside();
                need_paths();
                if (cfg.times.back() > cfg.paths.horizon) fail("/times", "times beyond the censoring horizon");
            } else {
                if (doc.contains("x")) {
                    need_x();
                    inside();
                }
                if (dim != 1 || !std::holds_alternative<Interval>(cfg.problem->domain.shape()))
                    fail("/problem/domain", "solve-fd needs a one-dimensional interval");
                if (doc.contains("grid")) {
                    const json& g = doc.at("grid");
                    allow_keys(g, "/grid", {"N", "dt", "exterior_pad"});
                    cfg.grid.N = static_cast<int>(count_or(g, "N", "/grid", 2000));
                    if (g.contains("dt")) cfg.grid.dt = number(g, "dt", "/grid");
                    cfg.grid.exterior_pad = static_cast<int>(count_or(g, "exterior_pad", "/grid", 0));
                    if (cfg.grid.N < 1) fail("/grid/N", "needs at least one node");
                    if (cfg.grid.dt && !(*cfg.grid.dt > 0.0)) fail("/grid/dt", "must be positive");
                }
            }
            break;
        }
        case ExperimentKind::Barrier:
            cfg.barrier = parse_barrier(require(doc, "barrier", ""), "/barrier");
            break;
        case ExperimentKind::Ratio: {
            if (doc.contains("x")) {
                need_x();
            } else {
                for (int k = 1; k <= 19; ++k) cfg.x.push_back({0.05 * k});
            }
            inside();
            need_paths();
            break;
        }
        case ExperimentKind::Decay: {
            need_x();
            inside();
            need_paths();
            cfg.t = number(doc, "t", "");
            cfg.theta = number_or(doc, "theta", "", 0.5);
            if (!(cfg.t > 0.0) || cfg.t > cfg.paths.horizon) fail("/t", "must lie in (0, horizon]");
            break;
        }
    }

    if (doc.contains("checks")) {
        const json& cs = doc.at("checks");
        if (!cs.is_array()) fail("/checks", "expected an array");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            CheckSpec c = parse_check(cs[i], "/checks/" + std::to_string(i));
            const bool fits = (c.rule == "touch-fraction" && cfg.kind == ExperimentKind::ExitPosition) ||
                              (c.rule == "flatness" && cfg.kind == ExperimentKind::Ratio) ||
                              (c.rule == "min-ratio" && cfg.kind == ExperimentKind::ExitTime);
            if (!fits) fail("/checks/" + std::to_string(i) + "/rule", "rule does not apply to kind " + kind_name);
            cfg.checks.push_back(std::move(c));
        }
    }
    for (std::size_t i = 0; i < cfg.checks.size(); ++i) {
        const CheckSpec& c = cfg.checks[i];
        const std::string p = "/checks/" + std::to_string(i);
        if (c.rule == "touch-fraction" &&
            std::none_of(cfg.eps.begin(), cfg.eps.end(), [&](double e) { return std::abs(e - c.eps) <= 1e-12 * e; }))
            fail(p + "/eps", "tolerance is not in /eps");
        if (c.rule == "min-ratio" && std::none_of(cfg.x.begin(), cfg.x.end(), [&](const Point& x) {
                return std::abs(x[0] - c.reference_x) <= 1e-12;
            }))
            fail(p + "/reference_x", "reference point is not in /x");
    }
    cfg.canonical = doc;
    cfg.canonical["name"] = cfg.name;
    cfg.canonical["seed"] = cfg.seed;
    cfg.canonical["n_paths"] = cfg.n_paths;
    cfg.canonical["threads"] = cfg.threads;
    cfg.canonical["output_dir"] = cfg.output_dir;
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return parse_config(json::object());
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

void apply_overrides(ExperimentConfig& cfg, std::optional<std::uint64_t> seed, std::optional<std::uint64_t> n_paths,
                     std::optional<unsigned> threads, std::optional<std::string> output_dir) {
    json doc = cfg.canonical;
    if (seed) doc["seed"] = *seed;
    if (n_paths) doc["n_paths"] = *n_paths;
    if (threads) doc["threads"] = *threads;
    if (output_dir) doc["output_dir"] = *output_dir;
    cfg = parse_config(doc);
}

std::string config_hash(const ExperimentConfig& cfg) {
    json doc = cfg.canonical;
    doc.erase("threads");
    doc.erase("output_dir");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(doc.dump())));
    return buf;
}

}  // namespace nld
