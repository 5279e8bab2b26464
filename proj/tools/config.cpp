#include "config.hpp"

#include "plgs/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace plgs::cli {

using nlohmann::json;

namespace {

// Line of the entry addressed by a JSON pointer, found by scanning for each
// key in turn. Good enough for configs written by hand.
int locate(const std::string& text, const std::string& pointer) {
    std::size_t pos = 0;
    std::size_t start = 1;
    while (start <= pointer.size()) {
        const std::size_t end = std::min(pointer.find('/', start), pointer.size());
        const std::string key = pointer.substr(start, end - start);
        start = end + 1;
        if (!key.empty() && key.find_first_not_of("0123456789") == std::string::npos) {
            continue;
        }
        const std::size_t hit = text.find("\"" + key + "\"", pos);
        if (hit == std::string::npos) {
            break;
        }
        pos = hit;
    }
    if (pointer.empty()) {
        return 1;
    }
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

class Reader {
public:
    Reader(const json& node, std::string pointer, ExperimentConfig& cfg, const std::string& text)
        : node_(node), pointer_(std::move(pointer)), cfg_(cfg), text_(text) {
        cfg_.lines[pointer_] = locate(text_, pointer_);
        if (!node_.is_object()) {
            fail(pointer_, "expected an object");
        }
    }

    [[noreturn]] void fail(const std::string& pointer, const std::string& what) const {
        throw ConfigIssue((pointer.empty() ? std::string("/") : pointer) + ": " + what, locate(text_, pointer));
    }

    bool has(const char* key) const { return node_.contains(key); }

    void number(const char* key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number()) {
                fail(child(key), "expected a number");
            }
            out = v->get<double>();
            if (!std::isfinite(out)) {
                fail(child(key), "expected a finite number");
            }
        }
    }

    template <class Int>
    void integer(const char* key, Int& out, long long min_value) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer()) {
                fail(child(key), "expected an integer");
            }
            const long long x = v->get<long long>();
            if (x < min_value) {
                fail(child(key), "must be >= " + std::to_string(min_value));
            }
            out = static_cast<Int>(x);
        }
    }

    void text(const char* key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string()) {
                fail(child(key), "expected a string");
            }
            out = v->get<std::string>();
        }
    }

    void numbers(const char* key, std::vector<double>& out) {
        if (const json* v = find(key)) {
            if (!v->is_array()) {
                fail(child(key), "expected an array of numbers");
            }
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_number()) {
                    fail(child(key), "expected an array of numbers");
                }
                out.push_back(e.get<double>());
            }
        }
    }

    Reader sub(const char* key) const { return Reader(node_.at(key), child(key), cfg_, text_); }

    std::string child(const char* key) const { return pointer_ + "/" + key; }

    void reject_unknown(std::initializer_list<const char*> known) const {
        std::set<std::string> allowed(known.begin(), known.end());
        for (const auto& [k, v] : node_.items()) {
            if (!allowed.count(k)) {
                fail(pointer_ + "/" + k, "unknown key");
            }
        }
    }

private:
    const json* find(const char* key) {
        if (!node_.contains(key)) {
            return nullptr;
        }
        cfg_.lines[child(key)] = locate(text_, child(key));
        return &node_.at(key);
    }

    const json& node_;
    std::string pointer_;
    ExperimentConfig& cfg_;
    const std::string& text_;
};

void read_coefficient(Reader r, CoefficientConfig& c) {
    r.reject_unknown({"type", "value", "c0", "cx", "cy", "base", "amplitude", "lower", "upper"});
    r.text("type", c.type);
    if (c.type == "constant") {
        r.number("value", c.value);
    } else if (c.type == "affine") {
        r.number("c0", c.c0);
        r.number("cx", c.cx);
        r.number("cy", c.cy);
        if (!r.has("lower") || !r.has("upper")) {
            r.fail(r.child("type"), "affine coefficients must declare lower and upper bounds");
        }
        r.number("lower", c.lower);
        r.number("upper", c.upper);
    } else if (c.type == "sinusoidal_bump") {
        r.number("base", c.base);
        r.number("amplitude", c.amplitude);
    } else {
        r.fail(r.child("type"), "unknown coefficient type '" + c.type + "' (constant, affine, sinusoidal_bump)");
    }
}

}  // namespace

void set_seed(ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.solver.seed = seed;
    cfg.mountain_pass.seed = seed;
    cfg.thresholds.seed = seed;
}

int ExperimentConfig::line_of(const std::string& pointer) const {
    const auto it = lines.find(pointer);
    return it == lines.end() ? 0 : it->second;
}

ExperimentConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
        throw ConfigIssue(std::string("malformed JSON: ") + e.what(), line);
    }
    ExperimentConfig cfg;
    Reader root(doc, "", cfg, text);
    root.reject_unknown({"exponents", "epsilon", "eps_list", "domain", "a", "b", "solver", "mountain_pass",
                         "thresholds", "barrier", "asymptotics", "layer", "output"});
    if (root.has("exponents")) {
        Reader r = root.sub("exponents");
        r.reject_unknown({"p", "q", "gamma"});
        r.number("p", cfg.exponents.p);
        r.number("q", cfg.exponents.q);
        r.number("gamma", cfg.exponents.gamma);
    }
    root.number("epsilon", cfg.epsilon);
    root.numbers("eps_list", cfg.eps_list);
    if (root.has("domain")) {
        Reader r = root.sub("domain");
        r.reject_unknown({"type", "x0", "x1", "y0", "y1", "nodes", "nx", "ny"});
        r.text("type", cfg.domain.type);
        if (cfg.domain.type != "interval" && cfg.domain.type != "rectangle") {
            r.fail(r.child("type"), "domain type must be 'interval' or 'rectangle'");
        }
        r.number("x0", cfg.domain.x0);
        r.number("x1", cfg.domain.x1);
        r.number("y0", cfg.domain.y0);
        r.number("y1", cfg.domain.y1);
        r.integer("nodes", cfg.domain.nodes, 3);
        r.integer("nx", cfg.domain.nx, 3);
        r.integer("ny", cfg.domain.ny, 3);
    }
    if (root.has("a")) {
        read_coefficient(root.sub("a"), cfg.a);
    }
    if (root.has("b")) {
        read_coefficient(root.sub("b"), cfg.b);
    }
    if (root.has("solver")) {
        Reader r = root.sub("solver");
        r.reject_unknown({"tol_factor", "polish_factor", "max_iters", "random_restarts", "seed", "delta_reg",
                          "mass_weight", "armijo_slope", "backtrack_factor"});
        r.number("tol_factor", cfg.solver.tol_factor);
        r.number("polish_factor", cfg.solver.polish_factor);
        r.integer("max_iters", cfg.solver.max_iters, 1);
        r.integer("random_restarts", cfg.solver.random_restarts, 0);
        r.integer("seed", cfg.solver.seed, 0);
        r.number("delta_reg", cfg.solver.delta_reg);
        r.number("mass_weight", cfg.solver.mass_weight);
        r.number("armijo_slope", cfg.solver.armijo_slope);
        r.number("backtrack_factor", cfg.solver.backtrack_factor);
        if (!(cfg.solver.tol_factor > 0.0)) {
            r.fail(r.child("tol_factor"), "must be positive");
        }
        if (!(cfg.solver.backtrack_factor > 0.0 && cfg.solver.backtrack_factor < 1.0)) {
            r.fail(r.child("backtrack_factor"), "must lie in (0, 1)");
        }
        if (!(cfg.solver.armijo_slope > 0.0 && cfg.solver.armijo_slope < 1.0)) {
            r.fail(r.child("armijo_slope"), "must lie in (0, 1)");
        }
        if (!(cfg.solver.mass_weight >= 0.0)) {
            r.fail(r.child("mass_weight"), "must be nonnegative");
        }
    }
    if (root.has("mountain_pass")) {
        Reader r = root.sub("mountain_pass");
        r.reject_unknown({"tol_factor", "rel_tol", "path_points", "max_iters", "mass_weight"});
        r.number("tol_factor", cfg.mountain_pass.tol_factor);
        r.number("rel_tol", cfg.mountain_pass.rel_tol);
        r.integer("path_points", cfg.mountain_pass.path_points, 3);
        r.integer("max_iters", cfg.mountain_pass.max_iters, 1);
        r.number("mass_weight", cfg.mountain_pass.mass_weight);
        if (!(cfg.mountain_pass.mass_weight >= 0.0)) {
            r.fail(r.child("mass_weight"), "must be nonnegative");
        }
    }
    if (root.has("thresholds")) {
        Reader r = root.sub("thresholds");
        r.reject_unknown({"restarts", "max_iters", "rel_tol"});
        r.integer("restarts", cfg.thresholds.restarts, 1);
        r.integer("max_iters", cfg.thresholds.max_iters, 1);
        r.number("rel_tol", cfg.thresholds.rel_tol);
    }
    if (root.has("barrier")) {
        Reader r = root.sub("barrier");
        r.reject_unknown({"samples"});
        r.integer("samples", cfg.barrier_samples, 1);
    }
    if (root.has("asymptotics")) {
        Reader r = root.sub("asymptotics");
        r.reject_unknown({"eta", "r_list", "interior_margin", "eps_e_star"});
        r.number("eta", cfg.sweep.eta);
        r.numbers("r_list", cfg.sweep.r_list);
        r.number("interior_margin", cfg.sweep.interior_margin);
        if (r.has("eps_e_star")) {
            double v = 0.0;
            r.number("eps_e_star", v);
            cfg.sweep.eps_e_star = v;
        }
        if (!(cfg.sweep.eta > 0.0)) {
            r.fail(r.child("eta"), "must be positive");
        }
        for (double x : cfg.sweep.r_list) {
            if (!(x >= 1.0) || !(x < cfg.exponents.gamma)) {
                r.fail(r.child("r_list"),
                       "every r must satisfy 1 <= r < gamma: strong L^r convergence only; weak L^gamma is not measured");
            }
        }
    }
    if (root.has("layer")) {
        Reader r = root.sub("layer");
        r.reject_unknown({"xi_max", "points"});
        r.number("xi_max", cfg.layer_xi_max);
        r.integer("points", cfg.layer_points, 2);
        if (!(cfg.layer_xi_max > 0.0)) {
            r.fail(r.child("xi_max"), "must be positive");
        }
    }
    if (root.has("output")) {
        Reader r = root.sub("output");
        r.reject_unknown({"dir"});
        r.text("dir", cfg.output_dir);
    }

    set_seed(cfg, cfg.solver.seed);

    // Semantic checks before any compute.
    const int dim = cfg.domain.type == "interval" ? 1 : 2;
    try {
        cfg.exponents.validate(dim);
    } catch (const std::exception& e) {
        throw ConfigIssue(std::string("/exponents: ") + e.what(), cfg.line_of("/exponents"));
    }
    if (!(cfg.epsilon > 0.0)) {
        throw ConfigIssue("/epsilon: must be positive", cfg.line_of("/epsilon"));
    }
    for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
        if (!(cfg.eps_list[i] > 0.0) || (i > 0 && !(cfg.eps_list[i] < cfg.eps_list[i - 1]))) {
            throw ConfigIssue("/eps_list: values must be positive and strictly decreasing", cfg.line_of("/eps_list"));
        }
    }
    MeshPtr mesh;
    try {
        mesh = make_mesh(cfg);
    } catch (const std::exception& e) {
        throw ConfigIssue(std::string("/domain: ") + e.what(), cfg.line_of("/domain"));
    }
    try {
        (void)make_coefficient(cfg.a, cfg);
    } catch (const std::exception& e) {
        throw ConfigIssue(std::string("/a: ") + e.what(), cfg.line_of("/a"));
    }
    try {
        (void)make_coefficient(cfg.b, cfg);
    } catch (const std::exception& e) {
        throw ConfigIssue(std::string("/b: ") + e.what(), cfg.line_of("/b"));
    }
    try {
        (void)ProblemSpec(cfg.exponents, cfg.epsilon, make_coefficient(cfg.a, cfg), make_coefficient(cfg.b, cfg), mesh);
    } catch (const std::exception& e) {
        const std::string what = e.what();
        const std::string where = what.find("coefficient a") != std::string::npos   ? "/a"
                                  : what.find("coefficient b") != std::string::npos ? "/b"
                                                                                    : "";
        throw ConfigIssue((where.empty() ? "" : where + ": ") + what, cfg.line_of(where));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigIssue("cannot read config file " + path, 0);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

MeshPtr make_mesh(const ExperimentConfig& cfg) {
    const DomainConfig& d = cfg.domain;
    if (d.type == "interval") {
        return build_mesh(IntervalDomain{d.x0, d.x1}, d.nodes);
    }
    return build_mesh(RectangleDomain{d.x0, d.x1, d.y0, d.y1}, d.nx, d.ny);
}

CoefficientField make_coefficient(const CoefficientConfig& c, const ExperimentConfig& cfg) {
    if (c.type == "constant") {
        return CoefficientField::constant(c.value);
    }
    if (c.type == "affine") {
        return CoefficientField::affine(c.c0, c.cx, c.cy, c.lower, c.upper);
    }
    const DomainConfig& d = cfg.domain;
    const int dim = d.type == "interval" ? 1 : 2;
    return CoefficientField::sinusoidal_bump(c.base, c.amplitude, {d.x0, d.x1, d.y0, d.y1}, dim);
}

ProblemSpec make_problem(const ExperimentConfig& cfg, std::optional<double> eps) {
    return ProblemSpec(cfg.exponents, eps.value_or(cfg.epsilon), make_coefficient(cfg.a, cfg),
                       make_coefficient(cfg.b, cfg), make_mesh(cfg));
}

namespace {

nlohmann::ordered_json coefficient_json(const CoefficientConfig& c) {
    nlohmann::ordered_json j;
    j["type"] = c.type;
    if (c.type == "constant") {
        j["value"] = c.value;
    } else if (c.type == "affine") {
        j["c0"] = c.c0;
        j["cx"] = c.cx;
        j["cy"] = c.cy;
        j["lower"] = c.lower;
        j["upper"] = c.upper;
    } else {
        j["base"] = c.base;
        j["amplitude"] = c.amplitude;
    }
    return j;
}

}  // namespace

nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["exponents"] = {{"p", cfg.exponents.p}, {"q", cfg.exponents.q}, {"gamma", cfg.exponents.gamma}};
    j["epsilon"] = cfg.epsilon;
    j["eps_list"] = cfg.eps_list;
    const DomainConfig& d = cfg.domain;
    if (d.type == "interval") {
        j["domain"] = {{"type", d.type}, {"x0", d.x0}, {"x1", d.x1}, {"nodes", d.nodes}};
    } else {
        j["domain"] = {{"type", d.type}, {"x0", d.x0}, {"x1", d.x1}, {"y0", d.y0},
                       {"y1", d.y1},     {"nx", d.nx}, {"ny", d.ny}};
    }
    j["a"] = coefficient_json(cfg.a);
    j["b"] = coefficient_json(cfg.b);
    const SolverOptions& s = cfg.solver;
    j["solver"] = {{"tol_factor", s.tol_factor},       {"polish_factor", s.polish_factor},
                   {"max_iters", s.max_iters},         {"random_restarts", s.random_restarts},
                   {"seed", s.seed},                   {"delta_reg", s.delta_reg},
                   {"mass_weight", s.mass_weight},     {"armijo_slope", s.armijo_slope},
                   {"backtrack_factor", s.backtrack_factor}};
    const MountainPassOptions& m = cfg.mountain_pass;
    j["mountain_pass"] = {{"tol_factor", m.tol_factor},
                          {"rel_tol", m.rel_tol},
                          {"path_points", m.path_points},
                          {"max_iters", m.max_iters},
                          {"mass_weight", m.mass_weight}};
    j["thresholds"] = {{"restarts", cfg.thresholds.restarts},
                       {"max_iters", cfg.thresholds.max_iters},
                       {"rel_tol", cfg.thresholds.rel_tol}};
    j["barrier"] = {{"samples", cfg.barrier_samples}};
    j["asymptotics"] = {{"eta", cfg.sweep.eta},
                        {"r_list", cfg.sweep.r_list},
                        {"interior_margin", cfg.sweep.interior_margin}};
    if (cfg.sweep.eps_e_star) {
        j["asymptotics"]["eps_e_star"] = *cfg.sweep.eps_e_star;
    }
    j["layer"] = {{"xi_max", cfg.layer_xi_max}, {"points", cfg.layer_points}};
    j["output"] = {{"dir", cfg.output_dir}};
    return j;
}

}  // namespace plgs::cli
