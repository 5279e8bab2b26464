#include "plgs/rayleigh.hpp"

#include "plgs/errors.hpp"
#include "plgs/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace plgs {

ExtremalConstants extremal_constants(const Exponents& ex) {
    ex.validate();
    const double p = ex.p;
    const double q = ex.q;
    const double g = ex.gamma;
    const double power = (q - p) / (g - q);
    ExtremalConstants k;
    k.c = (g - q) / (g - p) * std::pow((q - p) / (g - p), power);
    k.c_e = p * (g - q) / (q * (g - p)) * std::pow(g * (q - p) / (q * (g - p)), power);
    return k;
}

RayQuotients ray_quotients(const EnergyComponents& c, double s, const Exponents& ex) {
    if (!(c.T > 0.0)) {
        throw DomainError("ray quotients need T(u) > 0 (u must be nonzero)");
    }
    if (!(s > 0.0)) {
        throw InputError("ray scaling s must be positive");
    }
    const double sa = std::pow(s, ex.q - ex.p);
    const double sb = std::pow(s, ex.gamma - ex.p);
    return {(c.A * sa - c.B * sb) / c.T, ex.p / c.T * (c.A / ex.q * sa - c.B / ex.gamma * sb)};
}

namespace {

void require_admissible(const EnergyComponents& c, double tol_A) {
    if (!(c.A > tol_A)) {
        std::ostringstream msg;
        msg << "u is outside the admissible set: A(u)=" << c.A << " <= " << tol_A;
        throw DomainError(msg.str());
    }
    if (!(c.B > 0.0) || !(c.T > 0.0)) {
        throw DomainError("u must be nonzero (T and B positive)");
    }
}

}  // namespace

FiberScalings fiber_scalings(const EnergyComponents& c, const Exponents& ex, double tol_A) {
    require_admissible(c, tol_A);
    const double p = ex.p;
    const double q = ex.q;
    const double g = ex.gamma;
    const double inv = 1.0 / (g - q);
    return {std::pow((q - p) * c.A / ((g - p) * c.B), inv), std::pow(g * (q - p) * c.A / (q * (g - p) * c.B), inv)};
}

double upsilon(const EnergyComponents& c, const Exponents& ex, double tol_A) {
    require_admissible(c, tol_A);
    return std::exp(LogQuotient::upsilon(ex).value(c));
}

NonlinearQuotients nonlinear_quotients(const EnergyComponents& c, const Exponents& ex, double tol_A) {
    const double ups = upsilon(c, ex, tol_A);
    const ExtremalConstants k = extremal_constants(ex);
    return {k.c * ups, k.c_e * ups};
}

std::vector<double> default_intersection_grid(double s_e) {
    std::vector<double> grid(200);
    const double lo = std::log(s_e / 10.0);
    const double hi = std::log(s_e * 10.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid.size() - 1));
    }
    return grid;
}

IntersectionReport intersection_check(const EnergyComponents& c, const Exponents& ex,
                                      const std::vector<double>& s_grid) {
    const FiberScalings fs = fiber_scalings(c, ex);
    const std::vector<double> grid = s_grid.empty() ? default_intersection_grid(fs.s_e) : s_grid;
    IntersectionReport rep;
    rep.s_e = fs.s_e;
    const RayQuotients at_root = ray_quotients(c, fs.s_e, ex);
    rep.root_residual = std::abs(at_root.R_N - at_root.R_e);
    rep.value_at_root = at_root.R_N;
    rep.min_gap_away = std::numeric_limits<double>::infinity();
    rep.sign_pattern_ok = true;
    rep.grid_points = grid.size();
    for (double s : grid) {
        const RayQuotients rq = ray_quotients(c, s, ex);
        const double diff = rq.R_N - rq.R_e;
        rep.max_gap = std::max(rep.max_gap, std::abs(diff));
        if (std::abs(s - fs.s_e) > 0.05 * fs.s_e) {
            rep.min_gap_away = std::min(rep.min_gap_away, std::abs(diff));
            if ((s < fs.s_e && !(diff > 0.0)) || (s > fs.s_e && !(diff < 0.0))) {
                rep.sign_pattern_ok = false;
            }
        }
    }
    return rep;
}

LogQuotient LogQuotient::upsilon(const Exponents& ex) {
    return {(ex.gamma - ex.p) / (ex.gamma - ex.q), -(ex.q - ex.p) / (ex.gamma - ex.q), 1.0};
}

LogQuotient LogQuotient::embedding(const Exponents& ex) { return {ex.p / ex.q, 0.0, 1.0}; }

double LogQuotient::value(const EnergyComponents& c) const {
    double v = -wT * std::log(c.T);
    if (wA != 0.0) {
        v += wA * std::log(c.A);
    }
    if (wB != 0.0) {
        v += wB * std::log(c.B);
    }
    return v;
}

DiscreteField random_positive_field(const MeshPtr& mesh, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // Sharpen the load by a random power so restarts differ in shape, not only in noise.
    const double sharpness = 1.0 + 7.0 * unit(rng);
    DiscreteField load(mesh);
    for (std::size_t i : mesh->interior_nodes()) {
        load[i] = std::pow(unit(rng), sharpness) + 1e-3;
    }
    const SobolevMetric laplace(mesh, 1.0, 0.0);
    DiscreteField u = laplace.solve(load);
    const double m = u.max_abs();
    if (m > 0.0) {
        u *= 1.0 / m;
    }
    return u;
}

namespace {

struct Evaluated {
    EnergyComponents c;
    double value = -std::numeric_limits<double>::infinity();
    bool admissible = false;
};

Evaluated evaluate(const DiscreteField& u, const ProblemSpec& spec, const LogQuotient& quotient) {
    Evaluated ev;
    ev.c = energy_components(u, spec);
    ev.admissible = ev.c.T > 0.0 && in_admissible_set(ev.c, spec) && (quotient.wB == 0.0 || ev.c.B > 0.0);
    if (ev.admissible) {
        ev.value = quotient.value(ev.c);
        ev.admissible = std::isfinite(ev.value);
    }
    return ev;
}

void normalize(DiscreteField& u, double T, double p) { u *= 1.0 / std::pow(T, 1.0 / p); }

// Ascent from u in place; returns the final log value (-inf if never admissible).
double ascend(DiscreteField& u, const ProblemSpec& spec, const LogQuotient& quotient, const SobolevMetric& metric,
              const AscentOptions& opt) {
    const double p = spec.exponents().p;
    Evaluated cur = evaluate(u, spec, quotient);
    if (!cur.admissible) {
        return -std::numeric_limits<double>::infinity();
    }
    normalize(u, cur.c.T, p);
    cur = evaluate(u, spec, quotient);
    std::vector<double> history{cur.value};
    double step = 1.0;
    for (int it = 0; it < opt.max_iters; ++it) {
        const ComponentGradients g = component_gradients(u, spec, opt.delta_reg);
        DiscreteField grad = (-quotient.wT / cur.c.T) * g.dT;
        if (quotient.wA != 0.0) {
            grad.axpy(quotient.wA / cur.c.A, g.dA);
        }
        if (quotient.wB != 0.0) {
            grad.axpy(quotient.wB / cur.c.B, g.dB);
        }
        const DiscreteField dir = metric.solve(grad);
        const double slope = dot(grad.values(), dir.values());
        if (!(slope > 1e-30)) {
            break;
        }
        double t = step;
        bool accepted = false;
        int backtracks = 0;
        DiscreteField trial;
        Evaluated next;
        while (t > 1e-14) {
            trial = u;
            trial.axpy(t, dir);
            next = evaluate(trial, spec, quotient);
            if (next.admissible && next.value >= cur.value + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
            ++backtracks;
        }
        if (!accepted) {
            break;
        }
        normalize(trial, next.c.T, p);
        u = std::move(trial);
        cur = evaluate(u, spec, quotient);
        step = backtracks == 0 ? std::min(4.0 * t, 1e6) : t;
        history.push_back(cur.value);
        const std::size_t n = history.size();
        if (n > 20 && history[n - 1] - history[n - 21] <= opt.rel_tol * std::max(1.0, std::abs(cur.value))) {
            break;
        }
    }
    return cur.value;
}

}  // namespace

AscentResult maximize_quotient(const ProblemSpec& spec, const LogQuotient& quotient, const AscentOptions& options) {
    if (options.restarts < 1) {
        throw InputError("at least one restart is required");
    }
    const SobolevMetric metric(spec.mesh_ptr(), 1.0, 0.0);
    AscentResult res;
    res.best_log_value = -std::numeric_limits<double>::infinity();
    const int total = std::max(options.restarts, static_cast<int>(options.seeds.size()));
    std::mt19937_64 seeder(options.seed);
    for (int r = 0; r < total; ++r) {
        const std::uint64_t restart_seed = seeder();
        DiscreteField u;
        if (r < static_cast<int>(options.seeds.size())) {
            u = options.seeds[static_cast<std::size_t>(r)];
            if (u.mesh_ptr() != spec.mesh_ptr()) {
                u = transfer(u, spec.mesh_ptr());
            }
            for (std::size_t i : spec.mesh().boundary_nodes()) {
                u[i] = 0.0;
            }
        } else {
            u = random_positive_field(spec.mesh_ptr(), restart_seed);
        }
        const double v = ascend(u, spec, quotient, metric, options);
        res.restart_log_values.push_back(v);
        if (std::isfinite(v) &&
            (!std::isfinite(res.best_log_value) || v > res.best_log_value + 1e-12 * std::abs(res.best_log_value))) {
            res.best_log_value = v;
            res.maximizer = u;
            res.best_restart = r;
        }
    }
    res.restarts_used = total;
    if (res.best_restart < 0) {
        throw DomainError("no restart entered the admissible set A(u) > 0 (is a = 0 on the mesh interior?)");
    }
    return res;
}

ThresholdEstimate estimate_thresholds(const ProblemSpec& spec, const AscentOptions& options) {
    const Exponents& ex = spec.exponents();
    const AscentResult res = maximize_quotient(spec, LogQuotient::upsilon(ex), options);
    const ExtremalConstants k = extremal_constants(ex);
    ThresholdEstimate est;
    est.sup_upsilon = std::exp(res.best_log_value);
    est.eps_star = k.c * est.sup_upsilon;
    est.eps_e_star = k.c_e * est.sup_upsilon;
    est.maximizer = res.maximizer;
    est.restarts_used = res.restarts_used;
    for (double v : res.restart_log_values) {
        est.restart_values.push_back(std::isfinite(v) ? std::exp(v) : 0.0);
    }
    return est;
}

}  // namespace plgs
