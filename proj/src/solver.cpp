#include "plgs/solver.hpp"

#include "plgs/errors.hpp"
#include "plgs/metric.hpp"
#include "plgs/rayleigh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace plgs {

namespace {

double energy_of(const DiscreteField& u, const ProblemSpec& spec, bool positive_part) {
    return positive_part ? phi_plus(u, spec) : phi(u, spec);
}

double tolerance(double tol_factor, double energy) { return tol_factor * (1.0 + std::abs(energy)); }

DescentRun descend_with(const ProblemSpec& spec, DiscreteField u, const SolverOptions& opt, bool positive_part,
                        const SobolevMetric& metric) {
    DescentRun run;
    for (std::size_t i : spec.mesh().boundary_nodes()) {
        u[i] = 0.0;
    }
    double energy = energy_of(u, spec, positive_part);
    DiscreteField g = weak_residual(u, spec, opt.delta_reg, positive_part);
    double step = 1.0;
    double best_res = std::numeric_limits<double>::infinity();
    int since_best = 0;
    int it = 0;
    for (;; ++it) {
        const double res = g.max_abs();
        if (opt.record_trace) {
            run.trace.push_back({it, energy, res});
        }
        if (res <= opt.polish_factor * tolerance(opt.tol_factor, energy) || it >= opt.max_iters) {
            break;
        }
        // Near round-off the energy stops moving and accepted steps can cycle.
        if (res < best_res) {
            best_res = res;
            since_best = 0;
        } else if (++since_best >= (res <= tolerance(opt.tol_factor, energy) ? 20 : 500)) {
            break;
        }
        DiscreteField dir = metric.solve(g);
        dir *= -1.0;
        const double slope = dot(g.values(), dir.values());
        if (!(slope < 0.0)) {
            break;
        }
        double t = step;
        bool accepted = false;
        DiscreteField trial;
        double trial_energy = energy;
        while (t > 1e-16) {
            trial = u;
            trial.axpy(t, dir);
            trial_energy = energy_of(trial, spec, positive_part);
            if (trial_energy <= energy + opt.armijo_slope * t * slope) {
                accepted = true;
                break;
            }
            t *= opt.backtrack_factor;
        }
        if (!accepted) {
            // Sufficient decrease is below round-off. Polishing past the real
            // tolerance is not worth crawling for.
            if (res <= tolerance(opt.tol_factor, energy)) {
                break;
            }
            // Otherwise accept the smallest non-increasing step if it also
            // reduces the residual.
            t = step * 1e-3;
            trial = u;
            trial.axpy(t, dir);
            trial_energy = energy_of(trial, spec, positive_part);
            if (trial_energy > energy) {
                break;
            }
            const DiscreteField g_trial = weak_residual(trial, spec, opt.delta_reg, positive_part);
            if (g_trial.max_abs() >= res) {
                break;
            }
        }
        DiscreteField g_new = weak_residual(trial, spec, opt.delta_reg, positive_part);
        // Preconditioned Barzilai-Borwein trial step for the next iteration:
        // (s, P s) / (s, y) with s = t dir, (s, P s) = t^2 |slope|.
        double sy = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            sy += t * dir[i] * (g_new[i] - g[i]);
        }
        const double sPs = t * t * (-slope);
        step = sy > 0.0 ? std::clamp(sPs / sy, 1e-8, 1e8) : std::min(2.0 * t, 1e8);
        if (trial_energy > energy) {
            run.monotone = false;
        }
        u = std::move(trial);
        energy = trial_energy;
        g = std::move(g_new);
    }
    run.iterations = it;
    run.energy = energy;
    run.residual_norm = g.max_abs();
    run.converged = run.residual_norm <= tolerance(opt.tol_factor, energy);
    run.field = std::move(u);
    return run;
}

}  // namespace

DescentRun descend(const ProblemSpec& spec, DiscreteField init, const SolverOptions& options, bool positive_part) {
    const SobolevMetric metric(spec.mesh_ptr(), spec.epsilon(), options.mass_weight);
    return descend_with(spec, std::move(init), options, positive_part, metric);
}

std::optional<DiscreteField> fiber_optimal_seed(const ProblemSpec& spec) {
    const Exponents& ex = spec.exponents();
    DiscreteField w(spec.mesh_ptr());
    const auto an = spec.a_nodes();
    const auto bn = spec.b_nodes();
    for (std::size_t i : spec.mesh().interior_nodes()) {
        w[i] = std::pow(an[i] / bn[i], 1.0 / (ex.gamma - ex.q));
    }
    const EnergyComponents c = energy_components(w, spec);
    if (!in_admissible_set(c, spec)) {
        return std::nullopt;
    }
    return fiber_scalings(c, ex).s_e * std::move(w);
}

NehariDiagnostics nehari_diagnostics(const DiscreteField& u, const ProblemSpec& spec) {
    const EnergyComponents c = energy_components(u, spec);
    if (!(c.T > 0.0)) {
        throw DomainError("Nehari diagnostics are undefined for the zero field");
    }
    const Exponents& ex = spec.exponents();
    const double eps = spec.epsilon();
    NehariDiagnostics d;
    d.nehari_residual = std::abs(eps * c.T - c.A + c.B) / (eps * c.T + c.A + c.B);
    d.fiber_second_derivative = (ex.p - ex.q) * eps * c.T + (ex.gamma - ex.q) * c.B;
    const RayQuotients rq = ray_quotients(c, 1.0, ex);
    d.R_N = rq.R_N;
    d.R_e = rq.R_e;
    return d;
}

SolveReport solve_ground_state(const ProblemSpec& spec, const std::optional<DiscreteField>& init,
                               const SolverOptions& options) {
    const SobolevMetric metric(spec.mesh_ptr(), spec.epsilon(), options.mass_weight);
    const Exponents& ex = spec.exponents();

    std::vector<DiscreteField> starts;
    if (init) {
        starts.push_back(*init);
    } else if (auto seed = fiber_optimal_seed(spec)) {
        starts.push_back(std::move(*seed));
    }
    std::mt19937_64 seeder(options.seed);
    for (int r = 0; r < options.random_restarts; ++r) {
        DiscreteField w = random_positive_field(spec.mesh_ptr(), seeder());
        const EnergyComponents c = energy_components(w, spec);
        if (in_admissible_set(c, spec)) {
            w *= fiber_scalings(c, ex).s_e;
        }
        starts.push_back(std::move(w));
    }

    SolveReport rep;
    rep.delta_reg = options.delta_reg;
    std::vector<DescentRun> runs;
    int total_iters = 0;
    for (auto& s : starts) {
        runs.push_back(descend_with(spec, std::move(s), options, false, metric));
        total_iters += runs.back().iterations;
        rep.restart_energies.push_back(runs.back().energy);
        rep.restart_converged.push_back(runs.back().converged);
    }
    rep.iterations = total_iters;

    int best = -1;
    for (int r = 0; r < static_cast<int>(runs.size()); ++r) {
        if (best < 0 || runs[r].energy < runs[best].energy - 1e-12 * (1.0 + std::abs(runs[best].energy))) {
            best = r;
        }
    }
    if (best < 0 || !(runs[best].energy < 0.0)) {
        // Zero is the verified global minimizer candidate.
        rep.field = DiscreteField(spec.mesh_ptr());
        rep.trivial = true;
        rep.converged = true;
        rep.tolerance = tolerance(options.tol_factor, 0.0);
        rep.selected_restart = best;
        if (best >= 0) {
            rep.trace = runs[best].trace;
            rep.trace_monotone = runs[best].monotone;
        }
        return rep;
    }

    const DescentRun& sel = runs[best];
    const double max_u = sel.field.max_abs();
    for (int r = 0; r < static_cast<int>(runs.size()); ++r) {
        if (r == best || !runs[r].converged) {
            continue;
        }
        const double gap = std::abs(runs[r].energy - sel.energy);
        if (gap <= tolerance(options.tol_factor, sel.energy)) {
            const DiscreteField diff = abs_field(runs[r].field) - abs_field(sel.field);
            if (diff.max_abs() > 1e-3 * max_u) {
                rep.multiplicity = true;
            }
        }
    }

    rep.field = abs_field(sel.field);
    rep.energy = phi(rep.field, spec);
    rep.residual_norm = weak_residual(rep.field, spec, options.delta_reg).max_abs();
    rep.tolerance = tolerance(options.tol_factor, rep.energy);
    rep.converged = rep.residual_norm <= rep.tolerance;
    rep.selected_restart = best;
    rep.trace = sel.trace;
    rep.trace_monotone = sel.monotone;
    const NehariDiagnostics d = nehari_diagnostics(rep.field, spec);
    rep.nehari_residual = d.nehari_residual;
    rep.fiber_second_derivative = d.fiber_second_derivative;
    return rep;
}

namespace {

// max |(eps/p) dT(u)|: the size of the diffusion term in the weak residual.
double diffusion_scale(const DiscreteField& u, const ProblemSpec& spec, double delta_reg) {
    const ComponentGradients g = component_gradients(u, spec, delta_reg, true);
    const double s = spec.epsilon() / spec.exponents().p * g.dT.max_abs();
    return s > 0.0 ? s : 1.0;
}

double p_norm(const DiscreteField& v, const SobolevMetric& metric) {
    return std::sqrt(std::max(dot(v.values(), metric.apply(v).values()), 0.0));
}

// Redistribute knots first..last (inclusive endpoints fixed) at equal metric arclength.
void reparametrize(std::vector<DiscreteField>& path, std::size_t first, std::size_t last,
                   const SobolevMetric& metric) {
    if (last <= first + 1) {
        return;
    }
    std::vector<double> arc{0.0};
    for (std::size_t k = first + 1; k <= last; ++k) {
        arc.push_back(arc.back() + p_norm(path[k] - path[k - 1], metric));
    }
    const double total = arc.back();
    if (!(total > 0.0)) {
        return;
    }
    std::vector<DiscreteField> fresh;
    const std::size_t n = last - first;
    std::size_t seg = 0;
    for (std::size_t j = 1; j < n; ++j) {
        const double target = total * static_cast<double>(j) / static_cast<double>(n);
        while (seg + 1 < arc.size() - 1 && arc[seg + 1] < target) {
            ++seg;
        }
        const double len = arc[seg + 1] - arc[seg];
        const double w = len > 0.0 ? std::clamp((target - arc[seg]) / len, 0.0, 1.0) : 0.0;
        DiscreteField knot = path[first + seg];
        knot *= 1.0 - w;
        knot.axpy(w, path[first + seg + 1]);
        fresh.push_back(std::move(knot));
    }
    for (std::size_t j = 1; j < n; ++j) {
        path[first + j] = std::move(fresh[j - 1]);
    }
}

}  // namespace

MountainPassReport solve_mountain_pass(const ProblemSpec& spec, const DiscreteField& ground_state,
                                       const MountainPassOptions& options) {
    if (options.path_points < 3) {
        throw InputError("mountain pass needs at least 3 path points");
    }
    const double gs_energy = phi_plus(ground_state, spec);
    if (!(gs_energy < 0.0)) {
        throw ContractViolation("mountain pass requires a ground state with negative energy");
    }
    const SobolevMetric metric(spec.mesh_ptr(), spec.epsilon(), options.mass_weight);
    const auto n = static_cast<std::size_t>(options.path_points);

    std::vector<DiscreteField> path;
    std::mt19937_64 rng(options.seed);
    const double amp = 1e-3 * ground_state.max_abs();
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n - 1);
        DiscreteField knot = t * ground_state;
        if (k > 0 && k + 1 < n) {
            knot.axpy(amp * t * (1.0 - t), random_positive_field(spec.mesh_ptr(), rng()));
        }
        path.push_back(std::move(knot));
    }
    reparametrize(path, 0, n - 1, metric);

    MountainPassReport rep;
    rep.delta_reg = options.delta_reg;
    std::vector<double> energy(n);
    std::vector<double> knot_step(n, 1.0);
    double climb_step = 0.5;
    double prev_climb_res = std::numeric_limits<double>::infinity();
    std::size_t climb = 0;
    int it = 0;
    DiscreteField climb_residual;
    for (;; ++it) {
        for (std::size_t k = 0; k < n; ++k) {
            energy[k] = phi_plus(path[k], spec);
        }
        climb = static_cast<std::size_t>(std::max_element(energy.begin() + 1, energy.end() - 1) - energy.begin());
        climb_residual = weak_residual(path[climb], spec, options.delta_reg, true);
        const double res = climb_residual.max_abs();
        rep.tolerance = tolerance(options.tol_factor, energy[climb]);
        rep.relative_residual = res / diffusion_scale(path[climb], spec, options.delta_reg);
        if (res <= rep.tolerance && rep.relative_residual <= options.rel_tol && energy[climb] > 0.0) {
            rep.converged = true;
            break;
        }
        if (it >= options.max_iters) {
            break;
        }
        // Climbing knot: ascend along the path tangent, descend elsewhere.
        {
            DiscreteField tau = path[climb + 1] - path[climb - 1];
            const double tn = p_norm(tau, metric);
            DiscreteField dir = metric.solve(climb_residual);
            dir *= -1.0;
            if (tn > 0.0) {
                tau *= 1.0 / tn;
                dir.axpy(2.0 * dot(climb_residual.values(), tau.values()), tau);
            }
            if (res > prev_climb_res) {
                climb_step = std::max(0.5 * climb_step, 1e-6);
            } else {
                climb_step = std::min(1.1 * climb_step, 1.0);
            }
            prev_climb_res = res;
            path[climb].axpy(climb_step, dir);
        }
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (k == climb) {
                continue;
            }
            const DiscreteField g = weak_residual(path[k], spec, options.delta_reg, true);
            DiscreteField dir = metric.solve(g);
            dir *= -1.0;
            const double slope = dot(g.values(), dir.values());
            if (!(slope < 0.0)) {
                continue;
            }
            double t = std::min(2.0 * knot_step[k], 1.0);
            while (t > 1e-10) {
                DiscreteField trial = path[k];
                trial.axpy(t, dir);
                if (phi_plus(trial, spec) <= energy[k] + 1e-4 * t * slope) {
                    path[k] = std::move(trial);
                    break;
                }
                t *= 0.5;
            }
            knot_step[k] = t;
        }
        reparametrize(path, 0, climb, metric);
        reparametrize(path, climb, n - 1, metric);
    }
    rep.iterations = it;
    rep.path_energies = energy;
    rep.path_level = energy[climb];
    rep.field = positive_part(path[climb]);
    rep.energy = phi(rep.field, spec);
    rep.residual_norm = weak_residual(rep.field, spec, options.delta_reg).max_abs();
    rep.tolerance = tolerance(options.tol_factor, rep.energy);
    rep.relative_residual = rep.residual_norm / diffusion_scale(rep.field, spec, options.delta_reg);
    rep.converged = rep.converged && rep.residual_norm <= rep.tolerance;
    return rep;
}

BarrierReport barrier_check(const ProblemSpec& spec, int samples, std::uint64_t seed) {
    const Exponents& ex = spec.exponents();
    AscentOptions opt;
    opt.restarts = 4;
    opt.max_iters = 500;
    opt.seed = seed;
    const AscentResult emb = maximize_quotient(spec, LogQuotient::embedding(ex), opt);
    BarrierReport rep;
    // exp(best) = sup A^{p/q} / T  =>  sup A / T^{q/p} = exp(best)^{q/p}
    rep.embedding_constant = std::exp(emb.best_log_value * ex.q / ex.p);
    const double eps = spec.epsilon();
    rep.rho = std::pow(eps / rep.embedding_constant, 1.0 / (ex.q - ex.p));
    rep.delta = eps * std::pow(rep.rho, ex.p) * (1.0 / ex.p - 1.0 / ex.q);
    rep.min_sampled = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int s = 0; s < samples; ++s) {
        DiscreteField u = random_positive_field(spec.mesh_ptr(), rng());
        if (s % 2 == 1) {
            // mixed-sign sample
            DiscreteField v = random_positive_field(spec.mesh_ptr(), rng());
            u.axpy(-unit(rng) - 1.0, v);
        }
        const double norm = w1p_norm(u, ex.p);
        if (!(norm > 0.0)) {
            continue;
        }
        u *= rep.rho / norm;
        rep.min_sampled = std::min(rep.min_sampled, phi_plus(u, spec));
        ++rep.samples;
    }
    rep.holds = rep.samples > 0 && rep.min_sampled >= rep.delta && rep.delta > 0.0;
    return rep;
}

}  // namespace plgs
