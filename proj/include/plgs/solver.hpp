#pragma once

#include "plgs/field.hpp"
#include "plgs/functionals.hpp"
#include "plgs/problem.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace plgs {

struct TraceEntry {
    int iteration = 0;
    double energy = 0.0;
    double residual_norm = 0.0;
};

/// Options shared by the ground-state and mountain-pass solvers.
struct SolverOptions {
    /// Convergence: max |weak_residual| <= tol_factor * (1 + |Phi|).
    double tol_factor = 1e-8;
    /// Descent keeps going until the residual is below polish_factor * tolerance
    /// (or it stalls); convergence is still judged against the tolerance.
    double polish_factor = 0.05;
    int max_iters = 50000;
    /// Random nonnegative restarts in addition to the fiber-optimal seed.
    int random_restarts = 4;
    std::uint64_t seed = 1;
    double delta_reg = kDefaultDeltaReg;
    /// Descent metric: eps * stiffness + mass_weight * mass.
    double mass_weight = 1.0;
    double armijo_slope = 1e-4;
    double backtrack_factor = 0.5;
    bool record_trace = true;
};

/// Result of a single descent run (one restart).
struct DescentRun {
    DiscreteField field;
    double energy = 0.0;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    bool monotone = true;
    std::vector<TraceEntry> trace;
};

struct NehariDiagnostics {
    /// |eps T - A + B| / (eps T + A + B)
    double nehari_residual = 0.0;
    /// (p - q) eps T + (gamma - q) B
    double fiber_second_derivative = 0.0;
    double R_N = 0.0;
    double R_e = 0.0;
};

struct SolveReport {
    DiscreteField field;
    double energy = 0.0;
    double residual_norm = 0.0;
    double tolerance = 0.0;
    double nehari_residual = 0.0;
    double fiber_second_derivative = 0.0;
    int iterations = 0;
    bool converged = false;
    /// The zero field was returned (it has lower energy than every candidate).
    bool trivial = false;
    /// Distinct converged candidates reached the minimal energy within tolerance.
    bool multiplicity = false;
    int selected_restart = -1;
    double delta_reg = kDefaultDeltaReg;
    std::vector<double> restart_energies;
    std::vector<bool> restart_converged;
    /// Trace of the selected restart.
    std::vector<TraceEntry> trace;
    bool trace_monotone = true;
};

struct MountainPassOptions {
    double tol_factor = 1e-8;
    /// Also require max |residual| <= rel_tol * max |diffusion term|: the
    /// mountain-pass solution can be small enough for the absolute test alone
    /// to accept a field well off the Nehari manifold.
    double rel_tol = 1e-6;
    int path_points = 21;
    int max_iters = 50000;
    std::uint64_t seed = 1;
    double delta_reg = kDefaultDeltaReg;
    /// Smaller than the descent default: near the saddle the reaction term is
    /// tiny and a unit mass weight makes the climbing step crawl.
    double mass_weight = 0.02;
};

struct MountainPassReport {
    DiscreteField field;
    double energy = 0.0;
    double residual_norm = 0.0;
    double tolerance = 0.0;
    /// residual_norm / max |(eps/p) dT|
    double relative_residual = 0.0;
    /// max_k Phi+(path knot k) of the final path.
    double path_level = 0.0;
    int iterations = 0;
    bool converged = false;
    double delta_reg = kDefaultDeltaReg;
    std::vector<double> path_energies;
};

/// Small-sphere barrier of the truncated functional: Phi+ >= delta on ||u||_{1,p} = rho.
struct BarrierReport {
    /// Estimated sup A(u) / T(u)^{q/p} (a-weighted L^q embedding constant to the q-th power).
    double embedding_constant = 0.0;
    double rho = 0.0;
    double delta = 0.0;
    double min_sampled = 0.0;
    int samples = 0;
    bool holds = false;
};

/// Single preconditioned descent run on Phi (or Phi+ when positive_part is set) from init.
[[nodiscard]] DescentRun descend(const ProblemSpec& spec, DiscreteField init, const SolverOptions& options,
                                 bool positive_part = false);

/// Ground state by global minimization of Phi_eps over zero-boundary fields.
/// Non-convergence is reported, not thrown.
[[nodiscard]] SolveReport solve_ground_state(const ProblemSpec& spec, const std::optional<DiscreteField>& init = {},
                                             const SolverOptions& options = {});

/// Second (mountain-pass) solution: climbing-image string method for Phi+
/// on paths from 0 to the ground state. Throws ContractViolation when the
/// ground state does not have negative energy.
[[nodiscard]] MountainPassReport solve_mountain_pass(const ProblemSpec& spec, const DiscreteField& ground_state,
                                                     const MountainPassOptions& options = {});

/// Throws DomainError for u = 0.
[[nodiscard]] NehariDiagnostics nehari_diagnostics(const DiscreteField& u, const ProblemSpec& spec);

/// Fiber-optimal seed s_e(w) w for w the zero-boundary interpolant of (a/b)^{1/(gamma-q)}.
/// Returns nullopt when w is outside the admissible set.
[[nodiscard]] std::optional<DiscreteField> fiber_optimal_seed(const ProblemSpec& spec);

/// Barrier check with an estimated embedding constant and `samples` random fields on the sphere.
[[nodiscard]] BarrierReport barrier_check(const ProblemSpec& spec, int samples, std::uint64_t seed);

}  // namespace plgs
