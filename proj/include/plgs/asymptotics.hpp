#pragma once

#include "plgs/field.hpp"
#include "plgs/problem.hpp"
#include "plgs/solver.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace plgs {

/// Pointwise balance a u^{q-1} = b u^{gamma-1} on the mesh.
///
/// `quad_values` holds the exact profile at every flat quadrature point so
/// that integrals against it are not polluted by nodal interpolation.
struct LimitProfile {
    DiscreteField field;
    std::vector<double> quad_values;
    double rho_minus = 0.0;
    double rho_plus = 0.0;
};

/// (a/b)^{1/(gamma-q)}.
[[nodiscard]] double limit_value(double a, double b, const Exponents& ex);

/// Throws HypothesisViolation when the declared lower bound of a is not positive.
[[nodiscard]] LimitProfile limit_profile(const ProblemSpec& spec);

/// max over nodes of |a u0^{q-1} - b u0^{gamma-1}|.
[[nodiscard]] double limiting_equation_residual(const LimitProfile& profile, const ProblemSpec& spec);

/// J(u0) from the exact quadrature-point values.
[[nodiscard]] double J_limit(const LimitProfile& profile, const ProblemSpec& spec);

struct AsymptoticMetrics {
    double eta = 0.0;
    /// meas{|u - u0| >= eta}, summed over quadrature weights.
    double measure_bad = 0.0;
    std::vector<std::pair<double, double>> lr_errors;
    /// Max nodal |u - u0| over nodes at distance >= interior_margin from the boundary.
    double linf_interior_err = 0.0;
    double interior_margin = 0.0;
    double energy = 0.0;
    double J_limit = 0.0;
    double energy_gap = 0.0;
    double J_gap = 0.0;
};

/// Convergence metrics of u against the limit profile. Every r must satisfy
/// 1 <= r < gamma; eta must be positive.
[[nodiscard]] AsymptoticMetrics asymptotic_metrics(const DiscreteField& u, const LimitProfile& profile,
                                                   const ProblemSpec& spec, double eta,
                                                   const std::vector<double>& r_list,
                                                   double interior_margin = 0.1);

/// Coefficient box [sigma_a, a_hat] x [sigma_b, b_hat].
struct CoefficientBox {
    double sigma_a = 0.0;
    double a_hat = 0.0;
    double sigma_b = 0.0;
    double b_hat = 0.0;

    static CoefficientBox of(const ProblemSpec& spec);
};

struct SeparationGrid {
    int alpha_points = 64;
    int beta_points = 64;
    int s_points = 512;
};

struct SeparationEstimate {
    double kappa = 0.0;
    /// Cut-off beyond which j - j(rho) >= 1 on the whole box.
    double s_max = 0.0;
    double argmin_alpha = 0.0;
    double argmin_beta = 0.0;
    double argmin_s = 0.0;
};

/// Brute-force inf of j_{alpha,beta}(s) - j_{alpha,beta}(rho(alpha,beta)) over
/// the box and over s in [0, M] outside the eta-tube around rho, capped at 1.
[[nodiscard]] SeparationEstimate separation_constant(const CoefficientBox& box, double q, double gamma, double eta,
                                                     const SeparationGrid& grid = {});

struct SweepOptions {
    double eta = 0.1;
    std::vector<double> r_list{1.0, 2.0};
    double interior_margin = 0.1;
    SolverOptions solver;
    /// Rows with eps >= this value are flagged (the ground state may be trivial there).
    std::optional<double> eps_e_star;
    int threads = 1;
};

struct SweepRow {
    double eps = 0.0;
    AsymptoticMetrics metrics;
    bool converged = false;
    bool trivial = false;
    bool above_threshold = false;
    int iterations = 0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    double J_limit = 0.0;
    double eta = 0.0;
};

/// One ground-state solve and metric evaluation per eps. eps_list must be
/// strictly decreasing and positive. Non-converged rows are flagged, not fatal.
[[nodiscard]] SweepReport epsilon_sweep(const ProblemSpec& spec_template, const std::vector<double>& eps_list,
                                        const SweepOptions& options);

enum class ScalingForm { Lambda, Nu };

struct ScaledSolution {
    DiscreteField field;
    /// lambda or nu.
    double parameter = 0.0;
    /// field = factor * u_eps
    double factor = 0.0;
    /// Scaled weak residual = residual_factor * eps-form weak residual.
    double residual_factor = 0.0;
};

/// u_lambda = eps^{-1/(gamma-p)} u, lambda = eps^{-(gamma-q)/(gamma-p)};
/// u_nu = eps^{-1/(q-p)} u, nu = eps^{(gamma-q)/(q-p)}.
[[nodiscard]] ScaledSolution scale_solution(const DiscreteField& u_eps, double eps, const Exponents& ex,
                                            ScalingForm form);

/// Inverse map: lambda^{-1/(gamma-q)} u_lambda or nu^{1/(gamma-q)} u_nu.
[[nodiscard]] DiscreteField unscale_solution(const DiscreteField& scaled, double parameter, const Exponents& ex,
                                             ScalingForm form);

/// The eps = 1 problem -Delta_p u = lambda a u^{q-1} - b u^{gamma-1}
/// (or a u^{q-1} - nu b u^{gamma-1}) on the mesh of spec.
[[nodiscard]] ProblemSpec scaled_problem(const ProblemSpec& spec, ScalingForm form, double parameter);

/// Boundary-layer profile U(xi) of U'' = U^{gamma-1} - U^{q-1}, U(0) = 0, U(inf) = 1.
/// `deficit` stores 1 - U without the cancellation of forming it from U.
struct LayerProfile {
    std::vector<double> xi;
    std::vector<double> U;
    std::vector<double> deficit;
    double q = 0.0;
    double gamma = 0.0;

    /// Linear interpolation in xi; beyond the grid the profile is clamped to 1.
    [[nodiscard]] double value(double x) const;
};

/// Solves int_0^U dt / sqrt(2 W(t)) = xi on a uniform grid of `points` values in
/// [0, xi_max]. Throws NumericalError if the quadrature does not converge.
[[nodiscard]] LayerProfile layer_profile_1d(double q, double gamma, double xi_max, std::size_t points);

/// U(x/sqrt(eps)) + U((1-x)/sqrt(eps)) - 1 at the nodes of a mesh on [0,1].
[[nodiscard]] DiscreteField composite_approx_1d(double eps, const MeshPtr& mesh, const LayerProfile& profile);

}  // namespace plgs
