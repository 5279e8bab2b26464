#pragma once

#include "plgs/field.hpp"
#include "plgs/functionals.hpp"
#include "plgs/problem.hpp"

#include <cstdint>
#include <vector>

namespace plgs {

/// Critical scalings along the ray s -> s u: s_N maximizes R_N(su), s_e maximizes R_e(su).
struct FiberScalings {
    double s_N = 0.0;
    double s_e = 0.0;
};

/// c_{p,q,gamma} and c_{e,p,q,gamma}; eps(u) = c * Upsilon(u), eps_e(u) = c_e * Upsilon(u).
struct ExtremalConstants {
    double c = 0.0;
    double c_e = 0.0;
};

struct RayQuotients {
    double R_N = 0.0;
    double R_e = 0.0;
};

struct NonlinearQuotients {
    double eps_u = 0.0;
    double eps_e_u = 0.0;
};

/// Outcome of comparing R_N and R_e along a ray.
struct IntersectionReport {
    double s_e = 0.0;
    /// |R_N(s_e u) - R_e(s_e u)|
    double root_residual = 0.0;
    /// R_N(s_e u) (equal to R_e(s_e u) = eps_e(u) at the root).
    double value_at_root = 0.0;
    /// max |R_N - R_e| over the grid.
    double max_gap = 0.0;
    /// min |R_N - R_e| over grid points at least 5% away from s_e (relative).
    double min_gap_away = 0.0;
    /// R_N > R_e strictly below s_e and R_N < R_e strictly above, at every grid point.
    bool sign_pattern_ok = false;
    std::size_t grid_points = 0;
};

[[nodiscard]] ExtremalConstants extremal_constants(const Exponents& ex);

/// R_N(su) and R_e(su) from the components of u. Throws DomainError when T <= 0.
[[nodiscard]] RayQuotients ray_quotients(const EnergyComponents& c, double s, const Exponents& ex);

/// Throws DomainError when A <= tol_A (u outside the admissible set) or B <= 0.
[[nodiscard]] FiberScalings fiber_scalings(const EnergyComponents& c, const Exponents& ex, double tol_A = 0.0);

/// Degree-0 quotient A^{(g-p)/(g-q)} / (T B^{(q-p)/(g-q)}), evaluated in log space.
[[nodiscard]] double upsilon(const EnergyComponents& c, const Exponents& ex, double tol_A = 0.0);

[[nodiscard]] NonlinearQuotients nonlinear_quotients(const EnergyComponents& c, const Exponents& ex,
                                                     double tol_A = 0.0);

/// Default grid: 200 log-spaced points in [s_e/10, 10 s_e].
[[nodiscard]] std::vector<double> default_intersection_grid(double s_e);

[[nodiscard]] IntersectionReport intersection_check(const EnergyComponents& c, const Exponents& ex,
                                                    const std::vector<double>& s_grid = {});

/// Coefficients of a degree-0 log quotient
///   log Q(u) = wA log A(u) + wB log B(u) - wT log T(u),
/// with wA q + wB gamma = wT p.
struct LogQuotient {
    double wA = 0.0;
    double wB = 0.0;
    double wT = 1.0;

    /// log Upsilon
    static LogQuotient upsilon(const Exponents& ex);
    /// log (||u||_{L^q(a)}^p / T): the p-th power of the a-weighted embedding constant.
    static LogQuotient embedding(const Exponents& ex);

    [[nodiscard]] double value(const EnergyComponents& c) const;
};

struct AscentOptions {
    int restarts = 16;
    int max_iters = 2000;
    std::uint64_t seed = 1;
    /// Stop a restart when the relative increase of log Q over 20 iterations drops below this.
    double rel_tol = 1e-13;
    double delta_reg = kDefaultDeltaReg;
    /// Fields tried before the random restarts (each counts as one restart).
    std::vector<DiscreteField> seeds;
};

struct AscentResult {
    double best_log_value = 0.0;
    DiscreteField maximizer;
    int restarts_used = 0;
    int best_restart = -1;
    std::vector<double> restart_log_values;
};

/// Multi-start Sobolev-gradient ascent of a degree-0 log quotient over
/// zero-boundary fields, with Armijo backtracking and renormalization to
/// ||u||_{1,p} = 1 after every step. Restarts are processed in index order
/// and the first one reaching the best value (within 1e-12 relative) wins.
/// Throws DomainError when no restart enters the admissible set.
[[nodiscard]] AscentResult maximize_quotient(const ProblemSpec& spec, const LogQuotient& quotient,
                                             const AscentOptions& options);

struct ThresholdEstimate {
    double sup_upsilon = 0.0;
    double eps_star = 0.0;
    double eps_e_star = 0.0;
    DiscreteField maximizer;
    int restarts_used = 0;
    std::vector<double> restart_values;
};

/// Lower estimate of sup Upsilon over discrete fields and the derived thresholds
/// eps* = c sup, eps_e* = c_e sup.
[[nodiscard]] ThresholdEstimate estimate_thresholds(const ProblemSpec& spec, const AscentOptions& options);

/// Random smooth positive zero-boundary field (Poisson solve with a random positive load),
/// normalized to max value 1.
[[nodiscard]] DiscreteField random_positive_field(const MeshPtr& mesh, std::uint64_t seed);

}  // namespace plgs
