#pragma once

#include "plgs/field.hpp"
#include "plgs/problem.hpp"

namespace plgs {

/// (T, A, B) = (int |grad u|^p, int a|u|^q, int b|u|^gamma).
struct EnergyComponents {
    double T = 0.0;
    double A = 0.0;
    double B = 0.0;
};

/// Nodal gradients of T, A and B with respect to the nodal values.
/// Boundary entries are zero.
struct ComponentGradients {
    DiscreteField dT;
    DiscreteField dA;
    DiscreteField dB;
};

/// Default gradient regularization for 1 < p < 2.
inline constexpr double kDefaultDeltaReg = 1e-12;

/// Tolerance used to decide membership A(u) > 0 of the admissible set.
[[nodiscard]] double membership_tolerance(const ProblemSpec& spec);

/// Whether A(u) exceeds membership_tolerance(spec).
[[nodiscard]] bool in_admissible_set(const EnergyComponents& c, const ProblemSpec& spec);

/// Quadrature evaluation of T, A, B on the interpolant.
/// Throws ContractViolation when a boundary value exceeds 1e-12 in magnitude.
[[nodiscard]] EnergyComponents energy_components(const DiscreteField& u, const ProblemSpec& spec);

/// T(u), A(u+), B(u+) for the nodal positive part u+.
[[nodiscard]] EnergyComponents energy_components_positive(const DiscreteField& u, const ProblemSpec& spec);

/// Gradients of T (regularized by delta_reg when p < 2), A and B.
/// With positive_part set, A and B are taken of the nodal positive part.
[[nodiscard]] ComponentGradients component_gradients(const DiscreteField& u, const ProblemSpec& spec,
                                                     double delta_reg = kDefaultDeltaReg,
                                                     bool positive_part = false);

/// Phi_eps = (eps/p) T - A/q + B/gamma.
[[nodiscard]] double phi(const EnergyComponents& c, const ProblemSpec& spec);
[[nodiscard]] double phi(const DiscreteField& u, const ProblemSpec& spec);

/// Energy whose exact gradient is weak_residual for 1 < p < 2: the
/// gradient term is int (|grad u|^2 + delta^2)^{p/2} - delta^p. Equals phi for p >= 2.
[[nodiscard]] double phi_regularized(const DiscreteField& u, const ProblemSpec& spec,
                                     double delta_reg = kDefaultDeltaReg);

/// Truncated energy: (eps/p) T(u) - A(u+)/q + B(u+)/gamma.
[[nodiscard]] double phi_plus(const DiscreteField& u, const ProblemSpec& spec);

/// Nodal weak-form residual of Phi_eps (or of the truncated functional when
/// positive_part is set). Component i pairs the equation with the hat
/// function of node i; boundary components are 0.
[[nodiscard]] DiscreteField weak_residual(const DiscreteField& u, const ProblemSpec& spec,
                                          double delta_reg = kDefaultDeltaReg, bool positive_part = false);

/// j(s) = -(alpha/q) s^q + (beta/gamma) s^gamma. Throws InputError for s < 0 or beta <= 0.
[[nodiscard]] double j_pointwise(double alpha, double beta, double s, double q, double gamma);

/// J(u) = int j_x(|u(x)|) dx with pointwise coefficients; no boundary requirement.
[[nodiscard]] double J_functional(const DiscreteField& u, const ProblemSpec& spec);

}  // namespace plgs
