#include "plgs/functionals.hpp"

#include "plgs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace plgs {

namespace {

// |v|^{r-2} v
inline double signed_pow(double v, double r) {
    if (v == 0.0) {
        return 0.0;
    }
    const double m = std::pow(std::abs(v), r - 1.0);
    return v > 0.0 ? m : -m;
}

inline double abs_pow(double v, double r) { return v == 0.0 ? 0.0 : std::pow(std::abs(v), r); }

void require_zero_boundary(const DiscreteField& u) {
    const double m = u.max_boundary_abs();
    if (m > 1e-12) {
        std::ostringstream msg;
        msg << "field must vanish on the boundary, max |u| there is " << m;
        throw ContractViolation(msg.str());
    }
}

Point element_gradient(const DiscreteField& u, std::size_t e) {
    const Mesh& mesh = u.mesh();
    const auto verts = mesh.element(e);
    Point g;
    for (std::size_t k = 0; k < verts.size(); ++k) {
        const Point& dphi = mesh.basis_gradient(e, static_cast<int>(k));
        g.x += u[verts[k]] * dphi.x;
        g.y += u[verts[k]] * dphi.y;
    }
    return g;
}

double gradient_integral(const DiscreteField& u, double p, double delta) {
    const Mesh& mesh = u.mesh();
    double t = 0.0;
    const bool regularize = p < 2.0 && delta > 0.0;
    const double shift = regularize ? std::pow(delta, p) : 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const Point g = element_gradient(u, e);
        const double g2 = g.x * g.x + g.y * g.y;
        const double dens = regularize ? std::pow(g2 + delta * delta, 0.5 * p) - shift : abs_pow(std::sqrt(g2), p);
        t += mesh.element_measure(e) * dens;
    }
    return t;
}

EnergyComponents components_impl(const DiscreteField& u, const ProblemSpec& spec, bool positive_only) {
    require_zero_boundary(u);
    const Exponents& ex = spec.exponents();
    const Mesh& mesh = spec.mesh();
    EnergyComponents c;
    c.T = gradient_integral(u, ex.p, 0.0);
    const auto aq = spec.a_quad();
    const auto bq = spec.b_quad();
    for (std::size_t k = 0; k < mesh.num_quad_points(); ++k) {
        double v = u.at_quad(k);
        if (positive_only) {
            v = std::max(v, 0.0);
        }
        if (v == 0.0) {
            continue;
        }
        const double w = mesh.quad_weight(k);
        c.A += w * aq[k] * abs_pow(v, ex.q);
        c.B += w * bq[k] * abs_pow(v, ex.gamma);
    }
    return c;
}

}  // namespace

double membership_tolerance(const ProblemSpec& spec) {
    return 1e-12 * (1.0 + spec.b().upper * spec.mesh().volume());
}

bool in_admissible_set(const EnergyComponents& c, const ProblemSpec& spec) {
    return c.A > membership_tolerance(spec);
}

EnergyComponents energy_components(const DiscreteField& u, const ProblemSpec& spec) {
    return components_impl(u, spec, false);
}

EnergyComponents energy_components_positive(const DiscreteField& u, const ProblemSpec& spec) {
    return components_impl(u, spec, true);
}

ComponentGradients component_gradients(const DiscreteField& u, const ProblemSpec& spec, double delta_reg,
                                       bool positive_part) {
    const Exponents& ex = spec.exponents();
    const Mesh& mesh = spec.mesh();
    ComponentGradients out{DiscreteField(spec.mesh_ptr()), DiscreteField(spec.mesh_ptr()),
                           DiscreteField(spec.mesh_ptr())};
    const bool regularize = ex.p < 2.0 && delta_reg > 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const Point g = element_gradient(u, e);
        const double g2 = g.x * g.x + g.y * g.y;
        double flux = 0.0;
        if (regularize) {
            flux = std::pow(g2 + delta_reg * delta_reg, 0.5 * (ex.p - 2.0));
        } else if (g2 > 0.0) {
            flux = std::pow(g2, 0.5 * (ex.p - 2.0));
        }
        const double scale = ex.p * flux * mesh.element_measure(e);
        const auto verts = mesh.element(e);
        for (std::size_t k = 0; k < verts.size(); ++k) {
            const Point& dphi = mesh.basis_gradient(e, static_cast<int>(k));
            out.dT[verts[k]] += scale * (g.x * dphi.x + g.y * dphi.y);
        }
    }
    const auto rule = mesh.reference_rule();
    const auto aq = spec.a_quad();
    const auto bq = spec.b_quad();
    for (std::size_t k = 0; k < mesh.num_quad_points(); ++k) {
        double v = u.at_quad(k);
        if (positive_part) {
            v = std::max(v, 0.0);
        }
        if (v == 0.0) {
            continue;
        }
        const double w = mesh.quad_weight(k);
        const double fa = w * aq[k] * ex.q * signed_pow(v, ex.q);
        const double fb = w * bq[k] * ex.gamma * signed_pow(v, ex.gamma);
        const std::size_t e = k / rule.size();
        const auto& lambda = rule[k % rule.size()].lambda;
        const auto verts = mesh.element(e);
        for (std::size_t j = 0; j < verts.size(); ++j) {
            out.dA[verts[j]] += fa * lambda[j];
            out.dB[verts[j]] += fb * lambda[j];
        }
    }
    for (std::size_t i : mesh.boundary_nodes()) {
        out.dT[i] = 0.0;
        out.dA[i] = 0.0;
        out.dB[i] = 0.0;
    }
    return out;
}

double phi(const EnergyComponents& c, const ProblemSpec& spec) {
    const Exponents& ex = spec.exponents();
    return spec.epsilon() / ex.p * c.T - c.A / ex.q + c.B / ex.gamma;
}

double phi(const DiscreteField& u, const ProblemSpec& spec) { return phi(energy_components(u, spec), spec); }

double phi_regularized(const DiscreteField& u, const ProblemSpec& spec, double delta_reg) {
    EnergyComponents c = energy_components(u, spec);
    c.T = gradient_integral(u, spec.exponents().p, delta_reg);
    return phi(c, spec);
}

double phi_plus(const DiscreteField& u, const ProblemSpec& spec) {
    return phi(energy_components_positive(u, spec), spec);
}

DiscreteField weak_residual(const DiscreteField& u, const ProblemSpec& spec, double delta_reg, bool positive_part) {
    require_zero_boundary(u);
    const Exponents& ex = spec.exponents();
    ComponentGradients g = component_gradients(u, spec, delta_reg, positive_part);
    DiscreteField r = (spec.epsilon() / ex.p) * std::move(g.dT);
    r.axpy(-1.0 / ex.q, g.dA);
    r.axpy(1.0 / ex.gamma, g.dB);
    return r;
}

double j_pointwise(double alpha, double beta, double s, double q, double gamma) {
    if (!(s >= 0.0)) {
        throw InputError("j_pointwise requires s >= 0");
    }
    if (!(beta > 0.0)) {
        throw InputError("j_pointwise requires beta > 0");
    }
    if (s == 0.0) {
        return 0.0;
    }
    return -alpha / q * std::pow(s, q) + beta / gamma * std::pow(s, gamma);
}

double J_functional(const DiscreteField& u, const ProblemSpec& spec) {
    const Exponents& ex = spec.exponents();
    const Mesh& mesh = spec.mesh();
    const auto aq = spec.a_quad();
    const auto bq = spec.b_quad();
    double J = 0.0;
    for (std::size_t k = 0; k < mesh.num_quad_points(); ++k) {
        J += mesh.quad_weight(k) * j_pointwise(aq[k], bq[k], std::abs(u.at_quad(k)), ex.q, ex.gamma);
    }
    return J;
}

}  // namespace plgs
