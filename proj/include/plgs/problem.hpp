#pragma once

#include "plgs/field.hpp"
#include "plgs/mesh.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace plgs {

/// Exponents of -eps Delta_p u = a|u|^{q-2}u - b|u|^{gamma-2}u.
struct Exponents {
    double p = 2.0;
    double q = 3.0;
    double gamma = 4.0;

    /// Critical Sobolev exponent pN/(N-p), +inf when p >= N.
    [[nodiscard]] double sobolev_critical(int dimension) const noexcept;
    /// Throws InputError unless 1 < p < q < gamma (and gamma < p* when dimension > 0).
    void validate(int dimension = 0) const;
};

/// A nonnegative coefficient with declared bounds [lower, upper].
struct CoefficientField {
    std::function<double(const Point&)> evaluate;
    double lower = 0.0;
    double upper = 0.0;
    std::string description;

    static CoefficientField constant(double value);
    /// c0 + cx*x + cy*y with the caller's declared bounds.
    static CoefficientField affine(double c0, double cx, double cy, double lower, double upper);
    /// base + amplitude * prod_k sin(pi (x_k - lo_k)/(hi_k - lo_k)) over the box;
    /// bounds are [min(base, base+amplitude), max(...)].
    static CoefficientField sinusoidal_bump(double base, double amplitude, std::array<double, 4> box, int dimension);

    /// The same field multiplied by factor > 0 (bounds scaled accordingly).
    [[nodiscard]] CoefficientField scaled(double factor) const;
};

/// Full discrete problem: exponents, eps, coefficients and mesh.
///
/// Construction samples both coefficients at every node and quadrature
/// point and throws ConfigError if a sample leaves its declared bounds, if
/// sigma_b = lower(b) is not positive, or if eps <= 0.
class ProblemSpec {
public:
    ProblemSpec(Exponents exponents, double epsilon, CoefficientField a, CoefficientField b, MeshPtr mesh);

    [[nodiscard]] const Exponents& exponents() const noexcept { return exponents_; }
    [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
    [[nodiscard]] const CoefficientField& a() const noexcept { return a_; }
    [[nodiscard]] const CoefficientField& b() const noexcept { return b_; }
    [[nodiscard]] const MeshPtr& mesh_ptr() const noexcept { return mesh_; }
    [[nodiscard]] const Mesh& mesh() const noexcept { return *mesh_; }

    /// Coefficient samples at flat quadrature points.
    [[nodiscard]] std::span<const double> a_quad() const noexcept { return a_quad_; }
    [[nodiscard]] std::span<const double> b_quad() const noexcept { return b_quad_; }
    [[nodiscard]] std::span<const double> a_nodes() const noexcept { return a_nodes_; }
    [[nodiscard]] std::span<const double> b_nodes() const noexcept { return b_nodes_; }

    /// Copy with another eps.
    [[nodiscard]] ProblemSpec with_epsilon(double epsilon) const;
    /// Copy with a and b multiplied by the given factors and another eps.
    [[nodiscard]] ProblemSpec rescaled(double epsilon, double a_factor, double b_factor) const;

private:
    Exponents exponents_;
    double epsilon_;
    CoefficientField a_;
    CoefficientField b_;
    MeshPtr mesh_;
    std::vector<double> a_quad_;
    std::vector<double> b_quad_;
    std::vector<double> a_nodes_;
    std::vector<double> b_nodes_;
};

}  // namespace plgs
