#pragma once

#include "plgs/mesh.hpp"

#include <functional>
#include <span>
#include <vector>

namespace plgs {

/// Nodal values of a continuous piecewise-linear function on a mesh.
class DiscreteField {
public:
    DiscreteField() = default;
    explicit DiscreteField(MeshPtr mesh);
    DiscreteField(MeshPtr mesh, std::vector<double> values);

    [[nodiscard]] const MeshPtr& mesh_ptr() const noexcept { return mesh_; }
    [[nodiscard]] const Mesh& mesh() const noexcept { return *mesh_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] double& operator[](std::size_t i) { return values_[i]; }

    /// Interpolant evaluated at a flat-indexed quadrature point of the mesh.
    [[nodiscard]] double at_quad(std::size_t flat) const;

    /// Largest |value| over boundary nodes.
    [[nodiscard]] double max_boundary_abs() const;
    [[nodiscard]] double max_abs() const;

    DiscreteField& operator*=(double s);
    DiscreteField& operator+=(const DiscreteField& other);
    DiscreteField& operator-=(const DiscreteField& other);
    /// this += s * other
    DiscreteField& axpy(double s, const DiscreteField& other);

    friend DiscreteField operator*(double s, DiscreteField f) { return f *= s; }
    friend DiscreteField operator+(DiscreteField a, const DiscreteField& b) { return a += b; }
    friend DiscreteField operator-(DiscreteField a, const DiscreteField& b) { return a -= b; }
    friend DiscreteField operator-(DiscreteField a) { return a *= -1.0; }

private:
    MeshPtr mesh_;
    std::vector<double> values_;
};

/// Nodal positive part max{u, 0}.
[[nodiscard]] DiscreteField positive_part(DiscreteField u);
/// Nodal absolute value.
[[nodiscard]] DiscreteField abs_field(DiscreteField u);

/// Euclidean dot product of nodal vectors.
[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);

/// Nodal interpolant of f; boundary nodes set to 0 when zero_boundary is true.
/// Throws InputError on a non-finite nodal value.
[[nodiscard]] DiscreteField make_field(const MeshPtr& mesh, const std::function<double(const Point&)>& f,
                                       bool zero_boundary);

/// (int |u|^r)^(1/r) of the interpolant, element quadrature. Requires r >= 1.
[[nodiscard]] double lr_norm(const DiscreteField& u, double r);

/// (int |grad u|^p)^(1/p), exact for P1.
[[nodiscard]] double w1p_norm(const DiscreteField& u, double p);

/// Interpolate a field onto another mesh of the same domain (P1 evaluation at the target nodes).
[[nodiscard]] DiscreteField transfer(const DiscreteField& u, const MeshPtr& target);

}  // namespace plgs
