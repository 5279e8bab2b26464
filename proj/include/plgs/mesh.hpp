#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace plgs {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Interval [x0,x1] (1D).
struct IntervalDomain {
    double x0 = 0.0;
    double x1 = 1.0;
};

/// Rectangle [x0,x1]x[y0,y1] (2D).
struct RectangleDomain {
    double x0 = 0.0;
    double x1 = 1.0;
    double y0 = 0.0;
    double y1 = 1.0;
};

/// Reference quadrature point: barycentric coordinates of the element
/// vertices plus the weight as a fraction of the element measure.
struct RefQuadPoint {
    std::array<double, 3> lambda{};
    double weight_fraction = 0.0;
};

/// Uniform conforming P1 mesh. 1D elements are intervals (2 vertices), 2D
/// elements are triangles obtained by splitting each rectangle cell along
/// its lower-left/upper-right diagonal.
///
/// Immutable after construction; shared between fields via shared_ptr.
class Mesh {
public:
    [[nodiscard]] int dimension() const noexcept { return dimension_; }
    [[nodiscard]] std::size_t num_nodes() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t num_elements() const noexcept { return measures_.size(); }
    /// Vertices per element: 2 in 1D, 3 in 2D.
    [[nodiscard]] int element_size() const noexcept { return dimension_ == 1 ? 2 : 3; }

    [[nodiscard]] std::span<const Point> nodes() const noexcept { return nodes_; }
    [[nodiscard]] const Point& node(std::size_t i) const { return nodes_[i]; }
    [[nodiscard]] std::span<const int> element(std::size_t e) const {
        return {connectivity_[e].data(), static_cast<std::size_t>(element_size())};
    }
    [[nodiscard]] double element_measure(std::size_t e) const { return measures_[e]; }
    /// Gradient of the local basis function attached to vertex k of element e
    /// (constant on the element for P1).
    [[nodiscard]] const Point& basis_gradient(std::size_t e, int k) const { return gradients_[e][k]; }

    [[nodiscard]] std::span<const RefQuadPoint> reference_rule() const noexcept { return rule_; }
    /// Total number of quadrature points (elements x points per element).
    [[nodiscard]] std::size_t num_quad_points() const noexcept { return measures_.size() * rule_.size(); }
    /// Physical coordinates of the flat-indexed quadrature point.
    [[nodiscard]] Point quad_point(std::size_t flat) const;
    [[nodiscard]] double quad_weight(std::size_t flat) const;

    [[nodiscard]] bool is_boundary(std::size_t i) const { return boundary_flag_[i] != 0; }
    [[nodiscard]] std::span<const std::size_t> boundary_nodes() const noexcept { return boundary_; }
    [[nodiscard]] std::span<const std::size_t> interior_nodes() const noexcept { return interior_; }

    /// Lebesgue measure of the domain.
    [[nodiscard]] double volume() const noexcept { return volume_; }
    /// Nodes per axis, {n, 1} in 1D.
    [[nodiscard]] std::array<std::size_t, 2> resolution() const noexcept { return resolution_; }
    /// Bounding box as {x0, x1, y0, y1} (y entries are 0 in 1D).
    [[nodiscard]] std::array<double, 4> bounds() const noexcept { return bounds_; }
    /// Distance from a point to the domain boundary.
    [[nodiscard]] double distance_to_boundary(const Point& pt) const noexcept;

private:
    friend std::shared_ptr<const Mesh> build_mesh(const IntervalDomain&, std::size_t);
    friend std::shared_ptr<const Mesh> build_mesh(const RectangleDomain&, std::size_t, std::size_t);

    void finalize();

    int dimension_ = 1;
    std::vector<Point> nodes_;
    std::vector<std::array<int, 3>> connectivity_;
    std::vector<double> measures_;
    std::vector<std::array<Point, 3>> gradients_;
    std::vector<RefQuadPoint> rule_;
    std::vector<unsigned char> boundary_flag_;
    std::vector<std::size_t> boundary_;
    std::vector<std::size_t> interior_;
    std::array<std::size_t, 2> resolution_{};
    std::array<double, 4> bounds_{};
    double volume_ = 0.0;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Uniform interval mesh with `nodes` nodes (>= 3); 3-point Gauss rule per element.
MeshPtr build_mesh(const IntervalDomain& domain, std::size_t nodes);

/// Uniform rectangle mesh with nx x ny nodes (each >= 3), cells split into
/// two triangles; 3-point mid-edge rule per triangle.
MeshPtr build_mesh(const RectangleDomain& domain, std::size_t nx, std::size_t ny);

}  // namespace plgs
