#include "plgs/field.hpp"

#include "plgs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace plgs {

DiscreteField::DiscreteField(MeshPtr mesh) : mesh_(std::move(mesh)), values_(mesh_->num_nodes(), 0.0) {}

DiscreteField::DiscreteField(MeshPtr mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (values_.size() != mesh_->num_nodes()) {
        throw InputError("field has " + std::to_string(values_.size()) + " values for a mesh with " +
                         std::to_string(mesh_->num_nodes()) + " nodes");
    }
}

double DiscreteField::at_quad(std::size_t flat) const {
    const auto rule = mesh_->reference_rule();
    const std::size_t e = flat / rule.size();
    const auto& lambda = rule[flat % rule.size()].lambda;
    const auto verts = mesh_->element(e);
    double v = 0.0;
    for (std::size_t k = 0; k < verts.size(); ++k) {
        v += lambda[k] * values_[verts[k]];
    }
    return v;
}

double DiscreteField::max_boundary_abs() const {
    double m = 0.0;
    for (std::size_t i : mesh_->boundary_nodes()) {
        m = std::max(m, std::abs(values_[i]));
    }
    return m;
}

double DiscreteField::max_abs() const {
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

DiscreteField& DiscreteField::operator*=(double s) {
    for (double& v : values_) {
        v *= s;
    }
    return *this;
}

DiscreteField& DiscreteField::operator+=(const DiscreteField& other) { return axpy(1.0, other); }
DiscreteField& DiscreteField::operator-=(const DiscreteField& other) { return axpy(-1.0, other); }

DiscreteField& DiscreteField::axpy(double s, const DiscreteField& other) {
    if (other.values_.size() != values_.size()) {
        throw InputError("field size mismatch");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] += s * other.values_[i];
    }
    return *this;
}

DiscreteField positive_part(DiscreteField u) {
    for (double& v : u.values()) {
        v = std::max(v, 0.0);
    }
    return u;
}

DiscreteField abs_field(DiscreteField u) {
    for (double& v : u.values()) {
        v = std::abs(v);
    }
    return u;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

DiscreteField make_field(const MeshPtr& mesh, const std::function<double(const Point&)>& f, bool zero_boundary) {
    DiscreteField u(mesh);
    for (std::size_t i = 0; i < mesh->num_nodes(); ++i) {
        const double v = f(mesh->node(i));
        if (!std::isfinite(v)) {
            throw InputError("non-finite field value at node " + std::to_string(i));
        }
        u[i] = (zero_boundary && mesh->is_boundary(i)) ? 0.0 : v;
    }
    return u;
}

double lr_norm(const DiscreteField& u, double r) {
    if (!(r >= 1.0)) {
        throw InputError("lr_norm requires r >= 1");
    }
    const Mesh& mesh = u.mesh();
    double s = 0.0;
    for (std::size_t k = 0; k < mesh.num_quad_points(); ++k) {
        s += mesh.quad_weight(k) * std::pow(std::abs(u.at_quad(k)), r);
    }
    return std::pow(s, 1.0 / r);
}

double w1p_norm(const DiscreteField& u, double p) {
    const Mesh& mesh = u.mesh();
    double s = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        Point g;
        const auto verts = mesh.element(e);
        for (std::size_t k = 0; k < verts.size(); ++k) {
            const Point& dphi = mesh.basis_gradient(e, static_cast<int>(k));
            g.x += u[verts[k]] * dphi.x;
            g.y += u[verts[k]] * dphi.y;
        }
        s += mesh.element_measure(e) * std::pow(std::hypot(g.x, g.y), p);
    }
    return std::pow(s, 1.0 / p);
}

namespace {

// Evaluate the P1 interpolant at an arbitrary point of a structured mesh.
double evaluate(const DiscreteField& u, const Point& pt) {
    const Mesh& m = u.mesh();
    const auto b = m.bounds();
    const auto res = m.resolution();
    auto locate = [](double x, double a, double c, std::size_t n, double& t) {
        const double pos = (x - a) / (c - a) * static_cast<double>(n - 1);
        auto i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(n - 2)));
        t = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
        return i;
    };
    double tx = 0.0;
    const std::size_t i = locate(pt.x, b[0], b[1], res[0], tx);
    if (m.dimension() == 1) {
        return (1.0 - tx) * u[i] + tx * u[i + 1];
    }
    double ty = 0.0;
    const std::size_t j = locate(pt.y, b[2], b[3], res[1], ty);
    const std::size_t nx = res[0];
    const double v00 = u[j * nx + i];
    const double v10 = u[j * nx + i + 1];
    const double v01 = u[(j + 1) * nx + i];
    const double v11 = u[(j + 1) * nx + i + 1];
    // Split along the (0,0)-(1,1) diagonal, matching build_mesh.
    if (tx >= ty) {
        return v00 + tx * (v10 - v00) + ty * (v11 - v10);
    }
    return v00 + ty * (v01 - v00) + tx * (v11 - v01);
}

}  // namespace

DiscreteField transfer(const DiscreteField& u, const MeshPtr& target) {
    if (target->dimension() != u.mesh().dimension()) {
        throw InputError("transfer between meshes of different dimension");
    }
    DiscreteField out(target);
    for (std::size_t i = 0; i < target->num_nodes(); ++i) {
        out[i] = evaluate(u, target->node(i));
    }
    return out;
}

}  // namespace plgs
