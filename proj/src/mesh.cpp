#include "plgs/mesh.hpp"

#include "plgs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace plgs {

namespace {

std::vector<RefQuadPoint> gauss3_interval() {
    const double g = std::sqrt(3.0 / 5.0);
    std::vector<RefQuadPoint> rule;
    for (auto [xi, w] : {std::pair{-g, 5.0 / 9.0}, std::pair{0.0, 8.0 / 9.0}, std::pair{g, 5.0 / 9.0}}) {
        rule.push_back({{0.5 * (1.0 - xi), 0.5 * (1.0 + xi), 0.0}, 0.5 * w});
    }
    return rule;
}

// Exact for quadratics on triangles.
std::vector<RefQuadPoint> midedge_triangle() {
    const double third = 1.0 / 3.0;
    return {{{0.5, 0.5, 0.0}, third}, {{0.0, 0.5, 0.5}, third}, {{0.5, 0.0, 0.5}, third}};
}

}  // namespace

Point Mesh::quad_point(std::size_t flat) const {
    const std::size_t e = flat / rule_.size();
    const RefQuadPoint& rq = rule_[flat % rule_.size()];
    Point pt;
    const auto verts = element(e);
    for (std::size_t k = 0; k < verts.size(); ++k) {
        pt.x += rq.lambda[k] * nodes_[verts[k]].x;
        pt.y += rq.lambda[k] * nodes_[verts[k]].y;
    }
    return pt;
}

double Mesh::quad_weight(std::size_t flat) const {
    return rule_[flat % rule_.size()].weight_fraction * measures_[flat / rule_.size()];
}

double Mesh::distance_to_boundary(const Point& pt) const noexcept {
    double d = std::min(pt.x - bounds_[0], bounds_[1] - pt.x);
    if (dimension_ == 2) {
        d = std::min({d, pt.y - bounds_[2], bounds_[3] - pt.y});
    }
    return std::max(d, 0.0);
}

void Mesh::finalize() {
    const std::size_t ne = connectivity_.size();
    measures_.resize(ne);
    gradients_.resize(ne);
    volume_ = 0.0;
    for (std::size_t e = 0; e < ne; ++e) {
        const auto& c = connectivity_[e];
        if (dimension_ == 1) {
            const double h = nodes_[c[1]].x - nodes_[c[0]].x;
            measures_[e] = h;
            gradients_[e][0] = {-1.0 / h, 0.0};
            gradients_[e][1] = {1.0 / h, 0.0};
        } else {
            const Point& p0 = nodes_[c[0]];
            const Point& p1 = nodes_[c[1]];
            const Point& p2 = nodes_[c[2]];
            const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
            measures_[e] = 0.5 * std::abs(det);
            // grad(lambda_k) = rot90(opposite edge) / det
            gradients_[e][0] = {(p1.y - p2.y) / det, (p2.x - p1.x) / det};
            gradients_[e][1] = {(p2.y - p0.y) / det, (p0.x - p2.x) / det};
            gradients_[e][2] = {(p0.y - p1.y) / det, (p1.x - p0.x) / det};
        }
        if (!(measures_[e] > 0.0)) {
            throw ConfigError("mesh element " + std::to_string(e) + " has non-positive measure");
        }
        volume_ += measures_[e];
    }
    boundary_.clear();
    interior_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        (boundary_flag_[i] ? boundary_ : interior_).push_back(i);
    }
}

MeshPtr build_mesh(const IntervalDomain& domain, std::size_t nodes) {
    if (!(domain.x1 > domain.x0) || !std::isfinite(domain.x0) || !std::isfinite(domain.x1)) {
        throw ConfigError("interval domain requires finite x1 > x0");
    }
    if (nodes < 3) {
        throw ConfigError("interval mesh needs at least 3 nodes, got " + std::to_string(nodes));
    }
    auto mesh = std::make_shared<Mesh>();
    mesh->dimension_ = 1;
    mesh->resolution_ = {nodes, 1};
    mesh->bounds_ = {domain.x0, domain.x1, 0.0, 0.0};
    mesh->nodes_.resize(nodes);
    mesh->boundary_flag_.assign(nodes, 0);
    const double len = domain.x1 - domain.x0;
    for (std::size_t i = 0; i < nodes; ++i) {
        mesh->nodes_[i] = {domain.x0 + len * static_cast<double>(i) / static_cast<double>(nodes - 1), 0.0};
    }
    mesh->nodes_.back().x = domain.x1;
    mesh->boundary_flag_.front() = 1;
    mesh->boundary_flag_.back() = 1;
    for (std::size_t e = 0; e + 1 < nodes; ++e) {
        mesh->connectivity_.push_back({static_cast<int>(e), static_cast<int>(e + 1), -1});
    }
    mesh->rule_ = gauss3_interval();
    mesh->finalize();
    return mesh;
}

MeshPtr build_mesh(const RectangleDomain& domain, std::size_t nx, std::size_t ny) {
    if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0)) {
        throw ConfigError("rectangle domain requires x1 > x0 and y1 > y0");
    }
    if (nx < 3 || ny < 3) {
        throw ConfigError("rectangle mesh needs at least 3 nodes per axis");
    }
    auto mesh = std::make_shared<Mesh>();
    mesh->dimension_ = 2;
    mesh->resolution_ = {nx, ny};
    mesh->bounds_ = {domain.x0, domain.x1, domain.y0, domain.y1};
    mesh->nodes_.resize(nx * ny);
    mesh->boundary_flag_.assign(nx * ny, 0);
    auto coord = [](double a, double b, std::size_t i, std::size_t n) {
        return i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t id = j * nx + i;
            mesh->nodes_[id] = {coord(domain.x0, domain.x1, i, nx), coord(domain.y0, domain.y1, j, ny)};
            if (i == 0 || j == 0 || i + 1 == nx || j + 1 == ny) {
                mesh->boundary_flag_[id] = 1;
            }
        }
    }
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const int n00 = static_cast<int>(j * nx + i);
            const int n10 = n00 + 1;
            const int n01 = static_cast<int>((j + 1) * nx + i);
            const int n11 = n01 + 1;
            mesh->connectivity_.push_back({n00, n10, n11});
            mesh->connectivity_.push_back({n00, n11, n01});
        }
    }
    mesh->rule_ = midedge_triangle();
    mesh->finalize();
    return mesh;
}

}  // namespace plgs
