#include "plgs/metric.hpp"

#include "plgs/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <vector>

namespace plgs {

struct SobolevMetric::Impl {
    MeshPtr mesh;
    std::vector<int> dof;  // node -> interior index or -1
    Eigen::SparseMatrix<double> matrix;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor;
};

SobolevMetric::SobolevMetric(const MeshPtr& mesh, double grad_weight, double mass_weight)
    : impl_(std::make_unique<Impl>()) {
    if (!(grad_weight >= 0.0) || !(mass_weight >= 0.0) || !(grad_weight + mass_weight > 0.0)) {
        throw InputError("metric weights must be nonnegative and not both zero");
    }
    impl_->mesh = mesh;
    impl_->dof.assign(mesh->num_nodes(), -1);
    int n = 0;
    for (std::size_t i : mesh->interior_nodes()) {
        impl_->dof[i] = n++;
    }
    const int nv = mesh->element_size();
    // Consistent P1 mass matrix: |e|/((d+1)(d+2)) * (1 + delta_ij), d = dimension.
    const double d = mesh->dimension();
    const double mass_unit = 1.0 / ((d + 1.0) * (d + 2.0));
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(mesh->num_elements() * static_cast<std::size_t>(nv * nv));
    for (std::size_t e = 0; e < mesh->num_elements(); ++e) {
        const auto verts = mesh->element(e);
        const double m = mesh->element_measure(e);
        for (int a = 0; a < nv; ++a) {
            const int ia = impl_->dof[verts[a]];
            if (ia < 0) {
                continue;
            }
            const Point& ga = mesh->basis_gradient(e, a);
            for (int b = 0; b < nv; ++b) {
                const int ib = impl_->dof[verts[b]];
                if (ib < 0) {
                    continue;
                }
                const Point& gb = mesh->basis_gradient(e, b);
                const double k = m * (ga.x * gb.x + ga.y * gb.y);
                const double mm = m * mass_unit * (a == b ? 2.0 : 1.0);
                triplets.emplace_back(ia, ib, grad_weight * k + mass_weight * mm);
            }
        }
    }
    impl_->matrix.resize(n, n);
    impl_->matrix.setFromTriplets(triplets.begin(), triplets.end());
    impl_->factor.compute(impl_->matrix);
    if (impl_->factor.info() != Eigen::Success) {
        throw NumericalError("Sobolev metric factorization failed");
    }
}

SobolevMetric::~SobolevMetric() = default;
SobolevMetric::SobolevMetric(SobolevMetric&&) noexcept = default;
SobolevMetric& SobolevMetric::operator=(SobolevMetric&&) noexcept = default;

DiscreteField SobolevMetric::solve(const DiscreteField& r) const {
    const auto& dof = impl_->dof;
    Eigen::VectorXd rhs(impl_->matrix.rows());
    for (std::size_t i = 0; i < dof.size(); ++i) {
        if (dof[i] >= 0) {
            rhs[dof[i]] = r[i];
        }
    }
    const Eigen::VectorXd x = impl_->factor.solve(rhs);
    DiscreteField out(impl_->mesh);
    for (std::size_t i = 0; i < dof.size(); ++i) {
        if (dof[i] >= 0) {
            out[i] = x[dof[i]];
        }
    }
    return out;
}

DiscreteField SobolevMetric::apply(const DiscreteField& u) const {
    const auto& dof = impl_->dof;
    Eigen::VectorXd x(impl_->matrix.rows());
    for (std::size_t i = 0; i < dof.size(); ++i) {
        if (dof[i] >= 0) {
            x[dof[i]] = u[i];
        }
    }
    const Eigen::VectorXd y = impl_->matrix * x;
    DiscreteField out(impl_->mesh);
    for (std::size_t i = 0; i < dof.size(); ++i) {
        if (dof[i] >= 0) {
            out[i] = y[dof[i]];
        }
    }
    return out;
}

}  // namespace plgs
