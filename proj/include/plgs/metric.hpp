#pragma once

#include "plgs/field.hpp"

#include <memory>

namespace plgs {

/// Inner product (u, v)_P = grad_weight * int grad u . grad v + mass_weight * int u v
/// restricted to fields vanishing on the boundary. Used to turn nodal
/// residuals into Sobolev gradients: d = P^{-1} r.
class SobolevMetric {
public:
    SobolevMetric(const MeshPtr& mesh, double grad_weight, double mass_weight);
    ~SobolevMetric();
    SobolevMetric(SobolevMetric&&) noexcept;
    SobolevMetric& operator=(SobolevMetric&&) noexcept;

    /// Solve P d = r on interior nodes; boundary entries of the result are 0.
    [[nodiscard]] DiscreteField solve(const DiscreteField& r) const;
    /// P applied to u (interior rows; boundary entries 0).
    [[nodiscard]] DiscreteField apply(const DiscreteField& u) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace plgs
