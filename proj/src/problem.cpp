#include "plgs/problem.hpp"

#include "plgs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace plgs {

double Exponents::sobolev_critical(int dimension) const noexcept {
    const double n = dimension;
    if (p < n) {
        return p * n / (n - p);
    }
    return std::numeric_limits<double>::infinity();
}

void Exponents::validate(int dimension) const {
    if (!(1.0 < p && p < q && q < gamma) || !std::isfinite(gamma)) {
        std::ostringstream msg;
        msg << "exponents must satisfy 1 < p < q < gamma, got p=" << p << " q=" << q << " gamma=" << gamma;
        throw InputError(msg.str());
    }
    if (dimension > 0 && !(gamma < sobolev_critical(dimension))) {
        std::ostringstream msg;
        msg << "gamma=" << gamma << " is not subcritical: p*=" << sobolev_critical(dimension) << " for N=" << dimension;
        throw InputError(msg.str());
    }
}

CoefficientField CoefficientField::constant(double value) {
    std::ostringstream d;
    d << "constant(" << value << ")";
    return {[value](const Point&) { return value; }, value, value, d.str()};
}

CoefficientField CoefficientField::affine(double c0, double cx, double cy, double lower, double upper) {
    std::ostringstream d;
    d << "affine(" << c0 << " + " << cx << "*x + " << cy << "*y)";
    return {[=](const Point& pt) { return c0 + cx * pt.x + cy * pt.y; }, lower, upper, d.str()};
}

CoefficientField CoefficientField::sinusoidal_bump(double base, double amplitude, std::array<double, 4> box,
                                                   int dimension) {
    std::ostringstream d;
    d << "sinusoidal_bump(" << base << ", " << amplitude << ")";
    auto f = [=](const Point& pt) {
        double s = std::sin(std::numbers::pi * (pt.x - box[0]) / (box[1] - box[0]));
        if (dimension == 2) {
            s *= std::sin(std::numbers::pi * (pt.y - box[2]) / (box[3] - box[2]));
        }
        return base + amplitude * std::max(s, 0.0);
    };
    return {f, std::min(base, base + amplitude), std::max(base, base + amplitude), d.str()};
}

CoefficientField CoefficientField::scaled(double factor) const {
    auto inner = evaluate;
    std::ostringstream d;
    d << factor << "*" << description;
    return {[inner, factor](const Point& pt) { return factor * inner(pt); }, factor * lower, factor * upper, d.str()};
}

namespace {

void sample(const CoefficientField& c, const char* name, const Mesh& mesh, std::vector<double>& at_quad,
            std::vector<double>& at_nodes) {
    if (!c.evaluate) {
        throw ConfigError(std::string("coefficient ") + name + " has no evaluator");
    }
    if (!(c.lower >= 0.0) || !(c.upper >= c.lower) || !std::isfinite(c.upper)) {
        throw ConfigError(std::string("coefficient ") + name + " needs finite bounds 0 <= lower <= upper");
    }
    // Relative slack for bounds declared from the closed-form expression.
    const double slack = 1e-12 * (1.0 + std::abs(c.upper));
    auto check = [&](double v, const Point& pt) {
        if (!std::isfinite(v) || v < c.lower - slack || v > c.upper + slack) {
            std::ostringstream msg;
            msg << "coefficient " << name << "=" << v << " at (" << pt.x << ", " << pt.y
                << ") leaves declared bounds [" << c.lower << ", " << c.upper << "]";
            throw ConfigError(msg.str());
        }
        return v;
    };
    at_quad.resize(mesh.num_quad_points());
    for (std::size_t k = 0; k < at_quad.size(); ++k) {
        const Point pt = mesh.quad_point(k);
        at_quad[k] = check(c.evaluate(pt), pt);
    }
    at_nodes.resize(mesh.num_nodes());
    for (std::size_t i = 0; i < at_nodes.size(); ++i) {
        at_nodes[i] = check(c.evaluate(mesh.node(i)), mesh.node(i));
    }
}

}  // namespace

ProblemSpec::ProblemSpec(Exponents exponents, double epsilon, CoefficientField a, CoefficientField b, MeshPtr mesh)
    : exponents_(exponents), epsilon_(epsilon), a_(std::move(a)), b_(std::move(b)), mesh_(std::move(mesh)) {
    if (!mesh_) {
        throw ConfigError("problem requires a mesh");
    }
    exponents_.validate(mesh_->dimension());
    if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) {
        throw ConfigError("epsilon must be positive and finite");
    }
    if (!(b_.lower > 0.0)) {
        throw ConfigError("coefficient b requires a positive lower bound sigma_b");
    }
    sample(a_, "a", *mesh_, a_quad_, a_nodes_);
    sample(b_, "b", *mesh_, b_quad_, b_nodes_);
}

ProblemSpec ProblemSpec::with_epsilon(double epsilon) const {
    ProblemSpec copy = *this;
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ConfigError("epsilon must be positive and finite");
    }
    copy.epsilon_ = epsilon;
    return copy;
}

ProblemSpec ProblemSpec::rescaled(double epsilon, double a_factor, double b_factor) const {
    return ProblemSpec(exponents_, epsilon, a_.scaled(a_factor), b_.scaled(b_factor), mesh_);
}

}  // namespace plgs
