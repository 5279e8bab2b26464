#include "plgs/errors.hpp"
#include "plgs/functionals.hpp"
#include "plgs/rayleigh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace plgs;

namespace {

ProblemSpec model(double eps, std::size_t nodes, Exponents ex = {2, 3, 4}) {
    return ProblemSpec(ex, eps, CoefficientField::constant(1), CoefficientField::constant(1),
                       build_mesh(IntervalDomain{0, 1}, nodes));
}

DiscreteField random_field(const MeshPtr& m, std::mt19937_64& rng, bool mixed) {
    DiscreteField u = random_positive_field(m, rng());
    if (mixed) {
        u.axpy(-0.7, random_positive_field(m, rng()));
    }
    return u;
}

}  // namespace

TEST(EnergyComponents, ZeroField) {
    const auto spec = model(1, 11);
    const auto c = energy_components(DiscreteField(spec.mesh_ptr()), spec);
    EXPECT_EQ(c.T, 0.0);
    EXPECT_EQ(c.A, 0.0);
    EXPECT_EQ(c.B, 0.0);
}

TEST(EnergyComponents, SineIntegrals) {
    const auto spec = model(1, 4001);
    const auto u = make_field(spec.mesh_ptr(), [](const Point& p) { return std::sin(std::numbers::pi * p.x); }, true);
    const auto c = energy_components(u, spec);
    const double pi = std::numbers::pi;
    EXPECT_NEAR(c.T, pi * pi / 2, 1e-3);
    EXPECT_NEAR(c.A, 4 / (3 * pi), 1e-3);
    EXPECT_NEAR(c.B, 3.0 / 8, 1e-3);
}

TEST(EnergyComponents, Homogeneity) {
    std::mt19937_64 rng(3);
    const auto spec = model(1, 201);
    const auto u = random_field(spec.mesh_ptr(), rng, true);
    const auto c1 = energy_components(u, spec);
    const auto c2 = energy_components(2.0 * u, spec);
    EXPECT_NEAR(c2.T, 4 * c1.T, 1e-12 * c2.T);
    EXPECT_NEAR(c2.A, 8 * c1.A, 1e-12 * c2.A);
    EXPECT_NEAR(c2.B, 16 * c1.B, 1e-12 * c2.B);
}

TEST(EnergyComponents, NonzeroBoundaryIsContractViolation) {
    const auto spec = model(1, 11);
    const auto u = make_field(spec.mesh_ptr(), [](const Point&) { return 1.0; }, false);
    EXPECT_THROW((void)energy_components(u, spec), ContractViolation);
}

TEST(EnergyComponents, BDominatesLgammaNorm) {
    std::mt19937_64 rng(5);
    auto m = build_mesh(IntervalDomain{0, 1}, 101);
    const ProblemSpec spec({2, 3, 4}, 1, CoefficientField::constant(1),
                           CoefficientField::sinusoidal_bump(0.5, 1.0, {0, 1, 0, 0}, 1), m);
    for (int i = 0; i < 20; ++i) {
        const auto u = random_field(m, rng, true);
        EXPECT_GE(energy_components(u, spec).B, spec.b().lower * std::pow(lr_norm(u, 4), 4) * (1 - 1e-12));
    }
}

TEST(Membership, ZeroIsOutsideD) {
    std::mt19937_64 rng(1);
    const auto spec = model(1, 51);
    EXPECT_FALSE(in_admissible_set(energy_components(DiscreteField(spec.mesh_ptr()), spec), spec));
    EXPECT_TRUE(in_admissible_set(energy_components(random_field(spec.mesh_ptr(), rng, false), spec), spec));
}

TEST(Phi, FormulaExample) {
    const auto spec = model(1, 11);
    EXPECT_NEAR(phi(EnergyComponents{1, 2, 1}, spec), 1.0 / 12, 1e-15);
    EXPECT_EQ(phi(DiscreteField(spec.mesh_ptr()), spec), 0.0);
}

TEST(Phi, EvenAndRecomposed) {
    std::mt19937_64 rng(11);
    const auto spec = model(0.3, 301);
    for (int i = 0; i < 10; ++i) {
        const auto u = random_field(spec.mesh_ptr(), rng, true);
        EXPECT_EQ(phi(u, spec), phi(-u, spec));
        const auto c = energy_components(u, spec);
        const double direct = 0.3 / 2 * c.T - c.A / 3 + c.B / 4;
        EXPECT_NEAR(phi(u, spec), direct, 1e-14 * std::abs(direct));
    }
}

TEST(Phi, Coercive) {
    std::mt19937_64 rng(13);
    const auto spec = model(0.01, 101);
    const auto u = random_field(spec.mesh_ptr(), rng, true);
    const double base = phi(u, spec);
    double prev = base;
    for (int k = 4; k < 12; ++k) {
        const double v = phi(std::ldexp(1.0, k) * u, spec);
        EXPECT_GT(v, base);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(PhiPlus, Examples) {
    std::mt19937_64 rng(17);
    const auto spec = model(0.2, 101);
    const auto pos = random_field(spec.mesh_ptr(), rng, false);
    EXPECT_EQ(phi_plus(pos, spec), phi(pos, spec));
    const auto neg = -pos;
    const auto c = energy_components(neg, spec);
    EXPECT_NEAR(phi_plus(neg, spec), 0.2 / 2 * c.T, 1e-15);
    EXPECT_GT(phi_plus(neg, spec), 0.0);

    // Mixed sign: T counts the full gradient while A, B only see u+.
    const auto mixed = random_field(spec.mesh_ptr(), rng, true);
    const auto up = positive_part(mixed);
    const double direct = 0.2 / 2 * energy_components(mixed, spec).T - energy_components(up, spec).A / 3 +
                          energy_components(up, spec).B / 4;
    EXPECT_NEAR(phi_plus(mixed, spec), direct, 1e-14);
}

TEST(WeakResidual, ZeroAtZero) {
    const auto spec = model(1, 21);
    EXPECT_EQ(weak_residual(DiscreteField(spec.mesh_ptr()), spec).max_abs(), 0.0);
}

TEST(WeakResidual, NehariPairingIdentity) {
    std::mt19937_64 rng(19);
    const auto spec = model(0.05, 151);
    for (int i = 0; i < 20; ++i) {
        const auto u = random_field(spec.mesh_ptr(), rng, true);
        const auto c = energy_components(u, spec);
        const double lhs = dot(weak_residual(u, spec).values(), u.values());
        const double rhs = 0.05 * c.T - c.A + c.B;
        EXPECT_NEAR(lhs, rhs, 1e-12 * (0.05 * c.T + c.A + c.B));
    }
}

namespace {

double fd_worst(const ProblemSpec& spec, int pairs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const auto u = random_field(spec.mesh_ptr(), rng, true);
        const auto v = random_field(spec.mesh_ptr(), rng, true);
        const double g = dot(weak_residual(u, spec).values(), v.values());
        const double h = 1e-5;
        const double fd =
            (phi_regularized(u + h * v, spec) - phi_regularized(u - h * v, spec)) / (2 * h);
        worst = std::max(worst, std::abs(g - fd) / std::max(std::abs(fd), 1e-10));
    }
    return worst;
}

}  // namespace

TEST(WeakResidual, FiniteDifferencesP2) {
    EXPECT_LE(fd_worst(model(0.1, 101), 100, 23), 1e-6);
}

TEST(WeakResidual, FiniteDifferencesP15AndP3) {
    EXPECT_LE(fd_worst(model(0.1, 101, {1.5, 3, 4}), 100, 29), 1e-5);
    EXPECT_LE(fd_worst(model(0.1, 101, {3, 3.5, 4}), 100, 31), 1e-5);
}

TEST(WeakResidual, FiniteDifferences2D) {
    const ProblemSpec spec({2, 3, 4}, 0.1, CoefficientField::affine(1, 0.5, 0.25, 1, 1.75),
                           CoefficientField::constant(1), build_mesh(RectangleDomain{0, 1, 0, 1}, 15, 15));
    EXPECT_LE(fd_worst(spec, 20, 37), 1e-6);
}

TEST(JPointwise, Examples) {
    EXPECT_NEAR(j_pointwise(1, 1, 1, 3, 4), -1.0 / 12, 1e-16);
    EXPECT_EQ(j_pointwise(1, 1, 0, 3, 4), 0.0);
    EXPECT_THROW((void)j_pointwise(1, 1, -0.1, 3, 4), InputError);
    EXPECT_THROW((void)j_pointwise(1, 0, 1, 3, 4), InputError);
}

TEST(JPointwise, MinimizedAtRho) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> U(0.1, 3.0);
    for (int k = 0; k < 10; ++k) {
        const double al = U(rng);
        const double be = U(rng);
        const double rho = std::pow(al / be, 1.0);
        const double jr = j_pointwise(al, be, rho, 3, 4);
        std::uniform_real_distribution<double> S(0.0, 4.0 * rho);
        for (int i = 0; i < 100; ++i) {
            EXPECT_LE(jr, j_pointwise(al, be, S(rng), 3, 4));
        }
    }
}

TEST(JFunctional, Examples) {
    const auto spec = model(1, 101);
    EXPECT_EQ(J_functional(DiscreteField(spec.mesh_ptr()), spec), 0.0);
    const auto one = make_field(spec.mesh_ptr(), [](const Point&) { return 1.0; }, false);
    EXPECT_NEAR(J_functional(one, spec), -1.0 / 12, 1e-14);
}

TEST(JFunctional, OneIsTheMinimizer) {
    std::mt19937_64 rng(43);
    const auto spec = model(1, 101);
    const auto one = make_field(spec.mesh_ptr(), [](const Point&) { return 1.0; }, false);
    const double j0 = J_functional(one, spec);
    std::uniform_real_distribution<double> amp(0.0, 2.5);
    for (int i = 0; i < 1000; ++i) {
        auto u = random_positive_field(spec.mesh_ptr(), rng());
        u *= amp(rng);
        EXPECT_GE(J_functional(u, spec), j0 - 1e-14);
    }
}
