#include "plgs/errors.hpp"
#include "plgs/functionals.hpp"
#include "plgs/rayleigh.hpp"
#include "plgs/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace plgs;

namespace {

ProblemSpec model(double eps, std::size_t nodes) {
    return ProblemSpec({2, 3, 4}, eps, CoefficientField::constant(1), CoefficientField::constant(1),
                       build_mesh(IntervalDomain{0, 1}, nodes));
}

double interior_min(const DiscreteField& u) {
    double m = 1e300;
    for (std::size_t i : u.mesh().interior_nodes()) {
        m = std::min(m, u[i]);
    }
    return m;
}

// Shared across tests: one solve at eps = 1e-3 on 501 nodes.
const SolveReport& model_ground_state() {
    static const SolveReport r = solve_ground_state(model(1e-3, 501));
    return r;
}

}  // namespace

TEST(GroundState, ExistenceRegime) {
    const auto spec = model(1e-3, 501);
    const auto& r = model_ground_state();
    ASSERT_TRUE(r.converged);
    EXPECT_FALSE(r.trivial);
    EXPECT_LE(r.residual_norm, 1e-8 * (1 + std::abs(r.energy)));
    EXPECT_LT(r.energy, 0.0);
    EXPECT_LE(r.nehari_residual, 1e-6);
    EXPECT_GT(r.fiber_second_derivative, 0.0);
    EXPECT_GT(interior_min(r.field), 0.0);
    EXPECT_EQ(r.field.max_boundary_abs(), 0.0);
    EXPECT_TRUE(r.trace_monotone);
    EXPECT_NEAR(phi(r.field, spec), r.energy, 1e-14);
}

TEST(GroundState, NehariDiagnosticsConsistent) {
    const auto spec = model(1e-3, 501);
    const auto& r = model_ground_state();
    const auto d = nehari_diagnostics(r.field, spec);
    const auto c = energy_components(r.field, spec);
    // On the Nehari manifold with negative energy, B exceeds gamma(q-p)/(p(gamma-q)) eps T.
    EXPECT_GT(c.B, 4.0 * 1.0 / (2.0 * 1.0) * 1e-3 * c.T);
    EXPECT_NEAR(d.R_N, 1e-3, 1e-6 * 1e-3);
    const auto n = nonlinear_quotients(c, spec.exponents());
    EXPECT_LE(1e-3, n.eps_u * (1 + 1e-9));
    // Negative energy on the Nehari manifold means eps = R_N < R_e.
    EXPECT_GT(d.R_e, d.R_N);
}

TEST(GroundState, TraceEnergiesNonIncreasing) {
    const auto& r = model_ground_state();
    ASSERT_FALSE(r.trace.empty());
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
        EXPECT_LE(r.trace[i].energy, r.trace[i - 1].energy + 1e-15 * std::abs(r.trace[i - 1].energy));
    }
}

TEST(GroundState, DeterministicForFixedSeed) {
    const auto spec = model(1e-2, 201);
    const auto a = solve_ground_state(spec);
    const auto b = solve_ground_state(spec);
    EXPECT_EQ(a.energy, b.energy);
    for (std::size_t i = 0; i < a.field.size(); ++i) {
        ASSERT_EQ(a.field[i], b.field[i]);
    }
}

TEST(GroundState, ZeroAboveThreshold) {
    const auto base = model(0.1, 201);
    AscentOptions o;
    o.restarts = 6;
    const auto est = estimate_thresholds(base, o);
    const auto spec = base.with_epsilon(2 * est.eps_star);
    SolverOptions so;
    so.random_restarts = 2;
    const auto r = solve_ground_state(spec, est.maximizer, so);
    EXPECT_TRUE(r.trivial);
    EXPECT_LE(w1p_norm(r.field, 2), 1e-10);
    EXPECT_EQ(r.energy, 0.0);
}

TEST(GroundState, PlateauNearOneForSmallEps) {
    const auto r = solve_ground_state(model(1e-4, 2001));
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.field[1000], 1.0, 2e-2);
}

TEST(GroundState, TwoDimensionalModel) {
    const ProblemSpec spec({2, 3, 4}, 1e-3, CoefficientField::constant(1), CoefficientField::constant(1),
                           build_mesh(RectangleDomain{0, 1, 0, 1}, 21, 21));
    const auto r = solve_ground_state(spec);
    ASSERT_TRUE(r.converged);
    EXPECT_LT(r.energy, 0.0);
    EXPECT_GT(interior_min(r.field), 0.0);
}

TEST(NehariDiagnostics, ZeroFieldIsDomainError) {
    const auto spec = model(1e-3, 51);
    EXPECT_THROW((void)nehari_diagnostics(DiscreteField(spec.mesh_ptr()), spec), DomainError);
}

TEST(FiberOptimalSeed, LiesOnTheEnergyFiberMaximum) {
    const auto spec = model(1e-3, 201);
    const auto seed = fiber_optimal_seed(spec);
    ASSERT_TRUE(seed.has_value());
    const auto c = energy_components(*seed, spec);
    // s_e = 1 along the seed's own ray.
    EXPECT_NEAR(fiber_scalings(c, spec.exponents()).s_e, 1.0, 1e-12);
}

TEST(MountainPass, SecondSolution) {
    const auto spec = model(1e-3, 501);
    const auto& gs = model_ground_state();
    const auto mp = solve_mountain_pass(spec, gs.field);
    ASSERT_TRUE(mp.converged);
    EXPECT_GT(mp.energy, 0.0);
    EXPECT_GT(mp.energy, gs.energy);
    for (double v : mp.field.values()) {
        EXPECT_GE(v, 0.0);
    }
    const auto bar = barrier_check(spec, 50, 3);
    EXPECT_TRUE(bar.holds);
    EXPECT_GE(mp.energy, bar.delta * (1 - 1e-9));
    EXPECT_GE(mp.path_level, mp.energy * (1 - 1e-9));
}

TEST(MountainPass, NonNegativeGroundStateRequired) {
    const auto spec = model(1e-3, 51);
    EXPECT_THROW((void)solve_mountain_pass(spec, DiscreteField(spec.mesh_ptr())), ContractViolation);
}
