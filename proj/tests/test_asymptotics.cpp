#include "oracles.hpp"

#include "plgs/asymptotics.hpp"
#include "plgs/errors.hpp"
#include "plgs/functionals.hpp"
#include "plgs/rayleigh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace plgs;

namespace {

ProblemSpec model(double eps, std::size_t nodes) {
    return ProblemSpec({2, 3, 4}, eps, CoefficientField::constant(1), CoefficientField::constant(1),
                       build_mesh(IntervalDomain{0, 1}, nodes));
}

struct Preset {
    CoefficientField a;
    CoefficientField b;
};

std::vector<Preset> presets() {
    return {{CoefficientField::constant(1), CoefficientField::constant(1)},
            {CoefficientField::affine(1, 0.5, 0, 1, 1.5), CoefficientField::constant(1)},
            {CoefficientField::constant(2), CoefficientField::sinusoidal_bump(1, 0.5, {0, 1, 0, 0}, 1)}};
}

}  // namespace

TEST(LimitProfile, Examples) {
    const Exponents ex{2, 3, 4};
    EXPECT_EQ(limit_value(1, 1, ex), 1.0);
    EXPECT_NEAR(limit_value(2, 1, ex), 2.0, 1e-15);
    EXPECT_NEAR(limit_value(1, 1, {2, 2.5, 4.5}), 1.0, 1e-15);
    EXPECT_NEAR(limit_value(8, 1, {2, 3, 6}), 2.0, 1e-15);

    const auto spec = model(0.1, 101);
    const auto lp = limit_profile(spec);
    EXPECT_EQ(lp.rho_minus, 1.0);
    EXPECT_EQ(lp.rho_plus, 1.0);
    EXPECT_LE(limiting_equation_residual(lp, spec), 1e-14);
    EXPECT_NEAR(J_limit(lp, spec), -1.0 / 12, 1e-14);
}

TEST(LimitProfile, VanishingLowerBoundIsHypothesisViolation) {
    const ProblemSpec spec({2, 3, 4}, 0.1, CoefficientField::constant(0), CoefficientField::constant(1),
                           build_mesh(IntervalDomain{0, 1}, 11));
    EXPECT_THROW((void)limit_profile(spec), HypothesisViolation);
}

TEST(LimitProfile, JLimitMatchesSimpson) {
    const ProblemSpec spec({2, 3, 4}, 0.1, CoefficientField::affine(1, 0.5, 0, 1, 1.5),
                           CoefficientField::constant(1), build_mesh(IntervalDomain{0, 1}, 401));
    const auto lp = limit_profile(spec);
    const double ref = oracle::simpson([](double x) {
        const double a = 1 + 0.5 * x;
        return -a * a * a * a / 12.0;
    }, 0.0, 1.0);
    EXPECT_NEAR(J_limit(lp, spec), ref, 1e-10);
}

TEST(AsymptoticMetrics, ProfileInterpolantErrsOnlyInBoundaryElements) {
    const auto spec = model(0.1, 101);
    const auto lp = limit_profile(spec);
    const auto u = make_field(spec.mesh_ptr(), [](const Point&) { return 1.0; }, true);
    const auto m = asymptotic_metrics(u, lp, spec, 0.1, {1, 2}, 0.1);
    // |u - u0| is the hat 1 - x/h on the two boundary elements and zero elsewhere.
    EXPECT_NEAR(m.lr_errors[0].second, 0.01, 1e-14);
    EXPECT_NEAR(m.lr_errors[1].second, std::sqrt(2 * 0.01 / 3), 1e-12);
    EXPECT_NEAR(m.measure_bad, 0.02, 1e-14);
    EXPECT_EQ(m.linf_interior_err, 0.0);
}

TEST(AsymptoticMetrics, ZeroFieldIsEverywhereBad) {
    const auto spec = model(0.1, 101);
    const auto lp = limit_profile(spec);
    const auto m = asymptotic_metrics(DiscreteField(spec.mesh_ptr()), lp, spec, 0.1, {1, 2});
    EXPECT_NEAR(m.measure_bad, 1.0, 1e-12);
    EXPECT_NEAR(m.lr_errors[0].second, 1.0, 1e-12);
    EXPECT_EQ(m.energy, 0.0);
    EXPECT_NEAR(m.energy_gap, 1.0 / 12, 1e-14);
    EXPECT_NEAR(m.J_gap, 1.0 / 12, 1e-14);
}

TEST(AsymptoticMetrics, InvalidArguments) {
    const auto spec = model(0.1, 21);
    const auto lp = limit_profile(spec);
    const DiscreteField z(spec.mesh_ptr());
    EXPECT_THROW((void)asymptotic_metrics(z, lp, spec, 0.1, {4.0}), InputError);
    EXPECT_THROW((void)asymptotic_metrics(z, lp, spec, 0.1, {0.5}), InputError);
    EXPECT_THROW((void)asymptotic_metrics(z, lp, spec, 0.0, {1.0}), InputError);
}

TEST(SeparationConstant, PositiveAndMatchesOracle) {
    for (const auto& pr : presets()) {
        const ProblemSpec spec({2, 3, 4}, 0.1, pr.a, pr.b, build_mesh(IntervalDomain{0, 1}, 21));
        const auto box = CoefficientBox::of(spec);
        for (double eta : {0.05, 0.1, 0.2}) {
            const auto k = separation_constant(box, 3, 4, eta);
            const double ref = oracle::kappa_tube_edges(box.sigma_a, box.a_hat, box.sigma_b, box.b_hat, 3, 4, eta);
            EXPECT_GT(k.kappa, 0.0);
            // The minimum sits on a box corner at a tube edge, which both grids contain.
            EXPECT_NEAR(k.kappa, ref, 1e-12);
        }
    }
}

TEST(SeparationConstant, BoundsTheJGap) {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> amp(0.0, 3.0);
    for (const auto& pr : presets()) {
        const ProblemSpec spec({2, 3, 4}, 0.1, pr.a, pr.b, build_mesh(IntervalDomain{0, 1}, 201));
        const auto lp = limit_profile(spec);
        for (double eta : {0.05, 0.1, 0.2}) {
            const double kappa = separation_constant(CoefficientBox::of(spec), 3, 4, eta).kappa;
            for (int i = 0; i < 100; ++i) {
                auto u = random_positive_field(spec.mesh_ptr(), rng());
                u *= amp(rng);
                const auto m = asymptotic_metrics(u, lp, spec, eta, {1});
                EXPECT_LE(kappa * m.measure_bad, m.J_gap + 1e-12);
            }
        }
    }
}

TEST(Scaling, ModelParameters) {
    const Exponents ex{2, 3, 4};
    const auto mesh = build_mesh(IntervalDomain{0, 1}, 11);
    const auto u = make_field(mesh, [](const Point& p) { return p.x * (1 - p.x); }, true);
    const auto sl = scale_solution(u, 0.01, ex, ScalingForm::Lambda);
    const auto sn = scale_solution(u, 0.01, ex, ScalingForm::Nu);
    EXPECT_NEAR(sl.parameter, 10.0, 1e-12);
    EXPECT_NEAR(sn.parameter, 0.01, 1e-16);
    EXPECT_NEAR(sl.factor, 10.0, 1e-12);
    EXPECT_NEAR(sn.factor, 100.0, 1e-10);
}

TEST(Scaling, RoundTrips) {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> le(-4.0, 0.0);
    const auto mesh = build_mesh(IntervalDomain{0, 1}, 51);
    for (int i = 0; i < 50; ++i) {
        const Exponents ex{2, 2.5 + 0.5 * le(rng) / -4.0, 4.5};
        const double eps = std::pow(10.0, le(rng));
        const auto u = random_positive_field(mesh, rng());
        for (auto form : {ScalingForm::Lambda, ScalingForm::Nu}) {
            const auto s = scale_solution(u, eps, ex, form);
            const auto back = unscale_solution(s.field, s.parameter, ex, form);
            for (std::size_t k = 0; k < u.size(); ++k) {
                ASSERT_NEAR(back[k], u[k], 1e-14 * std::max(1.0, std::abs(u[k])));
            }
        }
    }
}

TEST(Scaling, ResidualsTransformByTheFactor) {
    std::mt19937_64 rng(73);
    const auto spec = model(0.01, 101);
    const auto u = random_positive_field(spec.mesh_ptr(), rng());
    const auto r_eps = weak_residual(u, spec);
    for (auto form : {ScalingForm::Lambda, ScalingForm::Nu}) {
        const auto s = scale_solution(u, 0.01, spec.exponents(), form);
        const auto sp = scaled_problem(spec, form, s.parameter);
        EXPECT_EQ(sp.epsilon(), 1.0);
        const auto r_s = weak_residual(s.field, sp);
        const double scale = r_eps.max_abs() * s.residual_factor;
        for (std::size_t k = 0; k < u.size(); ++k) {
            ASSERT_NEAR(r_s[k], s.residual_factor * r_eps[k], 1e-12 * scale);
        }
    }
}

TEST(LayerProfile, MatchesTanhForQuadraticQuartic) {
    const auto prof = layer_profile_1d(2, 4, 10, 1001);
    double worst = 0.0;
    for (std::size_t i = 0; i < prof.xi.size(); ++i) {
        worst = std::max(worst, std::abs(prof.U[i] - std::tanh(prof.xi[i] / std::sqrt(2.0))));
    }
    EXPECT_LE(worst, 1e-6);
}

TEST(LayerProfile, CubicQuarticProperties) {
    const auto prof = layer_profile_1d(3, 4, 40, 4001);
    EXPECT_EQ(prof.U.front(), 0.0);
    // xi = 1 and 2 are grid points, so value() is the solved profile there.
    EXPECT_NEAR(prof.value(1.0), oracle::layer_value(3, 4, 1.0), 1e-9);
    EXPECT_NEAR(prof.value(2.0), oracle::layer_value(3, 4, 2.0), 1e-9);
    EXPECT_LT(prof.deficit.back(), 1e-4);
    for (std::size_t i = 1; i < prof.U.size(); ++i) {
        ASSERT_GE(prof.U[i], prof.U[i - 1]);
        ASSERT_LT(prof.deficit[i], prof.deficit[i - 1]);
        ASSERT_NEAR(prof.U[i] + prof.deficit[i], 1.0, 1e-15);
    }
    EXPECT_EQ(prof.value(1e6), 1.0);
}

TEST(LayerProfile, SatisfiesFirstIntegral) {
    // U'^2 / 2 = W(U) with W(t) = (1 - t^3)/3 - (1 - t^4)/4 for q = 3, gamma = 4.
    const auto prof = layer_profile_1d(3, 4, 10, 10001);
    const double h = prof.xi[1] - prof.xi[0];
    for (std::size_t i = 100; i < prof.xi.size() - 1; i += 500) {
        const double d = (prof.U[i + 1] - prof.U[i - 1]) / (2 * h);
        const double t = prof.U[i];
        const double W = (1 - t * t * t) / 3 - (1 - t * t * t * t) / 4;
        EXPECT_NEAR(0.5 * d * d, W, 1e-6);
    }
}

TEST(LayerProfile, InvalidArguments) {
    EXPECT_THROW((void)layer_profile_1d(4, 3, 10, 11), InputError);
    EXPECT_THROW((void)layer_profile_1d(3, 4, 0, 11), InputError);
    EXPECT_THROW((void)layer_profile_1d(3, 4, 10, 1), InputError);
}

TEST(CompositeApprox, EndpointsAndMidpoint) {
    const auto prof = layer_profile_1d(3, 4, 100, 4001);
    const auto mesh = build_mesh(IntervalDomain{0, 1}, 101);
    const auto c = composite_approx_1d(1e-4, mesh, prof);
    EXPECT_NEAR(c[0], 0.0, 1e-12);
    EXPECT_NEAR(c[100], 0.0, 1e-12);
    EXPECT_NEAR(c[50], 1.0, 1e-12);
}

TEST(EpsilonSweep, TrendsAndValidation) {
    const auto spec = model(0.1, 1001);
    SweepOptions o;
    o.threads = 2;
    const auto rep = epsilon_sweep(spec, {1e-2, 1e-3, 1e-4}, o);
    ASSERT_EQ(rep.rows.size(), 3u);
    EXPECT_NEAR(rep.J_limit, -1.0 / 12, 1e-14);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        EXPECT_TRUE(rep.rows[i].converged);
        EXPECT_GT(rep.rows[i].metrics.energy_gap, 0.0);
        if (i > 0) {
            EXPECT_LT(rep.rows[i].metrics.energy_gap, rep.rows[i - 1].metrics.energy_gap);
            EXPECT_LE(rep.rows[i].metrics.measure_bad, rep.rows[i - 1].metrics.measure_bad);
            EXPECT_LT(rep.rows[i].metrics.lr_errors[0].second, rep.rows[i - 1].metrics.lr_errors[0].second);
        }
    }
    EXPECT_THROW((void)epsilon_sweep(spec, {1e-3, 1e-2}, o), InputError);
    EXPECT_THROW((void)epsilon_sweep(spec, {1e-2, -1.0}, o), InputError);
}

TEST(EpsilonSweep, ThreadCountDoesNotChangeResults) {
    const auto spec = model(0.1, 301);
    SweepOptions o1;
    SweepOptions o3;
    o3.threads = 3;
    const auto a = epsilon_sweep(spec, {1e-1, 1e-2, 1e-3}, o1);
    const auto b = epsilon_sweep(spec, {1e-1, 1e-2, 1e-3}, o3);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].metrics.energy, b.rows[i].metrics.energy);
        EXPECT_EQ(a.rows[i].metrics.measure_bad, b.rows[i].metrics.measure_bad);
    }
}
