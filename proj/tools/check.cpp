#include "check.hpp"

#include "plgs/asymptotics.hpp"
#include "plgs/functionals.hpp"
#include "plgs/rayleigh.hpp"
#include "plgs/solver.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

namespace plgs::cli {

namespace {

struct Suite {
    std::ostream& out;
    int failures = 0;

    void run(const std::string& name, const std::function<bool(std::string&)>& body) {
        std::string detail;
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("threw: ") + e.what();
        }
        out << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) {
            out << "  (" << detail << ")";
        }
        out << '\n';
        failures += ok ? 0 : 1;
    }
};

std::string g3(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

ProblemSpec model(double eps, std::size_t nodes) {
    return ProblemSpec({2, 3, 4}, eps, CoefficientField::constant(1), CoefficientField::constant(1),
                       build_mesh(IntervalDomain{0, 1}, nodes));
}

}  // namespace

int run_checks(std::ostream& out, std::uint64_t seed) {
    Suite s{out};
    std::mt19937_64 rng(seed);

    s.run("extremal constants c > c_e > 0", [&](std::string& d) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 1000; ++i) {
            const double p = 1.05 + 3.0 * u(rng);
            const double q = p + 0.01 + 3.0 * u(rng);
            const double g = q + 0.01 + 3.0 * u(rng);
            const auto c = extremal_constants({p, q, g});
            if (!(c.c > c.c_e && c.c_e > 0.0)) {
                d = "p=" + std::to_string(p) + " q=" + std::to_string(q) + " gamma=" + std::to_string(g);
                return false;
            }
        }
        const auto c = extremal_constants({2, 3, 4});
        d = "c(2,3,4)=" + g3(c.c);
        return std::abs(c.c - 0.25) <= 1e-14 && std::abs(c.c_e - 2.0 / 9.0) <= 1e-14;
    });

    s.run("eps(u) is the ray maximum of R_N", [&](std::string& d) {
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        const Exponents ex{2, 3, 4};
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const EnergyComponents c{std::pow(10.0, u(rng)), std::pow(10.0, u(rng)), std::pow(10.0, u(rng))};
            const double eps_u = nonlinear_quotients(c, ex).eps_u;
            const double sN = fiber_scalings(c, ex).s_N;
            double best = 0.0;
            for (int k = 0; k < 10000; ++k) {
                const double sk = sN * std::pow(10.0, -1.0 + 2.0 * k / 9999.0);
                best = std::max(best, ray_quotients(c, sk, ex).R_N);
            }
            worst = std::max(worst, std::abs(best - eps_u) / eps_u);
        }
        d = "max rel diff " + g3(worst);
        return worst <= 1e-6;
    });

    s.run("weak residual matches finite differences (p = 2)", [&](std::string& d) {
        const ProblemSpec spec = model(0.1, 101);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            DiscreteField u = random_positive_field(spec.mesh_ptr(), rng());
            u.axpy(-0.5, random_positive_field(spec.mesh_ptr(), rng()));
            const DiscreteField v = random_positive_field(spec.mesh_ptr(), rng());
            const double g = dot(weak_residual(u, spec).values(), v.values());
            const double h = 1e-5;
            DiscreteField up = u;
            up.axpy(h, v);
            DiscreteField um = u;
            um.axpy(-h, v);
            const double fd = (phi(up, spec) - phi(um, spec)) / (2 * h);
            worst = std::max(worst, std::abs(g - fd) / std::max(std::abs(fd), 1e-12));
        }
        d = "max rel diff " + g3(worst);
        return worst <= 1e-6;
    });

    s.run("ground state of the 1D model", [&](std::string& d) {
        const ProblemSpec spec = model(1e-3, 501);
        const SolveReport r = solve_ground_state(spec);
        double interior_min = 1e300;
        for (std::size_t i : spec.mesh().interior_nodes()) {
            interior_min = std::min(interior_min, r.field[i]);
        }
        d = "energy " + g3(r.energy) + ", nehari " + g3(r.nehari_residual);
        return r.converged && !r.trivial && r.energy < 0.0 && r.nehari_residual <= 1e-6 &&
               r.fiber_second_derivative > 0.0 && interior_min > 0.0;
    });

    s.run("limit profile and J minimality", [&](std::string& d) {
        const auto mesh = build_mesh(IntervalDomain{0, 1}, 101);
        const ProblemSpec spec({2, 3, 4}, 1e-2, CoefficientField::constant(2), CoefficientField::constant(1), mesh);
        const LimitProfile lp = limit_profile(spec);
        const double j0 = J_limit(lp, spec);
        for (int i = 0; i < 200; ++i) {
            DiscreteField u = random_positive_field(mesh, rng());
            u *= 3.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            if (J_functional(u, spec) < j0 - 1e-12) {
                d = "J(u) < J(u0)";
                return false;
            }
        }
        d = "u0 = " + g3(lp.field[50]);
        return std::abs(lp.field[50] - 2.0) <= 1e-14 && limiting_equation_residual(lp, spec) <= 1e-10;
    });

    s.run("separation bound kappa * meas <= J gap", [&](std::string& d) {
        const auto mesh = build_mesh(IntervalDomain{0, 1}, 201);
        const ProblemSpec spec({2, 3, 4}, 1e-2, CoefficientField::affine(1, 0.5, 0, 1, 1.5),
                               CoefficientField::constant(1), mesh);
        const LimitProfile lp = limit_profile(spec);
        for (double eta : {0.05, 0.1, 0.2}) {
            const SeparationEstimate k = separation_constant(CoefficientBox::of(spec), 3, 4, eta);
            if (!(k.kappa > 0.0)) {
                d = "kappa not positive";
                return false;
            }
            for (int i = 0; i < 20; ++i) {
                DiscreteField u = random_positive_field(mesh, rng());
                u *= 2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                const AsymptoticMetrics m = asymptotic_metrics(u, lp, spec, eta, {1.0});
                if (k.kappa * m.measure_bad > m.J_gap + 1e-12) {
                    d = "violated at eta " + std::to_string(eta);
                    return false;
                }
            }
        }
        return true;
    });

    s.run("lambda / nu scaling round trip", [&](std::string& d) {
        const ProblemSpec spec = model(0.01, 51);
        const DiscreteField u = random_positive_field(spec.mesh_ptr(), rng());
        const Exponents ex{2, 3, 4};
        const ScaledSolution l = scale_solution(u, 0.01, ex, ScalingForm::Lambda);
        const ScaledSolution n = scale_solution(u, 0.01, ex, ScalingForm::Nu);
        double worst = 0.0;
        const DiscreteField ul = unscale_solution(l.field, l.parameter, ex, ScalingForm::Lambda);
        const DiscreteField un = unscale_solution(n.field, n.parameter, ex, ScalingForm::Nu);
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (u[i] != 0.0) {
                worst = std::max({worst, std::abs(ul[i] - u[i]) / std::abs(u[i]), std::abs(un[i] - u[i]) / std::abs(u[i])});
            }
        }
        d = "lambda " + g3(l.parameter) + ", nu " + g3(n.parameter);
        return worst <= 1e-14 && std::abs(l.parameter - 10.0) <= 1e-12 && std::abs(n.parameter - 0.01) <= 1e-15;
    });

    s.run("layer profile for q = 2, gamma = 4 is tanh(xi / sqrt 2)", [&](std::string& d) {
        const LayerProfile lp = layer_profile_1d(2, 4, 10, 201);
        double worst = 0.0;
        for (std::size_t i = 0; i < lp.xi.size(); ++i) {
            worst = std::max(worst, std::abs(lp.U[i] - std::tanh(lp.xi[i] / std::sqrt(2.0))));
            if (i > 0 && !(lp.U[i] > lp.U[i - 1])) {
                d = "not increasing";
                return false;
            }
        }
        d = "max err " + g3(worst);
        return worst <= 1e-6;
    });

    return s.failures;
}

}  // namespace plgs::cli
