#include "plgs/asymptotics.hpp"

#include "plgs/errors.hpp"
#include "plgs/functionals.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace plgs {

double limit_value(double a, double b, const Exponents& ex) {
    return std::pow(a / b, 1.0 / (ex.gamma - ex.q));
}

LimitProfile limit_profile(const ProblemSpec& spec) {
    const Exponents& ex = spec.exponents();
    if (!(spec.a().lower > 0.0)) {
        throw HypothesisViolation("limit profile requires a >= sigma_a > 0 (declared lower bound of a is " +
                                  std::to_string(spec.a().lower) + ")");
    }
    const Mesh& mesh = spec.mesh();
    LimitProfile prof;
    std::vector<double> nodal(mesh.num_nodes());
    const auto an = spec.a_nodes();
    const auto bn = spec.b_nodes();
    for (std::size_t i = 0; i < nodal.size(); ++i) {
        nodal[i] = limit_value(an[i], bn[i], ex);
    }
    prof.field = DiscreteField(spec.mesh_ptr(), std::move(nodal));
    const auto aq = spec.a_quad();
    const auto bq = spec.b_quad();
    prof.quad_values.resize(mesh.num_quad_points());
    for (std::size_t k = 0; k < prof.quad_values.size(); ++k) {
        prof.quad_values[k] = limit_value(aq[k], bq[k], ex);
    }
    prof.rho_minus = limit_value(spec.a().lower, spec.b().upper, ex);
    prof.rho_plus = limit_value(spec.a().upper, spec.b().lower, ex);
    return prof;
}

double limiting_equation_residual(const LimitProfile& profile, const ProblemSpec& spec) {
    const Exponents& ex = spec.exponents();
    const auto an = spec.a_nodes();
    const auto bn = spec.b_nodes();
    double worst = 0.0;
    for (std::size_t i = 0; i < profile.field.size(); ++i) {
        const double u = profile.field[i];
        worst = std::max(worst, std::abs(an[i] * std::pow(u, ex.q - 1.0) - bn[i] * std::pow(u, ex.gamma - 1.0)));
    }
    return worst;
}

double J_limit(const LimitProfile& profile, const ProblemSpec& spec) {
    const Exponents& ex = spec.exponents();
    const Mesh& mesh = spec.mesh();
    const auto aq = spec.a_quad();
    const auto bq = spec.b_quad();
    double J = 0.0;
    for (std::size_t k = 0; k < mesh.num_quad_points(); ++k) {
        J += mesh.quad_weight(k) * j_pointwise(aq[k], bq[k], profile.quad_values[k], ex.q, ex.gamma);
    }
    return J;
}

AsymptoticMetrics asymptotic_metrics(const DiscreteField& u, const LimitProfile& profile, const ProblemSpec& spec,
                                     double eta, const std::vector<double>& r_list, double interior_margin) {
    const Exponents& ex = spec.exponents();
    if (!(eta > 0.0)) {
        throw InputError("asymptotic_metrics requires eta > 0");
    }
    for (double r : r_list) {
        if (!(r >= 1.0) || !(r < ex.gamma)) {
            std::ostringstream msg;
            msg << "L^r error requested for r = " << r << ": strong convergence holds only for 1 <= r < gamma = "
                << ex.gamma << "; at r = gamma the convergence is weak and is not measured";
            throw InputError(msg.str());
        }
    }
    if (u.mesh_ptr() != spec.mesh_ptr() || profile.field.mesh_ptr() != spec.mesh_ptr()) {
        throw InputError("asymptotic_metrics: field, profile and problem must share a mesh");
    }
    const Mesh& mesh = spec.mesh();
    AsymptoticMetrics m;
    m.eta = eta;
    m.interior_margin = interior_margin;
    std::vector<double> sums(r_list.size(), 0.0);
    for (std::size_t k = 0; k < mesh.num_quad_points(); ++k) {
        const double w = mesh.quad_weight(k);
        const double d = std::abs(u.at_quad(k) - profile.quad_values[k]);
        if (d >= eta) {
            m.measure_bad += w;
        }
        for (std::size_t j = 0; j < r_list.size(); ++j) {
            sums[j] += w * std::pow(d, r_list[j]);
        }
    }
    for (std::size_t j = 0; j < r_list.size(); ++j) {
        m.lr_errors.emplace_back(r_list[j], std::pow(sums[j], 1.0 / r_list[j]));
    }
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
        if (mesh.distance_to_boundary(mesh.node(i)) >= interior_margin) {
            m.linf_interior_err = std::max(m.linf_interior_err, std::abs(u[i] - profile.field[i]));
        }
    }
    m.energy = phi(u, spec);
    m.J_limit = J_limit(profile, spec);
    m.energy_gap = m.energy - m.J_limit;
    m.J_gap = J_functional(u, spec) - m.J_limit;
    return m;
}

CoefficientBox CoefficientBox::of(const ProblemSpec& spec) {
    return {spec.a().lower, spec.a().upper, spec.b().lower, spec.b().upper};
}

SeparationEstimate separation_constant(const CoefficientBox& box, double q, double gamma, double eta,
                                       const SeparationGrid& grid) {
    if (!(eta > 0.0)) {
        throw InputError("separation_constant requires eta > 0");
    }
    if (!(box.sigma_a > 0.0) || !(box.sigma_b > 0.0) || box.a_hat < box.sigma_a || box.b_hat < box.sigma_b) {
        throw HypothesisViolation("separation_constant needs 0 < sigma_a <= a_hat and 0 < sigma_b <= b_hat");
    }
    if (grid.alpha_points < 1 || grid.beta_points < 1 || grid.s_points < 2) {
        throw InputError("separation_constant: grid too small");
    }
    const double rho_plus = std::pow(box.a_hat / box.sigma_b, 1.0 / (gamma - q));
    // Growth bound: j(s) - j(rho) >= (sigma_b/gamma) s^gamma - (a_hat/q) s^q since j(rho) <= 0.
    const auto lower = [&](double s) { return box.sigma_b / gamma * std::pow(s, gamma) - box.a_hat / q * std::pow(s, q); };
    double hi = std::max(1.0, rho_plus + eta);
    while (lower(hi) < 1.0) {
        hi *= 2.0;
    }
    double lo = rho_plus + eta;
    if (lower(lo) >= 1.0) {
        hi = lo;
    } else {
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (lower(mid) >= 1.0 ? hi : lo) = mid;
        }
    }
    SeparationEstimate est;
    est.s_max = hi;
    est.kappa = 1.0;
    const auto axis = [](double a, double b, int n, int i) {
        return n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    for (int ia = 0; ia < grid.alpha_points; ++ia) {
        const double alpha = axis(box.sigma_a, box.a_hat, grid.alpha_points, ia);
        for (int ib = 0; ib < grid.beta_points; ++ib) {
            const double beta = axis(box.sigma_b, box.b_hat, grid.beta_points, ib);
            const double rho = std::pow(alpha / beta, 1.0 / (gamma - q));
            const double jr = j_pointwise(alpha, beta, rho, q, gamma);
            // Edge points are exempt from the tube test: rho - eta can round to just inside it.
            const auto visit = [&](double s, bool edge = false) {
                if (s < 0.0 || s > est.s_max || (!edge && std::abs(s - rho) < eta)) {
                    return;
                }
                const double g = j_pointwise(alpha, beta, s, q, gamma) - jr;
                if (g < est.kappa) {
                    est.kappa = g;
                    est.argmin_alpha = alpha;
                    est.argmin_beta = beta;
                    est.argmin_s = s;
                }
            };
            for (int is = 0; is < grid.s_points; ++is) {
                visit(axis(0.0, est.s_max, grid.s_points, is));
            }
            visit(rho - eta, true);
            visit(rho + eta, true);
        }
    }
    return est;
}

SweepReport epsilon_sweep(const ProblemSpec& spec_template, const std::vector<double>& eps_list,
                          const SweepOptions& options) {
    if (eps_list.empty()) {
        throw InputError("epsilon_sweep: empty eps list");
    }
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0)) {
            throw InputError("epsilon_sweep: eps values must be positive");
        }
        if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
            throw InputError("epsilon_sweep: eps list must be strictly decreasing");
        }
    }
    for (double r : options.r_list) {
        if (!(r >= 1.0) || !(r < spec_template.exponents().gamma)) {
            throw InputError("epsilon_sweep: every r must satisfy 1 <= r < gamma (weak L^gamma is not measured)");
        }
    }
    const LimitProfile profile = limit_profile(spec_template);

    SweepReport report;
    report.eta = options.eta;
    report.J_limit = J_limit(profile, spec_template);
    report.rows.resize(eps_list.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        for (std::size_t i = next++; i < eps_list.size(); i = next++) {
            try {
                const ProblemSpec spec = spec_template.with_epsilon(eps_list[i]);
                const SolveReport sol = solve_ground_state(spec, std::nullopt, options.solver);
                SweepRow& row = report.rows[i];
                row.eps = eps_list[i];
                row.converged = sol.converged;
                row.trivial = sol.trivial;
                row.iterations = sol.iterations;
                row.above_threshold = options.eps_e_star.has_value() && eps_list[i] >= *options.eps_e_star;
                row.metrics =
                    asymptotic_metrics(sol.field, profile, spec, options.eta, options.r_list, options.interior_margin);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const int threads = std::clamp(options.threads, 1, static_cast<int>(eps_list.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return report;
}

ScaledSolution scale_solution(const DiscreteField& u_eps, double eps, const Exponents& ex, ScalingForm form) {
    if (!(eps > 0.0)) {
        throw InputError("scale_solution requires eps > 0");
    }
    ScaledSolution out;
    if (form == ScalingForm::Lambda) {
        out.factor = std::pow(eps, -1.0 / (ex.gamma - ex.p));
        out.parameter = std::pow(eps, -(ex.gamma - ex.q) / (ex.gamma - ex.p));
        out.residual_factor = std::pow(out.factor, ex.gamma - 1.0);
    } else {
        out.factor = std::pow(eps, -1.0 / (ex.q - ex.p));
        out.parameter = std::pow(eps, (ex.gamma - ex.q) / (ex.q - ex.p));
        out.residual_factor = std::pow(out.factor, ex.q - 1.0);
    }
    out.field = out.factor * u_eps;
    return out;
}

DiscreteField unscale_solution(const DiscreteField& scaled, double parameter, const Exponents& ex, ScalingForm form) {
    if (!(parameter > 0.0)) {
        throw InputError("unscale_solution requires a positive parameter");
    }
    const double e = form == ScalingForm::Lambda ? -1.0 / (ex.gamma - ex.q) : 1.0 / (ex.gamma - ex.q);
    return std::pow(parameter, e) * scaled;
}

ProblemSpec scaled_problem(const ProblemSpec& spec, ScalingForm form, double parameter) {
    if (!(parameter > 0.0)) {
        throw InputError("scaled_problem requires a positive parameter");
    }
    return form == ScalingForm::Lambda ? spec.rescaled(1.0, parameter, 1.0) : spec.rescaled(1.0, 1.0, parameter);
}

namespace {

// expm1(z) - z without cancellation for small z.
double expm1_minus_linear(double z) {
    if (std::abs(z) < 0.1) {
        double term = z * z / 2.0;
        double sum = term;
        for (int k = 3; k < 20; ++k) {
            term *= z / k;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) {
                break;
            }
        }
        return sum;
    }
    return std::expm1(z) - z;
}

// Layer potential W(t) = t^g/g - t^q/q + 1/q - 1/g at t = 1 - e^{-s}.
double layer_potential(double s, double q, double g) {
    if (s <= 0.0) {
        return 1.0 / q - 1.0 / g;
    }
    const double L = std::log1p(-std::exp(-s));
    return expm1_minus_linear(g * L) / g - expm1_minus_linear(q * L) / q;
}

// d xi / d s after substituting t = 1 - e^{-s}; bounded on [0, inf).
double layer_integrand(double s, double q, double g) {
    return std::exp(-s) / std::sqrt(2.0 * layer_potential(s, q, g));
}

class LayerIntegral {
public:
    LayerIntegral(double q, double g) : q_(q), g_(g) { cumulative_.push_back(0.0); }

    // xi(s) = int_0^s layer_integrand.
    double operator()(double s, double xi_for_error) {
        const auto k = static_cast<std::size_t>(s / kPanel);
        extend(k, xi_for_error);
        return cumulative_[k] + panel(static_cast<double>(k) * kPanel, s, xi_for_error);
    }

    // Smallest panel start whose cumulative value exceeds xi (extends as needed).
    double bracket_end(double xi) {
        std::size_t k = 0;
        for (;; ++k) {
            extend(k + 1, xi);
            if (cumulative_[k + 1] > xi) {
                return static_cast<double>(k + 1) * kPanel;
            }
        }
    }

    double integrand(double s) const { return layer_integrand(s, q_, g_); }

private:
    static constexpr double kPanel = 0.25;

    double panel(double a, double b, double xi_for_error) const {
        if (b <= a) {
            return 0.0;
        }
        double err = 0.0;
        const auto f = [this](double s) { return layer_integrand(s, q_, g_); };
        const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 10, 1e-11, &err);
        if (!std::isfinite(v) || err > 1e-10 * std::max(1.0, std::abs(v))) {
            std::ostringstream msg;
            msg << "layer profile quadrature did not converge at xi = " << xi_for_error << " (error estimate " << err
                << ")";
            throw NumericalError(msg.str());
        }
        return v;
    }

    void extend(std::size_t k, double xi_for_error) {
        while (cumulative_.size() <= k) {
            const double a = static_cast<double>(cumulative_.size() - 1) * kPanel;
            cumulative_.push_back(cumulative_.back() + panel(a, a + kPanel, xi_for_error));
        }
    }

    double q_;
    double g_;
    std::vector<double> cumulative_;
};

}  // namespace

double LayerProfile::value(double x) const {
    if (xi.empty() || x > xi.back()) {
        return 1.0;
    }
    if (x <= xi.front()) {
        return U.front();
    }
    const auto it = std::upper_bound(xi.begin(), xi.end(), x);
    const auto j = static_cast<std::size_t>(it - xi.begin());
    const double w = (x - xi[j - 1]) / (xi[j] - xi[j - 1]);
    return 1.0 - ((1.0 - w) * deficit[j - 1] + w * deficit[j]);
}

LayerProfile layer_profile_1d(double q, double gamma, double xi_max, std::size_t points) {
    if (!(q > 1.0) || !(gamma > q)) {
        throw InputError("layer_profile_1d requires 1 < q < gamma");
    }
    if (!(xi_max > 0.0) || !std::isfinite(xi_max)) {
        throw InputError("layer_profile_1d requires a finite xi_max > 0");
    }
    if (points < 2) {
        throw InputError("layer_profile_1d requires at least 2 points");
    }
    LayerProfile prof;
    prof.q = q;
    prof.gamma = gamma;
    LayerIntegral xi_of(q, gamma);
    double s_prev = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double target = xi_max * static_cast<double>(i) / static_cast<double>(points - 1);
        double s = 0.0;
        if (target > 0.0) {
            // xi(s) is increasing with derivative integrand(s) > 0: safeguarded Newton.
            double lo = s_prev;
            double hi = xi_of.bracket_end(target);
            s = 0.5 * (lo + hi);
            for (int it = 0; it < 200; ++it) {
                const double r = xi_of(s, target) - target;
                if (r > 0.0) {
                    hi = s;
                } else {
                    lo = s;
                }
                double next = s - r / xi_of.integrand(s);
                if (!(next > lo && next < hi)) {
                    next = 0.5 * (lo + hi);
                }
                if (std::abs(next - s) <= 1e-15 * std::max(1.0, s) || hi - lo <= 1e-15 * std::max(1.0, hi)) {
                    s = next;
                    break;
                }
                s = next;
            }
        }
        s_prev = s;
        prof.xi.push_back(target);
        prof.deficit.push_back(std::exp(-s));
        prof.U.push_back(-std::expm1(-s));
    }
    return prof;
}

DiscreteField composite_approx_1d(double eps, const MeshPtr& mesh, const LayerProfile& profile) {
    if (!(eps > 0.0)) {
        throw InputError("composite_approx_1d requires eps > 0");
    }
    const auto bb = mesh->bounds();
    if (mesh->dimension() != 1 || bb[0] != 0.0 || bb[1] != 1.0) {
        throw InputError("composite_approx_1d requires a 1D mesh on [0, 1]");
    }
    const double scale = 1.0 / std::sqrt(eps);
    DiscreteField out(mesh);
    for (std::size_t i = 0; i < mesh->num_nodes(); ++i) {
        const double x = mesh->node(i).x;
        out[i] = profile.value(x * scale) + profile.value((1.0 - x) * scale) - 1.0;
    }
    return out;
}

}  // namespace plgs
