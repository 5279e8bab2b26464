#include "report.hpp"

#include "plgs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace plgs::cli {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path);
    }
    out << contents;
}

ojson mesh_json(const Mesh& mesh) {
    const auto b = mesh.bounds();
    const auto r = mesh.resolution();
    ojson j;
    j["dimension"] = mesh.dimension();
    j["nodes"] = mesh.num_nodes();
    j["elements"] = mesh.num_elements();
    if (mesh.dimension() == 1) {
        j["bounds"] = {b[0], b[1]};
        j["resolution"] = {r[0]};
    } else {
        j["bounds"] = b;
        j["resolution"] = r;
    }
    return j;
}

ojson field_snapshot_json(const DiscreteField& u) {
    const Mesh& mesh = u.mesh();
    ojson nodes = ojson::array();
    for (const Point& p : mesh.nodes()) {
        nodes.push_back(mesh.dimension() == 1 ? ojson{p.x} : ojson{p.x, p.y});
    }
    ojson elements = ojson::array();
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto el = mesh.element(e);
        elements.push_back(std::vector<int>(el.begin(), el.end()));
    }
    ojson j;
    j["dimension"] = mesh.dimension();
    j["nodes"] = nodes;
    j["elements"] = elements;
    j["boundary"] = std::vector<std::size_t>(mesh.boundary_nodes().begin(), mesh.boundary_nodes().end());
    j["values"] = std::vector<double>(u.values().begin(), u.values().end());
    return j;
}

namespace {

ojson field_summary(const DiscreteField& u) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : u.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {{"min", lo}, {"max", hi}, {"w1p_norm_p2", w1p_norm(u, 2.0)}, {"l1_norm", lr_norm(u, 1.0)}};
}

}  // namespace

ojson solve_json(const SolveReport& rep, const NehariDiagnostics* diag) {
    ojson j;
    j["energy"] = rep.energy;
    j["residual_norm"] = rep.residual_norm;
    j["tolerance"] = rep.tolerance;
    j["converged"] = rep.converged;
    j["trivial"] = rep.trivial;
    j["nehari_residual"] = rep.nehari_residual;
    j["fiber_second_derivative"] = rep.fiber_second_derivative;
    if (diag != nullptr) {
        j["R_N"] = diag->R_N;
        j["R_e"] = diag->R_e;
    }
    j["iterations"] = rep.iterations;
    j["multiplicity"] = rep.multiplicity;
    j["selected_restart"] = rep.selected_restart;
    j["delta_reg"] = rep.delta_reg;
    j["restart_energies"] = rep.restart_energies;
    std::vector<bool> conv(rep.restart_converged.begin(), rep.restart_converged.end());
    j["restart_converged"] = conv;
    j["trace_monotone"] = rep.trace_monotone;
    j["field"] = field_summary(rep.field);
    return j;
}

ojson mountain_pass_json(const MountainPassReport& rep) {
    ojson j;
    j["energy"] = rep.energy;
    j["residual_norm"] = rep.residual_norm;
    j["tolerance"] = rep.tolerance;
    j["relative_residual"] = rep.relative_residual;
    j["converged"] = rep.converged;
    j["path_level"] = rep.path_level;
    j["iterations"] = rep.iterations;
    j["delta_reg"] = rep.delta_reg;
    j["path_energies"] = rep.path_energies;
    j["field"] = field_summary(rep.field);
    return j;
}

ojson barrier_json(const BarrierReport& rep) {
    return {{"embedding_constant", rep.embedding_constant},
            {"rho", rep.rho},
            {"delta", rep.delta},
            {"min_sampled", rep.min_sampled},
            {"samples", rep.samples},
            {"holds", rep.holds}};
}

ojson thresholds_json(const ThresholdEstimate& est, const ExtremalConstants& ex) {
    ojson j;
    j["c"] = ex.c;
    j["c_e"] = ex.c_e;
    j["sup_upsilon"] = est.sup_upsilon;
    j["eps_star"] = est.eps_star;
    j["eps_e_star"] = est.eps_e_star;
    j["restarts_used"] = est.restarts_used;
    j["restart_values"] = est.restart_values;
    j["note"] = "lower estimates over the discrete space at this mesh";
    return j;
}

std::string field_csv(const DiscreteField& u) {
    const Mesh& mesh = u.mesh();
    std::ostringstream out;
    out << (mesh.dimension() == 1 ? "x,u\n" : "x,y,u\n");
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
        const Point& p = mesh.node(i);
        out << num(p.x) << ',';
        if (mesh.dimension() == 2) {
            out << num(p.y) << ',';
        }
        out << num(u[i]) << '\n';
    }
    return out.str();
}

std::string trace_csv(const std::vector<TraceEntry>& trace) {
    std::ostringstream out;
    out << "iteration,energy,residual_norm\n";
    for (const auto& t : trace) {
        out << t.iteration << ',' << num(t.energy) << ',' << num(t.residual_norm) << '\n';
    }
    return out.str();
}

namespace {

double lr_of(const AsymptoticMetrics& m, double r) {
    for (const auto& [rr, v] : m.lr_errors) {
        if (rr == r) {
            return v;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string sweep_csv(const SweepReport& rep) {
    std::ostringstream out;
    out << "eps,energy,energy_gap,J_gap,measure_bad_eta,l1_err,l2_err,linf_interior_err,converged\n";
    for (const auto& row : rep.rows) {
        const AsymptoticMetrics& m = row.metrics;
        out << num(row.eps) << ',' << num(m.energy) << ',' << num(m.energy_gap) << ',' << num(m.J_gap) << ','
            << num(m.measure_bad) << ',' << num(lr_of(m, 1.0)) << ',' << num(lr_of(m, 2.0)) << ','
            << num(m.linf_interior_err) << ',' << (row.converged ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string layer_csv(const LayerProfile& prof) {
    std::ostringstream out;
    out << "xi,U,deficit\n";
    for (std::size_t i = 0; i < prof.xi.size(); ++i) {
        out << num(prof.xi[i]) << ',' << num(prof.U[i]) << ',' << num(prof.deficit[i]) << '\n';
    }
    return out.str();
}

std::string sweep_svg(const SweepReport& rep) {
    struct Series {
        const char* name;
        const char* color;
        std::vector<std::pair<double, double>> pts;
    };
    std::vector<Series> series{{"energy_gap", "#1f77b4", {}},
                               {"measure_bad", "#d62728", {}},
                               {"l1_err", "#2ca02c", {}},
                               {"l2_err", "#9467bd", {}}};
    for (const auto& row : rep.rows) {
        const AsymptoticMetrics& m = row.metrics;
        const double vals[] = {m.energy_gap, m.measure_bad, lr_of(m, 1.0), lr_of(m, 2.0)};
        for (std::size_t k = 0; k < series.size(); ++k) {
            if (vals[k] > 0.0 && row.eps > 0.0) {
                series[k].pts.emplace_back(std::log10(row.eps), std::log10(vals[k]));
            }
        }
    }
    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.pts) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (!(x1 > x0)) {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if (!(y1 > y0)) {
        y0 -= 1.0;
        y1 += 1.0;
    }
    const double W = 640.0;
    const double H = 420.0;
    const double L = 70.0;
    const double R = 150.0;
    const double T = 30.0;
    const double B = 50.0;
    const auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    const auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(2);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int e = static_cast<int>(std::ceil(x0)); e <= static_cast<int>(std::floor(x1)); ++e) {
        out << "<text x=\"" << px(e) << "\" y=\"" << H - B + 18 << "\" font-size=\"12\" text-anchor=\"middle\">1e"
            << e << "</text>\n";
    }
    for (int e = static_cast<int>(std::ceil(y0)); e <= static_cast<int>(std::floor(y1)); ++e) {
        out << "<text x=\"" << L - 6 << "\" y=\"" << py(e) + 4 << "\" font-size=\"12\" text-anchor=\"end\">1e" << e
            << "</text>\n";
    }
    out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10
        << "\" font-size=\"13\" text-anchor=\"middle\">eps</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        if (!s.pts.empty()) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
            for (const auto& [x, y] : s.pts) {
                out << px(x) << ',' << py(y) << ' ';
            }
            out << "\"/>\n";
            for (const auto& [x, y] : s.pts) {
                out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
            }
        }
        const double ly = T + 20.0 * static_cast<double>(k);
        out << "<line x1=\"" << W - R + 15 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 35 << "\" y2=\"" << ly
            << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << W - R + 40 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << s.name << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace plgs::cli
