#include "config.hpp"
#include "report.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace plgs;
using namespace plgs::cli;

namespace {

int issue_line(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigIssue& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST(Config, DefaultsFromEmptyObject) {
    const auto cfg = parse_config("{}");
    EXPECT_EQ(cfg.exponents.p, 2.0);
    EXPECT_EQ(cfg.exponents.q, 3.0);
    EXPECT_EQ(cfg.exponents.gamma, 4.0);
    EXPECT_EQ(cfg.epsilon, 1e-3);
    EXPECT_EQ(cfg.domain.nodes, 2001u);
    const auto spec = make_problem(cfg);
    EXPECT_EQ(spec.mesh().num_nodes(), 2001u);
    EXPECT_EQ(spec.epsilon(), 1e-3);
}

TEST(Config, ResolvedDefaultsAreListed) {
    const auto j = to_json(parse_config("{\"epsilon\": 0.01}"));
    EXPECT_EQ(j["epsilon"].get<double>(), 0.01);
    EXPECT_TRUE(j.contains("solver"));
    EXPECT_EQ(j["solver"]["tol_factor"].get<double>(), 1e-8);
    EXPECT_EQ(j["mountain_pass"]["mass_weight"].get<double>(), 0.02);
}

TEST(Config, RoundTripThroughJson) {
    const std::string text = R"({
  "exponents": {"p": 2, "q": 2.5, "gamma": 4},
  "epsilon": 0.02,
  "eps_list": [0.1, 0.01],
  "domain": {"type": "rectangle", "nx": 9, "ny": 7},
  "a": {"type": "affine", "c0": 1, "cx": 0.5, "cy": 0, "lower": 1, "upper": 1.5},
  "b": {"type": "sinusoidal_bump", "base": 1, "amplitude": 0.5}
})";
    const auto cfg = parse_config(text);
    const auto again = parse_config(to_json(cfg).dump(2));
    EXPECT_EQ(to_json(cfg), to_json(again));
    const auto spec = make_problem(again);
    EXPECT_EQ(spec.mesh().dimension(), 2);
    EXPECT_EQ(spec.mesh().num_nodes(), 63u);
    EXPECT_EQ(spec.exponents().q, 2.5);
}

TEST(Config, UnknownKeyReportsItsLine) {
    const std::string text = "{\n  \"epsilon\": 0.01,\n  \"domain\": {\n    \"nodez\": 11\n  }\n}\n";
    EXPECT_EQ(issue_line(text), 4);
    EXPECT_EQ(issue_line("{\n\"bogus\": 1}"), 2);
}

TEST(Config, InvalidValuesReportTheirLine) {
    EXPECT_EQ(issue_line("{\n  \"epsilon\": -1\n}"), 2);
    EXPECT_EQ(issue_line("{\n\n  \"exponents\": {\"p\": 2, \"q\": 5, \"gamma\": 4}\n}"), 3);
    EXPECT_EQ(issue_line("{\n  \"eps_list\": [0.001, 0.1]\n}"), 2);
    EXPECT_GT(issue_line("{\n  \"epsilon\": 0.1,\n  oops\n}"), 0);
    EXPECT_EQ(issue_line("{\n  \"a\": {\"type\": \"affine\", \"c0\": 1}\n}"), 2);
}

TEST(Config, SeedPropagates) {
    auto cfg = parse_config("{}");
    set_seed(cfg, 77);
    EXPECT_EQ(cfg.solver.seed, 77u);
    EXPECT_EQ(cfg.mountain_pass.seed, 77u);
    EXPECT_EQ(cfg.thresholds.seed, 77u);
}

TEST(Report, FieldCsvIsDeterministicAndFullPrecision) {
    auto m = build_mesh(IntervalDomain{0, 1}, 4);
    const auto u = make_field(m, [](const Point& p) { return p.x * (1 - p.x); }, true);
    const std::string a = field_csv(u);
    EXPECT_EQ(a, field_csv(u));
    std::istringstream in(a);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "x,u");
    std::getline(in, line);
    EXPECT_EQ(line, "0,0");
    std::getline(in, line);
    const double x = m->node(1).x;
    EXPECT_EQ(line, num(x) + "," + num(x * (1 - x)));
    EXPECT_EQ(std::stod(line.substr(line.find(',') + 1)), u[1]);
}

TEST(Report, SnapshotSchema) {
    auto m = build_mesh(RectangleDomain{0, 1, 0, 1}, 3, 3);
    const DiscreteField u(m);
    const auto j = field_snapshot_json(u);
    EXPECT_EQ(j["dimension"].get<int>(), 2);
    EXPECT_EQ(j["nodes"].size(), 9u);
    EXPECT_EQ(j["nodes"][0].size(), 2u);
    EXPECT_EQ(j["elements"].size(), 8u);
    EXPECT_EQ(j["elements"][0].size(), 3u);
    EXPECT_EQ(j["boundary"].size(), 8u);
    EXPECT_EQ(j["values"].size(), 9u);
}

TEST(Report, SweepCsvHeader) {
    SweepReport rep;
    SweepRow row;
    row.eps = 0.1;
    row.metrics.lr_errors = {{1.0, 0.5}, {2.0, 0.25}};
    row.converged = true;
    rep.rows.push_back(row);
    const std::string csv = sweep_csv(rep);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "eps,energy,energy_gap,J_gap,measure_bad_eta,l1_err,l2_err,linf_interior_err,converged");
    EXPECT_NE(csv.find("0.10000000000000001,0,0,0,0,0.5,0.25,0,1"), std::string::npos);
    EXPECT_NE(sweep_svg(rep).find("<svg"), std::string::npos);
}
