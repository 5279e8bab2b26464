#pragma once

#include "plgs/asymptotics.hpp"
#include "plgs/problem.hpp"
#include "plgs/rayleigh.hpp"
#include "plgs/solver.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plgs::cli {

/// Config problem with the 1-based line of the offending entry (0 if unknown).
class ConfigIssue : public std::runtime_error {
public:
    ConfigIssue(const std::string& what, int line)
        : std::runtime_error(what), line_(line) {}
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

struct DomainConfig {
    std::string type = "interval";
    double x0 = 0.0;
    double x1 = 1.0;
    double y0 = 0.0;
    double y1 = 1.0;
    std::size_t nodes = 2001;
    std::size_t nx = 65;
    std::size_t ny = 65;
};

struct CoefficientConfig {
    std::string type = "constant";
    double value = 1.0;
    double c0 = 1.0;
    double cx = 0.0;
    double cy = 0.0;
    double base = 1.0;
    double amplitude = 0.0;
    // affine only: declared bounds
    double lower = 1.0;
    double upper = 1.0;
};

struct ExperimentConfig {
    Exponents exponents;
    double epsilon = 1e-3;
    std::vector<double> eps_list;
    DomainConfig domain;
    CoefficientConfig a;
    CoefficientConfig b;
    SolverOptions solver;
    MountainPassOptions mountain_pass;
    AscentOptions thresholds;
    int barrier_samples = 200;
    SweepOptions sweep;
    double layer_xi_max = 40.0;
    std::size_t layer_points = 4001;
    std::string output_dir = "out";
    /// JSON pointer -> source line, for messages raised after parsing.
    std::map<std::string, int> lines;

    [[nodiscard]] int line_of(const std::string& pointer) const;
};

/// One seed drives the solver, the mountain pass, the threshold ascent and the barrier samples.
void set_seed(ExperimentConfig& cfg, std::uint64_t seed);

/// Parses a JSON config; unknown keys and invalid values raise ConfigIssue.
[[nodiscard]] ExperimentConfig parse_config(const std::string& text);
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

/// Every option with its resolved value.
[[nodiscard]] nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

[[nodiscard]] MeshPtr make_mesh(const ExperimentConfig& cfg);
[[nodiscard]] CoefficientField make_coefficient(const CoefficientConfig& c, const ExperimentConfig& cfg);
/// ProblemSpec at eps (defaults to cfg.epsilon).
[[nodiscard]] ProblemSpec make_problem(const ExperimentConfig& cfg, std::optional<double> eps = std::nullopt);

}  // namespace plgs::cli
