#pragma once

#include "plgs/asymptotics.hpp"
#include "plgs/rayleigh.hpp"
#include "plgs/solver.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace plgs::cli {

using ojson = nlohmann::ordered_json;

/// %.17g
[[nodiscard]] std::string num(double x);

void write_file(const std::string& path, const std::string& contents);

[[nodiscard]] ojson mesh_json(const Mesh& mesh);
/// {"dimension", "nodes": [[x(,y)]...], "elements": [[i,j(,k)]...], "boundary": [...], "values": [...]}
[[nodiscard]] ojson field_snapshot_json(const DiscreteField& u);
[[nodiscard]] ojson solve_json(const SolveReport& rep, const NehariDiagnostics* diag);
[[nodiscard]] ojson mountain_pass_json(const MountainPassReport& rep);
[[nodiscard]] ojson barrier_json(const BarrierReport& rep);
[[nodiscard]] ojson thresholds_json(const ThresholdEstimate& est, const ExtremalConstants& ex);

/// x[,y],u per node.
[[nodiscard]] std::string field_csv(const DiscreteField& u);
[[nodiscard]] std::string trace_csv(const std::vector<TraceEntry>& trace);
/// eps, energy, energy_gap, J_gap, measure_bad_eta, l1_err, l2_err, linf_interior_err, converged
[[nodiscard]] std::string sweep_csv(const SweepReport& rep);
[[nodiscard]] std::string layer_csv(const LayerProfile& prof);

/// Log-log line chart of the sweep error columns against eps.
[[nodiscard]] std::string sweep_svg(const SweepReport& rep);

}  // namespace plgs::cli
