#pragma once

// Text formats: subspace systems and start vectors as JSON, solve results as
// JSON, map traces and bound tables as CSV.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cycloproj/bounds.hpp"
#include "cycloproj/map_sim.hpp"

namespace cycloproj {

// {"ambient_dim": d, "subspaces": [[[re, im], ...], ...]}; each subspace is its
// spanning vectors laid end to end (column-major), so its length is a multiple of d.
nlohmann::json system_to_json(const SubspaceSystem& sys);
SubspaceSystem system_from_json(const nlohmann::json& j);

// [[re, im], ...] or plain real numbers.
CVector vector_from_json(const nlohmann::json& j);

nlohmann::json solve_result_to_json(const SolveResult& r);

// %.17g
std::string format_number(double x);

void write_trace_csv(std::ostream& os, const MapTrace& trace);
void write_bounds_csv(std::ostream& os, const std::vector<BoundRow>& rows);

// "start:end:step" (both ends inclusive, end snapped within 1e-12) or a comma list.
// Every value must lie in [0, 1].
std::vector<double> parse_grid(const std::string& text);

nlohmann::json read_json_file(const std::string& path);

}  // namespace cycloproj
