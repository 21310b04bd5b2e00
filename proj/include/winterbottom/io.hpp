#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "winterbottom/anisotropy.hpp"
#include "winterbottom/optimize.hpp"
#include "winterbottom/polytope.hpp"
#include "winterbottom/shape.hpp"
#include "winterbottom/stability.hpp"

namespace wb {

using Json = nlohmann::ordered_json;

Json anisotropy_to_json(const Anisotropy& phi);
Anisotropy anisotropy_from_json(const Json& j);

Json polytope_to_json(const ConvexPolytope& p);
ConvexPolytope polytope_from_json(const Json& j);

Json shape_to_json(const SubstrateShape& s);
SubstrateShape shape_from_json(const Json& j);

Json pixels_to_json(const PixelShape& p);
PixelShape pixels_from_json(const Json& j);

Json energy_to_json(const EnergyBreakdown& b);
Json report_to_json(const TheoremReport& r);

// 2D figures; px_per_unit scales model units to pixels. The timestamp
// comment is suppressed when reproducible is set.
std::string shape_to_svg(const SubstrateShape& s, bool reproducible, double px_per_unit = 100.0);
std::string polytope_to_svg(const ConvexPolytope& p, bool reproducible, double px_per_unit = 100.0);

// OFF mesh for 3D polytopes.
std::string polytope_to_off(const ConvexPolytope& p);

std::string trace_csv(const std::vector<double>& energies);
std::string wetting_csv(const std::vector<std::pair<double, EnergyBreakdown>>& rows);
std::string stability_csv(const std::vector<StabilityRecord>& records);
// Scatter of deficit vs squared asymmetry on log-log axes.
std::string stability_scatter_svg(const std::vector<StabilityRecord>& records, bool reproducible);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Doubles formatted with full round-trip precision (CSV cells).
std::string fmt_double(double v);

}  // namespace wb
