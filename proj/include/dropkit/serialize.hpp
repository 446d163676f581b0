#pragma once

#include <json.hpp>
#include <string>

#include "dropkit/analytic.hpp"
#include "dropkit/core.hpp"
#include "dropkit/inequalities.hpp"
#include "dropkit/optimizer.hpp"
#include "dropkit/shapes.hpp"
#include "dropkit/splits.hpp"

namespace dropkit {

using json = nlohmann::json;

/// FourierShape as the flat array [r0, K, a_1..a_K, b_1..b_K].
json to_json(const FourierShape& shape);
FourierShape fourier_shape_from_json(const json& value);

json to_json(const EnergyBreakdown& energy);
json to_json(const BallConstants& constants);
json to_json(const OptimizationResult& result);
json to_json(const SplitReport& report);
json to_json(const NecessaryConditionReport& report);

/// Summary fields only (no per-s arrays).
json to_json(const BindingReport& report);
json to_json(const LemmaGReport& report);

/// Reads a FourierShape JSON file.
FourierShape read_fourier_shape_file(const std::string& path);
/// Reads a GridShape run-length file.
GridShape read_grid_shape_file(const std::string& path);

}  // namespace dropkit
