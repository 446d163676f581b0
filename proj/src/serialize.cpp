#include "dropkit/serialize.hpp"

#include <fstream>

#include "dropkit/errors.hpp"

namespace dropkit {

json to_json(const FourierShape& shape) {
  json flat = json::array();
  flat.push_back(shape.base_radius());
  flat.push_back(shape.modes());
  for (double a : shape.cos_coeffs()) {
    flat.push_back(a);
  }
  for (double b : shape.sin_coeffs()) {
    flat.push_back(b);
  }
  return flat;
}

FourierShape fourier_shape_from_json(const json& value) {
  if (!value.is_array() || value.size() < 2) {
    throw ParameterError("FourierShape JSON must be an array [r0, K, a_1..a_K, b_1..b_K]");
  }
  try {
    const double r0 = value.at(0).get<double>();
    const double k_raw = value.at(1).get<double>();
    const auto k = static_cast<std::size_t>(k_raw);
    if (k_raw < 0 || static_cast<double>(k) != k_raw || value.size() != 2 + 2 * k) {
      throw ParameterError("FourierShape JSON: expected 2 + 2K entries");
    }
    std::vector<double> a(k);
    std::vector<double> b(k);
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = value.at(2 + i).get<double>();
      b[i] = value.at(2 + k + i).get<double>();
    }
    return FourierShape(r0, std::move(a), std::move(b));
  } catch (const json::exception& e) {
    throw ParameterError(std::string("FourierShape JSON: ") + e.what());
  }
}

json to_json(const EnergyBreakdown& energy) {
  return {{"perimeter", energy.perimeter}, {"riesz", energy.riesz}, {"total", energy.total}};
}

json to_json(const BallConstants& constants) {
  return {{"volume", constants.volume},
          {"surface", constants.surface},
          {"riesz_self", constants.riesz_self},
          {"riesz_self_method", to_string(constants.riesz_self_method)},
          {"riesz_self_stderr", constants.riesz_self_stderr}};
}

json to_json(const OptimizationResult& result) {
  json history = json::array();
  for (const auto& [iteration, total] : result.history) {
    history.push_back(json::array({iteration, total}));
  }
  return {{"shape", to_json(result.shape)},
          {"energy", to_json(result.energy)},
          {"area", result.shape.area()},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"history", history}};
}

json to_json(const SplitReport& report) {
  json energies = json::array();
  for (const auto& [k, total] : report.energies_by_k) {
    energies.push_back(json::array({k, total}));
  }
  return {{"N", report.params.dimension()},
          {"lambda", report.params.exponent()},
          {"m", report.m},
          {"energies_by_k", energies},
          {"best_k", report.best_k},
          {"best_total", report.best_total}};
}

json to_json(const NecessaryConditionReport& report) {
  return {{"moment", report.moment},   {"measure", report.measure},
          {"c_N", report.c_n},         {"bound", report.bound},
          {"satisfied", report.satisfied}, {"margin", report.margin}};
}

json to_json(const BindingReport& report) {
  return {{"N", report.params.dimension()},
          {"lambda", report.params.exponent()},
          {"m", report.m},
          {"grid_size", report.s_grid.size()},
          {"min_deficit", report.min_deficit},
          {"argmin_s", report.argmin_s},
          {"verdict", to_string(report.verdict)}};
}

json to_json(const LemmaGReport& report) {
  return {{"alpha", report.alpha},
          {"min_g", report.min_g},
          {"argmin_g", report.argmin_g},
          {"s1", report.h_sign_change},
          {"h_sign_changes", report.h_sign_changes},
          {"h_increasing", report.h_increasing},
          {"passed", report.passed}};
}

FourierShape read_fourier_shape_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParameterError("cannot open shape file '" + path + "'");
  }
  json value;
  try {
    in >> value;
  } catch (const json::exception& e) {
    throw ParameterError("shape file '" + path + "' is not valid JSON: " + e.what());
  }
  return fourier_shape_from_json(value);
}

GridShape read_grid_shape_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParameterError("cannot open grid shape file '" + path + "'");
  }
  return read_grid_shape(in);
}

}  // namespace dropkit
