// dropkit command line: every library operation as a scriptable run.
//
// Output goes to stdout (JSON or CSV); a one-line RunManifest JSON goes to
// stderr, or to --manifest FILE. Exit codes: 0 ok, 1 property check failed,
// 2 bad parameters, 3 unsupported regime.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "dropkit/analytic.hpp"
#include "dropkit/core.hpp"
#include "dropkit/errors.hpp"
#include "dropkit/inequalities.hpp"
#include "dropkit/numerics.hpp"
#include "dropkit/optimizer.hpp"
#include "dropkit/serialize.hpp"
#include "dropkit/shapes.hpp"
#include "dropkit/splits.hpp"

namespace {

using dropkit::json;
using dropkit::ParameterError;
namespace cli = dropkit::cli;

struct Result {
  int exit_code = cli::kOk;
  std::string output;
};

enum class Format { json, csv };

std::string csv_cell(const json& value) {
  if (value.is_number()) {
    return cli::format_number(value.get<double>());
  }
  if (value.is_boolean()) {
    return value.get<bool>() ? "true" : "false";
  }
  if (value.is_null()) {
    return "";
  }
  if (value.is_string()) {
    return value.get<std::string>();
  }
  return value.dump();
}

// Header plus rows; every row must carry the same keys in the same order.
std::string csv_table(const std::vector<std::string>& header, const std::vector<json>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      out << (i ? "," : "") << csv_cell(row.at(header[i]));
    }
    out << '\n';
  }
  return out.str();
}

std::string render_object(const json& object, const std::vector<std::string>& keys, Format format) {
  if (format == Format::json) {
    return object.dump(2) + "\n";
  }
  return csv_table(keys, {object});
}

std::uint64_t resolve_budget(dropkit::SelfEnergyMethod method, double budget) {
  if (budget > 0.0) {
    return cli::budget_from_real(budget);
  }
  return method == dropkit::SelfEnergyMethod::monte_carlo ? 1000000 : dropkit::kDefaultRadialNodes;
}

// ---- option holders -------------------------------------------------------

struct BallOptions {
  int dim = 3;
  double lambda = 1.0;
  std::string method = "radial";
  double budget = 0.0;  // 0 picks the method default
  std::uint64_t seed = dropkit::kDefaultSeed;

  dropkit::BallConstants constants(const dropkit::RieszParams& params) const {
    const auto m = dropkit::self_energy_method_from_string(method);
    return dropkit::make_ball_constants(params, m, resolve_budget(m, budget), seed);
  }
};

void add_ball_options(CLI::App* app, BallOptions& o, bool with_method) {
  app->add_option("--dim", o.dim, "Ambient dimension N >= 2")->required();
  app->add_option("--lambda", o.lambda, "Riesz exponent, 0 < lambda < N")->required();
  if (with_method) {
    app->add_option("--method", o.method, "D(B_1) method")
        ->check(CLI::IsMember({"radial", "mc"}));
    app->add_option("--budget", o.budget,
                    "Radial nodes or Monte Carlo pairs (default 401 / 1e6)");
    app->add_option("--seed", o.seed, "Monte Carlo seed");
  }
}

// ---- commands -------------------------------------------------------------

Result run_mstar(const BallOptions& o, Format format) {
  const dropkit::RieszParams params(o.dim, o.lambda);
  const auto c = o.constants(params);
  const json out = {{"N", o.dim},
                    {"lambda", o.lambda},
                    {"m_star", dropkit::critical_mass(params, c)},
                    {"d_ball", c.riesz_self},
                    {"per_ball", c.surface},
                    {"omega", c.volume},
                    {"method", dropkit::to_string(c.riesz_self_method)},
                    {"stderr", c.riesz_self_stderr}};
  return {cli::kOk, render_object(out, {"N", "lambda", "m_star", "d_ball", "per_ball", "omega",
                                        "method", "stderr"},
                                  format)};
}

struct LemmaGOptions {
  int alpha_grid = 199;
  int s_grid = 10000;
  std::string dump_curve;
  std::vector<double> curve_alphas = {0.5, 1.5};
};

Result run_lemma_g(const LemmaGOptions& o, Format format) {
  if (o.alpha_grid < 10) {
    throw ParameterError("--alpha-grid needs at least 10 points");
  }
  if (o.s_grid < 100) {
    throw ParameterError("--s-grid needs at least 100 points");
  }
  // alpha_i = 2 i / (A + 1): open grid on (0, 2)
  std::vector<dropkit::LemmaGReport> reports(static_cast<std::size_t>(o.alpha_grid));
  dropkit::numerics::parallel_blocks(reports.size(), [&](std::size_t i) {
    const double alpha = 2.0 * static_cast<double>(i + 1) / (o.alpha_grid + 1);
    reports[i] = dropkit::lemma_g_verify(alpha, o.s_grid, false);
  });

  bool all_passed = true;
  std::vector<json> rows;
  for (const auto& r : reports) {
    json row = dropkit::to_json(r);
    row["passed"] = r.all_checks_passed();
    row["min_g_passed"] = r.passed;
    all_passed = all_passed && r.all_checks_passed();
    rows.push_back(std::move(row));
  }

  if (!o.dump_curve.empty()) {
    std::ofstream curve(o.dump_curve);
    if (!curve) {
      throw ParameterError("cannot write curve file '" + o.dump_curve + "'");
    }
    curve << "alpha,s,g,h\n";
    for (double alpha : o.curve_alphas) {
      const auto report = dropkit::lemma_g_verify(alpha, o.s_grid, true);
      for (std::size_t i = 0; i < report.s_grid.size(); ++i) {
        const double s = report.s_grid[i];
        curve << cli::format_number(alpha) << ',' << cli::format_number(s) << ','
              << cli::format_number(report.g_values[i]) << ',';
        if (alpha != 1.0 && s <= 0.5) {
          curve << cli::format_number(dropkit::h_alpha(alpha, s));
        }
        curve << '\n';
      }
    }
  }

  const int code = all_passed ? cli::kOk : cli::kPropertyFailure;
  if (format == Format::json) {
    const json out = {{"alpha_grid", o.alpha_grid},
                      {"s_grid", o.s_grid},
                      {"all_passed", all_passed},
                      {"rows", rows}};
    return {code, out.dump(2) + "\n"};
  }
  return {code, csv_table({"alpha", "min_g", "s1", "passed"}, rows)};
}

struct ScanOptions {
  BallOptions ball;
  std::string mass_grid;
  int s_grid = 1000;
  int kmax = 4;
};

Result run_binding_scan(const ScanOptions& o, Format format) {
  const dropkit::RieszParams params(o.ball.dim, o.ball.lambda);
  const auto c = o.ball.constants(params);
  const auto masses = cli::parse_grid(o.mass_grid);
  std::vector<json> rows;
  for (double m : masses) {
    rows.push_back(dropkit::to_json(dropkit::binding_scan(params, c, m, o.s_grid)));
  }
  if (format == Format::json) {
    const json out = {{"N", o.ball.dim},
                      {"lambda", o.ball.lambda},
                      {"m_star", dropkit::critical_mass(params, c)},
                      {"rows", rows}};
    return {cli::kOk, out.dump(2) + "\n"};
  }
  return {cli::kOk, csv_table({"m", "min_deficit", "argmin_s", "verdict"}, rows)};
}

Result run_split(const ScanOptions& o, Format format) {
  const dropkit::RieszParams params(o.ball.dim, o.ball.lambda);
  const auto c = o.ball.constants(params);
  const auto masses = cli::parse_grid(o.mass_grid);
  std::vector<json> rows;
  std::vector<std::string> header = {"m", "best_k", "best_total"};
  for (int k = 1; k <= o.kmax; ++k) {
    header.push_back("e_" + std::to_string(k));
  }
  json first_split = nullptr;
  for (double m : masses) {
    const auto report = dropkit::best_split(params, c, m, o.kmax);
    json row = dropkit::to_json(report);
    for (const auto& [k, total] : report.energies_by_k) {
      row["e_" + std::to_string(k)] = total;
    }
    if (first_split.is_null() && report.best_k >= 2) {
      first_split = m;
    }
    rows.push_back(std::move(row));
  }
  if (format == Format::json) {
    for (auto& row : rows) {
      for (int k = 1; k <= o.kmax; ++k) {
        row.erase("e_" + std::to_string(k));
      }
    }
    const json out = {{"N", o.ball.dim},
                      {"lambda", o.ball.lambda},
                      {"kmax", o.kmax},
                      {"m_star", dropkit::critical_mass(params, c)},
                      {"first_split_mass", first_split},
                      {"rows", rows}};
    return {cli::kOk, out.dump(2) + "\n"};
  }
  return {cli::kOk, csv_table(header, rows)};
}

struct OptimizeCliOptions {
  int dim = 2;
  double lambda = 1.0;
  double mass = 0.0;
  int modes = 4;
  dropkit::OptimizeOptions opts;
  std::string start = "disk";
  std::string boundary;
  int boundary_points = 720;
};

Result run_optimize(const OptimizeCliOptions& o, Format format) {
  const dropkit::RieszParams params(o.dim, o.lambda);
  std::optional<dropkit::FourierShape> start;
  if (o.start != "disk") {
    start = dropkit::read_fourier_shape_file(o.start);
  }
  const auto result = dropkit::optimize_shape(params, o.mass, o.modes, o.opts, start);
  const auto ball = dropkit::ball_energy(params, o.mass, dropkit::make_ball_constants(params));

  if (!o.boundary.empty()) {
    if (o.boundary_points < 3) {
      throw ParameterError("--boundary-points must be >= 3");
    }
    std::ofstream out(o.boundary);
    if (!out) {
      throw ParameterError("cannot write boundary file '" + o.boundary + "'");
    }
    out << "theta,r\n";
    for (int i = 0; i < o.boundary_points; ++i) {
      const double theta = 2.0 * std::numbers::pi * i / o.boundary_points;
      out << cli::format_number(theta) << ',' << cli::format_number(result.shape.radius(theta))
          << '\n';
    }
  }

  json out = dropkit::to_json(result);
  out["N"] = o.dim;
  out["lambda"] = o.lambda;
  out["mass"] = o.mass;
  out["ball_total"] = ball.total;
  if (format == Format::json) {
    return {cli::kOk, out.dump(2) + "\n"};
  }
  // CSV: the descent history
  std::vector<json> rows;
  for (const auto& [iteration, total] : result.history) {
    rows.push_back({{"iteration", iteration}, {"total", total}});
  }
  return {cli::kOk, csv_table({"iteration", "total"}, rows)};
}

struct NecessaryOptions {
  int dim = 3;
  double lambda = 1.0;
  std::string shape_file;
  double ball_mass = 0.0;
  double h = 0.05;  // relative to the ball radius or to r0 of a Fourier shape
};

Result run_necessary(const NecessaryOptions& o, Format format) {
  const dropkit::RieszParams params(o.dim, o.lambda);
  if (!(o.h > 0.0)) {
    throw ParameterError("--h must be positive");
  }
  dropkit::GridShape grid(o.dim, 1.0);
  std::string source;
  if (!o.shape_file.empty()) {
    std::ifstream probe(o.shape_file);
    if (!probe) {
      throw ParameterError("cannot open shape file '" + o.shape_file + "'");
    }
    char first = 0;
    probe >> first;
    if (first == '[') {
      const auto shape = dropkit::read_fourier_shape_file(o.shape_file);
      if (o.dim != 2) {
        throw ParameterError("Fourier shape files describe planar shapes; use --dim 2");
      }
      grid = dropkit::rasterize(shape, o.h * shape.base_radius());
      source = "fourier";
    } else {
      grid = dropkit::read_grid_shape_file(o.shape_file);
      if (grid.dimension() != o.dim) {
        throw ParameterError("grid shape file dimension does not match --dim");
      }
      source = "grid";
    }
  } else if (o.ball_mass > 0.0) {
    const double radius = std::pow(o.ball_mass / dropkit::unit_ball_volume(o.dim), 1.0 / o.dim);
    grid = dropkit::rasterize_ball(o.dim, radius, o.h * radius);
    source = "ball";
  } else {
    throw ParameterError("give --shape-file or --ball-mass");
  }
  json out = dropkit::to_json(dropkit::necessary_condition(grid, params));
  out["N"] = o.dim;
  out["lambda"] = o.lambda;
  out["source"] = source;
  out["cells"] = grid.cell_count();
  return {cli::kOk, render_object(out, {"N", "lambda", "source", "cells", "measure", "moment",
                                        "bound", "c_N", "margin", "satisfied"},
                                  format)};
}

Result run_nonexistence(const BallOptions& o, Format format) {
  const dropkit::RieszParams params(o.dim, o.lambda);
  const auto c = o.constants(params);
  json moment = nullptr;
  double moment_value = 0.0;
  if (o.lambda < 1.0) {
    const auto m = dropkit::self_energy_method_from_string(o.method);
    moment_value = dropkit::ball_moment_unit(params, m, resolve_budget(m, o.budget), o.seed).value;
    moment = moment_value;
  }
  const double bound = dropkit::nonexistence_mass_bound(params, c, moment_value);
  const json out = {{"N", o.dim},
                    {"lambda", o.lambda},
                    {"bound", bound},
                    {"c_N", dropkit::angular_constant_closed(o.dim)},
                    {"ball_moment_unit", moment}};
  return {cli::kOk, render_object(out, {"N", "lambda", "bound", "c_N", "ball_moment_unit"}, format)};
}

// ---- manifest ---------------------------------------------------------------

json option_parameters(const CLI::App* app) {
  json params = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") {
      continue;
    }
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (results.size() == 1) {
        params[name] = results.front();
      } else {
        params[name] = results;
      }
    } else {
      params[name] = opt->get_default_str();
    }
  }
  return params;
}

}  // namespace

int main(int argc, char** argv) {
  const auto t0 = std::chrono::steady_clock::now();

  CLI::App app{"dropkit: liquid drop model toolkit"};
  app.fallthrough();
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(DROPKIT_VERSION));

  std::string format_name;
  unsigned threads = 0;
  std::string manifest_path;
  app.add_option("--format", format_name, "Output format (json default for objects, csv for scans)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", threads, "Worker threads, 0 = available cores");
  app.add_option("--manifest", manifest_path, "Write the run manifest here instead of stderr");

  BallOptions mstar;
  auto* c_mstar = app.add_subcommand("mstar", "Critical mass m* and unit-ball constants");
  c_mstar->alias("cmd_mstar");
  add_ball_options(c_mstar, mstar, true);

  LemmaGOptions lemma;
  auto* c_lemma = app.add_subcommand("lemma-g", "Check g(alpha, s) >= 0 and the h(s) structure");
  c_lemma->alias("cmd_lemma_g");
  c_lemma->add_option("--alpha-grid", lemma.alpha_grid, "Number of alpha values in (0,2)");
  c_lemma->add_option("--s-grid", lemma.s_grid, "Number of s values in (0,1)");
  c_lemma->add_option("--dump-curve", lemma.dump_curve, "Write (alpha, s, g, h) curves to FILE");
  c_lemma->add_option("--curve-alpha", lemma.curve_alphas, "Alpha values for --dump-curve");

  ScanOptions binding;
  auto* c_binding = app.add_subcommand("binding-scan", "Binding-deficit lower bound over a mass grid");
  c_binding->alias("cmd_binding_scan");
  add_ball_options(c_binding, binding.ball, false);
  c_binding->add_option("--mass-grid", binding.mass_grid, "lo:hi:step or a comma list")->required();
  c_binding->add_option("--s-grid", binding.s_grid, "Number of s values in (0,1)");

  OptimizeCliOptions optimize;
  auto* c_opt = app.add_subcommand("optimize", "Pattern search over Fourier shapes (N = 2)");
  c_opt->alias("cmd_optimize");
  c_opt->set_help_flag("--help", "Print this help message and exit");
  c_opt->add_option("--dim", optimize.dim, "Ambient dimension (only 2 is supported)");
  c_opt->add_option("--lambda", optimize.lambda, "Riesz exponent")->required();
  c_opt->add_option("--mass", optimize.mass, "Target area m")->required();
  c_opt->add_option("--modes", optimize.modes, "Fourier modes K");
  c_opt->add_option("--h", optimize.opts.relative_cell_size, "Cell size relative to r0");
  c_opt->add_option("--nodes", optimize.opts.perimeter_nodes, "Perimeter quadrature nodes");
  c_opt->add_option("--max-iter", optimize.opts.max_iter, "Maximum energy evaluations");
  c_opt->add_option("--step-init", optimize.opts.step_init, "Initial coefficient step");
  c_opt->add_option("--step-min", optimize.opts.step_min, "Stop once the step falls below this");
  c_opt->add_option("--seed", optimize.opts.seed, "Seed for the coordinate order");
  c_opt->add_option("--start", optimize.start, "disk, or a FourierShape JSON file");
  c_opt->add_option("--boundary", optimize.boundary, "Write the final boundary (theta, r) CSV");
  c_opt->add_option("--boundary-points", optimize.boundary_points, "Samples in the boundary CSV");

  ScanOptions split;
  auto* c_split = app.add_subcommand("split", "Best split of mass m into k equal balls");
  c_split->alias("cmd_split");
  add_ball_options(c_split, split.ball, false);
  c_split->add_option("--mass-grid", split.mass_grid, "lo:hi:step or a comma list")->required();
  c_split->add_option("--kmax", split.kmax, "Largest number of balls");

  NecessaryOptions necessary;
  auto* c_nec = app.add_subcommand("necessary", "Moment necessary condition for a minimizer");
  c_nec->alias("cmd_necessary");
  c_nec->set_help_flag("--help", "Print this help message and exit");
  c_nec->add_option("--dim", necessary.dim, "Ambient dimension")->required();
  c_nec->add_option("--lambda", necessary.lambda, "Riesz exponent")->required();
  auto* shape_opt =
      c_nec->add_option("--shape-file", necessary.shape_file, "GridShape or FourierShape file");
  auto* ball_opt =
      c_nec->add_option("--ball-mass", necessary.ball_mass, "Use a rasterized ball of this mass");
  shape_opt->excludes(ball_opt);
  c_nec->add_option("--h", necessary.h, "Cell size relative to the radius when rasterizing");

  BallOptions nonexistence;
  auto* c_non = app.add_subcommand("nonexistence-bound", "Mass above which no minimizer exists");
  c_non->alias("cmd_nonexistence_bound");
  add_ball_options(c_non, nonexistence, true);

  cli::RunManifest manifest;
  manifest.version = DROPKIT_VERSION;
  Result result;
  std::string error;

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    result.exit_code = cli::kBadParameters;
    manifest.command = "";
    error = "parse";
  }

  if (error.empty()) {
    const CLI::App* sub = app.get_subcommands().front();
    manifest.command = sub->get_name();
    manifest.parameters = option_parameters(sub);
    manifest.parameters["threads"] = threads;
    if (sub->get_option_no_throw("--seed") != nullptr) {
      manifest.seed = sub->get_option("--seed")->as<std::uint64_t>();
    }

    const bool scan = sub == c_lemma || sub == c_binding || sub == c_split;
    Format format = scan ? Format::csv : Format::json;
    if (!format_name.empty()) {
      format = format_name == "csv" ? Format::csv : Format::json;
    }
    manifest.parameters["format"] = format == Format::csv ? "csv" : "json";

    try {
      dropkit::numerics::set_thread_count(threads);
      if (sub == c_mstar) {
        result = run_mstar(mstar, format);
      } else if (sub == c_lemma) {
        result = run_lemma_g(lemma, format);
      } else if (sub == c_binding) {
        result = run_binding_scan(binding, format);
      } else if (sub == c_opt) {
        result = run_optimize(optimize, format);
      } else if (sub == c_split) {
        result = run_split(split, format);
      } else if (sub == c_nec) {
        result = run_necessary(necessary, format);
      } else {
        result = run_nonexistence(nonexistence, format);
      }
    } catch (const dropkit::ParameterError& e) {
      error = e.what();
      result = {cli::kBadParameters, ""};
    } catch (const dropkit::UnsupportedError& e) {
      error = e.what();
      result = {cli::kUnsupported, ""};
    } catch (const std::exception& e) {
      error = e.what();
      result = {cli::kPropertyFailure, ""};
    }
    if (!error.empty()) {
      std::cerr << "error: " << error << '\n';
    }
  }

  std::cout << result.output << std::flush;

  manifest.exit_code = result.exit_code;
  manifest.output_sha256 = cli::sha256_hex(result.output);
  manifest.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string line = manifest.to_json().dump() + "\n";
  if (!manifest_path.empty()) {
    std::ofstream out(manifest_path);
    out << line;
  } else {
    std::cerr << line;
  }
  return result.exit_code;
}
