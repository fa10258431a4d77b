#include "catvar/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "catvar/catenoid.hpp"
#include "catvar/errors.hpp"
#include "catvar/io.hpp"
#include "catvar/marginal_stability.hpp"
#include "catvar/numerics.hpp"
#include "catvar/ovals.hpp"
#include "catvar/thresholds.hpp"
#include "catvar/weierstrass.hpp"

namespace catvar::cli {

using io::Json;

namespace {

struct GridKey {
  int value;
  int minimum;
};

struct KeyTable {
  std::map<std::string, double> tol;
  std::map<std::string, GridKey> grid;
};

KeyTable keys_for(Command c) {
  switch (c) {
    case Command::catenoid:
    case Command::lambda0:
      return {};
    case Command::ms:
      return {{}, {{"mesh", {4096, 16}}}};
    case Command::threshold:
      return {{{"tangential", 1e-6}, {"dedup", 1e-7}}, {{"mesh", {4096, 16}}}};
    case Command::annulus:
      return {{{"period", 1e-8},
               {"gauss_eps", 1e-6},
               {"closure", 1e-7},
               {"resolution", 1e-8},
               {"fd_step", 1e-3}},
              {{"levels", {64, 8}},
               {"angles", {128, 16}},
               {"profile_levels", {33, 3}},
               {"quad_nodes", {512, 16}}}};
    case Command::oval:
      return {{{"converge", 1e-8}}, {{"start_nodes", {64, 32}}, {"max_nodes", {1024, 64}}}};
  }
  return {};
}

std::pair<std::string, std::string> split_key_value(const std::string& item, const char* flag) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
    throw ConfigurationError(std::string(flag) + " expects KEY=VALUE, got '" + item + "'");
  }
  return {item.substr(0, eq), item.substr(eq + 1)};
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw ConfigurationError("cannot parse " + what + ": '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < INT32_MIN || v > INT32_MAX) {
    throw ConfigurationError("cannot parse " + what + ": '" + s + "'");
  }
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

Json tolerance_block(const RunConfig& c) {
  Json t = Json::object();
  for (const auto& [k, v] : c.tolerances) t[k] = v;
  Json g = Json::object();
  for (const auto& [k, v] : c.grid) g[k] = v;
  return {{"tolerances", t}, {"grid", g}};
}

Json header(const RunConfig& c, const char* name) {
  Json doc;
  doc["command"] = name;
  const Json meta = tolerance_block(c);
  doc["tolerances"] = meta["tolerances"];
  doc["grid"] = meta["grid"];
  return doc;
}

std::vector<double> sweep_values(const Sweep& s) { return numerics::linspace(s.from, s.to, s.count); }

Slab slab_of(const RunConfig& c) { return Slab(c.slab_lower, c.slab_upper); }

// Flattens scalar members of a JSON object to a one-row CSV.
std::string object_to_csv(const Json& doc) {
  std::vector<std::string> head;
  std::vector<double> row;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.value().is_number()) {
      head.push_back(it.key());
      row.push_back(it.value().get<double>());
    } else if (it.value().is_boolean()) {
      head.push_back(it.key());
      row.push_back(it.value().get<bool>() ? 1.0 : 0.0);
    }
  }
  return io::to_csv(head, {row});
}

std::string emit(const RunConfig& c, const Json& doc) {
  return c.format == Format::json ? io::dump_result(doc) : object_to_csv(doc);
}

std::string emit_table(const RunConfig& c, const char* name,
                       const std::vector<std::string>& cols,
                       const std::vector<std::vector<double>>& rows) {
  if (c.format == Format::csv) return io::to_csv(cols, rows);
  Json doc = header(c, name);
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json o;
    for (std::size_t i = 0; i < cols.size(); ++i) o[cols[i]] = r[i];
    arr.push_back(o);
  }
  doc["rows"] = arr;
  return io::dump_result(doc);
}

double ms_mu1(const CatenoidPiece& piece, int mesh) {
  stability::EigenOptions eo;
  eo.mesh_size = mesh;
  return stability::lowest_jacobi_eigenvalue(stability::unit_normalized(piece), eo)
      .lowest_eigenvalue;
}

// ---------------------------------------------------------------------------

std::string run_catenoid(const RunConfig& c) {
  const Slab slab = slab_of(c);
  if (c.sweep) {
    std::vector<std::vector<double>> rows;
    for (double s : sweep_values(*c.sweep)) {
      const CatenoidPiece p(s, c.offset, slab);
      rows.push_back({s, c.offset, catenoid::area_in_slab(p), catenoid::boundary_length(p),
                      catenoid::vertical_flux(s)});
    }
    return emit_table(c, "catenoid", {"scale", "offset", "area", "boundary_length", "flux"}, rows);
  }
  const CatenoidPiece p(c.scale, c.offset, slab);
  Json doc = header(c, "catenoid");
  doc["scale"] = p.scale;
  doc["offset"] = p.offset;
  doc["slab_lower"] = slab.lower();
  doc["slab_upper"] = slab.upper();
  doc["area"] = catenoid::area_in_slab(p);
  doc["boundary_length"] = catenoid::boundary_length(p);
  doc["vertical_flux"] = catenoid::vertical_flux(p.scale);
  doc["lower_length"] = catenoid::level_length(p, slab.lower());
  doc["upper_length"] = catenoid::level_length(p, slab.upper());
  return emit(c, doc);
}

std::string run_lambda0(const RunConfig& c) {
  const auto l = catenoid::solve_lambda0();
  Json doc = header(c, "lambda0");
  doc["lambda0"] = l.value;
  doc["residual_lambdanot"] = l.residual_lambdanot;
  doc["residual_tanh"] = l.residual_tanh;
  doc["t_star"] = catenoid::ms_half_height();
  doc["tolerances"] = Json{{"bracket_width", 1e-8}, {"residual", 1e-12}};
  return emit(c, doc);
}

std::string run_ms(const RunConfig& c) {
  const Slab slab = slab_of(c);
  const int mesh = c.grid.at("mesh");
  auto row = [&](double z) {
    const MsSolution s = thresholds::ms_piece_for_apex(z, slab);
    return std::vector<double>{z, s.scale, s.offset, s.lower_length, s.upper_length,
                               ms_mu1(s.piece(), mesh)};
  };
  const std::vector<std::string> cols{"apex", "scale", "offset", "lower_length", "upper_length",
                                      "mu1"};
  if (c.sweep) {
    std::vector<std::vector<double>> rows;
    for (double z : sweep_values(*c.sweep)) rows.push_back(row(z));
    return emit_table(c, "ms", cols, rows);
  }
  const auto r = row(c.apex);
  Json doc = header(c, "ms");
  for (std::size_t i = 0; i < cols.size(); ++i) doc[cols[i]] = r[i];
  doc["total_length"] = r[3] + r[4];
  return emit(c, doc);
}

std::string run_threshold(const RunConfig& c) {
  const Slab slab = slab_of(c);
  const int mesh = c.grid.at("mesh");
  const std::vector<std::string> cols{"L_minus", "F", "lambda", "offset", "mu1_residual"};
  auto row = [&](double lm) {
    const MsSolution s = thresholds::ms_piece_for_lower_length(lm, slab);
    return std::vector<double>{lm, s.upper_length, s.scale, s.offset, ms_mu1(s.piece(), mesh)};
  };
  if (c.sweep) {
    std::vector<std::vector<double>> rows;
    for (double lm : sweep_values(*c.sweep)) rows.push_back(row(lm));
    return emit_table(c, "threshold", cols, rows);
  }
  if (!c.lower_length) throw ConfigurationError("threshold needs --lower-length or --sweep");
  const auto r = row(*c.lower_length);
  Json doc = header(c, "threshold");
  for (std::size_t i = 0; i < cols.size(); ++i) doc[cols[i]] = r[i];
  doc["l_crit"] = thresholds::l_crit(slab);
  if (c.upper_length) {
    SpanningOptions so;
    so.tangential_rel_tol = c.tolerances.at("tangential");
    so.dedup_tol = c.tolerances.at("dedup");
    const SpanningResult sr = thresholds::spanning_catenoids(*c.lower_length, *c.upper_length,
                                                             slab, so);
    doc["L_plus"] = *c.upper_length;
    doc["relative_gap"] = sr.relative_gap;
    doc["tangential"] = sr.tangential;
    doc["solution_count"] = static_cast<int>(sr.pieces.size());
    Json arr = Json::array();
    for (const auto& p : sr.pieces) {
      arr.push_back(Json{{"scale", p.scale},
                         {"offset", p.offset},
                         {"mu1", ms_mu1(p, mesh)},
                         {"upper_length", catenoid::level_length(p, slab.upper())}});
    }
    doc["solutions"] = arr;
  }
  return emit(c, doc);
}

WeierstrassData annulus_data(const RunConfig& c) {
  const int sources = (c.input_path ? 1 : 0) + (c.catenoid_scale ? 1 : 0) + (c.random_data ? 1 : 0);
  if (sources != 1) {
    throw ConfigurationError("annulus needs exactly one of --input, --catenoid, --random");
  }
  if (c.input_path) return io::weierstrass_from_json(io::read_json_file(*c.input_path));
  if (c.catenoid_scale) return catenoid_data(*c.catenoid_scale, std::exp(-1.0), std::exp(1.0));
  std::mt19937_64 rng(c.seed);
  RandomDataOptions ro;
  return c.projected ? random_projected_data(rng, ro) : random_adapted_data(rng, ro);
}

std::string run_annulus(const RunConfig& c) {
  const WeierstrassData data = annulus_data(c);
  if (c.data_output) io::atomic_write(*c.data_output, io::to_json(data).dump(2) + "\n");

  DataTolerances dt;
  dt.period_rel = c.tolerances.at("period");
  dt.gauss_eps = c.tolerances.at("gauss_eps");
  ImmersionOptions im;
  im.data = dt;
  im.closure_rel = c.tolerances.at("closure");
  GridSpec gs;
  gs.levels = c.grid.at("levels");
  gs.angles = c.grid.at("angles");

  Json doc = header(c, "annulus");
  doc["seed"] = c.seed;
  doc["height_adapted"] = data.height_adapted();
  const PeriodResiduals pr = period_residuals(data);
  doc["period_residual"] = pr.max_relative();
  validate(data, dt);
  const Eigen::Vector3d f = flux(data);
  doc["flux"] = Json::array({f.x(), f.y(), f.z()});

  const SampledAnnulus a = immerse(data, gs, im);
  doc["loop_closure_error"] = a.loop_closure_error;
  doc["conformality_defect"] = conformality_defect(a);
  doc["harmonicity_defect"] = harmonicity_defect(a);
  doc["modulus_mu"] = a.modulus_mu;
  doc["modulus_measured"] = measured_modulus(a, a.levels / 2);

  ProfileOptions po;
  po.resolution_rel = c.tolerances.at("resolution");
  po.fd_step = c.tolerances.at("fd_step");
  po.quad_nodes = c.grid.at("quad_nodes");
  const LevelProfile prof = level_profile(data, c.grid.at("profile_levels"), po);
  const ConvexityReport cr = convexity_check(prof);
  doc["min_slack"] = cr.min_slack;
  doc["max_relative_slack"] = cr.max_relative_slack;
  doc["min_geometric_slack"] = cr.min_geometric_slack;
  doc["equality_flag"] = cr.equality_flag;
  doc["levels_checked"] = cr.levels_checked;

  if (data.height_adapted()) {
    const DecompositionReport dr = second_derivative_decomposition(a, a.levels / 2);
    doc["decomposition_fd"] = dr.fd_value;
    doc["decomposition_formula"] = dr.formula_value;
    doc["decomposition_beta"] = dr.beta_term;
    doc["decomposition_relative_error"] = dr.relative_error;
    if (c.slab_given) {
      const AreaReport ar = area_comparison(data, slab_of(c));
      doc["area_sigma"] = ar.area_sigma;
      doc["area_catenoid"] = ar.area_catenoid;
      doc["area_gap"] = ar.gap;
      doc["neck_height"] = ar.neck_height;
      doc["min_level_gap"] = ar.min_level_gap;
    }
  }
  if (c.format == Format::csv) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < prof.lengths.size(); ++i) {
      rows.push_back({prof.log_radii[i], prof.heights[i], prof.lengths[i],
                      prof.second_derivative[i], prof.second_derivative[i] - prof.lengths[i]});
    }
    return io::to_csv({"t", "height", "length", "second_derivative", "slack"}, rows);
  }
  return io::dump_result(doc);
}

std::string run_oval(const RunConfig& c) {
  if (c.input_path.has_value() == c.ellipse.has_value()) {
    throw ConfigurationError("oval needs exactly one of --input, --ellipse");
  }
  const ClosedCurve curve = c.input_path ? io::curve_from_json(io::read_json_file(*c.input_path))
                                         : ellipse_curve((*c.ellipse)[0], (*c.ellipse)[1], 256);
  OvalOptions oo;
  oo.converge_rel = c.tolerances.at("converge");
  oo.start_nodes = c.grid.at("start_nodes");
  oo.max_nodes = c.grid.at("max_nodes");
  const OvalResult r = lowest_eigenvalue(curve, oo);
  Json doc = header(c, "oval");
  doc["length"] = r.length;
  doc["lambda1"] = r.lambda1;
  doc["functional"] = r.functional;
  doc["nodes"] = r.nodes;
  doc["refinement_change"] = r.refinement_change;
  doc["spectral_curvature"] = curve.spectral();
  return emit(c, doc);
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<RunConfig> parse_command_line(const std::vector<std::string>& args,
                                            std::ostream& out) {
  RunConfig cfg;
  std::string input;
  std::string output;
  std::string format = "json";
  std::vector<std::string> tol_items;
  std::vector<std::string> grid_items;
  std::string sweep;
  std::string slab;
  std::string ellipse;
  std::string data_output;
  double lower = 0.0;
  double upper = 0.0;
  double cat_scale = 0.0;

  CLI::App app{"Catenoid variational toolkit", "catvar"};
  app.require_subcommand(1);
  std::map<CLI::App*, Command> commands;

  auto add = [&](const char* name, const char* help, Command cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands[sub] = cmd;
    sub->add_option("--input", input, "input JSON file");
    sub->add_option("--output", output, "output file (relative paths go under $CATVAR_OUTPUT_DIR)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", cfg.seed, "seed for randomized inputs");
    sub->add_option("--tol", tol_items, "KEY=VALUE tolerance (repeatable)");
    sub->add_option("--grid", grid_items, "KEY=VALUE grid size (repeatable)");
    sub->add_option("--sweep", sweep, "A:B:N parameter sweep");
    sub->add_option("--slab", slab, "LO:HI slab heights");
    return sub;
  };
  CLI::App* cat = add("catenoid", "area and boundary length of a catenoid piece", Command::catenoid);
  cat->add_option("--scale", cfg.scale, "catenoid scale");
  cat->add_option("--offset", cfg.offset, "vertical offset");
  add("lambda0", "optimal scale of the canonical slab", Command::lambda0);
  CLI::App* ms = add("ms", "marginally stable piece for an apex height", Command::ms);
  ms->add_option("--apex", cfg.apex, "apex height of the tangent cones");
  CLI::App* th = add("threshold", "spanning threshold F(L-)", Command::threshold);
  th->add_option("--lower-length", lower, "lower boundary length");
  th->add_option("--upper-length", upper, "upper boundary length");
  CLI::App* an = add("annulus", "minimal annulus from Weierstrass data", Command::annulus);
  an->add_option("--catenoid", cat_scale, "use catenoid data of this scale");
  an->add_flag("--random", cfg.random_data, "seeded random height-adapted data");
  an->add_flag("--projected", cfg.projected, "with --random: residue-projected data");
  an->add_option("--data-output", data_output, "write the Weierstrass data used");
  CLI::App* ov = add("oval", "lowest eigenvalue of -d2/ds2 + kappa^2", Command::oval);
  ov->add_option("--ellipse", ellipse, "A:B semi-axes");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigurationError(e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.command = commands.at(sub);
  auto given = [sub](const char* name) {
    const CLI::Option* o = sub->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (given("--input")) cfg.input_path = input;
  if (given("--output")) cfg.output_path = output;
  cfg.format = format == "csv" ? Format::csv : Format::json;
  if (given("--lower-length")) cfg.lower_length = lower;
  if (given("--upper-length")) cfg.upper_length = upper;
  if (given("--catenoid")) cfg.catenoid_scale = cat_scale;
  if (given("--data-output")) cfg.data_output = data_output;
  if (cfg.projected && !cfg.random_data) throw ConfigurationError("--projected requires --random");

  if (given("--slab")) {
    const auto p = split(slab, ':');
    if (p.size() != 2) throw ConfigurationError("--slab expects LO:HI");
    cfg.slab_lower = parse_double(p[0], "--slab");
    cfg.slab_upper = parse_double(p[1], "--slab");
    if (!(cfg.slab_lower < cfg.slab_upper)) throw ConfigurationError("--slab needs LO < HI");
    cfg.slab_given = true;
  }
  if (given("--ellipse")) {
    const auto p = split(ellipse, ':');
    if (p.size() != 2) throw ConfigurationError("--ellipse expects A:B");
    cfg.ellipse = std::vector<double>{parse_double(p[0], "--ellipse"), parse_double(p[1], "--ellipse")};
  }
  if (given("--sweep")) {
    const auto p = split(sweep, ':');
    if (p.size() != 3) throw ConfigurationError("--sweep expects A:B:N");
    Sweep s{parse_double(p[0], "--sweep"), parse_double(p[1], "--sweep"),
            parse_int(p[2], "--sweep count")};
    if (s.count < 1) throw ConfigurationError("--sweep count must be >= 1");
    const bool sweepable = cfg.command == Command::catenoid || cfg.command == Command::ms ||
                           cfg.command == Command::threshold;
    if (!sweepable) throw ConfigurationError("--sweep applies to catenoid, ms and threshold");
    cfg.sweep = s;
  }

  const KeyTable table = keys_for(cfg.command);
  cfg.tolerances = table.tol;
  for (const auto& [k, g] : table.grid) cfg.grid[k] = g.value;
  for (const auto& item : tol_items) {
    const auto [key, value] = split_key_value(item, "--tol");
    if (!table.tol.count(key)) throw ConfigurationError("unknown tolerance key '" + key + "'");
    const double v = parse_double(value, "--tol " + key);
    if (!(v > 0.0)) throw ConfigurationError("tolerance '" + key + "' must be positive");
    cfg.tolerances[key] = v;
  }
  for (const auto& item : grid_items) {
    const auto [key, value] = split_key_value(item, "--grid");
    const auto it = table.grid.find(key);
    if (it == table.grid.end()) throw ConfigurationError("unknown grid key '" + key + "'");
    const int v = parse_int(value, "--grid " + key);
    if (v < it->second.minimum) {
      throw ConfigurationError("grid '" + key + "' must be >= " + std::to_string(it->second.minimum));
    }
    cfg.grid[key] = v;
  }
  return cfg;
}

std::string execute(const RunConfig& c) {
  switch (c.command) {
    case Command::catenoid:
      return run_catenoid(c);
    case Command::lambda0:
      return run_lambda0(c);
    case Command::ms:
      return run_ms(c);
    case Command::threshold:
      return run_threshold(c);
    case Command::annulus:
      return run_annulus(c);
    case Command::oval:
      return run_oval(c);
  }
  throw ConfigurationError("unknown command");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigurationError*>(&e)) return kBadConfig;
  if (dynamic_cast<const InputError*>(&e)) return kBadInput;
  if (dynamic_cast<const NumericalError*>(&e)) return kNumerical;
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse_command_line(args, out);
    if (!cfg) return kOk;
    const std::string text = execute(*cfg);
    if (cfg->output_path) {
      std::filesystem::path path(*cfg->output_path);
      const char* dir = std::getenv("CATVAR_OUTPUT_DIR");
      if (path.is_relative() && dir && *dir) path = std::filesystem::path(dir) / path;
      io::atomic_write(path, text);
    } else {
      out << text;
    }
    return kOk;
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    Json report{{"error", e.what()}, {"exit_code", code}};
    if (const auto* ne = dynamic_cast<const NumericalError*>(&e)) report["residual"] = ne->residual();
    if (const auto* de = dynamic_cast<const DataInvalidError*>(&e)) report["residual"] = de->residual();
    if (const auto* be = dynamic_cast<const BranchPointError*>(&e)) {
      report["min_metric"] = be->min_metric();
    }
    err << report.dump() << '\n';
    return code;
  }
}

}  // namespace catvar::cli
