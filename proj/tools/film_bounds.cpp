#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <new>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "film/admissibility.hpp"
#include "film/constructions.hpp"
#include "film/errors.hpp"
#include "film/field_io.hpp"
#include "film/minimize.hpp"
#include "film/parallel.hpp"
#include "film/serialize.hpp"
#include "film/verify.hpp"

using nlohmann::json;
using namespace film;

namespace {

enum ExitCode { kOk = 0, kDomain = 1, kIo = 2, kNumerical = 3 };

struct RunConfig {
  std::string command;
  double sigma = 0.1;
  double gamma = 0.0;
  double l1 = 1.0;
  double l2 = 1.0;
  std::string kind;  // flat | laminate | branching; empty = best
  long nx = 0;       // 0 = sized from the construction
  long ny = 0;
  int samples = 12;
  double max_nodes = 3.0e7;
  double h = 0.0;  // scale overrides, 0 = derived
  double delta = 0.0;
  double eps = 0.0;
  double delta_factor = 1.0;
  int levels = -1;
  double lift = 0.0;
  std::string encoding = "csv";
  std::string axis = "sigma";
  double from = 0.0;
  double to = 0.0;
  int points = 6;
  std::vector<double> values;
  double curve_power = 1.0;
  double curve_coefficient = 1.0;
  std::string input;
  int max_iterations = 200;
  double tolerance = 1e-8;
  double step = 1e-3;
  double backtrack = 0.5;
  bool project = true;
  std::string construction = "laminate_cell";
  int ladder = 3;
  double cell_h = 1.0;
  double cell_delta = 0.25;
  double cell_l = 1.0;
  std::string profile = "cosine";
  long n = 100;
  std::uint64_t seed = 1;
  int resolution = 192;
  std::string out = ".";
  std::string prefix;
  unsigned threads = 0;
};

// One flag/config key bound to a RunConfig member.
struct Entry {
  CLI::Option* option = nullptr;
  std::string key;
  std::function<void(RunConfig&, const RunConfig&)> copy;
  std::function<void(RunConfig&, const json&)> load;
  std::function<void(json&, const RunConfig&)> dump;
};

struct Command {
  CLI::App* app = nullptr;
  std::vector<Entry> entries;
};

template <typename T>
void bind_flag(Command& c, RunConfig& flags, const std::string& key, T RunConfig::*m, const std::string& help)
{
  std::string flag = "--" + key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  Entry e;
  e.key = key;
  e.option = c.app->add_option(flag, flags.*m, help);
  if constexpr (std::is_same_v<T, std::vector<double>>)
    e.option->delimiter(',');
  e.copy = [m](RunConfig& dst, const RunConfig& src) { dst.*m = src.*m; };
  e.load = [m, key](RunConfig& dst, const json& j) {
    try {
      dst.*m = j.get<T>();
    } catch (const json::exception&) {
      throw DomainError("config key '" + key + "' has the wrong type");
    }
  };
  e.dump = [m, key](json& j, const RunConfig& cfg) { j[key] = cfg.*m; };
  c.entries.push_back(std::move(e));
}

void bind_params(Command& c, RunConfig& f)
{
  bind_flag(c, f, "sigma", &RunConfig::sigma, "rescaled film thickness, 0 < sigma < 1");
  bind_flag(c, f, "gamma", &RunConfig::gamma, "rescaled bonding energy, gamma >= 0");
  bind_flag(c, f, "l1", &RunConfig::l1, "domain length (clamped edge at x = 0)");
  bind_flag(c, f, "l2", &RunConfig::l2, "domain height");
}

void bind_output(Command& c, RunConfig& f)
{
  bind_flag(c, f, "out", &RunConfig::out, "output directory");
  bind_flag(c, f, "prefix", &RunConfig::prefix, "prefix for output file names");
  bind_flag(c, f, "threads", &RunConfig::threads, "worker cap (0 = FILM_BOUNDS_THREADS or all cores)");
}

json config_json(const Command& c, const RunConfig& cfg)
{
  json j;
  j["command"] = cfg.command;
  // Where the files go and how many workers ran do not change their content.
  for (const auto& e : c.entries)
    if (e.key != "out" && e.key != "threads")
      e.dump(j, cfg);
  return j;
}

// Defaults, then the config file, then flags given on the command line.
RunConfig resolve(const Command& c, const RunConfig& flags, const std::string& config_path,
                  const std::set<std::string>& known_keys)
{
  RunConfig cfg;
  cfg.command = c.app->get_name();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in)
      throw IoError("cannot open config '" + config_path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw IoError(config_path + ": " + e.what());
    }
    if (!j.is_object())
      throw IoError(config_path + ": config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "command") {
        if (it.value() != cfg.command)
          throw DomainError(config_path + ": config is for command '" + it.value().dump() + "', not '" + cfg.command +
                            "'");
        continue;
      }
      if (!known_keys.count(it.key()))
        throw DomainError(config_path + ": unknown config key '" + it.key() + "'");
    }
    for (const auto& e : c.entries)
      if (j.contains(e.key))
        e.load(cfg, j.at(e.key));
  }
  for (const auto& e : c.entries)
    if (e.option->count() > 0)
      e.copy(cfg, flags);
  return cfg;
}

Params params_of(const RunConfig& c)
{
  Params p{c.sigma, c.gamma, c.l1, c.l2};
  p.validate();
  return p;
}

ResolutionPolicy policy_of(const RunConfig& c)
{
  if (c.samples < 4)
    throw DomainError("samples must be >= 4");
  if (!(c.max_nodes > 0.0))
    throw DomainError("max_nodes must be positive");
  return {c.samples, c.max_nodes};
}

Overrides overrides_of(const RunConfig& c)
{
  Overrides o;
  if (c.h > 0.0)
    o.h = c.h;
  if (c.delta > 0.0)
    o.delta = c.delta;
  if (c.eps > 0.0)
    o.eps = c.eps;
  if (c.levels >= 0)
    o.levels = c.levels;
  if (c.delta_factor != 1.0)
    o.delta_factor = c.delta_factor;
  return o;
}

std::filesystem::path output_path(const RunConfig& c, const std::string& name)
{
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  if (ec)
    throw IoError("cannot create output directory '" + c.out + "': " + ec.message());
  return std::filesystem::path(c.out) / (c.prefix + name);
}

std::string write_text(const RunConfig& c, const std::string& name, const std::string& text)
{
  const auto path = output_path(c, name);
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw IoError("cannot open '" + path.string() + "' for writing");
  os << text;
  os.flush();
  if (!os)
    throw IoError("write to '" + path.string() + "' failed");
  return path.string();
}

std::string write_json(const RunConfig& c, const std::string& name, const json& j)
{
  return write_text(c, name, j.dump(2) + "\n");
}

DumpEncoding encoding_of(const RunConfig& c)
{
  if (c.encoding == "csv")
    return DumpEncoding::csv;
  if (c.encoding == "binary")
    return DumpEncoding::binary;
  throw DomainError("unknown encoding '" + c.encoding + "' (expected csv or binary)");
}

// Grid for a field dump: fold widths at `samples` nodes, band widths at 8.
Grid dump_grid(const RunConfig& c, const Construction& con, const ResolutionPolicy& policy)
{
  const Params& p = con.layout.params;
  Eigen::Index nx = c.nx, ny = c.ny;
  if (ny == 0) {
    const double fw = finest_width(con.layout);
    ny = fw > 0.0 ? static_cast<Eigen::Index>(std::ceil(p.l2 * policy.samples / fw)) + 1 : 65;
  }
  if (nx == 0) {
    double w = p.l1;
    for (const auto& b : con.layout.bands)
      if (b.x_end > b.x_begin)
        w = std::min(w, b.x_end - b.x_begin);
    nx = std::max<Eigen::Index>(65, static_cast<Eigen::Index>(std::ceil(8.0 * p.l1 / w)) + 1);
  }
  if (static_cast<double>(nx) * static_cast<double>(ny) > policy.max_nodes)
    throw NumericalError("dump grid of " + std::to_string(nx) + " x " + std::to_string(ny) +
                         " nodes exceeds max_nodes; pass --nx/--ny or raise --max-nodes");
  const Grid g = Grid::domain(p, nx, ny);
  g.validate();
  return g;
}

json cmd_classify(const RunConfig& c)
{
  const Params p = params_of(c);
  json j = regime_report(p.sigma, p.gamma, p.l1, p.l2);
  write_json(c, "classify.json", j);
  return j;
}

json cmd_construct(const Command& cmd, const RunConfig& c)
{
  const Params p = params_of(c);
  const ResolutionPolicy policy = policy_of(c);
  Construction con;
  std::vector<CandidateResult> candidates;
  if (c.kind.empty()) {
    auto s = best_construction(p, policy);
    con = std::move(s.construction);
    candidates = std::move(s.candidates);
  } else {
    const auto k = construction_from_string(c.kind);
    if (auto why = unavailable(k, p); why && !(k == ConstructionKind::laminate && c.h > 0 && c.delta > 0 && c.eps > 0))
      throw DomainError(*why);
    con = make_construction(k, p, overrides_of(c));
  }
  if (c.lift > 0.0)
    con = buffer_lift(con, c.lift);
  const TiledEnergy tiled = tiled_energy(con.layout, policy);

  const Grid grid = dump_grid(c, con, policy);
  require_resolution(con, grid);
  const DisplacementField field = rasterize(con.layout, grid);
  const EnergyBreakdown fe = evaluate_energy(field);
  const auto adm = check_admissible(field);

  const std::string field_path = output_path(c, "field.csv").string();
  write_field(field_path, field, encoding_of(c));

  json sidecar = con;
  sidecar["config"] = config_json(cmd, c);
  sidecar["grid"] = {{"nx", grid.nx}, {"ny", grid.ny}, {"hx", grid.hx()}, {"hy", grid.hy()}};
  if (!candidates.empty())
    sidecar["candidates"] = candidates;
  const std::string sidecar_path = write_json(c, "construction.json", sidecar);

  json energy = tiled.energy;
  energy["construction"] = to_string(con.kind);
  energy["tiled"] = tiled;
  energy["field"] = fe;
  energy["field"]["nx"] = grid.nx;
  energy["field"]["ny"] = grid.ny;
  energy["admissible"] = adm.ok();
  if (!adm.ok())
    energy["admissibility"] = adm.summary();
  const std::string energy_path = write_json(c, "energy.json", energy);

  return {{"construction", to_string(con.kind)},
          {"total", tiled.energy.total},
          {"files", {field_path, sidecar_path, energy_path}}};
}

json cmd_sweep(const Command& cmd, const RunConfig& c)
{
  SweepSpec s;
  s.axis = sweep_axis_from_string(c.axis);
  s.sigma = c.sigma;
  s.gamma = c.gamma;
  s.l1 = c.l1;
  s.l2 = c.l2;
  s.curve_power = c.curve_power;
  s.curve_coefficient = c.curve_coefficient;
  s.policy = policy_of(c);
  if (!c.kind.empty())
    s.construction = construction_from_string(c.kind);
  s.delta_factor = c.delta_factor;
  if (!c.values.empty())
    s.values = c.values;
  else {
    if (!(c.from > 0.0) || !(c.to > 0.0))
      throw DomainError("sweep needs --values or positive --from and --to");
    s.values = log_spaced(c.from, c.to, c.points);
  }
  if (s.values.size() < 4)
    throw DomainError("sweep needs at least 4 points for an exponent fit, got " + std::to_string(s.values.size()));
  const SweepTable t = run_sweep(s);
  const std::string csv_path = write_text(c, "sweep.csv", sweep_csv(t));
  const FitCoordinate coord = s.axis == SweepAxis::gamma ? FitCoordinate::gamma : FitCoordinate::sigma;
  const Fit f = fit_exponent(t, coord);
  const auto reg = regime_info(t.rows.front().regime);
  json fit = {{"coordinate", coord == FitCoordinate::gamma ? "gamma" : "sigma"},
              {"slope", f.slope},
              {"intercept", f.intercept},
              {"stderr_slope", f.stderr_slope},
              {"r2", f.r2},
              {"n", f.n},
              {"regime", reg.letter()},
              {"config", config_json(cmd, c)}};
  const std::string fit_path = write_json(c, "fit.json", fit);
  return {{"slope", f.slope}, {"regime", reg.letter()}, {"files", {csv_path, fit_path}}};
}

json cmd_minimize(const Command& cmd, const RunConfig& c)
{
  if (c.input.empty())
    throw DomainError("minimize needs --input <field dump>");
  const DisplacementField f0 = read_field(c.input);
  MinimizeOptions o;
  o.max_iterations = c.max_iterations;
  o.tolerance = c.tolerance;
  o.step = c.step;
  o.backtrack = c.backtrack;
  o.project = c.project;
  const MinimizeResult r = minimize(f0, o);
  const std::string field_path = output_path(c, "minimized.csv").string();
  write_field(field_path, r.field, encoding_of(c));
  const std::string log_path = write_text(c, "minimize_log.csv", iteration_csv(r.log));
  json summary = {{"status", to_string(r.status)},
                  {"diagnostic", r.diagnostic},
                  {"iterations", r.log.empty() ? 0 : r.log.back().iteration},
                  {"initial", r.log.front().energy},
                  {"final", r.log.back().energy},
                  {"config", config_json(cmd, c)}};
  const std::string summary_path = write_json(c, "minimize.json", summary);
  return {{"status", to_string(r.status)},
          {"initial", r.log.front().energy.total},
          {"final", r.log.back().energy.total},
          {"files", {field_path, log_path, summary_path}}};
}

json cmd_poincare(const Command& cmd, const RunConfig& c)
{
  if (c.n < 1)
    throw DomainError("poincare needs --n >= 1");
  const PoincareReport r = poincare_check(static_cast<std::size_t>(c.n), c.seed, c.resolution);
  json j = {{"pass", r.pass},           {"samples", r.samples},
            {"seed", r.seed},           {"resolution", r.resolution},
            {"max_ratio", r.max_ratio}, {"bound", r.bound},
            {"scale_deviation", r.scale_deviation}, {"ratios", r.ratios},
            {"config", config_json(cmd, c)}};
  write_json(c, "poincare.json", j);
  return {{"pass", r.pass}, {"max_ratio", r.max_ratio}, {"bound", r.bound}};
}

json cmd_convergence(const Command& cmd, const RunConfig& c)
{
  const Params p = params_of(c);
  LaminateCellSpec cell;
  cell.h = c.cell_h;
  cell.delta = c.cell_delta;
  cell.l = c.cell_l;
  cell.profile = profile_from_string(c.profile);
  std::vector<Grid> ladder;
  if (c.construction == "laminate_cell")
    ladder = laminate_cell_ladder(cell, c.samples, c.ladder);
  else
    ladder = domain_ladder(p, c.nx > 0 ? c.nx : 33, c.ny > 0 ? c.ny : 33, c.ladder);
  const ConvergenceReport r = convergence_study(c.construction, p, ladder, cell);

  std::ostringstream csv;
  csv << "nx,ny,stretching,bending,bonding,total,error\n";
  json levels = json::array();
  for (const auto& l : r.levels) {
    csv << l.grid.nx << ',' << l.grid.ny << ',' << json(l.energy.stretching).dump() << ','
        << json(l.energy.bending).dump() << ',' << json(l.energy.bonding).dump() << ','
        << json(l.energy.total).dump() << ',' << json(l.error).dump() << '\n';
    json e = l.energy;
    e["nx"] = l.grid.nx;
    e["ny"] = l.grid.ny;
    e["error"] = l.error;
    levels.push_back(e);
  }
  const std::string csv_path = write_text(c, "convergence.csv", csv.str());
  json j = {{"construction", r.construction}, {"reference", r.reference}, {"reference_value", r.reference_value},
            {"orders", r.orders},             {"order", r.order},         {"exact", r.exact},
            {"levels", levels},               {"config", config_json(cmd, c)}};
  const std::string json_path = write_json(c, "convergence.json", j);
  return {{"order", r.order}, {"exact", r.exact}, {"files", {csv_path, json_path}}};
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Test fields, energies and scaling checks for a delaminating compressed film"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON config; flags given on the command line take precedence");

  RunConfig flags;
  std::vector<Command> commands;
  auto add = [&](const std::string& name, const std::string& help) -> Command& {
    commands.push_back({app.add_subcommand(name, help), {}});
    return commands.back();
  };
  commands.reserve(6);

  Command& classify = add("classify", "regime of (sigma, gamma) with exponents and bounds");
  bind_params(classify, flags);
  bind_output(classify, flags);

  Command& construct = add("construct", "build a test field, write the dump, sidecar and energy");
  bind_params(construct, flags);
  bind_flag(construct, flags, "kind", &RunConfig::kind, "flat | laminate | branching (default: lowest energy)");
  bind_flag(construct, flags, "nx", &RunConfig::nx, "dump grid nodes in x (0 = from the construction)");
  bind_flag(construct, flags, "ny", &RunConfig::ny, "dump grid nodes in y (0 = from the construction)");
  bind_flag(construct, flags, "samples", &RunConfig::samples, "nodes per fold half-width");
  bind_flag(construct, flags, "max_nodes", &RunConfig::max_nodes, "node cap per grid");
  bind_flag(construct, flags, "half_period", &RunConfig::h, "laminate half-period override");
  bind_flag(construct, flags, "fold_width", &RunConfig::delta, "laminate fold half-width override");
  bind_flag(construct, flags, "layer_width", &RunConfig::eps, "boundary-layer width override");
  bind_flag(construct, flags, "delta_factor", &RunConfig::delta_factor, "multiplier on the derived laminate delta");
  bind_flag(construct, flags, "levels", &RunConfig::levels, "branching level count override");
  bind_flag(construct, flags, "lift", &RunConfig::lift, "buffer height h_b at the clamped edge");
  bind_flag(construct, flags, "encoding", &RunConfig::encoding, "field dump encoding: csv | binary");
  bind_output(construct, flags);

  Command& sweep = add("sweep", "energy along a parameter path and its log-log slope");
  bind_params(sweep, flags);
  bind_flag(sweep, flags, "axis", &RunConfig::axis, "sigma | gamma | curve (gamma = coefficient * sigma^power)");
  bind_flag(sweep, flags, "from", &RunConfig::from, "first value of the swept parameter");
  bind_flag(sweep, flags, "to", &RunConfig::to, "last value of the swept parameter");
  bind_flag(sweep, flags, "points", &RunConfig::points, "log-spaced point count");
  bind_flag(sweep, flags, "values", &RunConfig::values, "explicit comma-separated values");
  bind_flag(sweep, flags, "curve_power", &RunConfig::curve_power, "power of the curve path");
  bind_flag(sweep, flags, "curve_coefficient", &RunConfig::curve_coefficient, "coefficient of the curve path");
  bind_flag(sweep, flags, "kind", &RunConfig::kind, "fixed construction (default: lowest energy per point)");
  bind_flag(sweep, flags, "delta_factor", &RunConfig::delta_factor, "multiplier on the laminate delta (with --kind)");
  bind_flag(sweep, flags, "samples", &RunConfig::samples, "nodes per fold half-width");
  bind_flag(sweep, flags, "max_nodes", &RunConfig::max_nodes, "node cap per grid");
  bind_output(sweep, flags);

  Command& mini = add("minimize", "projected gradient descent from a field dump");
  bind_flag(mini, flags, "input", &RunConfig::input, "field dump to start from");
  bind_flag(mini, flags, "max_iterations", &RunConfig::max_iterations, "iteration cap");
  bind_flag(mini, flags, "tolerance", &RunConfig::tolerance, "relative energy decrease tolerance");
  bind_flag(mini, flags, "step", &RunConfig::step, "initial step size");
  bind_flag(mini, flags, "backtrack", &RunConfig::backtrack, "backtracking factor in (0, 1)");
  bind_flag(mini, flags, "project", &RunConfig::project, "enforce w >= 0 (true | false)");
  bind_flag(mini, flags, "encoding", &RunConfig::encoding, "field dump encoding: csv | binary");
  bind_output(mini, flags);

  Command& poincare = add("poincare", "random-field check of the half-square Poincare inequality");
  bind_flag(poincare, flags, "n", &RunConfig::n, "number of random fields");
  bind_flag(poincare, flags, "seed", &RunConfig::seed, "random seed");
  bind_flag(poincare, flags, "resolution", &RunConfig::resolution, "quadrature cells per side");
  bind_output(poincare, flags);

  Command& conv = add("convergence", "energy under nested grid refinement");
  bind_params(conv, flags);
  bind_flag(conv, flags, "construction", &RunConfig::construction, "laminate_cell | flat | laminate | branching");
  bind_flag(conv, flags, "ladder", &RunConfig::ladder, "number of nested grids (>= 3)");
  bind_flag(conv, flags, "nx", &RunConfig::nx, "coarsest grid nodes in x (domain constructions)");
  bind_flag(conv, flags, "ny", &RunConfig::ny, "coarsest grid nodes in y (domain constructions)");
  bind_flag(conv, flags, "samples", &RunConfig::samples, "coarsest nodes per fold half-width (laminate_cell)");
  bind_flag(conv, flags, "cell_h", &RunConfig::cell_h, "laminate cell half-period");
  bind_flag(conv, flags, "cell_delta", &RunConfig::cell_delta, "laminate cell fold half-width");
  bind_flag(conv, flags, "cell_l", &RunConfig::cell_l, "laminate cell length");
  bind_flag(conv, flags, "profile", &RunConfig::profile, "fold profile: cosine | bump");
  bind_output(conv, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kDomain;
  }

  std::set<std::string> known;
  for (const auto& c : commands)
    for (const auto& e : c.entries)
      known.insert(e.key);

  try {
    for (const auto& c : commands) {
      if (!c.app->parsed())
        continue;
      const RunConfig cfg = resolve(c, flags, config_path, known);
      set_worker_limit(cfg.threads);
      json result;
      const std::string& name = cfg.command;
      if (name == "classify")
        result = cmd_classify(cfg);
      else if (name == "construct")
        result = cmd_construct(c, cfg);
      else if (name == "sweep")
        result = cmd_sweep(c, cfg);
      else if (name == "minimize")
        result = cmd_minimize(c, cfg);
      else if (name == "poincare")
        result = cmd_poincare(c, cfg);
      else
        result = cmd_convergence(c, cfg);
      std::cout << result.dump() << '\n';
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::bad_alloc&) {
    std::cerr << "numerical error: out of memory\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
