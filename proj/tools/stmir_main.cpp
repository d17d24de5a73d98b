// stmir: MIR, bounds, moments, simulation and sweeps from the command line.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure
// (for sweeps: any row whose status is not "ok", or a failed audit).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "stmir/bounds.hpp"
#include "stmir/error.hpp"
#include "stmir/format.hpp"
#include "stmir/mir.hpp"
#include "stmir/moments.hpp"
#include "stmir/monte_carlo.hpp"
#include "stmir/sweep.hpp"

namespace fs = std::filesystem;
using namespace stmir;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Globals {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  int series_k = 40;
  double delta_t = 1e-3;
  std::size_t quad_nodes = 200;
  double mc_n = 1e6;
};

struct PointFlags {
  std::optional<double> mu_bar, sigma_bar, a, b;
  std::string receptor_path;
};

MethodDefaults defaults_from(const Globals& g) {
  MethodDefaults d;
  d.series_order = g.series_k;
  d.delta_t = g.delta_t;
  d.mc_samples = static_cast<std::size_t>(g.mc_n);
  return d;
}

QuadratureOptions quadrature_from(const Globals& g) {
  QuadratureOptions q;
  q.initial_nodes = g.quad_nodes;
  return q;
}

std::optional<Config> maybe_config(const Globals& g) {
  if (g.config_path.empty()) return std::nullopt;
  return load_config(g.config_path, defaults_from(g));
}

ReceptorSpec pick_receptor(const std::optional<Config>& cfg, const PointFlags& p) {
  if (!p.receptor_path.empty()) return load_receptor(p.receptor_path);
  if (cfg) return cfg->receptor;
  return chr2_skeleton();
}

PointSpec pick_point(const std::optional<Config>& cfg, const PointFlags& p) {
  PointSpec s = cfg && cfg->point ? *cfg->point : PointSpec{};
  if (p.mu_bar) s.mu_bar = *p.mu_bar;
  if (p.sigma_bar) s.sigma_bar = *p.sigma_bar;
  if (p.a) s.a = *p.a;
  if (p.b) s.b = *p.b;
  return s;
}

OutputFormat pick_format(const Globals& g, const std::optional<Config>& cfg) {
  if (!g.format.empty()) {
    auto f = parse_output_format(g.format);
    if (!f) throw Error(Errc::ConfigError, "--format must be csv or json");
    return *f;
  }
  return cfg && cfg->format ? *cfg->format : OutputFormat::Csv;
}

// Writes to --out, else the config's output path, else stdout.
template <class Fn>
void emit(const Globals& g, const std::optional<fs::path>& config_out, Fn&& write) {
  fs::path target = !g.out_path.empty() ? fs::path(g.out_path) : config_out.value_or(fs::path());
  if (target.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) throw Error(Errc::ConfigError, "cannot write " + target.string());
  write(out);
}

void add_point_flags(CLI::App* cmd, PointFlags& p) {
  cmd->add_option("--mu-bar", p.mu_bar, "Parent mean of the intensity");
  cmd->add_option("--sigma-bar", p.sigma_bar, "Parent standard deviation");
  cmd->add_option("--a", p.a, "Lower truncation point");
  cmd->add_option("--b", p.b, "Upper truncation point");
  cmd->add_option("--receptor", p.receptor_path, "Receptor JSON (default: ChR2 ring with unit rates)");
}

int run_mir(const Globals& g, const PointFlags& p, const std::vector<std::string>& method_tokens) {
  const auto cfg = maybe_config(g);
  const PointSpec pt = pick_point(cfg, p);
  SweepConfig sc(pick_receptor(cfg, p));
  sc.a = pt.a;
  sc.b = pt.b;
  sc.mu_bar_grid = {pt.mu_bar, pt.mu_bar, 1};
  sc.sigma_bar_grid = {pt.sigma_bar, pt.sigma_bar, 1};
  sc.quadrature = quadrature_from(g);
  sc.seed = g.seed.value_or(cfg ? cfg->seed : 0);
  const MethodDefaults defaults = defaults_from(g);
  if (!method_tokens.empty()) {
    for (const auto& t : method_tokens) add_method(sc.methods, t, defaults);
  } else if (cfg && !cfg->methods.empty()) {
    sc.methods = cfg->methods;
  } else {
    for (const char* t : {"quadrature", "bounds(2)", "bounds(4)", "discrete"}) add_method(sc.methods, t, defaults);
    if (pt.a > 0.0 && pt.b <= 2.0) add_method(sc.methods, "series", defaults);
  }
  validate(sc);

  const std::vector<SweepRow> rows = run_sweep(sc, 1);
  emit(g, cfg ? cfg->output_path : std::nullopt, [&](std::ostream& out) {
    if (pick_format(g, cfg) == OutputFormat::Json)
      write_json(out, rows);
    else
      write_csv(out, rows);
  });
  for (const auto& issue : audit_rows(rows)) std::cerr << "audit: " << issue.message << '\n';
  return rows.front().ok() && audit_rows(rows).empty() ? 0 : kExitNumeric;
}

int run_bounds(const Globals& g, const PointFlags& p) {
  const auto cfg = maybe_config(g);
  const PointSpec pt = pick_point(cfg, p);
  const ReceptorSpec spec = pick_receptor(cfg, p);
  const TruncatedGaussian dist(pt.mu_bar, pt.sigma_bar, pt.a, pt.b);
  const MirResult exact = mir_quadrature(spec, dist, quadrature_from(g));
  std::vector<BoundPair> pairs = {mir_bounds(spec, dist, 2), mir_bounds(spec, dist, 4)};
  emit(g, std::nullopt, [&](std::ostream& out) {
    out << "s,gap_lower_nats,gap_upper_nats,mir_lower,mir_upper,mir_quadrature\n";
    for (const auto& bp : pairs)
      out << bp.s << ',' << format_double(bp.gap.lower_nats) << ',' << format_double(bp.gap.upper_nats) << ','
          << format_double(bp.lower) << ',' << format_double(bp.upper) << ',' << format_double(exact.value) << '\n';
  });
  return 0;
}

int run_moments(const Globals& g, const PointFlags& p, int order) {
  const auto cfg = maybe_config(g);
  const PointSpec pt = pick_point(cfg, p);
  const TruncatedGaussian dist(pt.mu_bar, pt.sigma_bar, pt.a, pt.b);
  const MomentTable table = raw_moments(dist, order);
  emit(g, std::nullopt, [&](std::ostream& out) {
    out << "m,raw,central\n";
    for (int m = 0; m <= order; ++m) out << m << ',' << format_double(table.raw[m]) << ',' << format_double(table.central[m]) << '\n';
  });
  return 0;
}

int run_simulate(const Globals& g, const PointFlags& p, const std::string& dump_path) {
  const auto cfg = maybe_config(g);
  const PointSpec pt = pick_point(cfg, p);
  const ReceptorSpec spec = pick_receptor(cfg, p);
  const TruncatedGaussian dist(pt.mu_bar, pt.sigma_bar, pt.a, pt.b);
  const std::uint64_t seed = g.seed.value_or(cfg ? cfg->seed : 0);
  const auto n = static_cast<std::size_t>(g.mc_n);

  const Trajectory traj = simulate(spec, dist, g.delta_t, n, seed);
  if (!dump_path.empty()) {
    std::ofstream dump(dump_path, std::ios::binary);
    if (!dump) throw Error(Errc::ConfigError, "cannot write " + dump_path);
    write_trajectory_tsv(dump, traj);
  }
  const McEstimate est = estimate_mir(traj, spec, dist);
  const MirResult disc = mir_discrete(spec, dist, g.delta_t, quadrature_from(g));
  const SteadyState pi = steady_state(transition_matrix(mean_rate_matrix(spec, dist.mu()), g.delta_t));
  const std::vector<double> occ = empirical_occupancy(traj, spec.state_count());

  emit(g, std::nullopt, [&](std::ostream& out) {
    out << "quantity,value,reference,stderr\n";
    out << "mir_bits_per_s," << format_double(est.value) << ',' << format_double(disc.value) << ','
        << format_double(est.std_error) << '\n';
    for (std::size_t i = 0; i < occ.size(); ++i)
      out << "occupancy_" << spec.states()[i] << ',' << format_double(occ[i]) << ',' << format_double(pi[i]) << ",\n";
  });
  return 0;
}

int run_sweep_cmd(const Globals& g, unsigned threads, const std::string& capacity_by) {
  if (g.config_path.empty()) throw Error(Errc::ConfigError, "sweep requires --config");
  const Config cfg = load_config(g.config_path, defaults_from(g));
  SweepConfig sc = to_sweep_config(cfg);
  if (g.seed) sc.seed = *g.seed;
  sc.quadrature = quadrature_from(g);
  if (!g.format.empty()) sc.format = pick_format(g, cfg);
  std::optional<RowField> cap_field;
  if (!capacity_by.empty()) {
    cap_field = parse_row_field(capacity_by);
    if (!cap_field) throw Error(Errc::ConfigError, "unknown --capacity-by field '" + capacity_by + "'");
  }
  validate(sc);

  const std::vector<SweepRow> rows = run_sweep(sc, threads);
  emit(g, sc.output_path, [&](std::ostream& out) {
    if (sc.format == OutputFormat::Json)
      write_json(out, rows);
    else
      write_csv(out, rows);
  });

  int code = 0;
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (!rows[r].ok()) {
      std::cerr << "row " << r << " (mu_bar=" << rows[r].mu_bar << ", sigma_bar=" << rows[r].sigma_bar
                << "): " << rows[r].status << '\n';
      code = kExitNumeric;
    }
  for (const auto& issue : audit_rows(rows)) {
    std::cerr << "audit: row " << issue.row << ": " << issue.message << '\n';
    code = kExitNumeric;
  }
  if (cap_field) {
    try {
      const Capacity c = find_capacity(rows, *cap_field);
      std::cerr << "capacity (" << capacity_by << "): mu_bar=" << c.mu_bar << " sigma_bar=" << c.sigma_bar
                << " value=" << c.value << '\n';
    } catch (const Error& e) {
      std::cerr << "capacity: " << e.what() << '\n';
      code = kExitNumeric;
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mutual information rate of receptor signal transduction under truncated-Gaussian input"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "JSON config (receptor, distribution, sweep, methods)");
  app.add_option("--out", g.out_path, "Output file (default: stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--series-k", g.series_k, "Series order K for bare \"series\"")->check(CLI::Range(2, 64));
  app.add_option("--delta-t", g.delta_t, "Step for discrete MIR and simulation")->check(CLI::PositiveNumber);
  app.add_option("--quad-nodes", g.quad_nodes, "Initial quadrature nodes")->check(CLI::Range(8, 1 << 20));
  app.add_option("--mc-n", g.mc_n, "Monte Carlo steps")->check(CLI::Range(20.0, 1e12));

  PointFlags point;
  std::vector<std::string> methods;
  auto* mir = app.add_subcommand("mir", "MIR at a single (mu_bar, sigma_bar)");
  add_point_flags(mir, point);
  mir->add_option("--method", methods, "quadrature, series(K), bounds(s), discrete(dt), mc(n); repeatable");

  auto* bounds = app.add_subcommand("bounds", "Jensen-gap bounds for s = 2 and s = 4");
  add_point_flags(bounds, point);

  int order = 10;
  auto* moments = app.add_subcommand("moments", "Raw and central moments of the truncated input");
  add_point_flags(moments, point);
  moments->add_option("--order", order, "Highest moment order")->check(CLI::Range(0, kMaxMomentOrder));

  std::string dump_path;
  auto* sim = app.add_subcommand("simulate", "Simulate a trajectory and estimate the MIR from it");
  add_point_flags(sim, point);
  sim->add_option("--dump", dump_path, "Write the trajectory as TSV (step, x, y)");

  unsigned threads = 0;
  std::string capacity_by;
  auto* sweep = app.add_subcommand("sweep", "Grid sweep over (mu_bar, sigma_bar)");
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");
  sweep->add_option("--capacity-by", capacity_by, "Report the argmax of this column on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*mir) return run_mir(g, point, methods);
    if (*bounds) return run_bounds(g, point);
    if (*moments) return run_moments(g, point, order);
    if (*sim) return run_simulate(g, point, dump_path);
    return run_sweep_cmd(g, threads, capacity_by);
  } catch (const Error& e) {
    std::cerr << "stmir: " << e.what() << '\n';
    return e.code() == Errc::ConfigError || e.code() == Errc::InvalidSpec ? kExitConfig : kExitNumeric;
  }
}
