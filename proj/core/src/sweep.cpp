#include "stmir/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "json_util.hpp"
#include "stmir/bounds.hpp"
#include "stmir/error.hpp"
#include "stmir/mir.hpp"
#include "stmir/monte_carlo.hpp"
#include "stmir/random.hpp"
#include "stmir/truncated_gaussian.hpp"

namespace stmir {

using detail::config_error;
using detail::json;

std::vector<double> GridAxis::points() const {
  std::vector<double> out(steps);
  if (steps == 1) {
    out[0] = min;
    return out;
  }
  const double span = max - min;
  for (std::size_t i = 0; i < steps; ++i)
    out[i] = i + 1 == steps ? max : min + span * static_cast<double>(i) / static_cast<double>(steps - 1);
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
bool parse_whole(std::string_view s, T& out) {
  s = trim(s);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Accepts "1e6" style integers for sample counts.
bool parse_count(std::string_view s, std::size_t& out) {
  if (parse_whole(s, out)) return true;
  double d = 0.0;
  if (!parse_whole(s, d) || !(d >= 0.0) || d != std::floor(d) || d > 1e15) return false;
  out = static_cast<std::size_t>(d);
  return true;
}

}  // namespace

namespace {

void add_method_at(MethodSet& methods, std::string_view token, const MethodDefaults& defaults,
                   const std::string& pointer) {
  const auto config_error = [&](const std::string&, const std::string& message) {
    detail::config_error(pointer, message);
  };
  const std::string_view t = trim(token);
  std::string_view name = t;
  std::optional<std::string_view> arg;
  if (auto open = t.find('('); open != std::string_view::npos) {
    if (t.back() != ')') config_error("", "malformed method '" + std::string(t) + "'");
    name = t.substr(0, open);
    arg = t.substr(open + 1, t.size() - open - 2);
  }
  const auto bad_arg = [&] { config_error("", "bad argument in method '" + std::string(t) + "'"); };

  if (name == "quadrature") {
    if (arg) bad_arg();
    methods.quadrature = true;
  } else if (name == "series") {
    int k = defaults.series_order;
    if (arg && !parse_whole(*arg, k)) bad_arg();
    if (k < 2 || k > kMaxSeriesOrder) config_error("", "series order must be in [2, 64]");
    methods.series_order = k;
  } else if (name == "bounds") {
    int s = 2;
    if (arg && !parse_whole(*arg, s)) bad_arg();
    if (s == 2)
      methods.bounds_s2 = true;
    else if (s == 4)
      methods.bounds_s4 = true;
    else
      config_error("", "bounds order must be 2 or 4");
  } else if (name == "discrete") {
    double dt = defaults.delta_t;
    if (arg && !parse_whole(*arg, dt)) bad_arg();
    if (!(dt > 0.0) || !std::isfinite(dt)) config_error("", "discrete step must be > 0");
    methods.discrete_delta_t = dt;
  } else if (name == "mc") {
    std::size_t n = defaults.mc_samples;
    if (arg && !parse_count(*arg, n)) bad_arg();
    if (n < 20) config_error("", "mc needs at least 20 steps");
    methods.mc_samples = n;
    methods.mc_delta_t = defaults.delta_t;
  } else {
    config_error("", "unknown method '" + std::string(t) + "'");
  }
}

}  // namespace

void add_method(MethodSet& methods, std::string_view token, const MethodDefaults& defaults) {
  add_method_at(methods, token, defaults, "/methods");
}

std::optional<OutputFormat> parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  return std::nullopt;
}

namespace {

GridAxis parse_axis(const json& node, const std::string& pointer) {
  if (!node.is_object()) config_error(pointer, "expected {min, max, steps}");
  GridAxis axis;
  axis.min = detail::get_number(node, "min", pointer);
  axis.max = detail::get_number(node, "max", pointer);
  axis.steps = static_cast<std::size_t>(detail::get_unsigned(node, "steps", pointer));
  if (axis.steps < 1) config_error(pointer + "/steps", "must be >= 1");
  if (axis.steps == 1 ? axis.min > axis.max : !(axis.min < axis.max))
    config_error(pointer, "min must be < max");
  return axis;
}

ReceptorSpec parse_receptor_node(const json& node, const std::filesystem::path& base_dir) {
  if (!node.is_string()) return detail::receptor_from_json(node, "/receptor");
  std::filesystem::path p = node.get<std::string>();
  if (p.is_relative()) p = base_dir / p;
  try {
    return load_receptor(p);
  } catch (const Error& e) {
    config_error("/receptor", e.what());
  }
}

}  // namespace

Config parse_config(std::string_view text, const std::filesystem::path& base_dir, const MethodDefaults& defaults,
                    const std::string& source) {
  const json root = detail::parse_json_text(text, source);
  if (!root.is_object()) config_error("", "top level must be an object");
  Config cfg(parse_receptor_node(detail::require(root, "receptor", ""), base_dir));

  if (root.contains("distribution")) {
    const json& d = root["distribution"];
    PointSpec p;
    p.mu_bar = detail::get_number(d, "mu_bar", "/distribution");
    p.sigma_bar = detail::get_number(d, "sigma_bar", "/distribution");
    if (d.contains("a")) p.a = detail::get_number(d, "a", "/distribution");
    if (d.contains("b")) p.b = detail::get_number(d, "b", "/distribution");
    cfg.point = p;
  }

  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    if (!s.is_object()) config_error("/sweep", "expected an object");
    double a = cfg.point ? cfg.point->a : 1e-5;
    double b = cfg.point ? cfg.point->b : 2.0;
    if (s.contains("a")) a = detail::get_number(s, "a", "/sweep");
    if (s.contains("b")) b = detail::get_number(s, "b", "/sweep");
    cfg.sweep_range = std::pair{a, b};
    cfg.mu_bar_grid = parse_axis(detail::require(s, "mu_bar", "/sweep"), "/sweep/mu_bar");
    cfg.sigma_bar_grid = parse_axis(detail::require(s, "sigma_bar", "/sweep"), "/sweep/sigma_bar");
  }

  if (root.contains("methods")) {
    const json& m = root["methods"];
    if (!m.is_array()) config_error("/methods", "expected an array of method names");
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string p = "/methods/" + std::to_string(i);
      if (!m[i].is_string()) config_error(p, "expected a string");
      add_method_at(cfg.methods, m[i].get<std::string>(), defaults, p);
    }
  }

  if (root.contains("seed")) cfg.seed = detail::get_unsigned(root, "seed", "");

  if (root.contains("output")) {
    const json& o = root["output"];
    if (!o.is_object()) config_error("/output", "expected an object");
    if (o.contains("path")) {
      std::filesystem::path p = detail::get_string(o, "path", "/output");
      cfg.output_path = p.is_relative() ? base_dir / p : p;
    }
    if (o.contains("format")) {
      auto f = parse_output_format(detail::get_string(o, "format", "/output"));
      if (!f) config_error("/output/format", "expected \"csv\" or \"json\"");
      cfg.format = f;
    }
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path, const MethodDefaults& defaults) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path(), defaults, path.string());
}

SweepConfig to_sweep_config(const Config& config) {
  if (!config.mu_bar_grid || !config.sigma_bar_grid) config_error("/sweep", "missing sweep block");
  SweepConfig sc(config.receptor);
  sc.a = config.sweep_range->first;
  sc.b = config.sweep_range->second;
  sc.mu_bar_grid = *config.mu_bar_grid;
  sc.sigma_bar_grid = *config.sigma_bar_grid;
  sc.methods = config.methods;
  sc.seed = config.seed;
  sc.output_path = config.output_path;
  sc.format = config.format.value_or(OutputFormat::Csv);
  return sc;
}

void validate(const SweepConfig& config) {
  const auto check_axis = [](const GridAxis& axis, const std::string& pointer) {
    if (axis.steps < 1) config_error(pointer + "/steps", "must be >= 1");
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) config_error(pointer, "bounds must be finite");
    if (axis.steps == 1 ? axis.min > axis.max : !(axis.min < axis.max)) config_error(pointer, "min must be < max");
  };
  check_axis(config.mu_bar_grid, "/sweep/mu_bar");
  check_axis(config.sigma_bar_grid, "/sweep/sigma_bar");
  if (!(config.sigma_bar_grid.min > 0.0)) config_error("/sweep/sigma_bar/min", "must be > 0");
  if (!(config.a >= 0.0) || !(config.a < config.b) || !std::isfinite(config.b))
    config_error("/sweep", "need 0 <= a < b < inf");
  if (config.methods.empty()) config_error("/methods", "select at least one method");
  if (config.methods.series_order && config.b > 2.0)
    config_error("/sweep/b", "series requires b <= 2");
}

std::optional<RowField> parse_row_field(std::string_view name) {
  static constexpr std::pair<std::string_view, RowField> table[] = {
      {"mir_quadrature", RowField::MirQuadrature}, {"mir_series", RowField::MirSeries},
      {"lb_s2", RowField::LbS2},                   {"ub_s2", RowField::UbS2},
      {"lb_s4", RowField::LbS4},                   {"ub_s4", RowField::UbS4},
      {"mir_discrete", RowField::MirDiscrete},     {"mc_value", RowField::McValue},
  };
  for (const auto& [n, f] : table)
    if (n == name) return f;
  return std::nullopt;
}

std::string_view to_string(RowField field) {
  switch (field) {
    case RowField::MirQuadrature: return "mir_quadrature";
    case RowField::MirSeries: return "mir_series";
    case RowField::LbS2: return "lb_s2";
    case RowField::UbS2: return "ub_s2";
    case RowField::LbS4: return "lb_s4";
    case RowField::UbS4: return "ub_s4";
    case RowField::MirDiscrete: return "mir_discrete";
    case RowField::McValue: return "mc_value";
  }
  return "?";
}

std::optional<double> field_value(const SweepRow& row, RowField field) {
  switch (field) {
    case RowField::MirQuadrature: return row.mir_quadrature;
    case RowField::MirSeries: return row.mir_series;
    case RowField::LbS2: return row.lb_s2;
    case RowField::UbS2: return row.ub_s2;
    case RowField::LbS4: return row.lb_s4;
    case RowField::UbS4: return row.ub_s4;
    case RowField::MirDiscrete: return row.mir_discrete;
    case RowField::McValue: return row.mc_value;
  }
  return std::nullopt;
}

SweepRow evaluate_point(const SweepConfig& config, double mu_bar, double sigma_bar, std::uint64_t mc_seed) {
  SweepRow row;
  row.mu_bar = mu_bar;
  row.sigma_bar = sigma_bar;
  std::string failures;
  const auto attempt = [&](std::string_view label, auto&& body) {
    std::string_view code;
    try {
      body();
      return;
    } catch (const Error& e) {
      code = to_string(e.code());
    } catch (const std::exception&) {
      code = "InternalError";
    }
    if (!failures.empty()) failures += ';';
    failures.append(label).append("=").append(code);
  };
  const auto finite = [](double v) {
    if (!std::isfinite(v)) throw Error(Errc::NoConvergence, "non-finite result");
    return v;
  };

  std::optional<TruncatedGaussian> dist;
  attempt("distribution", [&] { dist.emplace(mu_bar, sigma_bar, config.a, config.b); });
  if (dist) {
    const MethodSet& m = config.methods;
    const ReceptorSpec& spec = config.receptor;
    row.mu = dist->mu();
    row.sigma2 = dist->sigma2();
    if (m.quadrature)
      attempt("quadrature", [&] { row.mir_quadrature = finite(mir_quadrature(spec, *dist, config.quadrature).value); });
    if (m.series_order)
      attempt("series", [&] { row.mir_series = finite(mir_series(spec, *dist, *m.series_order).value); });
    if (m.bounds_s2)
      attempt("bounds2", [&] {
        const BoundPair bp = mir_bounds(spec, *dist, 2);
        row.lb_s2 = finite(bp.lower);
        row.ub_s2 = finite(bp.upper);
      });
    if (m.bounds_s4)
      attempt("bounds4", [&] {
        const BoundPair bp = mir_bounds(spec, *dist, 4);
        row.lb_s4 = finite(bp.lower);
        row.ub_s4 = finite(bp.upper);
      });
    if (m.discrete_delta_t)
      attempt("discrete", [&] {
        row.mir_discrete = finite(mir_discrete(spec, *dist, *m.discrete_delta_t, config.quadrature).value);
      });
    if (m.mc_samples)
      attempt("mc", [&] {
        const Trajectory traj = simulate(spec, *dist, m.mc_delta_t, *m.mc_samples, mc_seed);
        const McEstimate est = estimate_mir(traj, spec, *dist);
        row.mc_value = finite(est.value);
        row.mc_stderr = finite(est.std_error);
      });
  }
  if (!failures.empty()) row.status = std::move(failures);
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config, unsigned threads) {
  validate(config);
  const std::vector<double> mus = config.mu_bar_grid.points();
  const std::vector<double> sigmas = config.sigma_bar_grid.points();
  const std::size_t total = mus.size() * sigmas.size();
  std::vector<SweepRow> rows(total);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++)
      rows[i] = evaluate_point(config, mus[i / sigmas.size()], sigmas[i % sigmas.size()], derive_seed(config.seed, i));
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

std::vector<AuditIssue> audit_rows(const std::vector<SweepRow>& rows) {
  std::vector<AuditIssue> issues;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const SweepRow& row = rows[r];
    if (!row.mir_quadrature) continue;
    const double v = *row.mir_quadrature;
    const double slack = 1e-9 + 1e-12 * std::abs(v);
    const auto check = [&](const std::optional<double>& lo, const std::optional<double>& hi, const char* s) {
      if (lo && *lo > v + slack)
        issues.push_back({r, std::string("lb_") + s + " exceeds mir_quadrature"});
      if (hi && *hi < v - slack)
        issues.push_back({r, std::string("ub_") + s + " below mir_quadrature"});
    };
    check(row.lb_s2, row.ub_s2, "s2");
    check(row.lb_s4, row.ub_s4, "s4");
  }
  return issues;
}

Capacity find_capacity(const std::vector<SweepRow>& rows, RowField field) {
  if (rows.empty()) throw Error(Errc::EmptySweep, "no rows to search");
  std::optional<Capacity> best;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::optional<double> v = field_value(rows[r], field);
    if (!v || std::isnan(*v))
      throw Error(Errc::DomainError, "row " + std::to_string(r) + " has no " + std::string(to_string(field)));
    const SweepRow& row = rows[r];
    const bool better = !best || *v > best->value ||
                        (*v == best->value && (row.mu_bar < best->mu_bar ||
                                               (row.mu_bar == best->mu_bar && row.sigma_bar < best->sigma_bar)));
    if (better) best = Capacity{row.mu_bar, row.sigma_bar, *v, r};
  }
  return *best;
}

}  // namespace stmir
