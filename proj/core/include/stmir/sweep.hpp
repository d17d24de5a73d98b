#pragma once

// Parameter sweeps over (mu_bar, sigma_bar) grids, capacity search, and
// CSV/JSON emission with a fixed schema.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stmir/quadrature.hpp"
#include "stmir/receptor.hpp"

namespace stmir {

struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  std::size_t steps = 1;

  // Evenly spaced, endpoints included; a single step yields {min}.
  std::vector<double> points() const;
};

struct MethodSet {
  bool quadrature = false;
  std::optional<int> series_order;
  bool bounds_s2 = false;
  bool bounds_s4 = false;
  std::optional<double> discrete_delta_t;
  std::optional<std::size_t> mc_samples;  // path estimator at mc_delta_t
  double mc_delta_t = 1e-3;

  bool empty() const noexcept {
    return !quadrature && !series_order && !bounds_s2 && !bounds_s4 && !discrete_delta_t && !mc_samples;
  }
};

// Values used for bare method names ("series", "discrete", "mc").
struct MethodDefaults {
  int series_order = 40;
  double delta_t = 1e-3;
  std::size_t mc_samples = 1'000'000;
};

// "quadrature", "series(40)", "bounds(2)", "bounds(4)", "bounds" (s = 2),
// "discrete(1e-3)", "mc(1000000)". Throws Error(ConfigError).
void add_method(MethodSet& methods, std::string_view token, const MethodDefaults& defaults);

enum class OutputFormat { Csv, Json };
std::optional<OutputFormat> parse_output_format(std::string_view name);

struct PointSpec {
  double mu_bar = 1.0;
  double sigma_bar = 0.5;
  double a = 1e-5;
  double b = 2.0;
};

struct SweepConfig {
  explicit SweepConfig(ReceptorSpec r) : receptor(std::move(r)) {}

  ReceptorSpec receptor;
  double a = 1e-5;
  double b = 2.0;
  GridAxis mu_bar_grid;
  GridAxis sigma_bar_grid;
  MethodSet methods;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> output_path;
  OutputFormat format = OutputFormat::Csv;
  QuadratureOptions quadrature;
};

// A whole config file. "receptor" is required; "distribution" feeds the
// single-point subcommands and "sweep" the grid run.
struct Config {
  explicit Config(ReceptorSpec r) : receptor(std::move(r)) {}

  ReceptorSpec receptor;
  std::optional<PointSpec> point;
  std::optional<GridAxis> mu_bar_grid;
  std::optional<GridAxis> sigma_bar_grid;
  std::optional<std::pair<double, double>> sweep_range;  // sweep.a, sweep.b
  MethodSet methods;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> output_path;
  std::optional<OutputFormat> format;
};

// A receptor given as a string is a path resolved against base_dir.
Config parse_config(std::string_view text, const std::filesystem::path& base_dir,
                    const MethodDefaults& defaults = {}, const std::string& source = "config");
Config load_config(const std::filesystem::path& path, const MethodDefaults& defaults = {});

// Throws Error(ConfigError) when the file has no "sweep" block.
SweepConfig to_sweep_config(const Config& config);

// Grids nonempty with min < max (min == max allowed for one step),
// 0 <= a < b, sigma_bar > 0, b <= 2 when series is selected, at least one
// method. Throws Error(ConfigError).
void validate(const SweepConfig& config);

struct SweepRow {
  double mu_bar = 0.0;
  double sigma_bar = 0.0;
  std::optional<double> mu;
  std::optional<double> sigma2;
  std::optional<double> mir_quadrature;
  std::optional<double> mir_series;
  std::optional<double> lb_s2;
  std::optional<double> ub_s2;
  std::optional<double> lb_s4;
  std::optional<double> ub_s4;
  std::optional<double> mir_discrete;
  std::optional<double> mc_value;
  std::optional<double> mc_stderr;
  // "ok", or "method=ErrorName" entries joined by ';'.
  std::string status = "ok";

  bool ok() const noexcept { return status == "ok"; }
  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

inline constexpr std::array<std::string_view, 14> kCsvColumns = {
    "mu_bar", "sigma_bar", "mu",           "sigma2",   "mir_quadrature", "mir_series", "lb_s2",
    "ub_s2",  "lb_s4",     "ub_s4",        "mir_discrete", "mc_value", "mc_stderr",  "status"};

enum class RowField {
  MirQuadrature,
  MirSeries,
  LbS2,
  UbS2,
  LbS4,
  UbS4,
  MirDiscrete,
  McValue,
};
std::optional<RowField> parse_row_field(std::string_view name);
std::string_view to_string(RowField field);
std::optional<double> field_value(const SweepRow& row, RowField field);

// One grid point; numerical failures land in row.status.
SweepRow evaluate_point(const SweepConfig& config, double mu_bar, double sigma_bar, std::uint64_t mc_seed);

// Rows ordered mu_bar-major then sigma_bar. MC seeds are
// derive_seed(config.seed, row index), so output does not depend on
// `threads` (0 = hardware concurrency).
std::vector<SweepRow> run_sweep(const SweepConfig& config, unsigned threads = 0);

struct AuditIssue {
  std::size_t row;
  std::string message;
};

// Rows whose populated bound columns fail to sandwich mir_quadrature
// (slack 1e-9 + 1e-12 |value|).
std::vector<AuditIssue> audit_rows(const std::vector<SweepRow>& rows);

struct Capacity {
  double mu_bar;
  double sigma_bar;
  double value;
  std::size_t row;
};

// Argmax of `field`; ties go to the smallest mu_bar, then smallest
// sigma_bar. Throws Error(EmptySweep) for no rows and Error(DomainError)
// when some row lacks the field.
Capacity find_capacity(const std::vector<SweepRow>& rows, RowField field);

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
// Inverse of write_csv. Throws Error(ConfigError) on schema mismatch.
std::vector<SweepRow> read_csv(std::istream& in);
void write_json(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace stmir
