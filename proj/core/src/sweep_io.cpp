#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "stmir/format.hpp"
#include "json_util.hpp"
#include "stmir/error.hpp"
#include "stmir/sweep.hpp"

namespace stmir {

namespace {

// Numeric columns in schema order, status excluded.
template <class Row, class Fn>
void for_each_number(Row& row, Fn&& fn) {
  fn("mu_bar", row.mu_bar);
  fn("sigma_bar", row.sigma_bar);
  fn("mu", row.mu);
  fn("sigma2", row.sigma2);
  fn("mir_quadrature", row.mir_quadrature);
  fn("mir_series", row.mir_series);
  fn("lb_s2", row.lb_s2);
  fn("ub_s2", row.ub_s2);
  fn("lb_s4", row.lb_s4);
  fn("ub_s4", row.ub_s4);
  fn("mir_discrete", row.mir_discrete);
  fn("mc_value", row.mc_value);
  fn("mc_stderr", row.mc_stderr);
}

std::string cell(double v) { return format_double(v); }
std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(Errc::ConfigError, "csv line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) out << (i ? "," : "") << kCsvColumns[i];
  out << '\n';
  for (const SweepRow& row : rows) {
    for_each_number(row, [&](std::string_view, const auto& v) { out << cell(v) << ','; });
    out << row.status << '\n';
  }
}

std::vector<SweepRow> read_csv(std::istream& in) {
  std::string line;
  std::string header;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) (header += i ? "," : "") += kCsvColumns[i];
  if (!std::getline(in, line) || line != header) throw Error(Errc::ConfigError, "csv header does not match schema");

  std::vector<SweepRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    for (std::size_t i = 0; i + 1 < kCsvColumns.size(); ++i) {
      const auto comma = rest.find(',');
      if (comma == std::string_view::npos)
        throw Error(Errc::ConfigError, "csv line " + std::to_string(lineno) + ": too few fields");
      fields.push_back(rest.substr(0, comma));
      rest.remove_prefix(comma + 1);
    }
    SweepRow row;
    std::size_t k = 0;
    for_each_number(row, [&](std::string_view, auto& v) {
      const std::string_view f = fields[k++];
      if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>) {
        v = parse_double(f, lineno);
      } else {
        if (f.empty())
          v.reset();
        else
          v = parse_double(f, lineno);
      }
    });
    row.status = std::string(rest);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_json(std::ostream& out, const std::vector<SweepRow>& rows) {
  using ordered = nlohmann::ordered_json;
  ordered arr = ordered::array();
  for (const SweepRow& row : rows) {
    ordered obj = ordered::object();
    for_each_number(row, [&](std::string_view name, const auto& v) {
      if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>)
        obj[std::string(name)] = v;
      else
        obj[std::string(name)] = v ? ordered(*v) : ordered(nullptr);
    });
    obj["status"] = row.status;
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

}  // namespace stmir
