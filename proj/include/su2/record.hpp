/**
 * \file record.hpp
 * \brief Experiment records and their CSV / JSON renderings.
 */
#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace su2 {

struct ExperimentRecord {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::pair<std::string, double>> outputs;
  std::vector<std::string> warnings;
  /// Only emitted when set, so that default outputs stay byte-identical across runs.
  std::optional<double> wall_time;
};

/// 17 significant digits; non-finite values as nan / inf / -inf.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

namespace detail {
struct Columns {
  std::vector<std::string> params, outputs;
  bool timed = false;
};
inline Columns collect_columns(const std::vector<ExperimentRecord>& records) {
  Columns c;
  auto add = [](std::vector<std::string>& v, const std::string& k) {
    for (const auto& e : v)
      if (e == k) return;
    v.push_back(k);
  };
  for (const auto& r : records) {
    for (const auto& [k, _] : r.parameters) add(c.params, k);
    for (const auto& [k, _] : r.outputs) add(c.outputs, k);
    c.timed = c.timed || r.wall_time.has_value();
  }
  return c;
}
template <class V>
const V* find_value(const std::vector<std::pair<std::string, V>>& kv, const std::string& key) {
  for (const auto& [k, v] : kv)
    if (k == key) return &v;
  return nullptr;
}
}  // namespace detail

/// Header row, then one row per record; columns are the union of keys in
/// first-seen order, empty where a record lacks a key.
inline void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  const auto cols = detail::collect_columns(records);
  os << "experiment";
  for (const auto& k : cols.params) os << ',' << csv_quote(k);
  for (const auto& k : cols.outputs) os << ',' << csv_quote(k);
  os << ",warnings";
  if (cols.timed) os << ",wall_time";
  os << '\n';
  for (const auto& r : records) {
    os << csv_quote(r.experiment);
    for (const auto& k : cols.params) {
      os << ',';
      if (const auto* v = detail::find_value(r.parameters, k)) os << csv_quote(*v);
    }
    for (const auto& k : cols.outputs) {
      os << ',';
      if (const auto* v = detail::find_value(r.outputs, k)) os << format_number(*v);
    }
    std::string joined;
    for (std::size_t i = 0; i < r.warnings.size(); ++i) joined += (i ? "; " : "") + r.warnings[i];
    os << ',' << csv_quote(joined);
    if (cols.timed) {
      os << ',';
      if (r.wall_time) os << format_number(*r.wall_time);
    }
    os << '\n';
  }
}

/// Array of {"experiment", "parameters", "outputs", "warnings"[, "wall_time"]} objects.
inline void write_json(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  auto str = [](const std::string& s) { return nlohmann::json(s).dump(); };
  auto num = [](double v) { return std::isfinite(v) ? format_number(v) : std::string("null"); };
  os << "[\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    os << "  {\"experiment\": " << str(r.experiment) << ", \"parameters\": {";
    for (std::size_t j = 0; j < r.parameters.size(); ++j)
      os << (j ? ", " : "") << str(r.parameters[j].first) << ": " << str(r.parameters[j].second);
    os << "}, \"outputs\": {";
    for (std::size_t j = 0; j < r.outputs.size(); ++j)
      os << (j ? ", " : "") << str(r.outputs[j].first) << ": " << num(r.outputs[j].second);
    os << "}, \"warnings\": [";
    for (std::size_t j = 0; j < r.warnings.size(); ++j) os << (j ? ", " : "") << str(r.warnings[j]);
    os << ']';
    if (r.wall_time) os << ", \"wall_time\": " << num(*r.wall_time);
    os << '}' << (i + 1 < records.size() ? "," : "") << '\n';
  }
  os << "]\n";
}

}  // namespace su2
