#include "qdot/table_io.hpp"
#include <algorithm>

#include <cmath>
#include <cstdio>

namespace qdot::table_io {
namespace {

std::string printf_str(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

std::string format_fidelity(double v) { return printf_str("%.4f", v); }

std::string format_duration(double v) { return printf_str("%.1f", v); }

std::string format_sig2(double v) {
  if (v == 0.0) return "0";
  const double av = std::abs(v);
  const int e = static_cast<int>(std::floor(std::log10(av)));
  const int decimals = std::min(17, 1 - e);
  if (decimals >= 0) {
    char fmt[8];
    std::snprintf(fmt, sizeof(fmt), "%%.%df", decimals);
    return printf_str(fmt, v);
  }
  const double scale = std::pow(10.0, -decimals);
  return printf_str("%.0f", std::round(v / scale) * scale);
}

std::string format_bool(bool v) { return v ? "true" : "false"; }

std::vector<std::string> table_columns(metrics::TableId id) {
  if (id == metrics::TableId::V) {
    return {"b0_mT",           "value",        "value_2sf",        "value_alt",
            "value_alt_2sf", "duration_ns",  "duration_2sf",     "duration_alt_ns",
            "duration_alt_2sf", "cp_region_ok"};
  }
  return {"b0_mT", "value", "value_2sf", "duration_ns", "duration_2sf", "cp_region_ok"};
}

std::string table_csv(metrics::TableId id, const std::vector<metrics::TableRow>& rows) {
  std::string out;
  const std::vector<std::string> cols = table_columns(id);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out += cols[i];
    out += i + 1 == cols.size() ? "\n" : ",";
  }
  for (const metrics::TableRow& row : rows) {
    out += format_sig2(row.b0_mT);
    out += ",";
    out += format_fidelity(row.values[0]);
    out += ",";
    out += format_sig2(row.values[0]);
    out += ",";
    if (row.values.size() > 1) {
      out += format_fidelity(row.values[1]);
      out += ",";
      out += format_sig2(row.values[1]);
      out += ",";
    }
    out += format_duration(row.durations_ns[0]);
    out += ",";
    out += format_sig2(row.durations_ns[0]);
    out += ",";
    if (row.durations_ns.size() > 1) {
      out += format_duration(row.durations_ns[1]);
      out += ",";
      out += format_sig2(row.durations_ns[1]);
      out += ",";
    }
    out += format_bool(row.cp_region_ok);
    out += "\n";
  }
  return out;
}

}  // namespace qdot::table_io
