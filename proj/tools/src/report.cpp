#include "dplimit_cli/report.hpp"

#include <cstdio>

#include "dplimit/json_io.hpp"

namespace dplimit::cli {

Json number(double x) { return Json(round12(x)); }

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

void write_sweep_csv(const Problem& p, const SweepResult& result, std::ostream& os) {
  os << "family,k,tv,state,value,error,dist_to_vstar\n";
  for (const SweepRow& row : result.rows) {
    std::string family = row.family;
    if (family.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : family) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      family = quoted + "\"";
    }
    os << family << ',' << row.k << ',' << format_number(row.tv) << ',' << p.label(row.state) << ','
       << format_number(row.value) << ',' << format_number(row.error) << ','
       << format_number(row.dist_to_vstar) << '\n';
  }
}

}  // namespace dplimit::cli
