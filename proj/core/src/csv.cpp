#include "memfv/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace memfv {

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

std::string records_csv(const SimConfig& config,
                        const std::vector<MonitorRecord>& records,
                        const std::string& error_marker) {
  std::ostringstream out;
  out << "# schema=1\n";
  const int m = config.species_count();
  out << "t";
  for (int j = 1; j <= m; ++j) out << ",mass_" << j;
  out << ",total_mass";
  for (int j = 1; j <= m; ++j) out << ",l2_" << j;
  out << ",dual_norm_U,E_t,jump_L2,min_value";
  const MonitorToggles& mon = config.monitors;
  if (!mon.truncation_levels.empty()) out << ",trunc_energy";
  if (mon.weighted_gradient_alpha >= 0.0) out << ",weighted_grad";
  if (mon.lbeta > 0.0) out << ",trace_lbeta";
  out << "\n";

  for (const MonitorRecord& r : records) {
    out << format_sci(r.t);
    for (double v : r.mass) out << "," << format_sci(v);
    out << "," << format_sci(r.total_mass);
    for (double v : r.l2) out << "," << format_sci(v);
    out << "," << format_sci(r.dual_norm_u) << "," << format_sci(r.e_t) << ","
        << format_sci(r.jump_l2) << "," << format_sci(r.min_value);
    if (r.truncation_energy) out << "," << format_sci(*r.truncation_energy);
    if (r.weighted_gradient) out << "," << format_sci(*r.weighted_gradient);
    if (r.trace_lbeta) out << "," << format_sci(*r.trace_lbeta);
    out << "\n";
  }
  if (!error_marker.empty()) out << "# aborted: " << error_marker << "\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open file for writing: " + path);
  f << content;
  if (!f) throw Error("write failed: " + path);
}

}  // namespace memfv
