#ifndef MEMFV_CSV_HPP
#define MEMFV_CSV_HPP

#include <string>
#include <vector>

#include "memfv/parabolic.hpp"

namespace memfv {

// Scientific notation with 16 significant digits, '.' decimal separator;
// byte-stable across runs.
std::string format_sci(double v);

// trace.csv content: "# schema=1" comment, header row, one row per record.
// Columns: t, mass_1..m, total_mass, l2_1..m, dual_norm_U, E_t, jump_L2,
// min_value, then the enabled optional monitor columns in fixed order
// (trunc_energy, weighted_grad, trace_lbeta). Aborted runs keep their partial
// rows and end with an "# aborted:" comment.
std::string records_csv(const SimConfig& config,
                        const std::vector<MonitorRecord>& records,
                        const std::string& error_marker = "");

void write_text_file(const std::string& path, const std::string& content);

}  // namespace memfv

#endif
