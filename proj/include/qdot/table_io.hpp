#ifndef QDOT_TABLE_IO_HPP_
#define QDOT_TABLE_IO_HPP_

#include <string>
#include <vector>

#include "qdot/metrics.hpp"

namespace qdot::table_io {

// Fixed formatting used by every emitter: fidelities to four decimals,
// durations to 0.1 ns, plus two-significant-figure companion columns.
std::string format_fidelity(double v);
std::string format_duration(double v);
std::string format_sig2(double v);
std::string format_bool(bool v);

// CSV of one reproduced table: header row, comma separators, LF endings.
std::string table_csv(metrics::TableId id, const std::vector<metrics::TableRow>& rows);

// Column names shared by the CSV and JSON emitters.
std::vector<std::string> table_columns(metrics::TableId id);

}  // namespace qdot::table_io

#endif  // QDOT_TABLE_IO_HPP_
