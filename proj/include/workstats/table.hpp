#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace workstats {

/// Column-named table of pre-formatted cells; the unit of CLI output.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// %.12e-style scientific notation, independent of the C locale.
std::string format_sci(double value);

/// Header row then data rows, comma separated, '\n' line endings.
void write_csv(std::ostream& out, const Table& table);

/// {"columns": [...], "rows": [[...], ...]}; numeric-looking cells become numbers.
void write_json(std::ostream& out, const Table& table);

} // namespace workstats
