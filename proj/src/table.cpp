#include "workstats/table.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include <json.hpp>

namespace workstats {

std::string format_sci(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 12);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Table& table) {
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out << ',';
      out << cells[c];
    }
    out << '\n';
  };
  line(table.columns);
  for (const auto& row : table.rows) line(row);
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json doc;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto cells = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec == std::errc() && res.ptr == cell.data() + cell.size() && std::isfinite(v))
        cells.push_back(v);
      else
        cells.push_back(cell);
    }
    rows.push_back(std::move(cells));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

} // namespace workstats
