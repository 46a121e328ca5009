#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace abelkit {

/// Shortest decimal that reads back to the same double (at most 17
/// significant digits). Non-finite values print as nan, inf, -inf.
std::string format_number(double v);

using Cell = std::variant<double, long long, std::string>;

/// Column-named rows, rendered as CSV (single header row, LF endings) or as
/// JSON {"columns": [...], "rows": [[...], ...]}.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  std::string to_csv() const;
  nlohmann::ordered_json to_json() const;
};

/// JSON number, or null when not finite.
nlohmann::ordered_json json_number(double v);

}  // namespace abelkit
