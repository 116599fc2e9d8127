#pragma once

// Tabular output (CSV / JSON) and the line-delimited game record format.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "rally/core.hpp"
#include "rally/estimate.hpp"

namespace rally {

/// File could not be opened, read or written, or its content is malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Empty cells (std::monostate) serialize as an empty CSV field or JSON null.
using Cell = std::variant<std::monostate, long long, double, std::string>;

enum class TableFormat { CSV, JSON };

TableFormat parse_format(std::string_view s);

class OutputTable {
 public:
  explicit OutputTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  /// Throws DomainError unless the row has one cell per column.
  void add_row(std::vector<Cell> row);

  void write(std::ostream& os, TableFormat format) const;
  void write_csv(std::ostream& os) const;
  /// {"columns": [...], "rows": [[...], ...]}
  void write_json(std::ostream& os) const;

  static OutputTable read_csv(std::istream& is);
  static OutputTable read_json(std::istream& is);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Doubles are written with 12 significant digits.
std::string format_number(double x);

/// One JSON object per line: first_server, alpha, beta, last_scorer, duration (optional).
std::vector<GameRecord> read_records(std::istream& is);
std::vector<GameRecord> read_records_file(const std::string& path);
void write_records(std::ostream& os, const std::vector<GameRecord>& records);

}  // namespace rally
