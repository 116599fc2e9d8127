#include "rally/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace rally {

using nlohmann::json;

TableFormat parse_format(std::string_view s) {
  if (s == "csv") return TableFormat::CSV;
  if (s == "json") return TableFormat::JSON;
  throw DomainError("format must be csv or json");
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

OutputTable::OutputTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void OutputTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw DomainError("row has " + std::to_string(row.size()) + " cells, table has " +
                      std::to_string(columns_.size()) + " columns");
  }
  rows_.push_back(std::move(row));
}

void OutputTable::write(std::ostream& os, TableFormat format) const {
  if (format == TableFormat::CSV) {
    write_csv(os);
  } else {
    write_json(os);
  }
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(const std::string& v) const { return csv_escape(v); }
  };
  return std::visit(V{}, c);
}

json cell_json(const Cell& c) {
  struct V {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(long long v) const { return v; }
    json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return std::strtod(format_number(v).c_str(), nullptr);
    }
    json operator()(const std::string& v) const { return v; }
  };
  return std::visit(V{}, c);
}

Cell parse_cell(const std::string& s) {
  if (s.empty()) return std::monostate{};
  char* end = nullptr;
  const long long i = std::strtoll(s.c_str(), &end, 10);
  if (*end == '\0') return i;
  const double d = std::strtod(s.c_str(), &end);
  if (*end == '\0') return d;
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void OutputTable::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_escape(columns_[i]);
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

void OutputTable::write_json(std::ostream& os) const {
  json rows = json::array();
  for (const auto& row : rows_) {
    json r = json::array();
    for (const Cell& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  json doc;
  doc["columns"] = columns_;
  doc["rows"] = std::move(rows);
  os << doc.dump() << '\n';
}

OutputTable OutputTable::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty CSV input");
  OutputTable t(split_csv_line(line));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<Cell> row;
    for (const auto& f : split_csv_line(line)) row.push_back(parse_cell(f));
    if (row.size() != t.columns_.size()) throw IoError("ragged CSV row");
    t.rows_.push_back(std::move(row));
  }
  return t;
}

OutputTable OutputTable::read_json(std::istream& is) {
  json doc;
  try {
    is >> doc;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed JSON table: ") + e.what());
  }
  try {
    OutputTable t(doc.at("columns").get<std::vector<std::string>>());
    for (const json& r : doc.at("rows")) {
      std::vector<Cell> row;
      for (const json& c : r) {
        if (c.is_null()) {
          row.emplace_back(std::monostate{});
        } else if (c.is_number_integer()) {
          row.emplace_back(c.get<long long>());
        } else if (c.is_number()) {
          row.emplace_back(c.get<double>());
        } else {
          row.emplace_back(c.get<std::string>());
        }
      }
      if (row.size() != t.columns_.size()) throw IoError("ragged JSON row");
      t.rows_.push_back(std::move(row));
    }
    return t;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed JSON table: ") + e.what());
  }
}

std::vector<GameRecord> read_records(std::istream& is) {
  std::vector<GameRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    json obj;
    try {
      obj = json::parse(line);
      GameRecord r;
      r.first_server = parse_player(obj.at("first_server").get<std::string>());
      r.score.alpha = obj.at("alpha").get<int>();
      r.score.beta = obj.at("beta").get<int>();
      r.score.last_scorer = parse_player(obj.at("last_scorer").get<std::string>());
      if (obj.contains("duration") && !obj["duration"].is_null()) {
        r.duration = obj["duration"].get<long long>();
      }
      out.push_back(r);
    } catch (const json::exception& e) {
      throw IoError(where + e.what());
    } catch (const DomainError& e) {
      throw IoError(where + e.what());
    }
  }
  if (is.bad()) throw IoError("read failure");
  return out;
}

std::vector<GameRecord> read_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_records(in);
}

void write_records(std::ostream& os, const std::vector<GameRecord>& records) {
  for (const GameRecord& r : records) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    obj["first_server"] = std::string(1, to_char(r.first_server));
    obj["alpha"] = r.score.alpha;
    obj["beta"] = r.score.beta;
    obj["last_scorer"] = std::string(1, to_char(r.score.last_scorer));
    if (r.duration) obj["duration"] = *r.duration;
    os << obj.dump() << '\n';
  }
}

}  // namespace rally
