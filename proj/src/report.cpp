#include "esslab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace esslab {

std::string format_cell(const Cell& cell) {
  char buf[40];
  if (const auto* i = std::get_if<long long>(&cell)) {
    std::snprintf(buf, sizeof buf, "%lld", *i);
    return buf;
  }
  if (const auto* u = std::get_if<unsigned long long>(&cell)) {
    std::snprintf(buf, sizeof buf, "%llu", *u);
    return buf;
  }
  if (const auto* d = std::get_if<double>(&cell)) {
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  return std::get<std::string>(cell);
}

void write_csv(const ResultTable& table, std::ostream& out) {
  for (size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << format_cell(row[c]);
    }
    out << '\n';
  }
}

void write_json(const ResultTable& table, std::ostream& out) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (size_t c = 0; c < row.size(); ++c) {
      const auto& name = table.columns[c];
      if (const auto* i = std::get_if<long long>(&row[c])) {
        obj[name] = *i;
      } else if (const auto* u = std::get_if<unsigned long long>(&row[c])) {
        obj[name] = *u;
      } else if (const auto* d = std::get_if<double>(&row[c])) {
        obj[name] = *d;
      } else {
        obj[name] = std::get<std::string>(row[c]);
      }
    }
    rows.push_back(std::move(obj));
  }
  out << rows.dump(2) << '\n';
}

ResultTable read_csv(std::istream& in) {
  ResultTable table;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.emplace_back();
    if (header) {
      table.columns = std::move(fields);
      header = false;
    } else {
      std::vector<Cell> row;
      row.reserve(fields.size());
      for (auto& f : fields) row.emplace_back(std::move(f));
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

ResultTable build_plot_table(std::vector<PlotEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const PlotEntry& a, const PlotEntry& b) {
    if (a.statistic != b.statistic) return a.statistic < b.statistic;
    return a.n < b.n;
  });
  ResultTable table;
  table.columns = {"n", "statistic", "value", "ci_lo", "ci_hi"};
  for (auto& e : entries) {
    table.rows.push_back(
        {e.n, e.statistic, e.stats.mean, e.stats.ci_lo, e.stats.ci_hi});
  }
  return table;
}

}  // namespace esslab
