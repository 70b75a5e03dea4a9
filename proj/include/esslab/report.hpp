#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "esslab/experiments.hpp"

namespace esslab {

// One typed table backs both output formats.  Doubles print with 17
// significant digits so every emitted number parses back bit-exactly.
using Cell = std::variant<long long, unsigned long long, double, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_cell(const Cell& cell);

void write_csv(const ResultTable& table, std::ostream& out);
void write_json(const ResultTable& table, std::ostream& out);

// Raw CSV reader (cells come back as text); used for round-trip checks.
ResultTable read_csv(std::istream& in);

// Long-format plot rows: (n, statistic, value, ci_lo, ci_hi), sorted by
// (statistic, n).
struct PlotEntry {
  long long n = 0;
  std::string statistic;
  SummaryStats stats;
};

ResultTable build_plot_table(std::vector<PlotEntry> entries);

}  // namespace esslab
