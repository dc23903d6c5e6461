#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ewr {

/// A cell passes if |actual - expected| <= abs + rel * |expected|.
/// Exact columns are compared as text.
struct ColumnTolerance {
  double abs = 0.0;
  double rel = 0.0;
  bool exact = false;
};

/// Per-column tolerances. Stored as "[tolerance]" entries of the form
/// `column = abs, rel` or `column = exact`; `default` covers unlisted columns.
struct GoldenTolerances {
  std::map<std::string, ColumnTolerance> columns;
  ColumnTolerance fallback{0.0, 0.0, true};

  const ColumnTolerance& lookup(const std::string& column) const;
  static GoldenTolerances load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

struct GoldenComparison {
  bool ok = true;
  std::size_t cells_checked = 0;
  std::vector<std::string> problems;
};

/// Headers and row counts must agree; every cell is checked against its
/// column tolerance. At most `max_problems` mismatches are reported.
GoldenComparison compare_csv(const CsvTable& expected, const CsvTable& actual, const GoldenTolerances& tol,
                             std::size_t max_problems = 20);

}  // namespace ewr
