#include "ewr/golden.hpp"

#include "ewr/errors.hpp"
#include "ewr/kv_file.hpp"

#include <boost/algorithm/string.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace ewr {

namespace {

ColumnTolerance parse_tolerance(const std::string& key, const std::string& text) {
  const std::string t = boost::algorithm::trim_copy(text);
  if (t == "exact") return {0.0, 0.0, true};
  std::vector<std::string> parts;
  boost::algorithm::split(parts, t, boost::algorithm::is_any_of(","));
  if (parts.size() != 2) throw ConfigError("tolerance for '" + key + "' must be 'abs, rel' or 'exact'");
  ColumnTolerance c;
  c.abs = parse_double(boost::algorithm::trim_copy(parts[0]), key);
  c.rel = parse_double(boost::algorithm::trim_copy(parts[1]), key);
  if (!(c.abs >= 0.0) || !(c.rel >= 0.0)) throw ConfigError("tolerance for '" + key + "' must be nonnegative");
  return c;
}

std::string format_tolerance(const ColumnTolerance& c) {
  return c.exact ? "exact" : format_double(c.abs) + ", " + format_double(c.rel);
}

}  // namespace

const ColumnTolerance& GoldenTolerances::lookup(const std::string& column) const {
  const auto it = columns.find(column);
  return it == columns.end() ? fallback : it->second;
}

GoldenTolerances GoldenTolerances::load(const std::filesystem::path& path) {
  const KeyValueFile kv = KeyValueFile::load(path);
  const auto section = kv.tree().get_child_optional("tolerance");
  if (!section || section->empty()) throw ConfigError(path.string() + ": no [tolerance] entries");
  GoldenTolerances tol;
  for (const auto& [key, node] : *section) {
    const ColumnTolerance c = parse_tolerance(key, node.data());
    if (key == "default")
      tol.fallback = c;
    else
      tol.columns[key] = c;
  }
  return tol;
}

void GoldenTolerances::save(const std::filesystem::path& path) const {
  KeyValueFile kv;
  kv.set("tolerance.default", format_tolerance(fallback));
  for (const auto& [name, c] : columns) kv.set("tolerance." + name, format_tolerance(c));
  kv.save(path);
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    boost::algorithm::split(cells, line, boost::algorithm::is_any_of(","));
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size()) throw IoError("csv row has " + std::to_string(cells.size()) +
                                                         " cells, header has " + std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw IoError("csv is empty");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return read_csv(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

GoldenComparison compare_csv(const CsvTable& expected, const CsvTable& actual, const GoldenTolerances& tol,
                             std::size_t max_problems) {
  GoldenComparison cmp;
  auto fail = [&](std::string msg) {
    cmp.ok = false;
    if (cmp.problems.size() < max_problems) cmp.problems.push_back(std::move(msg));
  };
  if (expected.header != actual.header) {
    fail("header mismatch");
    return cmp;
  }
  if (expected.rows.size() != actual.rows.size())
    fail("row count " + std::to_string(actual.rows.size()) + " != expected " + std::to_string(expected.rows.size()));
  const std::size_t rows = std::min(expected.rows.size(), actual.rows.size());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < expected.header.size(); ++c) {
      const std::string& e = expected.rows[r][c];
      const std::string& a = actual.rows[r][c];
      const ColumnTolerance& ct = tol.lookup(expected.header[c]);
      ++cmp.cells_checked;
      std::ostringstream where;
      where << "row " << r + 1 << ", " << expected.header[c] << ": expected '" << e << "', got '" << a << "'";
      if (ct.exact || e.empty() || a.empty()) {
        if (e != a) fail(where.str());
        continue;
      }
      double ev = 0.0, av = 0.0;
      try {
        ev = parse_double(e, expected.header[c]);
        av = parse_double(a, expected.header[c]);
      } catch (const ConfigError&) {
        if (e != a) fail(where.str());
        continue;
      }
      if (!(std::abs(av - ev) <= ct.abs + ct.rel * std::abs(ev))) fail(where.str());
    }
  return cmp;
}

}  // namespace ewr
