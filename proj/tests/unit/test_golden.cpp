#include "ewr/errors.hpp"
#include "ewr/golden.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ewr;

namespace {

CsvTable parse(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

}  // namespace

TEST(Csv, ReadsHeaderAndBlankCells) {
  const CsvTable t = parse("a,b,c\n1,,3\n4,5,6\n");
  ASSERT_EQ(t.header.size(), 3u);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "");
  EXPECT_EQ(t.rows[1][2], "6");
}

TEST(Csv, MissingFileThrows) { EXPECT_THROW(read_csv(std::filesystem::path("/nonexistent/x.csv")), IoError); }

TEST(Golden, ExactByDefault) {
  const CsvTable a = parse("k,v\n1,0.5\n"), b = parse("k,v\n1,0.5000001\n");
  GoldenTolerances tol;
  EXPECT_TRUE(compare_csv(a, a, tol).ok);
  EXPECT_FALSE(compare_csv(a, b, tol).ok);
  tol.columns["v"] = {1e-6, 0.0, false};
  const auto c = compare_csv(a, b, tol);
  EXPECT_TRUE(c.ok);
  EXPECT_EQ(c.cells_checked, 2u);
}

TEST(Golden, RelativeToleranceAndShapes) {
  GoldenTolerances tol;
  tol.fallback = {0.0, 1e-3, false};
  EXPECT_TRUE(compare_csv(parse("v\n1000\n"), parse("v\n1000.9\n"), tol).ok);
  EXPECT_FALSE(compare_csv(parse("v\n1000\n"), parse("v\n1001.1\n"), tol).ok);
  EXPECT_FALSE(compare_csv(parse("v\n1\n"), parse("w\n1\n"), tol).ok);
  EXPECT_FALSE(compare_csv(parse("v\n1\n"), parse("v\n1\n2\n"), tol).ok);
  EXPECT_FALSE(compare_csv(parse("v\n\n"), parse("v\n1\n"), tol).ok);
  EXPECT_TRUE(compare_csv(parse("v\n\n"), parse("v\n\n"), tol).ok);
}

TEST(Golden, ToleranceFileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "ewr_golden_tol.ini";
  GoldenTolerances tol;
  tol.columns["energy"] = {1e-12, 1e-9, false};
  tol.columns["iteration"] = {0.0, 0.0, true};
  tol.fallback = {0.0, 1e-6, false};
  tol.save(path);
  const GoldenTolerances back = GoldenTolerances::load(path);
  EXPECT_DOUBLE_EQ(back.lookup("energy").abs, 1e-12);
  EXPECT_DOUBLE_EQ(back.lookup("energy").rel, 1e-9);
  EXPECT_TRUE(back.lookup("iteration").exact);
  EXPECT_DOUBLE_EQ(back.lookup("other").rel, 1e-6);
  EXPECT_FALSE(back.lookup("other").exact);
  std::filesystem::remove(path);
}
