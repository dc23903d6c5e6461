// Compares a CSV against a golden copy using per-column tolerances.
#include "ewr/errors.hpp"
#include "ewr/golden.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Compare a CSV log against its golden copy"};
  std::string expected, actual, tolerances;
  app.add_option("expected", expected, "Golden CSV")->required();
  app.add_option("actual", actual, "Fresh CSV")->required();
  app.add_option("-t,--tolerances", tolerances, "Tolerance file ([tolerance] section)");
  CLI11_PARSE(app, argc, argv);

  try {
    const ewr::GoldenTolerances tol = tolerances.empty() ? ewr::GoldenTolerances{} : ewr::GoldenTolerances::load(tolerances);
    const auto cmp = ewr::compare_csv(ewr::read_csv(std::filesystem::path(expected)),
                                      ewr::read_csv(std::filesystem::path(actual)), tol);
    for (const auto& p : cmp.problems) std::cerr << p << '\n';
    std::cout << (cmp.ok ? "match" : "MISMATCH") << ": " << cmp.cells_checked << " cells, " << actual << '\n';
    return cmp.ok ? 0 : 1;
  } catch (const ewr::IoError& e) {
    std::cerr << e.what() << '\n';
    return 3;
  } catch (const ewr::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
}
