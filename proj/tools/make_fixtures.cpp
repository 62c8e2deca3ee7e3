#include <iostream>

#include "CLI11.hpp"
#include "taforge/errors.hpp"
#include "taforge/fixtures.hpp"

int main(int argc, char** argv) {
  CLI::App app{"make_fixtures: regenerate the test corpora, replay stores and reference files"};
  std::string out_dir = "fixtures";
  app.add_option("--out", out_dir, "Output directory (default: fixtures)");
  CLI11_PARSE(app, argc, argv);

  try {
    taforge::fixtures::build_all(out_dir);
    std::cout << "fixtures written to " << out_dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(taforge::ExitCode::validation);
  }
}
