// Build-time generator for the splitting table consumed by the index library.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sik/errors.hpp"
#include "sik/splitting_fixture.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the splitting-number table from the numeric limit oracle"};
  std::string header_path, json_path;
  app.add_option("--header", header_path, "write the C++ table fragment here");
  app.add_option("--json", json_path, "write the fixture with provenance here");
  CLI11_PARSE(app, argc, argv);
  try {
    const auto fixture = sik::generate_splitting_fixture();
    if (!header_path.empty()) {
      std::ofstream(header_path) << sik::to_header(fixture);
    }
    if (!json_path.empty()) {
      std::ofstream(json_path) << sik::to_json(fixture).dump(2) << "\n";
    }
    if (header_path.empty() && json_path.empty()) std::cout << sik::to_json(fixture).dump(2) << "\n";
  } catch (const sik::Error& e) {
    std::cerr << "gen_splitting_table: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
