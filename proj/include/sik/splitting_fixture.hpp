#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "sik/oracle.hpp"
#include "sik/splitting.hpp"

namespace sik {

struct FixtureSample {
  std::string representative;
  double omega_turns = 0.0;
  SplittingResult result;
};

struct FixtureEntry {
  BlockKind kind;
  SpectralPosition where;
  SplittingPair value;
  std::vector<FixtureSample> samples;
};

struct SplittingFixture {
  std::vector<double> eps_sequence;
  OracleConfig config;
  std::vector<FixtureEntry> entries;
};

/// Runs the splitting limit on representative generator paths of every block
/// kind and position. Throws InconsistencyError when representatives of one
/// kind disagree.
SplittingFixture generate_splitting_fixture(const OracleConfig& cfg = {},
                                            const std::vector<double>& eps = default_eps_sequence());

nlohmann::json to_json(const SplittingFixture& f);
/// Entries only; throws InputError on malformed documents.
std::vector<SplittingEntry> entries_from_json(const nlohmann::json& j);
/// C++ initializer list consumed by the index library at build time.
std::string to_header(const SplittingFixture& f);

}  // namespace sik
