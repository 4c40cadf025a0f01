#include "sik/splitting.hpp"

#include <array>
#include <utility>

#include "sik/errors.hpp"

namespace sik {

namespace {

constexpr std::array<std::pair<BlockKind, const char*>, 10> kKindNames{{
    {BlockKind::n1_one_pos, "N1(1,+)"},
    {BlockKind::n1_one_zero, "I2"},
    {BlockKind::n1_one_neg, "N1(1,-)"},
    {BlockKind::n1_minus_pos, "N1(-1,+)"},
    {BlockKind::n1_minus_zero, "-I2"},
    {BlockKind::n1_minus_neg, "N1(-1,-)"},
    {BlockKind::rotation, "R"},
    {BlockKind::n2_nontrivial, "N2(nontrivial)"},
    {BlockKind::n2_trivial, "N2(trivial)"},
    {BlockKind::hyperbolic, "D"},
}};

constexpr std::array<std::pair<SpectralPosition, const char*>, 3> kPositionNames{{
    {SpectralPosition::at_angle, "at_angle"},
    {SpectralPosition::at_conjugate, "at_conjugate"},
    {SpectralPosition::off_spectrum, "off_spectrum"},
}};

}  // namespace

const char* to_string(BlockKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

const char* to_string(SpectralPosition p) {
  for (const auto& [pos, name] : kPositionNames)
    if (pos == p) return name;
  return "?";
}

BlockKind block_kind_from_string(const std::string& s) {
  for (const auto& [kind, name] : kKindNames)
    if (s == name) return kind;
  throw InputError("unknown block kind: " + s);
}

SpectralPosition position_from_string(const std::string& s) {
  for (const auto& [pos, name] : kPositionNames)
    if (s == name) return pos;
  throw InputError("unknown spectral position: " + s);
}

const std::vector<BlockKind>& all_block_kinds() {
  static const std::vector<BlockKind> kinds = [] {
    std::vector<BlockKind> out;
    for (const auto& kv : kKindNames) out.push_back(kv.first);
    return out;
  }();
  return kinds;
}

std::vector<SpectralPosition> positions_for(BlockKind k) {
  switch (k) {
    case BlockKind::hyperbolic:
      return {SpectralPosition::off_spectrum};
    case BlockKind::rotation:
    case BlockKind::n2_nontrivial:
    case BlockKind::n2_trivial:
      return {SpectralPosition::at_angle, SpectralPosition::at_conjugate, SpectralPosition::off_spectrum};
    default:
      return {SpectralPosition::at_angle, SpectralPosition::off_spectrum};
  }
}

}  // namespace sik
