#include "sik/index.hpp"

namespace sik {

const std::vector<SplittingEntry>& splitting_table() {
  static const std::vector<SplittingEntry> table = {
#include "splitting_table.inc"
  };
  return table;
}

SplittingPair table_value(BlockKind kind, SpectralPosition where) {
  for (const auto& e : splitting_table()) {
    if (e.kind == kind && e.where == where) return e.value;
  }
  throw InputError(std::string("splitting table has no entry for ") + to_string(kind) + " " + to_string(where));
}

}  // namespace sik
