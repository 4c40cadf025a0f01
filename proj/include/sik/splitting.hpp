#pragma once

#include <string>
#include <vector>

namespace sik {

/// Basic-block families that share splitting numbers.
enum class BlockKind {
  n1_one_pos,     ///< N1(1, b), b > 0
  n1_one_zero,    ///< I_2
  n1_one_neg,     ///< N1(1, b), b < 0
  n1_minus_pos,   ///< N1(-1, b), b > 0
  n1_minus_zero,  ///< -I_2
  n1_minus_neg,   ///< N1(-1, b), b < 0
  rotation,       ///< R(theta)
  n2_nontrivial,
  n2_trivial,
  hyperbolic,     ///< D(lambda), no spectrum on U
};

/// Where omega sits relative to the block's spectrum. For N1 blocks
/// at_angle is the eigenvalue +-1; for R and N2 blocks it is e^{i theta}
/// and at_conjugate is e^{-i theta}.
enum class SpectralPosition { at_angle, at_conjugate, off_spectrum };

struct SplittingPair {
  int s_plus = 0;
  int s_minus = 0;
  friend bool operator==(const SplittingPair&, const SplittingPair&) = default;
};

struct SplittingEntry {
  BlockKind kind;
  SpectralPosition where;
  SplittingPair value;
};

const char* to_string(BlockKind k);
const char* to_string(SpectralPosition p);
/// Throws InputError on unknown names.
BlockKind block_kind_from_string(const std::string& s);
SpectralPosition position_from_string(const std::string& s);

const std::vector<BlockKind>& all_block_kinds();
/// Positions that make sense for a kind (at_conjugate only for R and N2).
std::vector<SpectralPosition> positions_for(BlockKind k);

}  // namespace sik
