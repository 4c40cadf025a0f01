#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sik/angle.hpp"
#include "sik/decomposition.hpp"
#include "sik/splitting.hpp"

namespace sik {

/// Index and nullity of the first iterate, i(gamma, 1) and nu(gamma, 1).
struct IndexSeed {
  std::int64_t i1 = 0;
  std::int64_t nu1 = 0;
};

struct IndexPair {
  std::int64_t index = 0;
  std::int64_t nullity = 0;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// Throws InputError unless dec is valid, nu1 = p- + 2 p0 + p+ (the dimension
/// of ker(M - I) for the normal form) and, when hyp_dim = 0, i1 has the
/// parity of dec.odd_block_count().
void validate_seed(const NormalFormDecomposition& dec, const IndexSeed& seed);

/// Iteration formulas for one decomposition and seed, validated once.
///
/// Floor and ceiling terms are exact for rational angles and certified for
/// high-precision ones; an uncertifiable term throws CertificationError.
class IndexIteration {
 public:
  IndexIteration(NormalFormDecomposition dec, IndexSeed seed);

  const NormalFormDecomposition& decomposition() const { return dec_; }
  const IndexSeed& seed() const { return seed_; }

  /// (i(gamma, m), nu(gamma, m)); m >= 1.
  IndexPair at(std::int64_t m) const;
  /// Index shifted by -n, nullity unchanged.
  IndexPair viterbo(std::int64_t m) const;

  /// i1 + p- + p0 - r + sum_j theta_j / pi.
  Real mean() const;
  /// Exact mean when every theta is rational.
  std::optional<Rational> mean_exact() const;
  /// |i(gamma, m) - m * mean| <= linear_bound() for every m.
  std::int64_t linear_bound() const;

 private:
  NormalFormDecomposition dec_;
  IndexSeed seed_;
};

IndexPair iterate_index(const NormalFormDecomposition& dec, const IndexSeed& seed, std::int64_t m);
Real mean_index(const NormalFormDecomposition& dec, const IndexSeed& seed);

/// Viterbo-grading index of the m-th iterate: (i(gamma, m) - n, nu(gamma, m)).
/// Throws InputError when dec.n != n.
IndexPair viterbo_index(const NormalFormDecomposition& dec, const IndexSeed& seed, std::int64_t m, int n);

/// Residue of the Viterbo index mod 2 on the elliptic shape. Always 0 for a
/// consistent seed; an odd value throws InconsistencyError.
int parity(const NormalFormDecomposition& dec, const IndexSeed& seed, std::int64_t m);

/// Splitting-number table pinned by the numeric oracle at build time.
const std::vector<SplittingEntry>& splitting_table();
/// Throws InputError for a (kind, position) pair absent from the table.
SplittingPair table_value(BlockKind kind, SpectralPosition where);

/// (S+, S-) of the normal form at omega = e^{2 pi i turns}, turns in [0, 1).
SplittingPair splitting_numbers(const NormalFormDecomposition& dec, const Angle& omega);

/// Sum of S- over the spectrum on U minus {1}.
int C_of_M(const NormalFormDecomposition& dec);
/// Sum of S- at e^{i theta} over 0 < {m_k theta / pi} < delta; delta in (0, 1/2).
int Delta(const NormalFormDecomposition& dec, std::int64_t m_k, double delta);
/// Sum of S- at e^{i theta} != 1 in the spectrum with m_k theta / pi and
/// m theta / (2 pi) both integers.
int Q_of_m(const NormalFormDecomposition& dec, std::int64_t m_k, std::int64_t m);

}  // namespace sik
