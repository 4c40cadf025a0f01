#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sik/index.hpp"
#include "sik/symplectic.hpp"

namespace sik {

struct RecordClass {
  bool nondegenerate = false;
  OrbitClass orbit_class = OrbitClass::mixed;
};

/// True for angles that are rational turns, exactly or within their radius.
bool angle_is_rational(const Angle& a);

/// Classification read off a normal form. Nondegenerate means 1 is a
/// multiplier of algebraic multiplicity exactly 2 for every iterate.
RecordClass classify_decomposition(const NormalFormDecomposition& dec);

/// One prime closed characteristic: period, normal form of its monodromy and
/// index seed of the associated symplectic path.
struct OrbitRecord {
  std::string label;
  double period = 0.0;
  int n = 0;
  NormalFormDecomposition dec;
  IndexSeed seed;
  RecordClass cls;

  /// Builds and validates (dec.n == n, consistent seed); cls is derived.
  static OrbitRecord make(std::string label, double period, NormalFormDecomposition dec, IndexSeed seed);

  IndexIteration iteration() const { return IndexIteration(dec, seed); }
};

using System = std::vector<OrbitRecord>;

struct Contribution {
  std::int64_t degree = 0;  ///< i(y^m), Viterbo grading
  int rank = 0;             ///< 1 iff (-1)^{i(y^m) - i(y)} = 1
};

/// Throws PreconditionError for degenerate records.
Contribution contribution(const OrbitRecord& rec, std::int64_t m);

struct MorseSeries {
  std::int64_t p_lo = 0;
  std::int64_t p_hi = -1;
  std::map<std::int64_t, std::int64_t> counts;  ///< every p in [p_lo, p_hi]
  std::int64_t below_window = 0;                ///< rank-1 contributions with degree < p_lo

  std::int64_t at(std::int64_t p) const;
};

/// Exact counts over [p_lo, p_hi]. Each orbit is enumerated until
/// m * mean - linear_bound - n exceeds p_hi. Throws PreconditionError when
/// some record has mean <= 0 or is degenerate.
MorseSeries morse_counts(const System& sys, std::int64_t p_lo, std::int64_t p_hi);

/// Last iterate that can still land at degree <= p_hi.
std::int64_t last_relevant_iterate(const OrbitRecord& rec, std::int64_t p_hi);

/// b_p of the free loop space quotient: 1 for even p >= 0, else 0.
int betti(std::int64_t p);

struct MorseRow {
  std::int64_t p = 0;
  std::int64_t m_p = 0;
  int b_p = 0;
  std::int64_t alternating_m = 0;  ///< sum_{j <= p} (-1)^{p-j} M_j
  std::int64_t alternating_b = 0;
  bool holds = true;               ///< M_p >= b_p and alternating_m >= alternating_b
};

struct MorseReport {
  std::vector<MorseRow> rows;
  bool inequalities_hold = true;
  bool equality = true;  ///< M_p = b_p on every row
  std::optional<std::int64_t> first_violation;
  std::optional<std::int64_t> first_inequality;  ///< first p with M_p != b_p
};

/// Checks the Morse inequalities on [p_lo, p_max]. Throws PreconditionError
/// when p_max > p_hi, or when contributions below the window make the
/// alternating sums uncertifiable.
MorseReport morse_inequalities(const MorseSeries& ms, std::int64_t p_max);

/// (-1)^{i(y)} if i(y^2) - i(y) is even, else (-1)^{i(y)} / 2.
Rational average_euler(const OrbitRecord& rec);

struct IdentityTerm {
  std::string label;
  Real mean;
  std::optional<Rational> mean_exact;
  Rational chi;
  int sign = 0;  ///< sign of the mean; 0 when it vanishes within the angle radii
};

struct IdentityReport {
  std::vector<IdentityTerm> terms;
  Real sum_pos;
  Real sum_neg;
  std::optional<Rational> exact_pos;  ///< when every positive mean is rational
  std::optional<Rational> exact_neg;
  bool applicable = true;             ///< false when some mean vanishes
  std::vector<std::string> zero_mean; ///< labels of the offending records

  /// sum_pos = 1/2 (exactly or within tol) and sum_neg = 0 exactly.
  bool holds(double tol = 1e-9) const;
};

IdentityReport mean_index_identity(const System& sys);

}  // namespace sik
