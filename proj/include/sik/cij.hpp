#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sik/morse.hpp"

namespace sik {

/// Which identity families held, over every orbit and 1 <= m <= m_bar.
struct CijChecks {
  bool nullity = false;  ///< nu(2m_k - m) = nu(2m_k + m) = nu(m)
  bool plus = false;     ///< i(2m_k + m) = 2N + i(m)
  bool minus = false;    ///< i(2m_k - m) = 2N - i(m) - 2(S+(1) + Q_k(m))
  bool middle = false;   ///< i(2m_k) = 2N - (S+(1) + C - 2 Delta_k)

  bool all() const { return nullity && plus && minus && middle; }
};

struct CijTuple {
  std::int64_t N = 0;
  std::vector<std::int64_t> m;
  int m_bar = 1;
  double delta = 0.125;
  CijChecks checks;
};

struct TupleReport {
  CijChecks checks;
  std::vector<std::string> failures;
  bool ok() const { return checks.all(); }
};

/// Checks every identity family directly from the iteration formulas.
/// Throws PreconditionError when some mean index is <= 0 or the tuple has the
/// wrong length.
TupleReport verify_tuple(const System& sys, const CijTuple& tuple);

struct SearchStats {
  std::int64_t scanned = 0;       ///< m_1 candidates examined
  std::int64_t integral = 0;      ///< candidates with an integral N
  std::int64_t first_orbit = 0;   ///< candidates passing every check on orbit 1
  std::int64_t assembled = 0;     ///< full tuples handed to verify_tuple
  std::int64_t verified = 0;
};

struct SearchResult {
  std::vector<CijTuple> tuples;  ///< sorted by (N, m)
  SearchStats stats;
};

struct SearchOptions {
  int m_bar = 3;
  std::int64_t bound = 1000000;  ///< largest m_1 scanned
  double delta = 0.125;
  std::size_t max_results = 1;   ///< 0 for every tuple within the bound
  unsigned threads = 0;          ///< 0 for hardware concurrency
};

/// Scans m_1 = 1..bound. N is pinned by orbit 1 through
/// 2N = i(gamma_1, 2m_1 + 1) - i(gamma_1, 1), each other m_k is searched in the
/// window the linear bound allows, and assembled tuples are re-verified by
/// verify_tuple. With max_results > 0 the tuples of the smallest m_1 are
/// returned; the result does not depend on the thread count.
SearchResult find_tuples(const System& sys, const SearchOptions& opts = {});

struct DichotomyReport {
  std::int64_t N = 0;
  std::int64_t window_lo = 0;  ///< 2N - 2n
  std::int64_t window_hi = 0;  ///< 2N - 2
  std::int64_t window_sum = 0;
  std::int64_t betti_sum = 0;
  int q = 0;
  int n = 0;
  std::vector<std::int64_t> middle_index;  ///< i(y_k^{2m_k})
  bool certified = false;
  std::vector<std::string> failures;
  std::string verdict;
};

/// Gate (elliptic, nondegenerate, even indices, positive mean, i(y) >= 0),
/// window certificates and the Morse count over [2N - 2n, 2N - 2].
DichotomyReport dichotomy_count(const System& sys, const CijTuple& tuple);

}  // namespace sik
