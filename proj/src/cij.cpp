#include "sik/cij.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace sik {

namespace {

std::string orbit_tag(const OrbitRecord& rec, std::int64_t m) {
  return rec.label + ", m=" + std::to_string(m) + ": ";
}

void require_positive_means(const System& sys) {
  for (const auto& rec : sys) {
    const auto it = rec.iteration();
    const auto exact = it.mean_exact();
    const bool positive = exact ? exact->numerator() > 0 : it.mean() > 0;
    if (!positive) throw PreconditionError("orbit '" + rec.label + "': mean index <= 0, the jump theorem does not apply");
  }
}

// Per-orbit data reused by the search.
struct OrbitCtx {
  const OrbitRecord* rec;
  IndexIteration it;
  std::vector<IndexPair> low;  ///< low[m] = (i(m), nu(m)), m <= m_bar
  int s_plus_one;
  int C;
  double mean;
  std::int64_t bound;

  OrbitCtx(const OrbitRecord& r, int m_bar)
      : rec(&r),
        it(r.iteration()),
        s_plus_one(splitting_numbers(r.dec, Angle::rational(0, 1)).s_plus),
        C(C_of_M(r.dec)),
        mean(static_cast<double>(it.mean())),
        bound(it.linear_bound()) {
    low.push_back({});
    for (int m = 1; m <= m_bar; ++m) low.push_back(it.at(m));
  }

  // Early-exit form of the identity checks for one orbit.
  bool passes(std::int64_t mk, std::int64_t N, int m_bar, double delta) const {
    if (2 * mk <= m_bar) return false;
    for (int m = 1; m <= m_bar; ++m) {
      const IndexPair p = it.at(2 * mk + m);
      if (p.index != 2 * N + low[m].index || p.nullity != low[m].nullity) return false;
    }
    for (int m = 1; m <= m_bar; ++m) {
      const IndexPair p = it.at(2 * mk - m);
      if (p.nullity != low[m].nullity) return false;
      if (p.index != 2 * N - low[m].index - 2 * (s_plus_one + Q_of_m(rec->dec, mk, m))) return false;
    }
    return it.at(2 * mk).index == 2 * N - (s_plus_one + C - 2 * Delta(rec->dec, mk, delta));
  }
};

}  // namespace

TupleReport verify_tuple(const System& sys, const CijTuple& t) {
  require_positive_means(sys);
  if (t.m.size() != sys.size())
    throw PreconditionError("tuple has " + std::to_string(t.m.size()) + " iterates for " + std::to_string(sys.size()) +
                            " orbits");
  if (t.m_bar < 1) throw PreconditionError("m_bar must be positive");
  if (!(t.delta > 0 && t.delta < 0.5)) throw PreconditionError("delta must lie in (0, 1/2)");
  TupleReport rep;
  rep.checks = {true, true, true, true};
  auto fail = [&](bool CijChecks::*flag, std::string msg) {
    rep.checks.*flag = false;
    rep.failures.push_back(std::move(msg));
  };
  if (t.N < 1) fail(&CijChecks::plus, "N must be positive");

  for (std::size_t k = 0; k < sys.size(); ++k) {
    const OrbitRecord& rec = sys[k];
    const IndexIteration it = rec.iteration();
    const std::int64_t mk = t.m[k];
    if (2 * mk <= t.m_bar) {
      fail(&CijChecks::minus, orbit_tag(rec, 0) + "2m_k - m_bar must be positive");
      continue;
    }
    const int sp = splitting_numbers(rec.dec, Angle::rational(0, 1)).s_plus;
    for (std::int64_t m = 1; m <= t.m_bar; ++m) {
      const IndexPair base = it.at(m);
      const IndexPair up = it.at(2 * mk + m);
      const IndexPair down = it.at(2 * mk - m);
      if (up.nullity != base.nullity || down.nullity != base.nullity)
        fail(&CijChecks::nullity, orbit_tag(rec, m) + "nullities " + std::to_string(down.nullity) + ", " +
                                      std::to_string(up.nullity) + " differ from " + std::to_string(base.nullity));
      const std::int64_t want_up = 2 * t.N + base.index;
      if (up.index != want_up)
        fail(&CijChecks::plus, orbit_tag(rec, m) + "i(2m_k+m) = " + std::to_string(up.index) + ", expected " +
                                   std::to_string(want_up));
      const std::int64_t want_down = 2 * t.N - base.index - 2 * (sp + Q_of_m(rec.dec, mk, m));
      if (down.index != want_down)
        fail(&CijChecks::minus, orbit_tag(rec, m) + "i(2m_k-m) = " + std::to_string(down.index) + ", expected " +
                                    std::to_string(want_down));
    }
    const std::int64_t mid = it.at(2 * mk).index;
    const std::int64_t want_mid = 2 * t.N - (sp + C_of_M(rec.dec) - 2 * Delta(rec.dec, mk, t.delta));
    if (mid != want_mid)
      fail(&CijChecks::middle, orbit_tag(rec, 0) + "i(2m_k) = " + std::to_string(mid) + ", expected " +
                                   std::to_string(want_mid));
  }
  return rep;
}

SearchResult find_tuples(const System& sys, const SearchOptions& opts) {
  SearchResult res;
  if (sys.empty()) return res;
  require_positive_means(sys);
  if (opts.m_bar < 1) throw InputError("m_bar must be positive");
  if (!(opts.delta > 0 && opts.delta < 0.5)) throw InputError("delta must lie in (0, 1/2)");
  ensure_precision();

  std::vector<OrbitCtx> ctx;
  for (const auto& rec : sys) ctx.emplace_back(rec, opts.m_bar);

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  const std::int64_t batch = 1 << 14;
  std::vector<std::pair<std::int64_t, CijTuple>> found;  // keyed by m_1
  std::mutex mu;
  std::exception_ptr error;

  auto scan = [&](std::int64_t lo, std::int64_t hi, SearchStats& st, std::vector<std::pair<std::int64_t, CijTuple>>& out) {
    ensure_precision();
    const OrbitCtx& first = ctx[0];
    for (std::int64_t m1 = lo; m1 < hi; ++m1) {
      ++st.scanned;
      const std::int64_t twice_n = first.it.at(2 * m1 + 1).index - first.low[1].index;
      if (twice_n % 2 != 0 || twice_n < 2) continue;
      ++st.integral;
      const std::int64_t N = twice_n / 2;
      if (!first.passes(m1, N, opts.m_bar, opts.delta)) continue;
      ++st.first_orbit;
      CijTuple t;
      t.N = N;
      t.m_bar = opts.m_bar;
      t.delta = opts.delta;
      t.m.push_back(m1);
      bool complete = true;
      for (std::size_t k = 1; k < ctx.size() && complete; ++k) {
        const OrbitCtx& c = ctx[k];
        // (2m_k + 1) * mean lies within bound of 2N + i(gamma_k, 1)
        const double target = static_cast<double>(twice_n + c.low[1].index);
        const auto from = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::floor(((target - c.bound) / c.mean - 1) / 2)) - 1);
        const auto to = static_cast<std::int64_t>(std::ceil(((target + c.bound) / c.mean - 1) / 2)) + 1;
        complete = false;
        for (std::int64_t mk = from; mk <= to; ++mk) {
          if (c.passes(mk, N, opts.m_bar, opts.delta)) {
            t.m.push_back(mk);
            complete = true;
            break;
          }
        }
      }
      if (complete) out.emplace_back(m1, std::move(t));
    }
  };

  for (std::int64_t start = 1; start <= opts.bound; start += batch) {
    const std::int64_t stop = std::min(opts.bound + 1, start + batch);
    const std::int64_t span = stop - start;
    const unsigned nt = static_cast<unsigned>(std::min<std::int64_t>(threads, span));
    std::vector<SearchStats> stats(nt);
    std::vector<std::vector<std::pair<std::int64_t, CijTuple>>> outs(nt);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nt; ++w) {
      const std::int64_t lo = start + span * w / nt, hi = start + span * (w + 1) / nt;
      pool.emplace_back([&, w, lo, hi] {
        try {
          scan(lo, hi, stats[w], outs[w]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    for (unsigned w = 0; w < nt; ++w) {
      res.stats.scanned += stats[w].scanned;
      res.stats.integral += stats[w].integral;
      res.stats.first_orbit += stats[w].first_orbit;
      for (auto& f : outs[w]) found.push_back(std::move(f));
    }
    if (opts.max_results > 0 && found.size() >= opts.max_results) break;
  }

  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (opts.max_results > 0 && found.size() > opts.max_results) found.resize(opts.max_results);
  for (auto& [m1, t] : found) {
    ++res.stats.assembled;
    const TupleReport rep = verify_tuple(sys, t);
    t.checks = rep.checks;
    if (rep.ok()) {
      ++res.stats.verified;
      res.tuples.push_back(std::move(t));
    }
  }
  std::sort(res.tuples.begin(), res.tuples.end(),
            [](const CijTuple& a, const CijTuple& b) { return std::tie(a.N, a.m) < std::tie(b.N, b.m); });
  return res;
}

DichotomyReport dichotomy_count(const System& sys, const CijTuple& t) {
  DichotomyReport rep;
  rep.N = t.N;
  rep.q = static_cast<int>(sys.size());
  rep.n = sys.empty() ? 0 : sys.front().n;
  rep.window_lo = 2 * t.N - 2 * rep.n;
  rep.window_hi = 2 * t.N - 2;
  for (std::int64_t p = rep.window_lo; p <= rep.window_hi; ++p) rep.betti_sum += betti(p);
  auto fail = [&](std::string msg) { rep.failures.push_back(std::move(msg)); };

  // gate: elliptic, nondegenerate, even indices, positive mean, i(y) >= 0
  for (const auto& rec : sys) {
    if (rec.n != rep.n) fail(rec.label + ": dimension differs from the system's");
    if (!rec.dec.is_elliptic_shape()) fail(rec.label + ": normal form is not of elliptic shape");
    if (!rec.cls.nondegenerate) fail(rec.label + ": degenerate orbit");
    if (((rec.seed.i1 - rec.n) % 2 + 2) % 2 != 0) fail(rec.label + ": odd index, even indices fail");
    const std::int64_t iy = rec.seed.i1 - rec.n;
    if (iy < 0) fail(rec.label + ": i(y) = " + std::to_string(iy) + " < 0");
  }
  if (!rep.failures.empty()) {
    rep.verdict = "gate failed";
    return rep;
  }
  require_positive_means(sys);

  const TupleReport tr = verify_tuple(sys, t);
  for (const auto& f : tr.failures) fail("tuple: " + f);
  if (!tr.ok()) {
    rep.verdict = "tuple not verified";
    return rep;
  }

  for (std::size_t k = 0; k < sys.size(); ++k) {
    const OrbitRecord& rec = sys[k];
    const IndexIteration it = rec.iteration();
    const std::int64_t mk = t.m[k];
    // gap i(y^{m+1}) - i(y^m) >= i1 + 1 - r >= 2 for every m, so the window
    // bounds only need checking next to 2m_k
    if (rec.seed.i1 + 1 - rec.dec.r() < 2) fail(rec.label + ": iterate gap below 2 is not excluded");
    const std::int64_t below = it.viterbo(2 * mk - 1).index;
    const std::int64_t above = it.viterbo(2 * mk + 1).index;
    const std::int64_t mid = it.viterbo(2 * mk).index;
    rep.middle_index.push_back(mid);
    if (below > 2 * t.N - 2 * rep.n - 2)
      fail(rec.label + ": i(y^{2m_k-1}) = " + std::to_string(below) + " exceeds 2N-2n-2");
    if (above < 2 * t.N) fail(rec.label + ": i(y^{2m_k+1}) = " + std::to_string(above) + " is below 2N");
    if (mid < rep.window_lo || mid > rep.window_hi)
      fail(rec.label + ": i(y^{2m_k}) = " + std::to_string(mid) + " lies outside [2N-2n, 2N-2]");
  }

  const MorseSeries ms = morse_counts(sys, rep.window_lo, rep.window_hi);
  for (const auto& [p, c] : ms.counts) rep.window_sum += c;
  if (rep.window_sum != rep.q)
    fail("window sum " + std::to_string(rep.window_sum) + " differs from the orbit count " + std::to_string(rep.q));

  rep.certified = rep.failures.empty();
  if (!rep.certified)
    rep.verdict = "certificate failed";
  else if (rep.q == rep.n)
    rep.verdict = "consistent with exactly n";
  else
    rep.verdict = "window sum q = " + std::to_string(rep.q) + " differs from the Betti sum n = " +
                  std::to_string(rep.n) + ": no such hypersurface";
  return rep;
}

}  // namespace sik
