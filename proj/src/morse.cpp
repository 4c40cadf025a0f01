#include "sik/morse.hpp"

#include <boost/multiprecision/mpfr.hpp>

namespace sik {

bool angle_is_rational(const Angle& a) {
  if (a.is_rational()) return true;
  ensure_precision();
  // double-derived angles get the coarse profile; q_max 1e6 at 1e-14 would
  // flag random doubles as rational far too often
  const double r = static_cast<double>(a.radius());
  RationalityConfig cfg = r > 1e-20 ? kDoubleRationality : RationalityConfig{};
  if (10 * r > cfg.tolerance) cfg.tolerance = 10 * r;
  return rationality_test(a.value(), cfg).rational;
}

RecordClass classify_decomposition(const NormalFormDecomposition& d) {
  RecordClass out;
  bool rational_angle = false;
  for (const auto* list : {&d.thetas, &d.alphas, &d.betas})
    for (const auto& a : *list) rational_angle = rational_angle || angle_is_rational(a);

  const int ones = d.p_minus + d.p_zero + d.p_plus;
  const int minus_ones = d.q_minus + d.q_zero + d.q_plus;
  out.nondegenerate = d.p_zero == 0 && d.p_minus + d.p_plus == 1 && minus_ones == 0 && !rational_angle;

  const int circle_blocks = ones + minus_ones + d.r() + d.r_star() + d.r_zero();
  if (d.hyp_dim == 0) {
    const bool irrational = ones == 1 && d.p_zero == 0 && minus_ones == 0 && !rational_angle &&
                            circle_blocks > 1;
    out.orbit_class = irrational ? OrbitClass::irrationally_elliptic : OrbitClass::elliptic;
  } else if (circle_blocks == ones && ones == 1 && d.p_zero == 0) {
    out.orbit_class = OrbitClass::hyperbolic;
  } else {
    out.orbit_class = OrbitClass::mixed;
  }
  return out;
}

OrbitRecord OrbitRecord::make(std::string label, double period, NormalFormDecomposition dec, IndexSeed seed) {
  if (!(period > 0)) throw InputError("orbit '" + label + "': period must be positive");
  validate_seed(dec, seed);
  OrbitRecord r;
  r.label = std::move(label);
  r.period = period;
  r.n = dec.n;
  r.cls = classify_decomposition(dec);
  r.dec = std::move(dec);
  r.seed = seed;
  return r;
}

Contribution contribution(const OrbitRecord& rec, std::int64_t m) {
  if (!rec.cls.nondegenerate) throw PreconditionError("orbit '" + rec.label + "' is degenerate");
  const IndexIteration it = rec.iteration();
  const std::int64_t base = it.viterbo(1).index;
  const std::int64_t deg = it.viterbo(m).index;
  return {deg, (deg - base) % 2 == 0 ? 1 : 0};
}

std::int64_t MorseSeries::at(std::int64_t p) const {
  const auto it = counts.find(p);
  return it == counts.end() ? 0 : it->second;
}

namespace {

// Sign of the mean index; 0 when the mean is within the angle radii of zero.
int mean_sign(const Real& mean, const OrbitRecord& rec, const std::optional<Rational>& exact) {
  if (exact) return exact->numerator() > 0 ? 1 : (exact->numerator() < 0 ? -1 : 0);
  Real radius = Real("1e-30");
  for (const auto& t : rec.dec.thetas) radius += 2 * t.radius();
  if (mean > radius) return 1;
  if (mean < -radius) return -1;
  return 0;
}

}  // namespace

std::int64_t last_relevant_iterate(const OrbitRecord& rec, std::int64_t p_hi) {
  ensure_precision();
  const IndexIteration it = rec.iteration();
  const Real mean = it.mean();
  if (mean_sign(mean, rec, it.mean_exact()) <= 0)
    throw PreconditionError("orbit '" + rec.label + "': mean index <= 0, window counts may be infinite");
  // i(y^m) >= m * mean - bound - n, so larger m cannot reach p_hi
  const Real top = Real(p_hi + it.linear_bound() + rec.n) / mean;
  const Real m = floor(top) + 1;
  if (m > Real(std::int64_t{1} << 40)) throw PreconditionError("orbit '" + rec.label + "': window needs too many iterates");
  return std::max<std::int64_t>(1, m.convert_to<std::int64_t>());
}

MorseSeries morse_counts(const System& sys, std::int64_t p_lo, std::int64_t p_hi) {
  MorseSeries ms;
  ms.p_lo = p_lo;
  ms.p_hi = p_hi;
  for (std::int64_t p = p_lo; p <= p_hi; ++p) ms.counts[p] = 0;
  for (const auto& rec : sys) {
    if (!rec.cls.nondegenerate) throw PreconditionError("orbit '" + rec.label + "' is degenerate");
    const std::int64_t last = last_relevant_iterate(rec, p_hi);
    for (std::int64_t m = 1; m <= last; ++m) {
      const Contribution c = contribution(rec, m);
      if (c.rank == 0 || c.degree > p_hi) continue;
      if (c.degree < p_lo)
        ++ms.below_window;
      else
        ++ms.counts[c.degree];
    }
  }
  return ms;
}

int betti(std::int64_t p) { return p >= 0 && p % 2 == 0 ? 1 : 0; }

MorseReport morse_inequalities(const MorseSeries& ms, std::int64_t p_max) {
  MorseReport rep;
  if (p_max < ms.p_lo) return rep;
  if (p_max > ms.p_hi) throw PreconditionError("morse_inequalities: p_max lies above the counted window");
  if (ms.below_window > 0)
    throw PreconditionError("morse_inequalities: contributions below the window; lower p_lo");
  if (ms.p_lo > 0) throw PreconditionError("morse_inequalities: window must start at or below 0");
  std::int64_t alt_m = 0, alt_b = 0;
  for (std::int64_t p = ms.p_lo; p <= p_max; ++p) {
    MorseRow row;
    row.p = p;
    row.m_p = ms.at(p);
    row.b_p = betti(p);
    alt_m = row.m_p - alt_m;
    alt_b = row.b_p - alt_b;
    row.alternating_m = alt_m;
    row.alternating_b = alt_b;
    row.holds = row.m_p >= row.b_p && alt_m >= alt_b;
    if (!row.holds && !rep.first_violation) rep.first_violation = p;
    if (row.m_p != row.b_p && !rep.first_inequality) rep.first_inequality = p;
    rep.inequalities_hold = rep.inequalities_hold && row.holds;
    rep.equality = rep.equality && row.m_p == row.b_p;
    rep.rows.push_back(row);
  }
  return rep;
}

Rational average_euler(const OrbitRecord& rec) {
  if (!rec.cls.nondegenerate) throw PreconditionError("orbit '" + rec.label + "' is degenerate");
  const IndexIteration it = rec.iteration();
  const std::int64_t i1 = it.viterbo(1).index;
  const std::int64_t gap = it.viterbo(2).index - i1;
  const Rational sign((i1 % 2 == 0) ? 1 : -1);
  return gap % 2 == 0 ? sign : sign / 2;
}

IdentityReport mean_index_identity(const System& sys) {
  ensure_precision();
  IdentityReport rep;
  rep.sum_pos = 0;
  rep.sum_neg = 0;
  Rational pos(0), neg(0);
  bool pos_exact = true, neg_exact = true;
  for (const auto& rec : sys) {
    const IndexIteration it = rec.iteration();
    IdentityTerm term;
    term.label = rec.label;
    term.mean = it.mean();
    term.mean_exact = it.mean_exact();
    term.sign = mean_sign(term.mean, rec, term.mean_exact);
    term.chi = average_euler(rec);
    const Real chi = Real(term.chi.numerator()) / term.chi.denominator();
    if (term.sign > 0) {
      rep.sum_pos += chi / term.mean;
      if (term.mean_exact) pos += term.chi / *term.mean_exact; else pos_exact = false;
    } else if (term.sign < 0) {
      rep.sum_neg += chi / term.mean;
      if (term.mean_exact) neg += term.chi / *term.mean_exact; else neg_exact = false;
    } else {
      rep.applicable = false;
      rep.zero_mean.push_back(rec.label);
    }
    rep.terms.push_back(std::move(term));
  }
  if (pos_exact) rep.exact_pos = pos;
  if (neg_exact) rep.exact_neg = neg;
  return rep;
}

bool IdentityReport::holds(double tol) const {
  if (!applicable) return false;
  const bool neg_ok = exact_neg ? exact_neg->numerator() == 0 : false;
  if (exact_pos) return neg_ok && *exact_pos == Rational(1, 2);
  return neg_ok && abs(sum_pos - Real(1) / 2) <= tol;
}

}  // namespace sik
