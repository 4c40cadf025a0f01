#include "sik/index.hpp"

#include <string>

namespace sik {

namespace {

// Block with spectrum on U, at its angle in turns.
struct CirclePoint {
  Angle turns;
  BlockKind kind;
  SpectralPosition where;
  int count;
};

std::vector<CirclePoint> circle_points(const NormalFormDecomposition& dec) {
  const Angle one = Angle::rational(0, 1);
  const Angle minus_one = Angle::rational(1, 2);
  std::vector<CirclePoint> out;
  auto add = [&](const Angle& a, BlockKind k, SpectralPosition w, int c) {
    if (c > 0) out.push_back({a, k, w, c});
  };
  add(one, BlockKind::n1_one_pos, SpectralPosition::at_angle, dec.p_minus);
  add(one, BlockKind::n1_one_zero, SpectralPosition::at_angle, dec.p_zero);
  add(one, BlockKind::n1_one_neg, SpectralPosition::at_angle, dec.p_plus);
  add(minus_one, BlockKind::n1_minus_pos, SpectralPosition::at_angle, dec.q_minus);
  add(minus_one, BlockKind::n1_minus_zero, SpectralPosition::at_angle, dec.q_zero);
  add(minus_one, BlockKind::n1_minus_neg, SpectralPosition::at_angle, dec.q_plus);
  auto add_pair = [&](const std::vector<Angle>& angles, BlockKind k) {
    for (const auto& a : angles) {
      add(a, k, SpectralPosition::at_angle, 1);
      add(a.conjugate(), k, SpectralPosition::at_conjugate, 1);
    }
  };
  add_pair(dec.thetas, BlockKind::rotation);
  add_pair(dec.alphas, BlockKind::n2_nontrivial);
  add_pair(dec.betas, BlockKind::n2_trivial);
  return out;
}

bool is_one(const Angle& a) { return a.is_rational() && a.as_rational() == Rational(0); }

// Equality of two points of U given in turns, certified.
bool same_point(const Angle& a, const Angle& b) {
  if (a.is_rational() && b.is_rational()) return a.as_rational() == b.as_rational();
  if (a == b) return true;
  Real d = abs(a.value() - b.value());
  if (d > Real(0.5)) d = Real(1) - d;
  if (d > a.radius() + b.radius()) return false;
  throw CertificationError("cannot decide whether two unit-circle points coincide");
}

std::int64_t even(std::int64_t m) { return m % 2 == 0 ? 1 : 0; }

std::int64_t phi(const Angle& a, std::int64_t m) { return a.integer_times(m) ? 0 : 1; }

}  // namespace

void validate_seed(const NormalFormDecomposition& dec, const IndexSeed& seed) {
  dec.validate();
  const std::int64_t kernel = dec.p_minus + 2 * dec.p_zero + dec.p_plus;
  if (seed.nu1 != kernel) {
    throw InputError("seed: nu1 = " + std::to_string(seed.nu1) + " but the decomposition has nullity " +
                     std::to_string(kernel) + " at 1");
  }
  if (dec.hyp_dim == 0 && ((seed.i1 - dec.odd_block_count()) % 2 + 2) % 2 != 0) {
    throw InputError("seed: i1 = " + std::to_string(seed.i1) + " has the wrong parity for " +
                     std::to_string(dec.odd_block_count()) + " odd-type blocks");
  }
}

IndexIteration::IndexIteration(NormalFormDecomposition dec, IndexSeed seed)
    : dec_(std::move(dec)), seed_(seed) {
  validate_seed(dec_, seed_);
}

IndexPair IndexIteration::at(std::int64_t m) const {
  if (m < 1) throw InputError("iterate m must be positive");
  const auto& d = dec_;
  const std::int64_t r = d.r();
  std::int64_t i = m * (seed_.i1 + d.p_minus + d.p_zero - r) - r - d.p_minus - d.p_zero -
                   even(m) * (d.q_zero + d.q_plus) - 2 * d.r_star();
  std::int64_t nu = seed_.nu1 + even(m) * (d.q_minus + 2 * d.q_zero + d.q_plus) +
                    2 * (r + d.r_star() + d.r_zero());
  for (const auto& t : d.thetas) {
    i += 2 * t.ceil_times(m);
    nu -= 2 * phi(t, m);
  }
  for (const auto& a : d.alphas) {
    const std::int64_t f = phi(a, m);
    i += 2 * f;
    nu -= 2 * f;
  }
  for (const auto& b : d.betas) nu -= 2 * phi(b, m);
  return {i, nu};
}

IndexPair IndexIteration::viterbo(std::int64_t m) const {
  IndexPair p = at(m);
  p.index -= dec_.n;
  return p;
}

Real IndexIteration::mean() const {
  ensure_precision();
  Real out = Real(seed_.i1 + dec_.p_minus + dec_.p_zero - dec_.r());
  for (const auto& t : dec_.thetas) out += 2 * t.value();
  return out;
}

std::optional<Rational> IndexIteration::mean_exact() const {
  Rational out(seed_.i1 + dec_.p_minus + dec_.p_zero - dec_.r());
  for (const auto& t : dec_.thetas) {
    if (!t.is_rational()) return std::nullopt;
    out += 2 * t.as_rational();
  }
  return out;
}

std::int64_t IndexIteration::linear_bound() const {
  const auto& d = dec_;
  return d.r() + d.p_minus + d.p_zero + d.q_zero + d.q_plus + 2 * d.r_star();
}

IndexPair iterate_index(const NormalFormDecomposition& dec, const IndexSeed& seed, std::int64_t m) {
  return IndexIteration(dec, seed).at(m);
}

Real mean_index(const NormalFormDecomposition& dec, const IndexSeed& seed) {
  return IndexIteration(dec, seed).mean();
}

IndexPair viterbo_index(const NormalFormDecomposition& dec, const IndexSeed& seed, std::int64_t m, int n) {
  if (dec.n != n) {
    throw InputError("viterbo_index: decomposition has n = " + std::to_string(dec.n) + ", expected " +
                     std::to_string(n));
  }
  return IndexIteration(dec, seed).viterbo(m);
}

int parity(const NormalFormDecomposition& dec, const IndexSeed& seed, std::int64_t m) {
  if (!dec.is_elliptic_shape()) throw PreconditionError("parity: decomposition is not of elliptic shape");
  const std::int64_t i = IndexIteration(dec, seed).viterbo(m).index;
  if (i % 2 != 0) {
    throw InconsistencyError("odd Viterbo index " + std::to_string(i) + " at m = " + std::to_string(m) +
                             " on the elliptic shape; the seed is inconsistent");
  }
  return 0;
}

SplittingPair splitting_numbers(const NormalFormDecomposition& dec, const Angle& omega) {
  dec.validate();
  if (omega.value() < 0 || omega.value() >= 1) throw InputError("omega turns must lie in [0, 1)");
  SplittingPair out;
  auto add = [&](BlockKind k, SpectralPosition w, int count) {
    const SplittingPair v = table_value(k, w);
    out.s_plus += count * v.s_plus;
    out.s_minus += count * v.s_minus;
  };
  const bool at_one = same_point(omega, Angle::rational(0, 1));
  const bool at_minus_one = same_point(omega, Angle::rational(1, 2));
  const auto one_pos = at_one ? SpectralPosition::at_angle : SpectralPosition::off_spectrum;
  const auto minus_pos = at_minus_one ? SpectralPosition::at_angle : SpectralPosition::off_spectrum;
  add(BlockKind::n1_one_pos, one_pos, dec.p_minus);
  add(BlockKind::n1_one_zero, one_pos, dec.p_zero);
  add(BlockKind::n1_one_neg, one_pos, dec.p_plus);
  add(BlockKind::n1_minus_pos, minus_pos, dec.q_minus);
  add(BlockKind::n1_minus_zero, minus_pos, dec.q_zero);
  add(BlockKind::n1_minus_neg, minus_pos, dec.q_plus);
  auto add_pair = [&](const std::vector<Angle>& angles, BlockKind k) {
    for (const auto& a : angles) {
      if (same_point(omega, a)) {
        add(k, SpectralPosition::at_angle, 1);
      } else if (same_point(omega, a.conjugate())) {
        add(k, SpectralPosition::at_conjugate, 1);
      } else {
        add(k, SpectralPosition::off_spectrum, 1);
      }
    }
  };
  add_pair(dec.thetas, BlockKind::rotation);
  add_pair(dec.alphas, BlockKind::n2_nontrivial);
  add_pair(dec.betas, BlockKind::n2_trivial);
  add(BlockKind::hyperbolic, SpectralPosition::off_spectrum, dec.hyp_dim / 2);
  return out;
}

int C_of_M(const NormalFormDecomposition& dec) {
  dec.validate();
  int total = 0;
  for (const auto& p : circle_points(dec)) {
    if (!is_one(p.turns)) total += p.count * table_value(p.kind, p.where).s_minus;
  }
  return total;
}

int Delta(const NormalFormDecomposition& dec, std::int64_t m_k, double delta) {
  dec.validate();
  if (m_k < 1) throw InputError("Delta: m_k must be positive");
  if (!(delta > 0 && delta < 0.5)) throw InputError("Delta: delta must lie in (0, 1/2)");
  ensure_precision();
  const Real d(delta);
  int total = 0;
  for (const auto& p : circle_points(dec)) {
    if (is_one(p.turns)) continue;
    // {m_k theta / pi} is the fractional part of 2 m_k turns
    const Interval f = p.turns.frac_times(2 * m_k);
    bool inside;
    if (f.lo > 0 && f.hi < d) {
      inside = true;
    } else if (f.hi <= 0 || f.lo >= d) {
      inside = false;
    } else {
      throw CertificationError("Delta: cannot place {m_k theta / pi} relative to 0 and delta");
    }
    if (inside) total += p.count * table_value(p.kind, p.where).s_minus;
  }
  return total;
}

int Q_of_m(const NormalFormDecomposition& dec, std::int64_t m_k, std::int64_t m) {
  dec.validate();
  if (m_k < 1 || m < 1) throw InputError("Q_of_m: m_k and m must be positive");
  int total = 0;
  for (const auto& p : circle_points(dec)) {
    if (is_one(p.turns)) continue;
    if (p.turns.integer_times(2 * m_k) && p.turns.integer_times(m)) {
      total += p.count * table_value(p.kind, p.where).s_minus;
    }
  }
  return total;
}

}  // namespace sik
