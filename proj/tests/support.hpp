// Random inputs shared by the module tests and the acceptance runner.
#pragma once

#include <random>
#include <vector>

#include "sik/index.hpp"
#include "sik/symplectic.hpp"

namespace sik::testing {

/// Rational turns p/q with q <= 12, avoiding 0 and 1/2.
inline Angle random_rational_angle(std::mt19937& rng) {
  std::uniform_int_distribution<int> den(3, 12);
  const int q = den(rng);
  std::uniform_int_distribution<int> num(1, q - 1);
  int p = num(rng);
  while (2 * p == q) p = num(rng);
  return Angle::rational(p, q);
}

/// Irrational-looking turns from a double, kept away from 0, 1/2 and 1.
inline Angle random_real_angle(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.02, 0.98);
  double t = u(rng);
  while (std::abs(t - 0.5) < 0.02) t = u(rng);
  return Angle::from_double(t, 1e-15);
}

/// Block product of half-dimension <= max_n drawn from every block family.
inline std::vector<BasicBlock> random_blocks(std::mt19937& rng, int max_n, bool rational_angles) {
  std::uniform_int_distribution<int> kind(0, 11);
  std::vector<BasicBlock> out;
  int n = 0;
  auto angle = [&] { return rational_angles ? random_rational_angle(rng) : random_real_angle(rng); };
  while (true) {
    const int k = kind(rng);
    const int dim = (k == 9 || k == 10) ? 2 : 1;
    if (n + dim > max_n) {
      if (n > 0) break;
      continue;
    }
    switch (k) {
      case 0: out.push_back(BasicBlock::n1(1, 1)); break;
      case 1: out.push_back(BasicBlock::n1(1, 0)); break;
      case 2: out.push_back(BasicBlock::n1(1, -1)); break;
      case 3: out.push_back(BasicBlock::n1(-1, 1)); break;
      case 4: out.push_back(BasicBlock::n1(-1, 0)); break;
      case 5: out.push_back(BasicBlock::n1(-1, -1)); break;
      case 6:
      case 7: out.push_back(BasicBlock::r(angle())); break;
      case 8: out.push_back(BasicBlock::d(2.5)); break;
      case 9: out.push_back(BasicBlock::n2(angle(), Triviality::nontrivial)); break;
      case 10: out.push_back(BasicBlock::n2(angle(), Triviality::trivial)); break;
      default: out.push_back(BasicBlock::d(-1.7)); break;
    }
    n += dim;
    std::uniform_int_distribution<int> stop(0, 2);
    if (n == max_n || stop(rng) == 0) break;
  }
  return out;
}

/// Elliptic shape N1(1,1) + R/N2 blocks with n - 1 = r + 2 r* + 2 r0.
inline NormalFormDecomposition random_elliptic(std::mt19937& rng, int n) {
  NormalFormDecomposition dec;
  dec.n = n;
  dec.p_minus = 1;
  int left = n - 1;
  std::uniform_int_distribution<int> coin(0, 3);
  while (left > 0) {
    const int c = coin(rng);
    if (left >= 2 && c == 0) {
      dec.alphas.push_back(random_real_angle(rng));
      left -= 2;
    } else if (left >= 2 && c == 1) {
      dec.betas.push_back(random_real_angle(rng));
      left -= 2;
    } else {
      dec.thetas.push_back(random_real_angle(rng));
      left -= 1;
    }
  }
  return dec;
}

/// Seed with the parity and nullity the decomposition demands; i1 >= lo.
inline IndexSeed consistent_seed(std::mt19937& rng, const NormalFormDecomposition& dec, int lo, int hi) {
  std::uniform_int_distribution<int> pick(lo, hi);
  std::int64_t i1 = pick(rng);
  if (dec.hyp_dim == 0 && ((i1 - dec.odd_block_count()) % 2 + 2) % 2 != 0) ++i1;
  return {i1, dec.p_minus + 2 * dec.p_zero + dec.p_plus};
}

}  // namespace sik::testing
