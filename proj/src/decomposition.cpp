#include "sik/decomposition.hpp"

#include <string>

namespace sik {

namespace {

void check_angle(const Angle& a, const char* list) {
  const Real v = a.value();
  const Real r = a.radius();
  if (v - r <= 0 || v + r >= 1) {
    throw InputError(std::string(list) + " entry must lie strictly inside (0, 1) turns");
  }
  if (a.is_rational()) {
    if (a.as_rational() == Rational(1, 2)) {
      throw InputError(std::string(list) + " entry equals 1/2 turn (angle pi)");
    }
  } else if (abs(v - Real(0.5)) <= r) {
    throw InputError(std::string(list) + " entry is indistinguishable from 1/2 turn");
  }
}

}  // namespace

void NormalFormDecomposition::validate() const {
  if (n < 1) throw InputError("decomposition: n must be positive");
  for (int c : {p_minus, p_zero, p_plus, q_minus, q_zero, q_plus, hyp_dim}) {
    if (c < 0) throw InputError("decomposition: negative count");
  }
  if (hyp_dim % 2 != 0) throw InputError("decomposition: hyp_dim must be even");
  const int total = p_minus + p_zero + p_plus + q_minus + q_zero + q_plus + r() +
                    2 * r_star() + 2 * r_zero() + hyp_dim / 2;
  if (total != n) {
    throw InputError("decomposition: block dimensions sum to " + std::to_string(total) +
                     ", expected n = " + std::to_string(n));
  }
  for (const auto& a : thetas) check_angle(a, "thetas");
  for (const auto& a : alphas) check_angle(a, "alphas");
  for (const auto& a : betas) check_angle(a, "betas");
}

bool NormalFormDecomposition::is_elliptic_shape() const {
  return p_minus == 1 && p_zero == 0 && p_plus == 0 && q_minus == 0 && q_zero == 0 &&
         q_plus == 0 && hyp_dim == 0 && r() + 2 * r_star() + 2 * r_zero() == n - 1;
}

int NormalFormDecomposition::odd_block_count() const {
  return p_minus + p_zero + q_minus + q_zero + q_plus + r();
}

}  // namespace sik
