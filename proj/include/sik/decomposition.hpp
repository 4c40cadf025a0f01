#pragma once

#include <vector>

#include "sik/angle.hpp"

namespace sik {

/// Counts and angle lists of the homotopy normal form f(1) of a symplectic
/// path endpoint.
struct NormalFormDecomposition {
  int n = 0;
  int p_minus = 0;  ///< N1(1, 1)
  int p_zero = 0;   ///< I_2
  int p_plus = 0;   ///< N1(1, -1)
  int q_minus = 0;  ///< N1(-1, 1)
  int q_zero = 0;   ///< -I_2
  int q_plus = 0;   ///< N1(-1, -1)
  std::vector<Angle> thetas;  ///< R(theta) blocks
  std::vector<Angle> alphas;  ///< non-trivial N2 blocks
  std::vector<Angle> betas;   ///< trivial N2 blocks
  int hyp_dim = 0;            ///< dimension of the part with no spectrum on U

  int r() const { return static_cast<int>(thetas.size()); }
  int r_star() const { return static_cast<int>(alphas.size()); }
  int r_zero() const { return static_cast<int>(betas.size()); }

  /// Throws InputError when counts or angles are inconsistent.
  void validate() const;

  /// N1(1,1) plus R/N2 blocks only, with r + 2r* + 2r0 = n - 1.
  bool is_elliptic_shape() const;

  /// Number of 2x2 blocks whose paths carry odd index at m = 1.
  int odd_block_count() const;
};

}  // namespace sik
