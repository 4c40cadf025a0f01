#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sik/morse.hpp"
#include "sik/oracle.hpp"

namespace sik {

/// A radius given as a decimal string or as "a^(p/q)".
struct Radius {
  std::string text;
  Real value;
};

Radius parse_radius(const std::string& text);

struct EllipsoidSpec {
  std::vector<Radius> radii;

  /// Comma-separated radii, e.g. "1,2^(1/4),3^(1/3)".
  static EllipsoidSpec parse(const std::string& list);
  int n() const { return static_cast<int>(radii.size()); }
};

struct PairVerdict {
  int i = 0;
  int j = 0;
  RationalityVerdict ratio;    ///< r_j / r_i
  RationalityVerdict squared;  ///< r_j^2 / r_i^2, which sets the rotation angles
};

struct NonresonanceReport {
  bool nonresonant = true;
  std::vector<PairVerdict> pairs;
};

/// Continued-fraction verdict for every pair i < j, on both r_j/r_i and its
/// square. Nonresonant iff no ratio or squared ratio is rational.
NonresonanceReport weakly_nonresonant(const EllipsoidSpec& spec);

/// Rotation of plane j over one period of orbit k, in turns: frac(r_k^2 / r_j^2).
Angle ellipsoid_angle(const EllipsoidSpec& spec, int k, int j);

/// Linearized flow t -> exp(t J Hess H) over the period 2 pi r_k^2 of orbit k.
PathSpec ellipsoid_path(const EllipsoidSpec& spec, int k);

struct EllipsoidOptions {
  OracleConfig oracle;
  /// Precomputed i(gamma_k, 1); the oracle is skipped when present.
  std::optional<std::vector<std::int64_t>> seeds;
};

/// n records, orbit k of period 2 pi r_k^2 with normal form
/// N1(1,1) + R(frac(r_k^2 / r_j^2)) over j != k and nu1 = 1. Throws
/// PreconditionError for resonant radii.
System build_system(const EllipsoidSpec& spec, const EllipsoidOptions& opts = {});

/// i(gamma_k, 1) from the numeric oracle on ellipsoid_path(spec, k).
std::int64_t ellipsoid_seed(const EllipsoidSpec& spec, int k, const OracleConfig& cfg = {});

}  // namespace sik
