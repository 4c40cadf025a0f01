#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include <boost/multiprecision/mpfr.hpp>
#include <boost/rational.hpp>

#include "sik/errors.hpp"

namespace sik {

using Real = boost::multiprecision::mpfr_float;
using Rational = boost::rational<std::int64_t>;

/// Working precision in bits for high-precision arithmetic. Read once from
/// SIK_PRECISION_BITS (default 128).
unsigned precision_bits();

/// Sets the calling thread's mpfr default precision to precision_bits().
/// Every thread that constructs Real values must call this first.
void ensure_precision();

/// Closed real interval [lo, hi] used for certified comparisons.
struct Interval {
  Real lo;
  Real hi;
};

/// A rotation angle stored as a fraction of a full turn (theta / 2pi).
///
/// Rational turns are kept exactly. Irrational turns are kept as a
/// high-precision value together with an error radius; every integer-valued
/// query (floor, integrality of a multiple) is certified against that radius
/// and throws CertificationError instead of guessing.
class Angle {
 public:
  Angle();

  static Angle rational(std::int64_t num, std::int64_t den);
  static Angle rational(const Rational& turns);
  /// High-precision value known to within +-radius.
  static Angle real(const Real& turns, const Real& radius);
  /// Exact decimal string, promoted to working precision.
  static Angle decimal(const std::string& turns);
  /// Value from a double, e.g. a numerically recovered eigenvalue angle.
  static Angle from_double(double turns, double radius);
  /// theta given in radians.
  static Angle from_radians(double theta, double radius);

  bool is_rational() const { return std::holds_alternative<Rational>(value_); }
  const Rational& as_rational() const;

  Real value() const;
  Real radius() const;
  double to_double() const;
  double radians() const;

  /// floor(m * turns), certified.
  std::int64_t floor_times(std::int64_t m) const;
  /// ceiling(m * turns), certified.
  std::int64_t ceil_times(std::int64_t m) const;
  /// True iff m * turns is an integer. Exact for rationals; for reals the
  /// answer is "false" when certifiably non-integer, otherwise throws.
  bool integer_times(std::int64_t m) const;
  /// Enclosure of the fractional part {m * turns}.
  Interval frac_times(std::int64_t m) const;

  /// 1 - turns (the conjugate angle 2pi - theta).
  Angle conjugate() const;
  /// Fractional part of (turns * k) for integer k >= 1, exact if rational.
  Angle scaled(std::int64_t k) const;

  /// Tagged serialization: {"rational":[p,q]} or {"real":"..."}.
  std::string decimal_string() const;

  friend bool operator==(const Angle& a, const Angle& b);

 private:
  struct HighPrec {
    Real value;
    Real radius;
  };
  std::variant<Rational, HighPrec> value_;
};

/// Verdict of the continued-fraction rationality test.
struct RationalityVerdict {
  bool rational = false;
  Rational witness{0};  ///< best convergent found (q <= q_max)
  double error = 0.0;   ///< |x - witness|
};

/// Defaults suit values known to working precision (tolerance far below
/// 1/q_max^2, so only genuine rationals pass).
struct RationalityConfig {
  std::int64_t q_max = 1000000;
  double tolerance = 1e-24;
};

/// For values recovered in double precision, e.g. eigenvalue angles.
inline constexpr RationalityConfig kDoubleRationality{10000, 1e-12};

/// Declares x rational iff some continued-fraction convergent p/q with
/// q <= q_max lies within tolerance of x.
RationalityVerdict rationality_test(const Real& x, const RationalityConfig& cfg = {});

}  // namespace sik
