#include "sik/angle.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

namespace sik {

namespace {

unsigned read_precision_bits() {
  const char* env = std::getenv("SIK_PRECISION_BITS");
  if (env == nullptr || *env == '\0') return 128;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 64 || v > 4096) {
    throw InputError("SIK_PRECISION_BITS must be an integer in [64, 4096]");
  }
  return static_cast<unsigned>(v);
}

std::int64_t floor_div(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<std::int64_t>(q);
}

Real default_radius(const Real& v) {
  using std::abs;
  Real scale = abs(v);
  if (scale < 1) scale = 1;
  // a few ulps at working precision
  return scale * boost::multiprecision::ldexp(Real(1), -static_cast<int>(precision_bits()) + 4);
}

std::int64_t to_int64(const Real& v) {
  if (v > Real(std::numeric_limits<std::int64_t>::max()) ||
      v < Real(std::numeric_limits<std::int64_t>::min())) {
    throw CertificationError("integer part exceeds 64-bit range");
  }
  return v.convert_to<std::int64_t>();
}

}  // namespace

unsigned precision_bits() {
  static const unsigned bits = read_precision_bits();
  return bits;
}

void ensure_precision() {
  static std::once_flag once;
  std::call_once(once, [] {
    const unsigned digits10 =
        static_cast<unsigned>(std::ceil(precision_bits() * 0.30102999566398120)) + 2;
    Real::default_precision(digits10);
  });
}

Angle::Angle() : value_(Rational(0)) {}

Angle Angle::rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InputError("rational angle with zero denominator");
  return rational(Rational(num, den));
}

Angle Angle::rational(const Rational& turns) {
  Angle a;
  a.value_ = turns;
  return a;
}

Angle Angle::real(const Real& turns, const Real& radius) {
  ensure_precision();
  Angle a;
  using std::abs;
  a.value_ = HighPrec{turns, abs(radius)};
  return a;
}

Angle Angle::decimal(const std::string& turns) {
  ensure_precision();
  Real v;
  try {
    v = Real(turns);
  } catch (const std::exception&) {
    throw InputError("invalid decimal angle: " + turns);
  }
  return real(v, default_radius(v));
}

Angle Angle::from_double(double turns, double radius) {
  ensure_precision();
  return real(Real(turns), Real(radius));
}

Angle Angle::from_radians(double theta, double radius) {
  return from_double(theta / (2.0 * std::numbers::pi), radius / (2.0 * std::numbers::pi));
}

const Rational& Angle::as_rational() const {
  if (!is_rational()) throw PreconditionError("angle is not rational");
  return std::get<Rational>(value_);
}

Real Angle::value() const {
  ensure_precision();
  if (is_rational()) {
    const auto& r = std::get<Rational>(value_);
    return Real(r.numerator()) / Real(r.denominator());
  }
  return std::get<HighPrec>(value_).value;
}

Real Angle::radius() const {
  ensure_precision();
  if (is_rational()) return Real(0);
  return std::get<HighPrec>(value_).radius;
}

double Angle::to_double() const {
  if (is_rational()) {
    const auto& r = std::get<Rational>(value_);
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
  }
  return std::get<HighPrec>(value_).value.convert_to<double>();
}

double Angle::radians() const { return 2.0 * std::numbers::pi * to_double(); }

std::int64_t Angle::floor_times(std::int64_t m) const {
  if (is_rational()) {
    const auto& r = std::get<Rational>(value_);
    return floor_div(static_cast<__int128>(m) * r.numerator(), r.denominator());
  }
  const auto& hp = std::get<HighPrec>(value_);
  const Real center = hp.value * m;
  const Real spread = hp.radius * (m < 0 ? -m : m);
  const Real lo = floor(center - spread);
  const Real hi = floor(center + spread);
  if (lo != hi) {
    std::ostringstream os;
    os << "cannot certify floor(" << m << " * " << hp.value.str(20)
       << ") at working precision";
    throw CertificationError(os.str());
  }
  return to_int64(lo);
}

std::int64_t Angle::ceil_times(std::int64_t m) const {
  return -floor_times(-m);
}

bool Angle::integer_times(std::int64_t m) const {
  if (is_rational()) {
    const auto& r = std::get<Rational>(value_);
    return (static_cast<__int128>(m) * r.numerator()) % r.denominator() == 0;
  }
  // floor(m x) == ceil(m x) can only hold for a certified integer, which a
  // finite-radius real enclosure never certifies; non-integrality is certified
  // when floor and ceiling are both certified and differ.
  const std::int64_t f = floor_times(m);
  const std::int64_t c = ceil_times(m);
  if (f == c) {
    throw CertificationError("real angle multiple is indistinguishable from an integer");
  }
  return false;
}

Interval Angle::frac_times(std::int64_t m) const {
  ensure_precision();
  if (is_rational()) {
    const auto& r = std::get<Rational>(value_);
    const __int128 num = static_cast<__int128>(m) * r.numerator();
    const std::int64_t fl = floor_div(num, r.denominator());
    const __int128 rem = num - static_cast<__int128>(fl) * r.denominator();
    Real f = Real(static_cast<std::int64_t>(rem)) / Real(r.denominator());
    return {f, f};
  }
  const auto& hp = std::get<HighPrec>(value_);
  const std::int64_t fl = floor_times(m);
  const Real center = hp.value * m - fl;
  const Real spread = hp.radius * (m < 0 ? -m : m);
  return {center - spread, center + spread};
}

Angle Angle::conjugate() const {
  if (is_rational()) return rational(Rational(1) - std::get<Rational>(value_));
  const auto& hp = std::get<HighPrec>(value_);
  return real(Real(1) - hp.value, hp.radius);
}

Angle Angle::scaled(std::int64_t k) const {
  if (is_rational()) {
    const auto& r = std::get<Rational>(value_);
    const __int128 num = static_cast<__int128>(k) * r.numerator();
    const std::int64_t fl = floor_div(num, r.denominator());
    return rational(Rational(static_cast<std::int64_t>(num - static_cast<__int128>(fl) * r.denominator()),
                             r.denominator()));
  }
  const auto& hp = std::get<HighPrec>(value_);
  const std::int64_t fl = floor_times(k);
  return real(hp.value * k - fl, hp.radius * (k < 0 ? -k : k));
}

std::string Angle::decimal_string() const {
  const unsigned digits = static_cast<unsigned>(std::ceil(precision_bits() * 0.30103)) + 2;
  return value().str(static_cast<std::streamsize>(digits), std::ios_base::fmtflags(0));
}

bool operator==(const Angle& a, const Angle& b) {
  if (a.is_rational() && b.is_rational()) return a.as_rational() == b.as_rational();
  if (a.is_rational() != b.is_rational()) return false;
  return a.value() == b.value() && a.radius() == b.radius();
}

RationalityVerdict rationality_test(const Real& x, const RationalityConfig& cfg) {
  ensure_precision();
  RationalityVerdict verdict;
  // Continued-fraction expansion with exact convergent recurrences.
  __int128 h_prev = 1, h = floor(x).convert_to<std::int64_t>();
  __int128 k_prev = 0, k = 1;
  Real rem = x - floor(x);
  double best = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 200; ++iter) {
    const Real err = abs(x - Real(static_cast<std::int64_t>(h)) / Real(static_cast<std::int64_t>(k)));
    const double e = err.convert_to<double>();
    if (e < best) {
      best = e;
      verdict.witness = Rational(static_cast<std::int64_t>(h), static_cast<std::int64_t>(k));
      verdict.error = e;
    }
    if (e <= cfg.tolerance) {
      verdict.rational = true;
      return verdict;
    }
    if (rem == 0) break;
    const Real inv = Real(1) / rem;
    const Real a_real = floor(inv);
    if (a_real > Real(static_cast<std::int64_t>(cfg.q_max) + 1)) break;
    const std::int64_t a = a_real.convert_to<std::int64_t>();
    rem = inv - a_real;
    const __int128 h_next = a * h + h_prev;
    const __int128 k_next = a * k + k_prev;
    if (k_next > cfg.q_max) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  verdict.rational = false;
  return verdict;
}

}  // namespace sik
