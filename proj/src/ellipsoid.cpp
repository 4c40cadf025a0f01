#include "sik/ellipsoid.hpp"

#include <numbers>
#include <regex>
#include <sstream>

namespace sik {

namespace {

Real working_radius(const Real& v) {
  using std::abs;
  Real scale = abs(v);
  if (scale < 1) scale = 1;
  // rounding in a handful of working-precision operations
  return scale * boost::multiprecision::ldexp(Real(1), -static_cast<int>(precision_bits()) + 8);
}

Real parse_real(const std::string& s, const std::string& what) {
  static const std::regex decimal(R"(\s*[0-9]+(\.[0-9]*)?([eE][-+]?[0-9]+)?\s*)");
  if (!std::regex_match(s, decimal)) throw InputError("bad " + what + ": '" + s + "'");
  return Real(s);
}

}  // namespace

Radius parse_radius(const std::string& text) {
  ensure_precision();
  static const std::regex root(R"(\s*([0-9.eE+-]+)\s*\^\s*\(\s*([0-9]+)\s*/\s*([0-9]+)\s*\)\s*)");
  Radius r;
  r.text = text;
  std::smatch m;
  if (std::regex_match(text, m, root)) {
    const Real base = parse_real(m[1].str(), "radius base");
    const Real p = parse_real(m[2].str(), "radius exponent");
    const Real q = parse_real(m[3].str(), "radius exponent");
    if (q == 0) throw InputError("radius exponent has zero denominator: '" + text + "'");
    r.value = pow(base, p / q);
  } else {
    r.value = parse_real(text, "radius");
  }
  if (!(r.value > 0)) throw InputError("radius must be positive: '" + text + "'");
  return r;
}

EllipsoidSpec EllipsoidSpec::parse(const std::string& list) {
  EllipsoidSpec spec;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) spec.radii.push_back(parse_radius(item));
  if (spec.radii.empty()) throw InputError("no radii given");
  return spec;
}

NonresonanceReport weakly_nonresonant(const EllipsoidSpec& spec) {
  ensure_precision();
  NonresonanceReport rep;
  for (int i = 0; i < spec.n(); ++i) {
    for (int j = i + 1; j < spec.n(); ++j) {
      PairVerdict v;
      v.i = i;
      v.j = j;
      const Real ratio = spec.radii[j].value / spec.radii[i].value;
      v.ratio = rationality_test(ratio);
      v.squared = rationality_test(ratio * ratio);
      if (v.ratio.rational || v.squared.rational) rep.nonresonant = false;
      rep.pairs.push_back(v);
    }
  }
  return rep;
}

Angle ellipsoid_angle(const EllipsoidSpec& spec, int k, int j) {
  ensure_precision();
  const Real rk = spec.radii.at(k).value, rj = spec.radii.at(j).value;
  const Real q = (rk * rk) / (rj * rj);
  return Angle::real(q - floor(q), working_radius(q));
}

PathSpec ellipsoid_path(const EllipsoidSpec& spec, int k) {
  const int n = spec.n();
  PathSpec path;
  path.n = n;
  Matrix S = Matrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    const double r = static_cast<double>(spec.radii[j].value);
    S(j, j) = S(n + j, n + j) = 1.0 / (r * r);
  }
  const double rk = static_cast<double>(spec.radii.at(k).value);
  path.segments.push_back({S, 2.0 * std::numbers::pi * rk * rk});
  return path;
}

std::int64_t ellipsoid_seed(const EllipsoidSpec& spec, int k, const OracleConfig& cfg) {
  return omega_index(ellipsoid_path(spec, k), 1, {1.0, 0.0}, cfg);
}

System build_system(const EllipsoidSpec& spec, const EllipsoidOptions& opts) {
  const auto nr = weakly_nonresonant(spec);
  if (!nr.nonresonant) {
    for (const auto& p : nr.pairs) {
      const auto& w = p.ratio.rational ? p.ratio : p.squared;
      if (!w.rational) continue;
      std::ostringstream msg;
      msg << "resonant ellipsoid: r" << p.j + 1 << (p.ratio.rational ? "/" : "^2/") << "r" << p.i + 1
          << (p.ratio.rational ? "" : "^2") << " = " << w.witness.numerator() << "/" << w.witness.denominator();
      throw PreconditionError(msg.str());
    }
  }
  const int n = spec.n();
  if (opts.seeds && static_cast<int>(opts.seeds->size()) != n)
    throw InputError("seed fixture has " + std::to_string(opts.seeds->size()) + " entries, expected " + std::to_string(n));
  System sys;
  for (int k = 0; k < n; ++k) {
    NormalFormDecomposition dec;
    dec.n = n;
    dec.p_minus = 1;
    for (int j = 0; j < n; ++j)
      if (j != k) dec.thetas.push_back(ellipsoid_angle(spec, k, j));
    const std::int64_t i1 = opts.seeds ? (*opts.seeds)[k] : ellipsoid_seed(spec, k, opts.oracle);
    const double rk = static_cast<double>(spec.radii[k].value);
    sys.push_back(OrbitRecord::make("y" + std::to_string(k + 1), 2.0 * std::numbers::pi * rk * rk, dec, {i1, 1}));
  }
  return sys;
}

}  // namespace sik
