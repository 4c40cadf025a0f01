#include <cmath>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "sik/ellipsoid.hpp"

using namespace sik;

namespace {

const char* kFixtures[] = {"1,2^(1/4)", "1,2^(1/4),3^(1/3)", "1,2^(1/4),3^(1/3),5^(1/5)"};

double sq_ratio(const EllipsoidSpec& s, int k, int j) {
  const double rk = static_cast<double>(s.radii[k].value), rj = static_cast<double>(s.radii[j].value);
  return rk * rk / (rj * rj);
}

}  // namespace

TEST_CASE("radius parsing") {
  CHECK(static_cast<double>(parse_radius("2^(1/4)").value) == doctest::Approx(1.189207115002721));
  CHECK(static_cast<double>(parse_radius(" 3 ^ ( 1 / 3 ) ").value) == doctest::Approx(1.4422495703074083));
  CHECK(static_cast<double>(parse_radius("1.5").value) == 1.5);
  CHECK_THROWS_AS(parse_radius("abc"), InputError);
  CHECK_THROWS_AS(parse_radius("0"), InputError);
  CHECK_THROWS_AS(parse_radius("2^(1/0)"), InputError);
  CHECK_THROWS_AS(EllipsoidSpec::parse(""), InputError);
  CHECK(EllipsoidSpec::parse("1,1.18920711500272").n() == 2);
}

TEST_CASE("weak non-resonance") {
  const auto integer = weakly_nonresonant(EllipsoidSpec::parse("1,2"));
  CHECK(!integer.nonresonant);
  CHECK(integer.pairs[0].ratio.witness == Rational(2, 1));
  CHECK(!weakly_nonresonant(EllipsoidSpec::parse("1,1")).nonresonant);
  CHECK(weakly_nonresonant(EllipsoidSpec::parse("1,2^(1/4)")).nonresonant);
  // ratio irrational, squared ratio 2: every rotation angle is rational
  const auto root2 = weakly_nonresonant(EllipsoidSpec::parse("1,2^(1/2)"));
  CHECK(!root2.pairs[0].ratio.rational);
  CHECK(root2.pairs[0].squared.rational);
  CHECK(!root2.nonresonant);
  CHECK_THROWS_AS(build_system(EllipsoidSpec::parse("1,2")), PreconditionError);
  CHECK_THROWS_AS(build_system(EllipsoidSpec::parse("1,2^(1/2)")), PreconditionError);
}

TEST_CASE("rotation angles") {
  ensure_precision();
  const auto spec = EllipsoidSpec::parse("1,2^(1/4)");
  const Real s2 = sqrt(Real(2));
  // orbit 1 turns plane 2 by r_1^2 / r_2^2 = 1/sqrt 2, orbit 2 turns plane 1 by sqrt 2
  CHECK(abs(ellipsoid_angle(spec, 0, 1).value() - 1 / s2) < Real("1e-30"));
  CHECK(abs(ellipsoid_angle(spec, 1, 0).value() - (s2 - 1)) < Real("1e-30"));
}

TEST_CASE("monodromy spectrum matches the angles") {
  for (const char* f : kFixtures) {
    const auto spec = EllipsoidSpec::parse(f);
    for (int k = 0; k < spec.n(); ++k) {
      const Matrix M = evolve(ellipsoid_path(spec, k), ellipsoid_path(spec, k).duration());
      CHECK(symplectic_defect(M) < 1e-10);
      const auto spectrum = floquet_spectrum(M, 1e-7);
      int at_one = 0;
      for (const auto& fm : spectrum)
        if (std::abs(fm.value - Complex(1, 0)) < 1e-7) at_one += fm.multiplicity;
      CHECK(at_one == 2);
      for (int j = 0; j < spec.n(); ++j) {
        if (j == k) continue;
        const double turns = ellipsoid_angle(spec, k, j).to_double();
        const Complex want = std::polar(1.0, 2 * std::numbers::pi * turns);
        bool seen = false;
        for (const auto& fm : spectrum) seen = seen || std::abs(fm.value - want) < 1e-8;
        CHECK(seen);
      }
    }
  }
}

TEST_CASE("records are irrationally elliptic and pass the gate") {
  for (const char* f : kFixtures) {
    const auto sys = build_system(EllipsoidSpec::parse(f));
    CHECK(static_cast<int>(sys.size()) == sys.front().n);
    for (const auto& rec : sys) {
      CHECK(rec.cls.nondegenerate);
      CHECK(rec.cls.orbit_class == OrbitClass::irrationally_elliptic);
      CHECK(rec.dec.is_elliptic_shape());
      const auto it = rec.iteration();
      CHECK(it.viterbo(1).index >= 0);
      CHECK(it.mean() > 0);
      for (std::int64_t m = 1; m <= 200; ++m) {
        const auto p = it.viterbo(m);
        CHECK(p.index % 2 == 0);
        CHECK(p.nullity == 1);
        CHECK(it.viterbo(m + 1).index - p.index >= 2);
      }
    }
  }
}

TEST_CASE("oracle seeds match the rotation count") {
  // each plane j != k turns through r_k^2 / r_j^2 full turns and plane k through
  // one, giving i1 = n + 2 sum_j floor(r_k^2 / r_j^2)
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(0.7, 1.6);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 3;
    std::string list = "1";
    char buf[32];
    for (int j = 1; j < n; ++j) {
      std::snprintf(buf, sizeof buf, ",%.15f", u(rng));
      list += buf;
    }
    const auto spec = EllipsoidSpec::parse(list);
    const auto sys = build_system(spec);
    for (int k = 0; k < n; ++k) {
      std::int64_t want = n;
      double mean = 0;
      for (int j = 0; j < n; ++j) {
        mean += 2 * sq_ratio(spec, k, j);
        if (j != k) want += 2 * static_cast<std::int64_t>(std::floor(sq_ratio(spec, k, j)));
      }
      CHECK(sys[k].seed.i1 == want);
      CHECK(static_cast<double>(sys[k].iteration().mean()) == doctest::Approx(mean).epsilon(1e-8));
    }
  }
}

TEST_CASE("mean index identity on ellipsoids") {
  for (const char* f : kFixtures) {
    const auto sys = build_system(EllipsoidSpec::parse(f));
    const auto id = mean_index_identity(sys);
    CHECK(id.applicable);
    CHECK(abs(id.sum_pos - Real(1) / 2) < 1e-9);
    REQUIRE(id.exact_neg);
    CHECK(id.exact_neg->numerator() == 0);
    CHECK(id.holds());
  }
}

TEST_CASE("seed fixture bypasses the oracle") {
  const auto spec = EllipsoidSpec::parse(kFixtures[1]);
  const auto computed = build_system(spec);
  EllipsoidOptions opts;
  opts.seeds = std::vector<std::int64_t>{3, 5, 9};
  const auto fixed = build_system(spec, opts);
  for (std::size_t k = 0; k < fixed.size(); ++k) CHECK(fixed[k].seed.i1 == computed[k].seed.i1);
  opts.seeds = std::vector<std::int64_t>{3, 5};
  CHECK_THROWS_AS(build_system(spec, opts), InputError);
  opts.seeds = std::vector<std::int64_t>{4, 5, 9};
  CHECK_THROWS_AS(build_system(spec, opts), InputError);
}

TEST_CASE("first iterates of orbit 1") {
  const auto sys = build_system(EllipsoidSpec::parse(kFixtures[0]));
  std::int64_t last = -1;
  for (std::int64_t m = 1; m <= 5; ++m) {
    const auto c = contribution(sys[0], m);
    CHECK(c.rank == 1);
    CHECK(c.degree % 2 == 0);
    CHECK(c.degree > last);
    last = c.degree;
  }
}
