#include <cmath>
#include <fstream>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "sik/index.hpp"
#include "sik/oracle.hpp"
#include "sik/splitting_fixture.hpp"
#include "support.hpp"

using namespace sik;
using namespace sik::testing;

namespace {

Angle golden_turns() {
  ensure_precision();
  return Angle::real((sqrt(Real(5)) - 1) / 2, Real("1e-35"));
}

NormalFormDecomposition elliptic_one_rotation(const Angle& t) {
  NormalFormDecomposition dec;
  dec.n = 2;
  dec.p_minus = 1;
  dec.thetas = {t};
  return dec;
}

}  // namespace

TEST_CASE("first iterate reproduces the seed") {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto dec = decomposition_of(random_blocks(rng, 6, trial % 2 == 0));
    const auto seed = consistent_seed(rng, dec, -4, 8);
    CHECK(iterate_index(dec, seed, 1) == IndexPair{seed.i1, seed.nu1});
  }
}

TEST_CASE("golden rotation, second iterate") {
  const auto dec = elliptic_one_rotation(golden_turns());
  // two odd-type blocks force an even seed, so i1 = 1 is refused
  CHECK_THROWS_AS(iterate_index(dec, {1, 1}, 2), InputError);
  // 2(2 + 1 - 1) + 2 E(1.236...) - 1 - 1
  CHECK(iterate_index(dec, {2, 1}, 2).index == 6);
  for (int m = 1; m <= 50; ++m) CHECK(iterate_index(dec, {2, 1}, m).nullity == 1);
}

TEST_CASE("nullity is constant for irrational angles") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto dec = random_elliptic(rng, 1 + trial % 6);
    const auto seed = consistent_seed(rng, dec, 0, 6);
    const IndexIteration it(dec, seed);
    for (int m = 1; m <= 100; ++m) CHECK(it.at(m).nullity == seed.nu1);
  }
}

TEST_CASE("rational angles raise the nullity at resonant iterates") {
  NormalFormDecomposition dec;
  dec.n = 3;
  dec.p_minus = 1;
  dec.alphas = {Angle::rational(1, 5)};
  const IndexIteration it(dec, {1, 1});
  CHECK(it.at(5).nullity == 3);
  CHECK(it.at(4).nullity == 1);
  // phi vanishes at m = 5, lowering the index by 2 against the linear trend
  CHECK(it.at(5).index - it.at(4).index == it.at(4).index - it.at(3).index - 2);
}

TEST_CASE("seed validation") {
  const auto dec = elliptic_one_rotation(golden_turns());
  CHECK_NOTHROW(validate_seed(dec, {2, 1}));
  CHECK_THROWS_AS(validate_seed(dec, {1, 1}), InputError);
  CHECK_THROWS_AS(validate_seed(dec, {2, 0}), InputError);
  CHECK_THROWS_AS(iterate_index(dec, {2, 1}, 0), InputError);
  NormalFormDecomposition hyp;
  hyp.n = 1;
  hyp.hyp_dim = 2;
  CHECK_NOTHROW(validate_seed(hyp, {4, 0}));
  CHECK_NOTHROW(validate_seed(hyp, {3, 0}));
}

TEST_CASE("uncertifiable floor terms throw") {
  ensure_precision();
  const auto fuzzy = Angle::real(Real(1) / 3 + Real("1e-40"), Real("1e-30"));
  const auto dec = elliptic_one_rotation(fuzzy);
  CHECK_NOTHROW(iterate_index(dec, {2, 1}, 2));
  CHECK_THROWS_AS(iterate_index(dec, {2, 1}, 3), CertificationError);
}

TEST_CASE("mean index") {
  const auto dec = elliptic_one_rotation(golden_turns());
  const IndexIteration it(dec, {2, 1});
  // elliptic shape: i(y) + n + 1 - r + theta / pi with i(y) = i1 - n
  const Real expected = Real(2 - 2) + 2 + 1 - 1 + 2 * golden_turns().value();
  CHECK(abs(it.mean() - expected) < Real("1e-30"));
  CHECK(!it.mean_exact());

  NormalFormDecomposition plain;
  plain.n = 1;
  plain.p_minus = 1;
  CHECK(*IndexIteration(plain, {3, 1}).mean_exact() == Rational(4));

  std::mt19937 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto d = decomposition_of(random_blocks(rng, 4, trial % 2 == 0));
    const auto seed = consistent_seed(rng, d, -3, 6);
    const IndexIteration iter(d, seed);
    const double mean = iter.mean().convert_to<double>();
    for (int m = 1; m <= 10000; m += (m < 100 ? 1 : 97)) {
      const double i = static_cast<double>(iter.at(m).index);
      CHECK(std::abs(i / m - mean) <= 10.0 / m);
      CHECK(std::abs(i - m * mean) <= iter.linear_bound() + 1e-9);
    }
  }
}

TEST_CASE("splitting table matches the committed fixture") {
  std::ifstream in(SIK_SOURCE_DIR "/data/splitting_fixture.json");
  REQUIRE(in);
  const auto committed = entries_from_json(nlohmann::json::parse(in));
  const auto& table = splitting_table();
  REQUIRE(committed.size() == table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(committed[i].kind == table[i].kind);
    CHECK(committed[i].where == table[i].where);
    CHECK(committed[i].value == table[i].value);
  }
  for (BlockKind k : all_block_kinds()) {
    for (SpectralPosition w : positions_for(k)) {
      const auto v = table_value(k, w);
      CHECK(v.s_plus >= 0);
      CHECK(v.s_plus <= 1);
      CHECK(v.s_minus >= 0);
      CHECK(v.s_minus <= 1);
      if (w == SpectralPosition::off_spectrum) CHECK(v == SplittingPair{0, 0});
    }
  }
  // values stated for N1(1, a) at 1
  CHECK(table_value(BlockKind::n1_one_pos, SpectralPosition::at_angle).s_plus == 1);
  CHECK(table_value(BlockKind::n1_one_zero, SpectralPosition::at_angle).s_plus == 1);
  CHECK(table_value(BlockKind::n1_one_neg, SpectralPosition::at_angle).s_plus == 0);
}

TEST_CASE("splitting numbers of decompositions") {
  const auto g = golden_turns();
  const auto dec = elliptic_one_rotation(g);
  CHECK(splitting_numbers(dec, Angle::rational(0, 1)) == SplittingPair{1, 1});
  CHECK(splitting_numbers(dec, g) == SplittingPair{0, 1});
  CHECK(splitting_numbers(dec, g.conjugate()) == SplittingPair{1, 0});
  CHECK(splitting_numbers(dec, Angle::rational(1, 3)) == SplittingPair{0, 0});
  CHECK_THROWS_AS(splitting_numbers(dec, Angle::rational(3, 2)), InputError);

  // additivity over concatenated block lists
  std::mt19937 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_blocks(rng, 3, true);
    const auto b = random_blocks(rng, 3, true);
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    for (int q = 1; q <= 12; ++q) {
      for (int p = 0; p < q; ++p) {
        const Angle w = Angle::rational(p, q);
        const auto sa = splitting_numbers(decomposition_of(a), w);
        const auto sb = splitting_numbers(decomposition_of(b), w);
        const auto sab = splitting_numbers(decomposition_of(ab), w);
        CHECK(sab.s_plus == sa.s_plus + sb.s_plus);
        CHECK(sab.s_minus == sa.s_minus + sb.s_minus);
      }
    }
  }
}

TEST_CASE("C, Delta and Q") {
  NormalFormDecomposition empty;
  empty.n = 1;
  empty.p_minus = 1;
  CHECK(C_of_M(empty) == 0);
  CHECK(Delta(empty, 7, 0.125) == 0);
  CHECK(Q_of_m(empty, 7, 3) == 0);

  NormalFormDecomposition dec;
  dec.n = 4;
  dec.p_minus = 1;
  dec.thetas = {Angle::rational(1, 3)};
  dec.alphas = {Angle::rational(1, 4)};
  // S- is 1 at e^{i theta} for R and at both points for the non-trivial N2
  CHECK(C_of_M(dec) == 3);
  // m_k = 3: {6/3} = 0, {6/4} = 1/2, {18/4} = 1/2 -> nothing below 1/8
  CHECK(Delta(dec, 3, 0.125) == 0);
  // m_k = 4: {8/3} = 2/3, alpha points integral -> excluded
  CHECK(Delta(dec, 4, 0.49) == 0);
  CHECK(Delta(dec, 5, 0.49) == 1);  // {10/3} = 1/3; {10/4} = 1/2 excluded
  CHECK(Q_of_m(dec, 6, 3) == 1);    // theta = 1/3 qualifies, alpha needs 4 | m
  CHECK(Q_of_m(dec, 6, 12) == 3);
  CHECK(Q_of_m(dec, 1, 12) == 0);   // 2 * 1/3 not integral
  CHECK_THROWS_AS(Delta(dec, 3, 0.5), InputError);

  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    const auto e = random_elliptic(rng, n);
    CHECK(splitting_numbers(e, Angle::rational(0, 1)).s_plus == 1);
    std::uniform_int_distribution<int> mk(1, 100000);
    const int m_k = mk(rng);
    for (int m = 1; m <= 5; ++m) CHECK(Q_of_m(e, m_k, m) == 0);
    const int v = 2 * Delta(e, m_k, 0.125) - C_of_M(e);
    CHECK(v >= -(n - 1));
    CHECK(v <= n - 1);
  }
}

TEST_CASE("Viterbo grading") {
  const auto g = golden_turns();
  const auto dec = elliptic_one_rotation(g);
  const IndexSeed seed{4, 1};
  CHECK(viterbo_index(dec, seed, 1, 2).index == seed.i1 - 2);
  CHECK_THROWS_AS(viterbo_index(dec, seed, 1, 3), InputError);
  // closed form on the elliptic shape with i(y) = i1 - n
  const std::int64_t iy = seed.i1 - 2;
  for (int m = 1; m <= 200; ++m) {
    const std::int64_t expected = m * (iy + 2 + 1 - 1) + 2 * g.floor_times(m) + 1 - 2 - 1;
    CHECK(viterbo_index(dec, seed, m, 2).index == expected);
  }
}

TEST_CASE("even Viterbo indices on the elliptic shape") {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto dec = random_elliptic(rng, 1 + trial % 6);
    const auto seed = consistent_seed(rng, dec, -6, 12);
    for (int m = 1; m <= 200; ++m) CHECK(parity(dec, seed, m) == 0);
  }
  NormalFormDecomposition notshape;
  notshape.n = 1;
  notshape.p_zero = 1;
  CHECK_THROWS_AS(parity(notshape, {1, 2}, 1), PreconditionError);
}

TEST_CASE("index gaps of at least two when i(y) >= 0") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 6;
    const auto dec = random_elliptic(rng, n);
    const auto seed = consistent_seed(rng, dec, n, n + 8);
    const IndexIteration it(dec, seed);
    for (int m = 1; m < 200; ++m) CHECK(it.viterbo(m + 1).index >= it.viterbo(m).index + 2);
  }
}

TEST_CASE("zero mean index confines the Viterbo indices") {
  // r = 2 with theta_2 = 1 - theta_1 makes the rotation sum an integer
  std::mt19937 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Angle t = random_real_angle(rng);
    NormalFormDecomposition dec;
    dec.n = 3;
    dec.p_minus = 1;
    dec.thetas = {t, t.conjugate()};
    const IndexIteration it(dec, {-1, 1});
    CHECK(abs(it.mean()) < Real("1e-25"));
    for (int m = 1; m <= 1000; ++m) {
      const auto i = it.viterbo(m).index;
      CHECK(i >= -2 * dec.n);
      CHECK(i <= -2);
    }
  }
}

TEST_CASE("formula agrees with the numeric oracle on block products") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 12; ++trial) {
    const auto blocks = random_blocks(rng, 3, trial % 2 == 0);
    std::vector<PathSpec> paths;
    for (const auto& b : blocks) paths.push_back(generator_path_for(b));
    const auto sweep = iterate_sweep(diamond_paths(paths), 10, 1.0);
    const auto dec = decomposition_of(blocks);
    const IndexSeed seed{sweep.index[0], sweep.nullity[0]};
    const IndexIteration it(dec, seed);
    for (int m = 1; m <= 10; ++m) {
      CHECK(it.at(m).index == sweep.index[m - 1]);
      CHECK(it.at(m).nullity == sweep.nullity[m - 1]);
    }
  }
}
