#include "sik/splitting_fixture.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sik/errors.hpp"

namespace sik {

namespace {

struct Representative {
  std::string name;
  BasicBlock block;
  double turns;  // eigenvalue angle in turns (0 for +1, 0.5 for -1)
};

std::vector<Representative> representatives(BlockKind k) {
  const auto a = [](double t) { return Angle::from_double(t, 1e-15); };
  switch (k) {
    case BlockKind::n1_one_pos:
      return {{"N1(1,1)", BasicBlock::n1(1, 1), 0}, {"N1(1,0.5)", BasicBlock::n1(1, 0.5), 0}};
    case BlockKind::n1_one_zero:
      return {{"I2", BasicBlock::n1(1, 0), 0}};
    case BlockKind::n1_one_neg:
      return {{"N1(1,-1)", BasicBlock::n1(1, -1), 0}, {"N1(1,-0.5)", BasicBlock::n1(1, -0.5), 0}};
    case BlockKind::n1_minus_pos:
      return {{"N1(-1,1)", BasicBlock::n1(-1, 1), 0.5}, {"N1(-1,0.5)", BasicBlock::n1(-1, 0.5), 0.5}};
    case BlockKind::n1_minus_zero:
      return {{"-I2", BasicBlock::n1(-1, 0), 0.5}};
    case BlockKind::n1_minus_neg:
      return {{"N1(-1,-1)", BasicBlock::n1(-1, -1), 0.5}, {"N1(-1,-0.5)", BasicBlock::n1(-1, -0.5), 0.5}};
    case BlockKind::rotation:
      return {{"R(0.3)", BasicBlock::r(a(0.3)), 0.3}, {"R(0.8)", BasicBlock::r(a(0.8)), 0.8}};
    case BlockKind::n2_nontrivial:
      return {{"N2(0.2,nontrivial)", BasicBlock::n2(a(0.2), Triviality::nontrivial), 0.2},
              {"N2(0.7,nontrivial)", BasicBlock::n2(a(0.7), Triviality::nontrivial), 0.7}};
    case BlockKind::n2_trivial:
      return {{"N2(0.2,trivial)", BasicBlock::n2(a(0.2), Triviality::trivial), 0.2},
              {"N2(0.7,trivial)", BasicBlock::n2(a(0.7), Triviality::trivial), 0.7}};
    case BlockKind::hyperbolic:
      return {{"D(2)", BasicBlock::d(2), 0}, {"D(-3)", BasicBlock::d(-3), 0}};
  }
  return {};
}

// Sample points for a position, in turns.
std::vector<double> omegas_for(const Representative& r, BlockKind k, SpectralPosition where) {
  switch (where) {
    case SpectralPosition::at_angle:
      return {r.turns};
    case SpectralPosition::at_conjugate:
      return {1.0 - r.turns};
    case SpectralPosition::off_spectrum:
      break;
  }
  std::vector<double> out{0.37};
  const bool plus_one = k == BlockKind::n1_one_pos || k == BlockKind::n1_one_zero || k == BlockKind::n1_one_neg;
  const bool minus_one =
      k == BlockKind::n1_minus_pos || k == BlockKind::n1_minus_zero || k == BlockKind::n1_minus_neg;
  if (!plus_one) out.push_back(0.0);
  if (!minus_one) out.push_back(0.5);
  return out;
}

Complex unit(double turns) {
  if (turns == 0.0) return 1.0;
  if (turns == 0.5) return -1.0;
  return std::polar(1.0, 2 * std::numbers::pi * turns);
}

}  // namespace

SplittingFixture generate_splitting_fixture(const OracleConfig& cfg, const std::vector<double>& eps) {
  SplittingFixture out;
  out.eps_sequence = eps;
  out.config = cfg;
  for (BlockKind k : all_block_kinds()) {
    for (SpectralPosition where : positions_for(k)) {
      FixtureEntry entry{k, where, {}, {}};
      for (const auto& rep : representatives(k)) {
        const PathSpec path = generator_path_for(rep.block);
        for (double w : omegas_for(rep, k, where)) {
          FixtureSample s{rep.name, w, numeric_splitting(path, unit(w), eps, cfg)};
          const SplittingPair v{s.result.s_plus, s.result.s_minus};
          if (!entry.samples.empty() && v != entry.value) {
            throw InconsistencyError(std::string("representatives of ") + to_string(k) + " disagree at " +
                                     to_string(where));
          }
          entry.value = v;
          entry.samples.push_back(std::move(s));
        }
      }
      out.entries.push_back(std::move(entry));
    }
  }
  return out;
}

nlohmann::json to_json(const SplittingFixture& f) {
  nlohmann::json j;
  j["eps_sequence"] = f.eps_sequence;
  j["agreements_required"] = 3;
  j["oracle"] = {{"epsilon", f.config.epsilon},
                 {"epsilon_rule", "min(epsilon, 1e-4 * eps^2)"},
                 {"grid", f.config.grid},
                 {"octave_points", f.config.octave_points},
                 {"kernel_tol", f.config.kernel_tol},
                 {"gap_tol", f.config.gap_tol},
                 {"form_tol", f.config.form_tol}};
  j["entries"] = nlohmann::json::array();
  for (const auto& e : f.entries) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : e.samples) {
      nlohmann::json history = nlohmann::json::array();
      for (const auto& [p, m] : s.result.history) history.push_back({p, m});
      samples.push_back({{"representative", s.representative},
                         {"omega_turns", s.omega_turns},
                         {"s_plus", s.result.s_plus},
                         {"s_minus", s.result.s_minus},
                         {"stabilized_at", s.result.stabilized_at},
                         {"history", history}});
    }
    j["entries"].push_back({{"kind", to_string(e.kind)},
                            {"position", to_string(e.where)},
                            {"s_plus", e.value.s_plus},
                            {"s_minus", e.value.s_minus},
                            {"samples", samples}});
  }
  return j;
}

std::vector<SplittingEntry> entries_from_json(const nlohmann::json& j) {
  std::vector<SplittingEntry> out;
  try {
    for (const auto& e : j.at("entries")) {
      out.push_back({block_kind_from_string(e.at("kind").get<std::string>()),
                     position_from_string(e.at("position").get<std::string>()),
                     {e.at("s_plus").get<int>(), e.at("s_minus").get<int>()}});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("malformed splitting fixture: ") + ex.what());
  }
  return out;
}

std::string to_header(const SplittingFixture& f) {
  std::ostringstream os;
  os << "// Generated by gen_splitting_table from the numeric splitting limit. Do not edit.\n";
  for (const auto& e : f.entries) {
    os << "{BlockKind::";
    switch (e.kind) {
      case BlockKind::n1_one_pos: os << "n1_one_pos"; break;
      case BlockKind::n1_one_zero: os << "n1_one_zero"; break;
      case BlockKind::n1_one_neg: os << "n1_one_neg"; break;
      case BlockKind::n1_minus_pos: os << "n1_minus_pos"; break;
      case BlockKind::n1_minus_zero: os << "n1_minus_zero"; break;
      case BlockKind::n1_minus_neg: os << "n1_minus_neg"; break;
      case BlockKind::rotation: os << "rotation"; break;
      case BlockKind::n2_nontrivial: os << "n2_nontrivial"; break;
      case BlockKind::n2_trivial: os << "n2_trivial"; break;
      case BlockKind::hyperbolic: os << "hyperbolic"; break;
    }
    os << ", SpectralPosition::" << to_string(e.where) << ", {" << e.value.s_plus << ", " << e.value.s_minus
       << "}},\n";
  }
  return os.str();
}

}  // namespace sik
