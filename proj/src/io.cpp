#include "sik/io.hpp"

#include <algorithm>

namespace sik {

namespace {

std::string real_string(const Real& v) {
  const auto digits = static_cast<std::streamsize>(std::ceil(precision_bits() * 0.30103)) + 2;
  return v.str(digits, std::ios_base::fmtflags(0));
}

template <class T>
T get_as(const Json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw InputError(what + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(what + ": bad value for \"" + key + "\"");
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback, const std::string& what) {
  return j.contains(key) ? get_as<T>(j, key, what) : fallback;
}

std::vector<Angle> angles_from(const Json& j, const char* key) {
  std::vector<Angle> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw InputError(std::string("decomposition: \"") + key + "\" must be a list");
  for (const auto& a : j.at(key)) out.push_back(angle_from_json(a));
  return out;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

void require_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw InputError(what + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw InputError(what + ": unknown field \"" + k + "\"");
  }
}

Json to_json(const Angle& a) {
  if (a.is_rational()) {
    const Rational& r = a.as_rational();
    return Json{{"rational", {r.numerator(), r.denominator()}}};
  }
  return Json{{"real", a.decimal_string()}, {"radius", real_string(a.radius())}};
}

Angle angle_from_json(const Json& j) {
  require_keys(j, {"rational", "real", "radius"}, "angle");
  if (j.contains("rational")) {
    const auto& r = j.at("rational");
    if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
      throw InputError("angle: \"rational\" must be [p, q]");
    const auto q = r[1].get<std::int64_t>();
    if (q <= 0) throw InputError("angle: denominator must be positive");
    return Angle::rational(r[0].get<std::int64_t>(), q);
  }
  if (!j.contains("real") || !j.at("real").is_string()) throw InputError("angle: expected \"rational\" or \"real\"");
  const Angle a = Angle::decimal(j.at("real").get<std::string>());
  if (!j.contains("radius")) return a;
  ensure_precision();
  if (!j.at("radius").is_string()) throw InputError("angle: \"radius\" must be a decimal string");
  try {
    return Angle::real(a.value(), Real(j.at("radius").get<std::string>()));
  } catch (const std::runtime_error&) {
    throw InputError("angle: bad radius");
  }
}

Json to_json(const NormalFormDecomposition& d) {
  Json j;
  j["n"] = d.n;
  j["p"] = {d.p_minus, d.p_zero, d.p_plus};
  j["q"] = {d.q_minus, d.q_zero, d.q_plus};
  for (const char* key : {"thetas_over_2pi", "alphas_over_2pi", "betas_over_2pi"}) j[key] = Json::array();
  for (const auto& a : d.thetas) j["thetas_over_2pi"].push_back(to_json(a));
  for (const auto& a : d.alphas) j["alphas_over_2pi"].push_back(to_json(a));
  for (const auto& a : d.betas) j["betas_over_2pi"].push_back(to_json(a));
  j["hyp_dim"] = d.hyp_dim;
  return j;
}

NormalFormDecomposition decomposition_from_json(const Json& j) {
  const std::string what = "decomposition";
  require_keys(j, {"n", "p", "q", "thetas_over_2pi", "alphas_over_2pi", "betas_over_2pi", "hyp_dim"}, what);
  NormalFormDecomposition d;
  d.n = get_as<int>(j, "n", what);
  const auto p = get_or(j, "p", std::vector<int>{0, 0, 0}, what);
  const auto q = get_or(j, "q", std::vector<int>{0, 0, 0}, what);
  if (p.size() != 3 || q.size() != 3) throw InputError("decomposition: \"p\" and \"q\" need three counts");
  d.p_minus = p[0];
  d.p_zero = p[1];
  d.p_plus = p[2];
  d.q_minus = q[0];
  d.q_zero = q[1];
  d.q_plus = q[2];
  d.thetas = angles_from(j, "thetas_over_2pi");
  d.alphas = angles_from(j, "alphas_over_2pi");
  d.betas = angles_from(j, "betas_over_2pi");
  d.hyp_dim = get_or(j, "hyp_dim", 0, what);
  d.validate();
  return d;
}

Json to_json(const IndexSeed& s) { return Json{{"i1", s.i1}, {"nu1", s.nu1}}; }

IndexSeed seed_from_json(const Json& j) {
  require_keys(j, {"i1", "nu1"}, "seed");
  return {get_as<std::int64_t>(j, "i1", "seed"), get_as<std::int64_t>(j, "nu1", "seed")};
}

Json to_json(const OrbitRecord& r) {
  return Json{{"label", r.label}, {"period", r.period}, {"dec", to_json(r.dec)}, {"seed", to_json(r.seed)}};
}

Json to_json(const System& sys) {
  Json j;
  j["n"] = sys.empty() ? 0 : sys.front().n;
  j["orbits"] = Json::array();
  for (const auto& r : sys) j["orbits"].push_back(to_json(r));
  return j;
}

System system_from_json(const Json& j) {
  require_keys(j, {"n", "orbits", "source"}, "system");
  const int n = get_as<int>(j, "n", "system");
  if (!j.contains("orbits") || !j.at("orbits").is_array()) throw InputError("system: \"orbits\" must be a list");
  System sys;
  for (const auto& o : j.at("orbits")) {
    require_keys(o, {"label", "period", "dec", "seed"}, "orbit");
    const auto label = get_or<std::string>(o, "label", "y" + std::to_string(sys.size() + 1), "orbit");
    if (!o.contains("dec") || !o.contains("seed")) throw InputError("orbit '" + label + "': needs dec and seed");
    auto rec = OrbitRecord::make(label, get_as<double>(o, "period", "orbit"), decomposition_from_json(o.at("dec")),
                                 seed_from_json(o.at("seed")));
    if (rec.n != n) throw InputError("orbit '" + label + "': n differs from the system's");
    sys.push_back(std::move(rec));
  }
  return sys;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return Json{{"n", m.rows() / 2}, {"rows", rows}};
}

Matrix matrix_from_json(const Json& j) {
  require_keys(j, {"n", "rows"}, "matrix");
  const int n = get_as<int>(j, "n", "matrix");
  if (n <= 0) throw InputError("matrix: n must be positive");
  const auto rows = get_as<std::vector<std::vector<double>>>(j, "rows", "matrix");
  if (rows.size() != static_cast<std::size_t>(2 * n)) throw InputError("matrix: expected 2n rows");
  Matrix m(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    if (rows[i].size() != static_cast<std::size_t>(2 * n)) throw InputError("matrix: expected 2n columns");
    for (int k = 0; k < 2 * n; ++k) m(i, k) = rows[i][k];
  }
  return m;
}

Json to_json(const BasicBlock& b) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BlockN1>) {
          return Json{{"type", "N1"}, {"lambda", v.lambda}, {"b", v.b}};
        } else if constexpr (std::is_same_v<T, BlockD>) {
          return Json{{"type", "D"}, {"lambda", v.lambda}};
        } else if constexpr (std::is_same_v<T, BlockR>) {
          return Json{{"type", "R"}, {"theta", to_json(v.theta)}};
        } else {
          return Json{{"type", "N2"},
                      {"theta", to_json(v.theta)},
                      {"B", {{v.B(0, 0), v.B(0, 1)}, {v.B(1, 0), v.B(1, 1)}}},
                      {"triviality", v.triviality == Triviality::trivial ? "trivial" : "nontrivial"}};
        }
      },
      b.variant());
}

BasicBlock block_from_json(const Json& j) {
  const std::string type = get_as<std::string>(j, "type", "block");
  if (type == "N1") {
    require_keys(j, {"type", "lambda", "b"}, "N1 block");
    return BasicBlock::n1(get_as<int>(j, "lambda", "N1 block"), get_as<double>(j, "b", "N1 block"));
  }
  if (type == "D") {
    require_keys(j, {"type", "lambda"}, "D block");
    return BasicBlock::d(get_as<double>(j, "lambda", "D block"));
  }
  if (type == "R") {
    require_keys(j, {"type", "theta"}, "R block");
    if (!j.contains("theta")) throw InputError("R block: missing \"theta\"");
    return BasicBlock::r(angle_from_json(j.at("theta")));
  }
  if (type == "N2") {
    require_keys(j, {"type", "theta", "B", "triviality"}, "N2 block");
    if (!j.contains("theta")) throw InputError("N2 block: missing \"theta\"");
    const Angle theta = angle_from_json(j.at("theta"));
    if (j.contains("B")) {
      const auto rows = get_as<std::vector<std::vector<double>>>(j, "B", "N2 block");
      if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2) throw InputError("N2 block: B must be 2x2");
      Eigen::Matrix2d B;
      B << rows[0][0], rows[0][1], rows[1][0], rows[1][1];
      BasicBlock out = BasicBlock::n2(theta, B);
      if (j.contains("triviality")) {
        const auto want = get_as<std::string>(j, "triviality", "N2 block");
        const auto& got = std::get<BlockN2>(out.variant()).triviality;
        if ((want == "trivial") != (got == Triviality::trivial))
          throw InputError("N2 block: triviality contradicts B");
      }
      return out;
    }
    const auto t = get_as<std::string>(j, "triviality", "N2 block");
    if (t != "trivial" && t != "nontrivial") throw InputError("N2 block: triviality must be trivial or nontrivial");
    return BasicBlock::n2(theta, t == "trivial" ? Triviality::trivial : Triviality::nontrivial);
  }
  throw InputError("block: unknown type \"" + type + "\"");
}

Json to_json(const PathSpec& path) {
  Json segs = Json::array();
  for (const auto& seg : path.segments) segs.push_back(Json{{"S", matrix_to_json(seg.S)["rows"]}, {"dt", seg.dt}});
  return Json{{"n", path.n}, {"segments", segs}};
}

PathSpec path_from_json(const Json& j) {
  require_keys(j, {"n", "segments"}, "path");
  PathSpec path;
  path.n = get_as<int>(j, "n", "path");
  if (!j.contains("segments") || !j.at("segments").is_array()) throw InputError("path: \"segments\" must be a list");
  for (const auto& seg : j.at("segments")) {
    require_keys(seg, {"S", "dt"}, "segment");
    if (!seg.contains("S")) throw InputError("segment: missing \"S\"");
    const Matrix S = matrix_from_json(Json{{"n", path.n}, {"rows", seg.at("S")}});
    path.segments.push_back({S, get_as<double>(seg, "dt", "segment")});
  }
  path.validate();
  return path;
}

Json to_json(const CijTuple& t) {
  return Json{{"N", t.N},
              {"m", t.m},
              {"m_bar", t.m_bar},
              {"delta", t.delta},
              {"checks",
               {{"nullity", t.checks.nullity}, {"plus", t.checks.plus}, {"minus", t.checks.minus},
                {"middle", t.checks.middle}}}};
}

CijTuple tuple_from_json(const Json& j) {
  const std::string what = "tuple";
  require_keys(j, {"N", "m", "m_bar", "delta", "checks"}, what);
  CijTuple t;
  t.N = get_as<std::int64_t>(j, "N", what);
  t.m = get_as<std::vector<std::int64_t>>(j, "m", what);
  t.m_bar = get_as<int>(j, "m_bar", what);
  t.delta = get_or(j, "delta", 0.125, what);
  for (const auto mk : t.m)
    if (mk < 1) throw InputError("tuple: iterates must be positive");
  // recorded checks are informational; verification recomputes them
  return t;
}

}  // namespace sik
