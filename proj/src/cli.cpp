#include "sik/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "sik/cij.hpp"
#include "sik/ellipsoid.hpp"
#include "sik/io.hpp"
#include "sik/splitting_fixture.hpp"

namespace sik::cli {

namespace {

enum class Format { json, text, csv };

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  Json json;
  std::vector<std::string> notes;  ///< text format only, printed above the table
  Table table;
  int code = ok;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void emit(const Report& r, Format f, std::ostream& out) {
  if (f == Format::json) {
    out << r.json.dump(2) << "\n";
    return;
  }
  if (f == Format::csv) {
    const auto line = [&](const std::vector<std::string>& row) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
      out << "\n";
    };
    if (r.table.header.empty()) {
      out << "note\n";
      for (const auto& n : r.notes) out << csv_field(n) << "\n";
      return;
    }
    line(r.table.header);
    for (const auto& row : r.table.rows) line(row);
    return;
  }
  for (const auto& n : r.notes) out << n << "\n";
  if (r.table.header.empty()) return;
  std::vector<std::size_t> width(r.table.header.size(), 0);
  const auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], row[c].size());
  };
  widen(r.table.header);
  for (const auto& row : r.table.rows) widen(row);
  const auto line = [&](const std::vector<std::string>& row) {
    std::string s;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += "  ";
      s += std::string(width[c] - row[c].size(), ' ') + row[c];
    }
    out << s << "\n";
  };
  line(r.table.header);
  for (const auto& row : r.table.rows) line(row);
}

std::string slurp(const std::string& path, std::istream& in) {
  std::stringstream ss;
  if (path.empty() || path == "-") {
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path);
  ss << f.rdbuf();
  return ss.str();
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string num(std::int64_t v) { return std::to_string(v); }

std::string real_text(const Real& v) { return v.str(20, std::ios_base::fmtflags(0)); }

std::string rational_text(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Json rational_json(const std::optional<Rational>& r) {
  if (!r) return nullptr;
  return Json::array({r->numerator(), r->denominator()});
}

std::string angle_text(const Angle& a) {
  return a.is_rational() ? rational_text(a.as_rational()) : a.decimal_string();
}

std::string joined(const std::vector<std::int64_t>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t j = 0; j < v.size(); ++j) s += (j ? sep : "") + std::to_string(v[j]);
  return s;
}

std::string yes(bool b) { return b ? "yes" : "no"; }

double snap(double v) { return std::abs(v) < 1e-13 ? 0.0 : v; }

System read_system(const std::string& path, std::istream& in) {
  return system_from_json(parse_json(slurp(path, in)));
}

// ---- decompose ----

Report decompose(const Json& j, double tol) {
  Matrix M;
  NormalFormDecomposition dec;
  std::string source;
  if (j.is_object() && j.contains("blocks")) {
    require_keys(j, {"blocks"}, "decompose input");
    if (!j.at("blocks").is_array() || j.at("blocks").empty()) throw InputError("\"blocks\" must be a non-empty list");
    std::vector<BasicBlock> blocks;
    for (const auto& b : j.at("blocks")) blocks.push_back(block_from_json(b));
    M = materialize(blocks);
    dec = decomposition_of(blocks);
    source = "blocks";
  } else {
    M = matrix_from_json(j);
    if (symplectic_defect(M) > 1e-8) throw InputError("matrix is not symplectic");
    dec = recover_decomposition(M, tol);
    source = "matrix";
  }

  Report r;
  r.json["source"] = source;
  r.json["decomposition"] = to_json(dec);
  const auto rc = classify_decomposition(dec);
  r.json["normal_form_class"] = {{"nondegenerate", rc.nondegenerate}, {"class", to_string(rc.orbit_class)}};
  r.notes.push_back("n = " + std::to_string(dec.n) + ", p = [" + std::to_string(dec.p_minus) + ", " +
                    std::to_string(dec.p_zero) + ", " + std::to_string(dec.p_plus) + "], q = [" +
                    std::to_string(dec.q_minus) + ", " + std::to_string(dec.q_zero) + ", " +
                    std::to_string(dec.q_plus) + "], hyp_dim = " + std::to_string(dec.hyp_dim));
  const auto list = [](const std::vector<Angle>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + angle_text(v[k]);
    return s;
  };
  r.notes.push_back("thetas/2pi = [" + list(dec.thetas) + "], alphas/2pi = [" + list(dec.alphas) +
                    "], betas/2pi = [" + list(dec.betas) + "]");
  r.notes.push_back(std::string("normal form: ") + to_string(rc.orbit_class) +
                    (rc.nondegenerate ? ", nondegenerate" : ", degenerate"));
  try {
    const auto c = classify(M);
    r.json["classification"] = {{"nondegenerate", c.nondegenerate},
                                {"class", to_string(c.orbit_class)},
                                {"elliptic", c.elliptic},
                                {"multiplicity_of_one", c.multiplicity_of_one}};
  } catch (const PreconditionError& e) {
    r.json["classification"] = nullptr;
    r.notes.push_back(std::string("monodromy classification skipped: ") + e.what());
  }

  r.json["spectrum"] = Json::array();
  r.table.header = {"re", "im", "modulus", "multiplicity", "on_circle"};
  for (const auto& fm : floquet_spectrum(M)) {
    const double re = snap(fm.value.real()), im = snap(fm.value.imag());
    r.json["spectrum"].push_back({{"re", re},
                                  {"im", im},
                                  {"modulus", std::abs(fm.value)},
                                  {"multiplicity", fm.multiplicity},
                                  {"on_unit_circle", fm.on_unit_circle}});
    r.table.rows.push_back({num(re), num(im), num(std::abs(fm.value)), std::to_string(fm.multiplicity),
                            yes(fm.on_unit_circle)});
  }
  return r;
}

// ---- iterate, mean-index, identity, morse ----

Report iterate(const System& sys, std::int64_t max_m, bool viterbo) {
  Report r;
  r.json["grading"] = viterbo ? "viterbo" : "path";
  r.json["rows"] = Json::array();
  r.table.header = {"k", "m", "i", "nu"};
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const auto it = sys[k].iteration();
    for (std::int64_t m = 1; m <= max_m; ++m) {
      const auto p = viterbo ? it.viterbo(m) : it.at(m);
      r.json["rows"].push_back({{"k", k + 1}, {"label", sys[k].label}, {"m", m}, {"i", p.index}, {"nu", p.nullity}});
      r.table.rows.push_back({num(static_cast<std::int64_t>(k + 1)), num(m), num(p.index), num(p.nullity)});
    }
  }
  return r;
}

Report mean_index_report(const System& sys) {
  Report r;
  r.json["orbits"] = Json::array();
  r.table.header = {"k", "label", "i1", "mean", "exact", "linear_bound"};
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const auto it = sys[k].iteration();
    const auto exact = it.mean_exact();
    const auto mean = real_text(it.mean());
    r.json["orbits"].push_back({{"k", k + 1},
                                {"label", sys[k].label},
                                {"i1", sys[k].seed.i1},
                                {"mean", mean},
                                {"mean_exact", rational_json(exact)},
                                {"linear_bound", it.linear_bound()}});
    r.table.rows.push_back({num(static_cast<std::int64_t>(k + 1)), sys[k].label, num(sys[k].seed.i1), mean,
                            exact ? rational_text(*exact) : "", num(it.linear_bound())});
  }
  return r;
}

Report identity(const System& sys, double tol) {
  const auto id = mean_index_identity(sys);
  Report r;
  r.json["terms"] = Json::array();
  r.table.header = {"label", "mean", "chi", "sign"};
  for (const auto& t : id.terms) {
    r.json["terms"].push_back({{"label", t.label},
                               {"mean", real_text(t.mean)},
                               {"mean_exact", rational_json(t.mean_exact)},
                               {"chi", rational_json(t.chi)},
                               {"sign", t.sign}});
    r.table.rows.push_back({t.label, real_text(t.mean), rational_text(t.chi), std::to_string(t.sign)});
  }
  r.json["sum_pos"] = real_text(id.sum_pos);
  r.json["sum_neg"] = real_text(id.sum_neg);
  r.json["exact_pos"] = rational_json(id.exact_pos);
  r.json["exact_neg"] = rational_json(id.exact_neg);
  r.json["applicable"] = id.applicable;
  const bool holds = id.applicable && id.holds(tol);
  r.json["holds"] = holds;
  r.notes.push_back("sum over positive means of chi/mean = " +
                    (id.exact_pos ? rational_text(*id.exact_pos) : real_text(id.sum_pos)) + " (expected 1/2)");
  r.notes.push_back("sum over negative means of chi/mean = " +
                    (id.exact_neg ? rational_text(*id.exact_neg) : real_text(id.sum_neg)) + " (expected 0)");

  Json diagnostics = Json::array();
  for (const auto& label : id.zero_mean) {
    const auto rec = std::find_if(sys.begin(), sys.end(), [&](const OrbitRecord& o) { return o.label == label; });
    const auto it = rec->iteration();
    std::int64_t lo = it.viterbo(1).index, hi = lo;
    for (std::int64_t m = 2; m <= 1000; ++m) {
      const auto v = it.viterbo(m).index;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const std::string msg = "orbit '" + label +
                            "' has mean index 0: the identity does not apply, and a positive mean is required "
                            "for every orbit of a hypersurface with finitely many closed characteristics; "
                            "its indices stay bounded, i(y^m) in [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "] for m <= 1000";
    diagnostics.push_back({{"label", label}, {"bounded_range", {lo, hi}}, {"message", msg}});
    r.notes.push_back(msg);
  }
  r.json["diagnostics"] = diagnostics;
  r.notes.push_back(std::string("identity ") +
                    (!id.applicable ? "not applicable" : holds ? "holds" : "violated"));
  r.code = holds ? ok : failed;
  return r;
}

Report morse(const System& sys, std::int64_t p_lo, std::int64_t p_hi, std::optional<std::int64_t> p_max) {
  if (p_hi < p_lo) throw InputError("--p-hi must be >= --p-lo");
  const auto ms = morse_counts(sys, p_lo, p_hi);
  const auto rep = morse_inequalities(ms, p_max.value_or(p_hi));
  Report r;
  r.json["p_lo"] = p_lo;
  r.json["p_hi"] = p_hi;
  r.json["below_window"] = ms.below_window;
  r.json["rows"] = Json::array();
  r.table.header = {"p", "M_p", "b_p", "alt_M", "alt_b", "holds"};
  for (const auto& row : rep.rows) {
    r.json["rows"].push_back({{"p", row.p},
                              {"M_p", row.m_p},
                              {"b_p", row.b_p},
                              {"alternating_M", row.alternating_m},
                              {"alternating_b", row.alternating_b},
                              {"holds", row.holds}});
    r.table.rows.push_back({num(row.p), num(row.m_p), std::to_string(row.b_p), num(row.alternating_m),
                            num(row.alternating_b), yes(row.holds)});
  }
  r.json["inequalities_hold"] = rep.inequalities_hold;
  r.json["equality"] = rep.equality;
  r.json["first_violation"] = rep.first_violation ? Json(*rep.first_violation) : Json(nullptr);
  r.json["first_inequality"] = rep.first_inequality ? Json(*rep.first_inequality) : Json(nullptr);
  r.notes.push_back(std::string("Morse inequalities ") + (rep.inequalities_hold ? "hold" : "fail") +
                    (rep.equality ? "; M_p = b_p throughout" : ""));
  r.code = rep.inequalities_hold ? ok : failed;
  return r;
}

// ---- cij ----

Json stats_json(const SearchStats& s) {
  return {{"scanned", s.scanned},
          {"integral", s.integral},
          {"first_orbit", s.first_orbit},
          {"assembled", s.assembled},
          {"verified", s.verified}};
}

Report cij_find(const System& sys, const SearchOptions& opts) {
  const auto res = find_tuples(sys, opts);
  Report r;
  r.json["tuples"] = Json::array();
  r.table.header = {"N", "m", "m_bar", "delta", "verified"};
  for (const auto& t : res.tuples) {
    r.json["tuples"].push_back(to_json(t));
    r.table.rows.push_back({num(t.N), joined(t.m), std::to_string(t.m_bar), num(t.delta), yes(t.checks.all())});
  }
  r.json["stats"] = stats_json(res.stats);
  r.notes.push_back(std::to_string(res.tuples.size()) + " tuple(s) with m_1 <= " + std::to_string(opts.bound) +
                    "; scanned " + std::to_string(res.stats.scanned) + ", verified " +
                    std::to_string(res.stats.verified));
  return r;
}

Report cij_verify(const System& sys, const CijTuple& t) {
  const auto rep = verify_tuple(sys, t);
  CijTuple out = t;
  out.checks = rep.checks;
  Report r;
  r.json["tuple"] = to_json(out);
  r.json["ok"] = rep.ok();
  r.json["failures"] = rep.failures;
  r.notes.push_back("N = " + num(t.N) + ", m = [" + joined(t.m, ", ") + "], m_bar = " + std::to_string(t.m_bar));
  for (const auto& f : rep.failures) r.notes.push_back("failed: " + f);
  r.notes.push_back(rep.ok() ? "tuple verified" : "tuple rejected");
  r.code = rep.ok() ? ok : failed;
  return r;
}

Report dichotomy(const System& sys, const std::optional<CijTuple>& given, const SearchOptions& opts) {
  Report r;
  CijTuple tuple;
  if (given) {
    tuple = *given;
  } else {
    const auto res = find_tuples(sys, opts);
    r.json["search"] = stats_json(res.stats);
    if (res.tuples.empty()) {
      r.json["tuple"] = nullptr;
      r.json["verdict"] = "no tuple within bound";
      r.notes.push_back("no tuple with m_1 <= " + std::to_string(opts.bound) + "; raise --bound");
      r.code = failed;
      return r;
    }
    tuple = res.tuples.front();
  }
  const auto rep = dichotomy_count(sys, tuple);
  r.json["tuple"] = to_json(tuple);
  r.json["N"] = rep.N;
  r.json["window"] = {rep.window_lo, rep.window_hi};
  r.json["window_sum"] = rep.window_sum;
  r.json["betti_sum"] = rep.betti_sum;
  r.json["q"] = rep.q;
  r.json["n"] = rep.n;
  r.json["middle_index"] = rep.middle_index;
  r.json["certified"] = rep.certified;
  r.json["failures"] = rep.failures;
  r.json["verdict"] = rep.verdict;
  r.notes.push_back("N = " + num(rep.N) + ", window [" + num(rep.window_lo) + ", " + num(rep.window_hi) + "]");
  r.notes.push_back("window sum = " + num(rep.window_sum) + ", Betti sum = " + num(rep.betti_sum) +
                    ", q = " + std::to_string(rep.q) + ", n = " + std::to_string(rep.n));
  for (const auto& f : rep.failures) r.notes.push_back("failed: " + f);
  r.notes.push_back("verdict: " + rep.verdict);
  r.table.header = {"label", "m_k", "i(y^2m_k)"};
  for (std::size_t k = 0; k < sys.size() && k < rep.middle_index.size(); ++k)
    r.table.rows.push_back({sys[k].label, num(tuple.m[k]), num(rep.middle_index[k])});
  r.code = rep.certified && rep.window_sum == rep.n && rep.q == rep.n ? ok : failed;
  return r;
}

// ---- ellipsoid ----

std::vector<std::int64_t> read_seed_fixture(const std::string& path, const EllipsoidSpec& spec, std::istream& in) {
  const Json j = parse_json(slurp(path, in));
  if (j.is_array()) return j.get<std::vector<std::int64_t>>();
  require_keys(j, {"radii", "seeds"}, "seed fixture");
  if (j.contains("radii")) {
    const auto radii = j.at("radii").get<std::vector<std::string>>();
    bool same = radii.size() == spec.radii.size();
    for (std::size_t k = 0; same && k < radii.size(); ++k) same = radii[k] == spec.radii[k].text;
    if (!same) throw InputError("seed fixture was made for other radii");
  }
  if (!j.contains("seeds") || !j.at("seeds").is_array()) throw InputError("seed fixture: \"seeds\" must be a list");
  try {
    return j.at("seeds").get<std::vector<std::int64_t>>();
  } catch (const nlohmann::json::exception&) {
    throw InputError("seed fixture: seeds must be integers");
  }
}

Report ellipsoid(const std::string& radii, const std::string& fixture, bool seeds_only, std::istream& in) {
  const auto spec = EllipsoidSpec::parse(radii);
  EllipsoidOptions opts;
  if (!fixture.empty()) opts.seeds = read_seed_fixture(fixture, spec, in);
  const auto sys = build_system(spec, opts);
  Json texts = Json::array();
  for (const auto& r : spec.radii) texts.push_back(r.text);
  Report r;
  if (seeds_only) {
    Json seeds = Json::array();
    for (const auto& rec : sys) seeds.push_back(rec.seed.i1);
    r.json = {{"radii", texts}, {"seeds", seeds}};
  } else {
    r.json = to_json(sys);
    r.json["source"] = {{"kind", "ellipsoid"}, {"radii", texts}, {"seeds", fixture.empty() ? "oracle" : "fixture"}};
  }
  r.notes.push_back("ellipsoid with radii " + radii + ": " + std::to_string(sys.size()) + " closed characteristics");
  r.table.header = {"k", "label", "period", "i1", "mean", "class"};
  for (std::size_t k = 0; k < sys.size(); ++k)
    r.table.rows.push_back({num(static_cast<std::int64_t>(k + 1)), sys[k].label, num(sys[k].period),
                            num(sys[k].seed.i1), real_text(sys[k].iteration().mean()),
                            to_string(sys[k].cls.orbit_class)});
  return r;
}

// ---- oracle ----

PathSpec oracle_path(const Json& j) {
  if (j.is_object() && j.contains("segments")) return path_from_json(j);
  if (j.is_object() && j.contains("blocks")) {
    require_keys(j, {"blocks"}, "oracle input");
    std::vector<PathSpec> parts;
    for (const auto& b : j.at("blocks")) parts.push_back(generator_path_for(block_from_json(b)));
    if (parts.empty()) throw InputError("\"blocks\" must be a non-empty list");
    return diamond_paths(parts);
  }
  if (j.is_object() && j.contains("type")) return generator_path_for(block_from_json(j));
  throw InputError("oracle input must be a path {\"n\",\"segments\"}, a block, or {\"blocks\":[...]}");
}

std::complex<double> omega_of(double turns) {
  const double t = turns - std::floor(turns);
  if (t == 0.0) return {1.0, 0.0};
  if (t == 0.5) return {-1.0, 0.0};
  return std::polar(1.0, 2 * std::numbers::pi * t);
}

Json crossings_json(const std::vector<Crossing>& cs) {
  Json out = Json::array();
  for (const auto& c : cs) out.push_back({{"t", c.t}, {"contribution", c.contribution}, {"kernel_dim", c.kernel_dim}});
  return out;
}

Report oracle(const PathSpec& path, int m, double turns, bool sweep, const OracleConfig& cfg) {
  const auto omega = omega_of(turns);
  Report r;
  r.json["omega_turns"] = turns;
  if (sweep) {
    const auto s = iterate_sweep(path, m, omega, cfg);
    r.json["rows"] = Json::array();
    r.table.header = {"m", "index", "nullity"};
    for (int k = 1; k <= m; ++k) {
      r.json["rows"].push_back({{"m", k}, {"index", s.index[k - 1]}, {"nullity", s.nullity[k - 1]}});
      r.table.rows.push_back({std::to_string(k), std::to_string(s.index[k - 1]), std::to_string(s.nullity[k - 1])});
    }
    r.json["crossings"] = crossings_json(s.crossings);
    return r;
  }
  const auto rep = omega_report(path, m, omega, cfg);
  r.json["m"] = m;
  r.json["index"] = rep.index;
  r.json["nullity"] = rep.nullity;
  r.json["endpoint_degenerate"] = rep.endpoint_degenerate;
  r.json["crossings"] = crossings_json(rep.crossings);
  r.notes.push_back("index = " + std::to_string(rep.index) + ", nullity = " + std::to_string(rep.nullity) +
                    (rep.endpoint_degenerate ? " (degenerate endpoint)" : ""));
  r.table.header = {"t", "contribution", "kernel_dim"};
  for (const auto& c : rep.crossings)
    r.table.rows.push_back({num(c.t), std::to_string(c.contribution), std::to_string(c.kernel_dim)});
  return r;
}

// ---- splitting-fixture ----

Report splitting(const std::string& output, const std::string& check, std::istream& in) {
  const auto fixture = generate_splitting_fixture();
  const auto doc = to_json(fixture);
  if (!output.empty()) {
    std::ofstream f(output, std::ios::binary);
    if (!f) throw InputError("cannot write " + output);
    f << doc.dump(2) << "\n";
  }
  Report r;
  r.json = Json::parse(doc.dump());
  r.table.header = {"kind", "position", "s_plus", "s_minus"};
  for (const auto& e : fixture.entries)
    r.table.rows.push_back({to_string(e.kind), to_string(e.where), std::to_string(e.value.s_plus),
                            std::to_string(e.value.s_minus)});
  if (!check.empty()) {
    const auto committed = entries_from_json(nlohmann::json::parse(slurp(check, in)));
    std::vector<std::string> diffs;
    if (committed.size() != fixture.entries.size()) diffs.push_back("entry counts differ");
    for (std::size_t k = 0; k < committed.size() && k < fixture.entries.size(); ++k) {
      const auto& a = committed[k];
      const auto& b = fixture.entries[k];
      if (a.kind != b.kind || a.where != b.where || !(a.value == b.value))
        diffs.push_back(std::string(to_string(b.kind)) + " at " + to_string(b.where) + " differs");
    }
    r.json = Json{{"fixture", r.json}, {"check", check}, {"matches", diffs.empty()}, {"differences", diffs}};
    for (const auto& d : diffs) r.notes.push_back(d);
    r.notes.push_back(diffs.empty() ? "matches " + check : "differs from " + check);
    r.code = diffs.empty() ? ok : failed;
  }
  return r;
}

Format format_of(const std::string& s) {
  if (s == "text") return Format::text;
  if (s == "csv") return Format::csv;
  return Format::json;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Index iteration, common index jumps and closed-characteristic counting"};
  app.name("sik");
  app.require_subcommand(1);

  std::string format = "json";
  std::string system_path;
  std::map<CLI::App*, std::function<Report()>> actions;

  const auto common = [&](CLI::App* sub, bool with_system) {
    sub->add_option("--format", format, "json, text or csv")->check(CLI::IsMember({"json", "text", "csv"}));
    if (with_system) sub->add_option("--system", system_path, "System JSON file (stdin when absent)");
  };

  std::string input_path;
  double tol = 1e-7;
  auto* dec = app.add_subcommand("decompose", "normal form, classification and spectrum of a matrix or block list");
  common(dec, false);
  dec->add_option("--input", input_path, "matrix {\"n\",\"rows\"} or {\"blocks\":[...]} (stdin when absent)");
  dec->add_option("--tol", tol, "eigenvalue clustering tolerance")->check(CLI::PositiveNumber);
  actions[dec] = [&] { return decompose(parse_json(slurp(input_path, in)), tol); };

  std::int64_t max_m = 10;
  bool viterbo = false;
  auto* itc = app.add_subcommand("iterate", "index and nullity of every iterate");
  common(itc, true);
  itc->add_option("--max-m", max_m, "largest iterate")->check(CLI::PositiveNumber);
  itc->add_flag("--viterbo", viterbo, "shift indices by -n");
  actions[itc] = [&] { return iterate(read_system(system_path, in), max_m, viterbo); };

  auto* mic = app.add_subcommand("mean-index", "mean index of every orbit");
  common(mic, true);
  actions[mic] = [&] { return mean_index_report(read_system(system_path, in)); };

  double id_tol = 1e-9;
  auto* idc = app.add_subcommand("identity", "mean index identity over the orbits");
  common(idc, true);
  idc->add_option("--tol", id_tol, "tolerance on the positive sum")->check(CLI::PositiveNumber);
  actions[idc] = [&] { return identity(read_system(system_path, in), id_tol); };

  std::int64_t p_lo = 0, p_hi = 0;
  std::optional<std::int64_t> p_max;
  auto* mc = app.add_subcommand("morse", "Morse-type counts and inequalities on a degree window");
  common(mc, true);
  mc->add_option("--p-lo", p_lo, "lowest degree");
  mc->add_option("--p-hi", p_hi, "highest degree counted")->required();
  mc->add_option("--p-max", p_max, "highest degree checked (default --p-hi)");
  actions[mc] = [&] { return morse(read_system(system_path, in), p_lo, p_hi, p_max); };

  SearchOptions search;
  const auto search_options = [&](CLI::App* sub) {
    sub->add_option("--mbar", search.m_bar, "iterates 1..mbar around each jump")->check(CLI::PositiveNumber);
    sub->add_option("--bound", search.bound, "largest m_1 scanned")->check(CLI::PositiveNumber);
    sub->add_option("--delta", search.delta, "threshold for Delta_k")->check(CLI::Range(1e-12, 0.5));
    sub->add_option("--threads", search.threads, "worker threads (0: hardware)");
  };
  auto* fc = app.add_subcommand("cij-find", "search for common index jump tuples");
  common(fc, true);
  search_options(fc);
  fc->add_option("--max-results", search.max_results, "0 for every tuple within the bound");
  actions[fc] = [&] { return cij_find(read_system(system_path, in), search); };

  std::string tuple_path;
  auto* vc = app.add_subcommand("cij-verify", "re-verify a tuple certificate");
  common(vc, true);
  vc->add_option("--tuple", tuple_path, "tuple certificate JSON")->required();
  actions[vc] = [&] {
    if ((system_path.empty() || system_path == "-") && tuple_path == "-")
      throw InputError("--system and --tuple cannot both read stdin");
    const auto sys = read_system(system_path, in);
    return cij_verify(sys, tuple_from_json(parse_json(slurp(tuple_path, in))));
  };

  auto* dc = app.add_subcommand("dichotomy", "count elliptic closed characteristics in the jump window");
  common(dc, true);
  search_options(dc);
  dc->add_option("--tuple", tuple_path, "use this tuple instead of searching");
  actions[dc] = [&] {
    const auto sys = read_system(system_path, in);
    std::optional<CijTuple> t;
    if (!tuple_path.empty()) t = tuple_from_json(parse_json(slurp(tuple_path, in)));
    return dichotomy(sys, t, search);
  };

  std::string radii, seed_fixture;
  bool seeds_only = false;
  auto* ec = app.add_subcommand("ellipsoid", "System JSON for an irrational ellipsoid");
  common(ec, false);
  ec->add_option("--radii", radii, "comma-separated radii, e.g. 1,2^(1/4)")->required();
  ec->add_option("--seed-fixture", seed_fixture, "precomputed i(gamma_k, 1), skipping the oracle");
  ec->add_flag("--seeds-only", seeds_only, "emit a seed fixture instead of the system");
  actions[ec] = [&] { return ellipsoid(radii, seed_fixture, seeds_only, in); };

  int m = 1;
  double turns = 0.0;
  bool sweep = false;
  OracleConfig cfg;
  auto* oc = app.add_subcommand("oracle", "omega-index by crossing counting");
  common(oc, false);
  oc->add_option("--input", input_path, "path, block or {\"blocks\":[...]} JSON (stdin when absent)");
  oc->add_option("--m", m, "iterate")->check(CLI::Range(1, 100000));
  oc->add_option("--omega", turns, "omega as turns, omega = exp(2 pi i turns)");
  oc->add_flag("--sweep", sweep, "every iterate 1..m");
  oc->add_option("--epsilon", cfg.epsilon, "rotation perturbation")->check(CLI::PositiveNumber);
  oc->add_option("--grid", cfg.grid, "samples per segment")->check(CLI::Range(16, 1 << 22));
  actions[oc] = [&] { return oracle(oracle_path(parse_json(slurp(input_path, in))), m, turns, sweep, cfg); };

  std::string output, check;
  auto* sc = app.add_subcommand("splitting-fixture", "splitting numbers from the limit oracle");
  common(sc, false);
  sc->add_option("--output", output, "also write the fixture here");
  sc->add_option("--check", check, "compare against a committed fixture");
  actions[sc] = [&] { return splitting(output, check, in); };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : bad_input;
  }

  try {
    for (auto& [sub, action] : actions) {
      if (!sub->parsed()) continue;
      const Report r = action();
      emit(r, format_of(format), out);
      return r.code;
    }
    return bad_input;
  } catch (const InputError& e) {
    err << "sik: input error: " << e.what() << "\n";
    return bad_input;
  } catch (const PreconditionError& e) {
    err << "sik: precondition failed: " << e.what() << "\n";
    return bad_input;
  } catch (const UnsupportedStructure& e) {
    err << "sik: unsupported structure: " << e.what() << "\n";
    return bad_input;
  } catch (const Error& e) {
    err << "sik: verification failed: " << e.what() << "\n";
    return failed;
  } catch (const nlohmann::json::exception& e) {
    err << "sik: input error: " << e.what() << "\n";
    return bad_input;
  } catch (const std::exception& e) {
    err << "sik: internal error: " << e.what() << "\n";
    return failed;
  } catch (...) {
    err << "sik: internal error\n";
    return failed;
  }
}

}  // namespace sik::cli
