// Command-line front end: every operation reads/writes JSON on stdout so runs
// can be scripted and diffed. All randomness flows from the --seed flag.
#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "moduli/integrals.hpp"
#include "moduli/rng.hpp"

using json = nlohmann::ordered_json;
using namespace moduli;

namespace {

std::string format = "json";

void emit(const json& j) {
  if (format == "pretty")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << j.dump() << "\n";
}

json rat_json(const Rational& r) { return rat_str(r); }

std::vector<Rational> parse_rationals(const std::string& csv) {
  std::vector<Rational> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(rat_parse(tok));
  return out;
}

json param_to_json(const ParamMatrix& a) {
  json entries = json::object();
  int p = a.p();
  for (int k = 1; k <= p - 3; ++k)
    for (int l = k; l <= p - 3; ++l)
      if (a.is_numeric(k, l))
        entries[std::to_string(k) + "," + std::to_string(l)] = rat_json(a.value(k, l));
  return json{{"p", p}, {"entries", entries}};
}

ParamMatrix param_from_json(const json& j) {
  int p = j.at("p").get<int>();
  ParamMatrix a(make_registry(p));
  for (const auto& [key, val] : j.at("entries").items()) {
    auto comma = key.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad entry key: " + key);
    int k = std::stoi(key.substr(0, comma));
    int l = std::stoi(key.substr(comma + 1));
    a.set(k, l, rat_parse(val.get<std::string>()));
  }
  return a;
}

json mult_to_json(const Multiplicities& n) {
  json vals = json::array();
  for (const auto& v : n.values) vals.push_back(rat_json(v));
  return json{{"values", vals}, {"mode", n.mode == MultMode::Darboux ? "darboux" : "integral"}};
}

Multiplicities mult_from_json(const json& j) {
  Multiplicities n;
  for (const auto& v : j.at("values")) n.values.push_back(rat_parse(v.get<std::string>()));
  std::string mode = j.value("mode", "integral");
  if (mode == "darboux")
    n.mode = MultMode::Darboux;
  else if (mode == "integral")
    n.mode = MultMode::Integral;
  else
    throw std::invalid_argument("unknown multiplicity mode: " + mode);
  return n;
}

Multiplicities default_mult(int p) {
  Multiplicities n;
  n.values.assign(p, 1);
  return n;
}

json poly_to_json(const MultiPoly& f) {
  const RegistryPtr& reg = f.registry();
  json terms = json::array();
  for (const auto& [m, c] : f.terms()) {
    json mono = json::object();
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] != 0) mono[reg->info(i).name] = m[i];
    terms.push_back(json{{"m", mono}, {"c", rat_json(c)}});
  }
  return terms;
}

MultiPoly poly_from_json(const json& j, const RegistryPtr& reg) {
  MultiPoly f(reg);
  for (const auto& term : j) {
    Monomial m;
    for (const auto& [name, e] : term.at("m").items()) {
      std::size_t idx = reg->index_of(name);
      if (m.size() <= idx) m.resize(idx + 1, 0);
      m[idx] = e.get<int>();
    }
    f.set_coeff(m, rat_parse(term.at("c").get<std::string>()));
  }
  return f;
}

json rf_to_json(const RationalFunction& f) {
  return json{{"num", poly_to_json(f.num())}, {"den", poly_to_json(f.den())}};
}

RationalFunction rf_from_json(const json& j, const RegistryPtr& reg) {
  return RationalFunction(poly_from_json(j.at("num"), reg), poly_from_json(j.at("den"), reg));
}

CurveInput curve_from_json(const json& j) {
  CurveInput c;
  for (const auto& b : j.at("branches")) {
    BranchSeries br;
    std::string orient = b.value("orientation", "yOfX");
    if (orient == "yOfX")
      br.orientation = BranchSeries::Orient::YofX;
    else if (orient == "xOfY")
      br.orientation = BranchSeries::Orient::XofY;
    else
      throw std::invalid_argument("unknown orientation: " + orient);
    auto coeffs = b.at("coeffs");
    TruncatedSeries s(static_cast<long>(coeffs.size()));
    long h = 1;
    for (const auto& v : coeffs) s.set_coeff(h++, rat_parse(v.get<std::string>()));
    br.series = s;
    c.branches.push_back(std::move(br));
  }
  return c;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return json::parse(in);
}

ParamMatrix first_line_matrix(int p, const std::string& csv) {
  ParamMatrix a1(make_registry(p));
  auto vals = parse_rationals(csv);
  if (static_cast<int>(vals.size()) != p - 3)
    throw std::invalid_argument("first line needs exactly " + std::to_string(p - 3) +
                                " values");
  for (int l = 1; l <= p - 3; ++l) a1.set(1, l, vals[l - 1]);
  return a1;
}

json genset_to_json(const GeneratorSet& G) {
  json gens = json::array();
  for (const auto& g : G.gens) {
    json comps = json::object();
    for (const auto& [kl, poly] : g.X.comps())
      if (!poly.is_zero())
        comps[std::to_string(kl.first) + "," + std::to_string(kl.second)] = poly_to_json(poly);
    gens.push_back(json{{"i", g.i},
                        {"j", g.j},
                        {"X", comps},
                        {"Z",
                         json{{"alpha", poly_to_json(g.Z.alpha)},
                              {"beta", poly_to_json(g.Z.beta)},
                              {"D", g.Z.D}}},
                        {"kappa", rat_json(g.diag.kappa)}});
  }
  return json{{"p", G.p}, {"multiplicities", mult_to_json(G.n)}, {"generators", gens}};
}

json integrals_to_json(const FirstIntegralSet& F, const Multiplicities& n,
                       std::uint64_t seed) {
  json line = json::array();
  for (const auto& v : F.first_line) line.push_back(rat_json(v));
  json ints = json::array();
  for (const auto& I : F.integrals)
    ints.push_back(json{{"k", I.k},
                        {"n", I.n},
                        {"weight", I.weight},
                        {"on_moduli", I.on_moduli},
                        {"f", rf_to_json(I.f)},
                        {"projectivized", rf_to_json(I.projectivized)}});
  return json{{"p", F.p},
              {"first_line", line},
              {"multiplicities", mult_to_json(n)},
              {"seed", seed},
              {"tau", F.tau},
              {"tau_prime", F.tau_prime},
              {"integrals", ints}};
}

ParamMatrix random_point(const RegistryPtr& reg, Rng& rng) {
  ParamMatrix a(reg);
  int p = reg->p();
  std::set<Rational> used = {Rational(0), Rational(1)};
  for (int l = 1; l <= p - 3; ++l) {
    Rational v;
    do {
      v = rng.rational(40, 8);
    } while (!used.insert(v).second);
    a.set(1, l, v);
  }
  for (int k = 2; k <= p - 3; ++k)
    for (int l = k; l <= p - 3; ++l)
      a.set(k, l, k == 2 && l == 2 ? rng.nonzero_rational(40, 8) : rng.rational(40, 8));
  return a;
}

// ---- subcommand bodies ----

int cmd_dims(int p) {
  auto d = dims(p);
  json levels = json::object();
  for (const auto& [m, dim] : d.levelDims) levels[std::to_string(m)] = dim;
  emit(json{{"p", d.p},
            {"dimA", d.dimA},
            {"delta", d.delta},
            {"tau", d.tau},
            {"tauPrime", d.tauPrime},
            {"genericRank", d.genericRank},
            {"freeIntegrals", d.freeIntegrals},
            {"fixedFirstLineDim", d.fixedFirstLineDim},
            {"levelDims", levels}});
  return 0;
}

int cmd_normal_form(int p, const std::vector<std::string>& entries, const std::string& input,
                    const std::string& mult_csv, bool darboux, bool reduced) {
  ParamMatrix a = input.empty() ? ParamMatrix(make_registry(p))
                                : param_from_json(read_json_file(input));
  for (const auto& e : entries) {
    auto colon = e.find(':');
    auto comma = e.find(',');
    if (colon == std::string::npos || comma == std::string::npos || comma > colon)
      throw std::invalid_argument("entry must look like k,l:value, got " + e);
    a.set(std::stoi(e.substr(0, comma)), std::stoi(e.substr(comma + 1, colon - comma - 1)),
          rat_parse(e.substr(colon + 1)));
  }
  Multiplicities n = default_mult(a.p());
  if (!mult_csv.empty()) n.values = parse_rationals(mult_csv);
  if (darboux) n.mode = MultMode::Darboux;
  auto N = build_normal_form(a, n, reduced);
  json branches = json::array(), exps = json::array();
  for (const auto& b : N.branches) branches.push_back(b.str());
  for (const auto& e : N.exponents) exps.push_back(rat_json(e));
  json out{{"p", a.p()}, {"branches", branches}, {"exponents", exps}};
  if (N.expanded) out["expanded"] = N.expanded->str();
  emit(out);
  return 0;
}

int cmd_prenormalize(const std::string& path, long max_height) {
  auto j = read_json_file(path);
  auto c = curve_from_json(j);
  auto [a, report] = prenormalize(c, max_height);
  json residuals = json::array();
  for (const auto& [h, k, v] : report.residuals)
    residuals.push_back(json{{"height", h}, {"branch", k}, {"value", rat_json(v)}});
  emit(json{{"params", param_to_json(a)},
            {"report",
             json{{"linear",
                   json{{"a", rat_json(report.linear.a)},
                        {"b", rat_json(report.linear.b)},
                        {"c", rat_json(report.linear.c)},
                        {"d", rat_json(report.linear.d)}}},
                  {"flattened_height", report.flattened_height},
                  {"residuals", residuals}}}});
  return 0;
}

struct GenArgs {
  int p = 0;
  std::string first_line, mult_csv;
  bool darboux = false;
  std::uint64_t seed = 1;
  int level_cap = 0;
};

GeneratorSet build_generators(const GenArgs& g) {
  ParamMatrix a1 = first_line_matrix(g.p, g.first_line);
  Multiplicities n = default_mult(g.p);
  if (!g.mult_csv.empty()) n.values = parse_rationals(g.mult_csv);
  if (g.darboux) n.mode = MultMode::Darboux;
  return generators_symbolic(a1, n, g.seed, g.level_cap);
}

int cmd_generators(const GenArgs& g) {
  emit(genset_to_json(build_generators(g)));
  return 0;
}

int cmd_rank(int p, std::uint64_t seed, int points) {
  auto d = dims(p);
  auto reg = make_registry(p);
  Rng rng(seed);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i + 4 <= p; ++i)
    for (int j = 0; i + j + 4 <= p; ++j) pairs.emplace_back(i, j);
  Multiplicities n = default_mult(p);

  json expected_levels = json::object();
  for (int m = 3; m <= p - 3; ++m)
    expected_levels[std::to_string(m)] = std::min<long>(m - 1, p - m - 2);

  bool all_match = true;
  json samples = json::array();
  for (int t = 0; t < points; ++t) {
    ParamMatrix a = random_point(reg, rng);
    auto res = solve_generators_at_point(a, n, pairs);
    std::vector<std::pair<int, int>> coords;
    for (int k = 2; k <= p - 3; ++k)
      for (int l = k; l <= p - 3; ++l) coords.emplace_back(k, l);
    Matrix<Rational> M;
    for (const auto& [ij, row] : res.X) {
      std::vector<Rational> r;
      for (auto kl : coords) {
        auto it = row.find(kl);
        r.push_back(it == row.end() ? Rational(0) : it->second);
      }
      M.push_back(std::move(r));
    }
    long total = static_cast<long>(matrix_rank(M));
    json per_level = json::object();
    bool match = total == d.genericRank;
    for (int m = 3; m <= p - 3; ++m) {
      // initial parts: level-m rows of the generators with i+j = m-2
      Matrix<Rational> I;
      for (const auto& [ij, row] : res.X) {
        if (ij.first + ij.second != m - 2) continue;
        std::vector<Rational> r;
        for (int l = m; l <= p - 3; ++l) {
          auto it = row.find({m, l});
          r.push_back(it == row.end() ? Rational(0) : it->second);
        }
        I.push_back(std::move(r));
      }
      long rk = static_cast<long>(matrix_rank(I));
      per_level[std::to_string(m)] = rk;
      if (rk != std::min<long>(m - 1, p - m - 2)) match = false;
    }
    all_match = all_match && match;
    samples.push_back(json{{"total", total}, {"per_level", per_level}, {"match", match}});
  }
  emit(json{{"p", p},
            {"expected_total", d.genericRank},
            {"expected_per_level", expected_levels},
            {"points", samples},
            {"all_match", all_match}});
  if (!all_match) throw std::logic_error("generic rank law violated at a sample point");
  return 0;
}

int cmd_brackets(const GenArgs& g) {
  auto G = build_generators(g);
  const auto& x00 = G.at(0, 0).X;
  Rational kappa = G.at(0, 0).diag.kappa;
  json eigen = json::array();
  bool ok = true;
  for (const auto& gen : G.gens) {
    if (gen.i == 0 && gen.j == 0) continue;
    // X00 is the kappa/|n|-scaled Euler field, so each X_{i,j} is an exact
    // eigenvector: [X00, X_{i,j}] = -(kappa/|n|)(i+j) X_{i,j}
    auto br = lie_bracket(x00, gen.X);
    Rational factor = -kappa * Rational(gen.i + gen.j) / G.n.total();
    bool exact = (br - gen.X.scaled(factor)).is_zero();
    ok = ok && exact;
    eigen.push_back(json{{"i", gen.i}, {"j", gen.j}, {"exact", exact}});
  }
  json commuting = json::array();
  for (const auto& cf : commuting_family(G))
    commuting.push_back(json{{"i", cf.i}, {"j", cf.j}, {"exponent", cf.exponent}});
  emit(json{{"p", G.p}, {"kappa", rat_json(kappa)}, {"eigen", eigen},
            {"commuting", commuting}});
  if (!ok) throw std::logic_error("bracket eigen-relation violated");
  return 0;
}

int cmd_integrals(const GenArgs& g) {
  ParamMatrix a1 = first_line_matrix(g.p, g.first_line);
  Multiplicities n = default_mult(g.p);
  if (!g.mult_csv.empty()) n.values = parse_rationals(g.mult_csv);
  if (g.darboux) n.mode = MultMode::Darboux;
  auto F = projectivize(first_integrals(a1, n, g.seed));
  emit(integrals_to_json(F, n, g.seed));
  return 0;
}

int cmd_invariants(const std::string& path, std::uint64_t seed) {
  (void)seed;  // curve_invariants is deterministic; the flag is part of the contract
  auto c = curve_from_json(read_json_file(path));
  auto t = curve_invariants(c);
  json ratios = json::array(), values = json::array();
  for (const auto& v : t.cross_ratios) ratios.push_back(rat_json(v));
  for (const auto& v : t.values) values.push_back(rat_json(v));
  emit(json{{"cross_ratios", ratios}, {"values", values}});
  return 0;
}

int cmd_verify(const std::string& path) {
  auto j = read_json_file(path);
  int p = j.at("p").get<int>();
  auto reg = make_registry(p);
  ParamMatrix a1(reg);
  {
    int l = 1;
    for (const auto& v : j.at("first_line")) a1.set(1, l++, rat_parse(v.get<std::string>()));
  }
  Multiplicities n = mult_from_json(j.at("multiplicities"));
  std::uint64_t seed = j.value("seed", std::uint64_t{1});

  auto d = dims(p);
  json failures = json::array();
  if (j.at("tau").get<long>() != d.tau)
    failures.push_back(json{{"check", "tau"}, {"expected", d.tau}});
  if (static_cast<long>(j.at("integrals").size()) != d.tau)
    failures.push_back(json{{"check", "count"}, {"expected", d.tau}});

  std::vector<std::pair<std::string, RationalFunction>> projs;
  for (const auto& I : j.at("integrals")) {
    auto f = rf_from_json(I.at("projectivized"), reg);
    auto w = f.weighted_degree();
    std::string tag =
        "(" + std::to_string(I.at("k").get<int>()) + "," + std::to_string(I.at("n").get<int>()) + ")";
    if (!w || *w != 0) failures.push_back(json{{"check", "weight"}, {"integral", tag}});
    projs.emplace_back(tag, std::move(f));
  }
  long checked = static_cast<long>(projs.size());
  if (p >= 6) {
    auto G = generators_symbolic(a1, n, seed);
    for (const auto& [tag, f] : projs)
      if (auto w = verify_annihilation(f, G))
        failures.push_back(json{{"check", "annihilation"},
                                {"integral", tag},
                                {"witness", json{{"i", w->i}, {"j", w->j}}}});
  }
  emit(json{{"p", p}, {"checked", checked}, {"failures", failures}});
  if (!failures.empty()) throw std::logic_error("verification failed");
  return 0;
}

int cmd_selftest(std::uint64_t seed, int jobs) {
  struct Check {
    std::string name;
    std::function<bool()> run;
  };
  std::vector<Check> checks;

  checks.push_back({"dimension formulas", [] {
    auto d9 = dims(9);
    auto d10 = dims(10);
    return d9.dimA == 21 && d9.tau == 12 && d9.genericRank == 9 && d9.freeIntegrals == 6 &&
           d9.fixedFirstLineDim == 15 && d10.tau == 16 && d10.freeIntegrals == 9;
  }});

  checks.push_back({"radial closed form at p=6", [seed] {
    auto reg = make_registry(6);
    Rng rng(seed + 1);
    ParamMatrix a = random_point(reg, rng);
    auto g = solve_generator(0, 0, a, default_mult(6));
    auto closed = x00_closed_form(reg, default_mult(6));
    auto bound = a.bindings();
    auto lhs = g.X.eval(bound);
    auto rhs = closed.scaled(g.diag.kappa).eval(bound);
    return lhs == rhs && (g.diag.kappa == 1 || g.diag.kappa == -1);
  }});

  checks.push_back({"first integrals annihilated at p=6", [seed] {
    auto reg = make_registry(6);
    ParamMatrix a1(reg);
    a1.set(1, 1, 2);
    a1.set(1, 2, 3);
    a1.set(1, 3, 5);
    auto G = generators_symbolic(a1, default_mult(6), seed);
    auto F = projectivize(first_integrals(G, a1));
    if (F.tau != 4 || F.integrals.size() != 4) return false;
    for (const auto& I : F.integrals)
      if (verify_annihilation(I.projectivized, G)) return false;
    return true;
  }});

  checks.push_back({"curve invariants stable at p=7", [seed] {
    auto reg = make_registry(7);
    Rng rng(seed + 2);
    ParamMatrix a = random_point(reg, rng);
    auto c = branches_of_params(a, 14);
    auto base = curve_invariants(c);
    MultiPoly x = MultiPoly::var(reg, reg->x());
    MultiPoly y = MultiPoly::var(reg, reg->y());
    auto moved = apply_biholomorphism(Biholomorphism{x * x, x * y}, c);
    auto got = curve_invariants(moved);
    return got.cross_ratios == base.cross_ratios && got.values == base.values;
  }});

  checks.push_back({"level-3 table at p=9", [seed] {
    auto reg = make_registry(9);
    ParamMatrix a1(reg);
    const char* line[] = {"-1", "2", "-2", "1/4", "-1/4", "1/3"};
    for (int l = 1; l <= 6; ++l) a1.set(1, l, rat_parse(line[l - 1]));
    auto G = generators_symbolic(a1, default_mult(9), seed, 3);
    auto A = [&](int k, int l) { return MultiPoly::var(reg, reg->a(k, l)); };
    const auto& g10 = G.at(1, 0);
    return g10.X.comp(3, 3) == (A(2, 2) + A(2, 3)) * rat_parse("-1/9") &&
           g10.X.comp(3, 6) == A(2, 2) * rat_parse("-4/729") + A(2, 6) * rat_parse("-1/9");
  }});

  if (jobs < 1) jobs = 1;
  std::vector<std::future<bool>> results(checks.size());
  std::size_t next = 0;
  while (next < checks.size()) {
    std::size_t batch = std::min<std::size_t>(jobs, checks.size() - next);
    for (std::size_t i = 0; i < batch; ++i)
      results[next + i] = std::async(std::launch::async, checks[next + i].run);
    for (std::size_t i = 0; i < batch; ++i) results[next + i].wait();
    next += batch;
  }
  bool all = true;
  json out = json::array();
  for (std::size_t i = 0; i < checks.size(); ++i) {
    bool ok = false;
    std::string error;
    try {
      ok = results[i].get();
    } catch (const std::exception& e) {
      error = e.what();
    }
    all = all && ok;
    json row{{"check", checks[i].name}, {"pass", ok}};
    if (!error.empty()) row["error"] = error;
    out.push_back(row);
  }
  emit(json{{"checks", out}, {"pass", all}});
  if (!all) throw std::logic_error("selftest failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact moduli computations for plane curves with smooth transversal branches"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", format, "json or pretty")
      ->check(CLI::IsMember({"json", "pretty"}));

  int p = 0;
  std::uint64_t seed = 1;
  int points = 10, jobs = 1;
  long max_height = 0;
  std::vector<std::string> entries;
  std::string input, path;
  GenArgs g;
  bool reduced = false;

  auto* dims_cmd = app.add_subcommand("dims", "moduli dimension report");
  dims_cmd->add_option("-p", p, "number of branches")->required();

  auto* nf = app.add_subcommand("normal-form", "build the triangular normal form");
  nf->add_option("-p", p, "number of branches");
  nf->add_option("--entries", entries, "matrix entries as k,l:value");
  nf->add_option("--input", input, "parameter matrix JSON file");
  nf->add_option("--mult", g.mult_csv, "multiplicities, comma separated");
  nf->add_flag("--darboux", g.darboux, "rational multiplicities (Darboux mode)");
  nf->add_flag("--reduced", reduced, "reduced form (multiplicities all 1)");

  auto* pre = app.add_subcommand("prenormalize", "curve branches to parameter matrix");
  pre->add_option("curve", path, "curve JSON file")->required();
  pre->add_option("--max-height", max_height, "cone-killing height cap");

  auto add_gen_opts = [&](CLI::App* c, bool with_cap) {
    c->add_option("-p", g.p, "number of branches")->required();
    c->add_option("--first-line", g.first_line, "a_{1,l} values, comma separated")->required();
    c->add_option("--mult", g.mult_csv, "multiplicities, comma separated");
    c->add_flag("--darboux", g.darboux, "rational multiplicities (Darboux mode)");
    c->add_option("--seed", g.seed, "sampling seed");
    if (with_cap) c->add_option("--level-cap", g.level_cap, "truncate components above this level");
  };
  auto* gen = app.add_subcommand("generators", "distribution generators X_{i,j}");
  add_gen_opts(gen, true);
  auto* brk = app.add_subcommand("brackets", "bracket structure of the generators");
  add_gen_opts(brk, true);
  auto* itg = app.add_subcommand("integrals", "complete system of first integrals");
  add_gen_opts(itg, false);

  auto* rnk = app.add_subcommand("rank", "generic rank laws at random points");
  rnk->add_option("-p", p, "number of branches")->required();
  rnk->add_option("--seed", seed, "sampling seed");
  rnk->add_option("--points", points, "number of sample points");

  auto* inv = app.add_subcommand("invariants", "invariant tuple of a curve");
  inv->add_option("curve", path, "curve JSON file")->required();
  inv->add_option("--seed", seed, "sampling seed");

  auto* ver = app.add_subcommand("verify", "recheck a stored integral set");
  ver->add_option("integrals", path, "integral set JSON file")->required();

  auto* st = app.add_subcommand("selftest", "run the built-in checks");
  st->add_option("--seed", seed, "sampling seed");
  st->add_option("--jobs", jobs, "worker pool width");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dims_cmd->parsed()) return cmd_dims(p);
    if (nf->parsed()) return cmd_normal_form(p, entries, input, g.mult_csv, g.darboux, reduced);
    if (pre->parsed()) return cmd_prenormalize(path, max_height);
    if (gen->parsed()) return cmd_generators(g);
    if (brk->parsed()) return cmd_brackets(g);
    if (itg->parsed()) return cmd_integrals(g);
    if (rnk->parsed()) return cmd_rank(p, seed, points);
    if (inv->parsed()) return cmd_invariants(path, seed);
    if (ver->parsed()) return cmd_verify(path);
    if (st->parsed()) return cmd_selftest(seed, jobs);
  } catch (const std::domain_error& e) {
    emit(json{{"error", e.what()}, {"kind", "input"}});
    return 1;
  } catch (const std::invalid_argument& e) {
    emit(json{{"error", e.what()}, {"kind", "input"}});
    return 1;
  } catch (const std::out_of_range& e) {
    emit(json{{"error", e.what()}, {"kind", "input"}});
    return 1;
  } catch (const nlohmann::json::exception& e) {
    emit(json{{"error", e.what()}, {"kind", "input"}});
    return 1;
  } catch (const std::logic_error& e) {
    emit(json{{"error", e.what()}, {"kind", "structural"}});
    return 2;
  } catch (const std::exception& e) {
    emit(json{{"error", e.what()}, {"kind", "input"}});
    return 1;
  }
  return 0;
}
