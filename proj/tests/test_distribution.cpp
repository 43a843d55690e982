#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>
#include <vector>

#include "moduli/distribution.hpp"
#include "moduli/linalg.hpp"
#include "moduli/rng.hpp"

using namespace moduli;

static Multiplicities reduced(int p) {
  Multiplicities n;
  n.values.assign(p, Rational(1));
  return n;
}

static ParamMatrix generic_first_line(const RegistryPtr& reg, Rng& rng) {
  ParamMatrix a(reg);
  int p = reg->p();
  std::set<Rational> used = {Rational(0), Rational(1)};
  for (int l = 1; l <= p - 3; ++l) {
    Rational v;
    do {
      v = rng.rational(15, 4);
    } while (!used.insert(v).second);
    a.set(1, l, v);
  }
  return a;
}

static ParamMatrix generic_point(const RegistryPtr& reg, Rng& rng) {
  ParamMatrix a = generic_first_line(reg, rng);
  int p = reg->p();
  for (int k = 2; k <= p - 3; ++k)
    for (int l = k; l <= p - 3; ++l) a.set(k, l, rng.nonzero_rational(15, 4));
  return a;
}

TEST_CASE("radial field closed form") {
  auto reg4 = make_registry(4);
  CHECK(x00_closed_form(reg4, reduced(4)).is_zero());

  auto reg5 = make_registry(5);
  Multiplicities n5;
  n5.values = {2, 1, 1, 1, 1};
  auto X = x00_closed_form(reg5, n5);
  CHECK(X.comp(2, 2) == MultiPoly::var(reg5, reg5->a(2, 2)) * Rational(1, 6));

  auto reg9 = make_registry(9);
  auto X9 = x00_closed_form(reg9, reduced(9));
  for (int k = 2; k <= 6; ++k)
    for (int l = k; l <= 6; ++l)
      CHECK(X9.comp(k, l) ==
            MultiPoly::var(reg9, reg9->a(k, l)) * (Rational(k - 1) / 9));
}

TEST_CASE("radial generator from the solver") {
  Rng rng(11);
  auto reg = make_registry(5);
  ParamMatrix a = generic_point(reg, rng);
  auto g = solve_generator(0, 0, a, reduced(5));
  CHECK(g.diag.kappa == -1);
  // solver normalization: X = -(1/5) a22 d/da22 at this point
  CHECK(g.X.comp(2, 2).constant_value() == -a.value(2, 2) / 5);
  CHECK(!(g.Z.alpha.is_zero() && g.Z.beta.is_zero()));

  // same with level-1 unknowns included: they come out zero
  auto g1 = solve_generator(0, 0, a, reduced(5), 0, true);
  CHECK(g1.X.comp(2, 2).constant_value() == -a.value(2, 2) / 5);

  // p=4 has an empty parameter space
  auto reg4 = make_registry(4);
  ParamMatrix a4 = generic_point(reg4, rng);
  auto g4 = solve_generator(0, 0, a4, reduced(4));
  CHECK(g4.X.is_zero());
  CHECK(g4.diag.kappa == 0);

  CHECK_THROWS_AS(solve_generator(0, 2, a, reduced(5)), std::domain_error);
}

TEST_CASE("radial normalization for rational multiplicities") {
  Rng rng(13);
  auto reg = make_registry(5);
  ParamMatrix a = generic_point(reg, rng);
  Multiplicities n;
  n.mode = MultMode::Darboux;
  n.values = {rat_parse("1/2"), 1, 1, rat_parse("4/3"), rat_parse("2/5")};
  auto g = solve_generator(0, 0, a, n);
  CHECK(g.diag.kappa == -1);
  CHECK(g.X.comp(2, 2).constant_value() == -a.value(2, 2) / n.total());

  // scaling all multiplicities rescales X accordingly
  Multiplicities dbl;
  dbl.mode = MultMode::Darboux;
  dbl.values.assign(5, Rational(2));
  auto gd = solve_generator(0, 0, a, dbl);
  auto gr = solve_generator(0, 0, a, reduced(5));
  CHECK(gd.X.comp(2, 2) == gr.X.comp(2, 2) * Rational(1, 2));
}

TEST_CASE("p=5 has only the radial generator") {
  Rng rng(17);
  auto reg = make_registry(5);
  ParamMatrix a = generic_point(reg, rng);
  for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}}) {
    auto g = solve_generator(i, j, a, reduced(5));
    CHECK(g.X.is_zero());
  }
}

TEST_CASE("symbolic generators at p=6") {
  Rng rng(23);
  auto reg = make_registry(6);
  ParamMatrix a1 = generic_first_line(reg, rng);
  auto G = generators_symbolic(a1, reduced(6), 5);
  CHECK(G.gens.size() == 6);  // (i,j) with i+j <= 2

  const auto& g00 = G.at(0, 0);
  CHECK(g00.diag.kappa == -1);
  CHECK((g00.X - x00_closed_form(reg, reduced(6)).scaled(g00.diag.kappa)).is_zero());

  // X10, X01 live at level 3 only and are linear in the level-2 variables
  for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}}) {
    const auto& g = G.at(i, j);
    CHECK(g.X.comp(2, 2).is_zero());
    CHECK(g.X.comp(2, 3).is_zero());
    CHECK(!g.X.comp(3, 3).is_zero());
    auto wd = g.X.comp(3, 3).weighted_degree();
    CHECK(wd.has_value());
    CHECK(*wd == 1);
  }

  // generators with i+j = 2 vanish identically
  for (auto [i, j] : std::vector<std::pair<int, int>>{{2, 0}, {1, 1}, {0, 2}})
    CHECK(G.at(i, j).X.is_zero());

  // every component is weighted homogeneous of degree (level-1) - (i+j)
  for (const auto& g : G.gens)
    for (const auto& [kl, comp] : g.X.comps()) {
      auto wd = comp.weighted_degree();
      CHECK(wd.has_value());
      CHECK(*wd == kl.first - 1 - (g.i + g.j));
    }

  CHECK(lie_bracket(G.at(0, 1).X, G.at(1, 0).X).is_zero());
  CHECK(lie_bracket(g00.X, g00.X).is_zero());

  // bracket with the radial field: one eigenvalue kappa_b * (i+j) throughout
  Rational kappa_b = 0;
  for (const auto& g : G.gens) {
    if (g.i + g.j == 0 || g.X.is_zero()) continue;
    auto br = lie_bracket(g00.X, g.X);
    const auto& [kl, lead] = *g.X.comps().begin();
    Rational e = br.comp(kl.first, kl.second).coeff(lead.terms().begin()->first) /
                 lead.terms().begin()->second;
    if (kappa_b == 0) kappa_b = e / (g.i + g.j);
    CHECK(e == kappa_b * (g.i + g.j));
    CHECK((br - g.X.scaled(e)).is_zero());
  }
  CHECK(kappa_b * 6 == 1);  // kappa_b = 1/|n| in the solver convention

  // level projections decompose the field
  DerivationOnA sum(reg);
  for (int m = 2; m <= 3; ++m) sum = sum + level_projection(G.at(1, 0).X, m);
  CHECK((sum - G.at(1, 0).X).is_zero());
  CHECK_THROWS_AS(level_projection(g00.X, 4), std::domain_error);
  CHECK_THROWS_AS(level_projection(g00.X, 1), std::domain_error);

  // generic rank of the distribution
  ParamMatrix sample = generic_point(reg, rng);
  auto rep = generic_rank(G, sample);
  CHECK(rep.total == 2);
  CHECK(rep.per_level.at(2) == 1);
  CHECK(rep.per_level.at(3) == 1);

  // a22-weighted fields commute with the radial one
  auto fam = commuting_family(G);
  CHECK(fam.size() == 2);
  for (const auto& f : fam) {
    CHECK(f.exponent == f.i + f.j);
    CHECK(lie_bracket(g00.X, f.field).is_zero());
  }
}

TEST_CASE("generic ranks at p=7") {
  Rng rng(29);
  auto reg = make_registry(7);
  ParamMatrix a1 = generic_first_line(reg, rng);
  auto G = generators_symbolic(a1, reduced(7), 7);
  ParamMatrix sample = generic_point(reg, rng);
  auto rep = generic_rank(G, sample);
  CHECK(rep.total == 4);  // dim A - tau = 10 - 6
  CHECK(rep.per_level.at(2) == 1);
  CHECK(rep.per_level.at(3) == 2);
  CHECK(rep.per_level.at(4) == 1);

  // the span is involutive at generic points: brackets add no directions
  std::map<std::size_t, Rational> pt = sample.bindings();
  Matrix<Rational> rows;
  for (const auto& g : G.gens)
    if (!g.X.is_zero()) rows.push_back(g.X.eval(pt));
  for (std::size_t i = 0; i < G.gens.size(); ++i)
    for (std::size_t j = i + 1; j < G.gens.size(); ++j) {
      if (G.gens[i].X.is_zero() || G.gens[j].X.is_zero()) continue;
      auto with = rows;
      with.push_back(lie_bracket(G.gens[i].X, G.gens[j].X).eval(pt));
      CHECK(matrix_rank(with) == static_cast<std::size_t>(rep.total));
    }
}

TEST_CASE("printed generators at p=9") {
  auto reg = make_registry(9);
  ParamMatrix a1(reg);
  a1.set(1, 1, -1);
  a1.set(1, 2, 2);
  a1.set(1, 3, -2);
  a1.set(1, 4, rat_parse("1/4"));
  a1.set(1, 5, rat_parse("-1/4"));
  a1.set(1, 6, rat_parse("1/3"));

  auto G = generators_symbolic(a1, reduced(9), 3, /*level_cap=*/3);
  const auto& g00 = G.at(0, 0);
  CHECK(g00.diag.kappa == -1);
  CHECK((g00.X - x00_closed_form(reg, reduced(9)).scaled(-1)).is_zero());

  auto A = [&](int k, int l) { return MultiPoly::var(reg, reg->a(k, l)); };
  // the a_{2,2} cross coefficients below are frozen from an independent run;
  // the 10-branch table (verified exactly, next test) fixes the convention
  std::map<int, MultiPoly> x10 = {
      {3, (A(2, 2) + A(2, 3)) * rat_parse("-1/9")},
      {4, A(2, 2) * rat_parse("-5/1152") + A(2, 4) * rat_parse("-1/9")},
      {5, A(2, 2) * rat_parse("5/1152") + A(2, 5) * rat_parse("-1/9")},
      {6, A(2, 2) * rat_parse("-4/729") + A(2, 6) * rat_parse("-1/9")}};
  std::map<int, MultiPoly> x01 = {
      {3, (A(2, 2) - A(2, 3)) * rat_parse("2/9")},
      {4, A(2, 2) * rat_parse("5/576") + A(2, 4) * rat_parse("1/36")},
      {5, A(2, 2) * rat_parse("-5/576") + A(2, 5) * rat_parse("-1/36")},
      {6, A(2, 2) * rat_parse("8/729") + A(2, 6) * rat_parse("1/27")}};

  std::vector<std::tuple<int, int, const std::map<int, MultiPoly>*>> fixtures = {
      {1, 0, &x10}, {0, 1, &x01}};
  for (auto& [fi, fj, tbl] : fixtures) {
    const auto& table = *tbl;
    const auto& g = G.at(fi, fj);
    CHECK(g.X.comp(2, 2).is_zero());
    for (int l = 3; l <= 6; ++l) CHECK(g.X.comp(3, l) == table.at(l));
  }
}

TEST_CASE("printed generator at p=10") {
  auto reg = make_registry(10);
  ParamMatrix a1(reg);
  const char* line[] = {"-1", "2", "-2", "1/4", "-1/4", "1/3", "-1/3"};
  for (int l = 1; l <= 7; ++l) a1.set(1, l, rat_parse(line[l - 1]));

  auto G = generators_symbolic(a1, reduced(10), 3, /*level_cap=*/4);
  const auto& g = G.at(1, 0);
  auto A = [&](int k, int l) { return MultiPoly::var(reg, reg->a(k, l)); };

  // level 3: -(a_{2,l}/10 + c_l a_{2,2}) with c = (1/10, 1/256, -1/256, 2/405, -2/405)
  CHECK(g.X.comp(3, 3) == (A(2, 2) + A(2, 3)) * rat_parse("-1/10"));
  CHECK(g.X.comp(3, 4) == A(2, 4) * rat_parse("-1/10") + A(2, 2) * rat_parse("-1/256"));
  CHECK(g.X.comp(3, 5) == A(2, 5) * rat_parse("-1/10") + A(2, 2) * rat_parse("1/256"));
  CHECK(g.X.comp(3, 6) == A(2, 6) * rat_parse("-1/10") + A(2, 2) * rat_parse("-2/405"));
  CHECK(g.X.comp(3, 7) == A(2, 7) * rat_parse("-1/10") + A(2, 2) * rat_parse("2/405"));

  // level 4: quadratic terms appear
  CHECK(g.X.comp(4, 4) ==
        A(2, 2) * A(2, 3) * rat_parse("-74263/17694720") +
            A(3, 3) * rat_parse("7/2048") + A(2, 2) * A(2, 2) * rat_parse("10609/1966080") +
            A(3, 4) * rat_parse("-1/5") + A(2, 2) * A(2, 4) * rat_parse("-179/17280"));
  CHECK(g.X.comp(4, 5) ==
        A(2, 2) * A(2, 2) * rat_parse("-74263/17694720") +
            A(3, 3) * rat_parse("-9/2048") + A(2, 2) * A(2, 3) * rat_parse("10609/1966080") +
            A(3, 5) * rat_parse("-1/5") + A(2, 2) * A(2, 5) * rat_parse("-179/17280"));
  CHECK(g.X.comp(4, 6) ==
        A(2, 2) * A(2, 2) * rat_parse("74263/10497600") + A(3, 3) * rat_parse("1/243") +
            A(2, 2) * A(2, 3) * rat_parse("-10609/2099520") + A(3, 6) * rat_parse("-1/5") +
            A(2, 2) * A(2, 6) * rat_parse("-311/43200"));
  CHECK(g.X.comp(4, 7) ==
        A(2, 2) * A(2, 3) * rat_parse("74263/10497600") + A(3, 3) * rat_parse("-7/1215") +
            A(2, 2) * A(2, 2) * rat_parse("-10609/2099520") + A(3, 7) * rat_parse("-1/5") +
            A(2, 2) * A(2, 7) * rat_parse("-311/43200"));
}

TEST_CASE("generic rank at p=9") {
  Rng rng(41);
  auto reg = make_registry(9);
  ParamMatrix sample = generic_point(reg, rng);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j) pairs.push_back({i, j});
  auto res = solve_generators_at_point(sample, reduced(9), pairs);

  GeneratorSet G;
  G.p = 9;
  G.n = reduced(9);
  for (auto [i, j] : pairs) {
    Generator g;
    g.i = i;
    g.j = j;
    g.X = DerivationOnA(reg);
    for (const auto& [kl, v] : res.X.at({i, j}))
      if (v != 0) g.X.set_comp(kl.first, kl.second, MultiPoly::constant(reg, v));
    G.gens.push_back(std::move(g));
  }
  auto rep = generic_rank(G, sample);
  CHECK(rep.total == 9);  // dim A - tau = 21 - 12
  for (int m = 2; m <= 6; ++m)
    CHECK(rep.per_level.at(m) == std::min<long>(m - 1, 9 - m - 2));
}
