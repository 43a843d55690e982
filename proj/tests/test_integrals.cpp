#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "moduli/integrals.hpp"
#include "moduli/rng.hpp"

using namespace moduli;

namespace {

ParamMatrix first_line(const RegistryPtr& reg, std::initializer_list<Rational> vals) {
  ParamMatrix a(reg);
  int l = 1;
  for (const Rational& v : vals) a.set(1, l++, v);
  return a;
}

Multiplicities ones(int p) {
  Multiplicities n;
  n.values.assign(p, 1);
  return n;
}

std::vector<std::pair<int, int>> all_entries(int p) {
  std::vector<std::pair<int, int>> idx;
  for (int k = 1; k <= p - 3; ++k)
    for (int l = k; l <= p - 3; ++l) idx.emplace_back(k, l);
  return idx;
}

// exact rank of d(integrals) at a random numeric point; resamples off the
// denominator zero sets
long jacobian_rank(const FirstIntegralSet& F, Rng& rng) {
  const RegistryPtr& reg = F.integrals.front().f.registry();
  auto idx = all_entries(F.p);
  for (int attempt = 0; attempt < 10; ++attempt) {
    std::map<std::size_t, Rational> pt;
    for (auto [k, l] : idx) pt[reg->a(k, l)] = rng.nonzero_rational(20, 10);
    Matrix<Rational> J;
    bool ok = true;
    for (const auto& I : F.integrals) {
      if (I.f.den().eval(pt) == 0) {
        ok = false;
        break;
      }
      std::vector<Rational> row;
      for (auto [k, l] : idx) row.push_back(I.f.derivative(reg->a(k, l)).eval(pt));
      J.push_back(std::move(row));
    }
    if (ok) return static_cast<long>(matrix_rank(J));
  }
  FAIL("no usable sample point");
  return -1;
}

ParamMatrix random_matrix(const RegistryPtr& reg, Rng& rng) {
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
  for (int k = 2; k <= p - 3; ++k)
    for (int l = k; l <= p - 3; ++l)
      a.set(k, l, k == 2 && l == 2 ? rng.nonzero_rational(15, 4) : rng.rational(15, 4));
  return a;
}

}  // namespace

TEST_CASE("level-2 ratios") {
  CHECK(level2_integrals(make_registry(5)).empty());

  auto reg = make_registry(6);
  auto one = level2_integrals(reg);
  REQUIRE(one.size() == 1);
  CHECK(one[0].num() == MultiPoly::var(reg, reg->a(2, 3)));
  CHECK(one[0].den() == MultiPoly::var(reg, reg->a(2, 2)));

  CHECK(level2_integrals(make_registry(9)).size() == 4);
}

TEST_CASE("integral set at p=6") {
  auto reg = make_registry(6);
  ParamMatrix a1 = first_line(reg, {2, 3, 5});
  Multiplicities n = ones(6);
  auto G = generators_symbolic(a1, n, 7);
  auto F = first_integrals(G, a1);
  CHECK(F.tau == 4);
  CHECK(F.tau_prime == 3);
  REQUIRE(F.integrals.size() == 4);
  for (const auto& I : F.integrals) CHECK(I.weight == 0);

  auto P = projectivize(F);
  for (const auto& I : P.integrals) {
    CHECK(!verify_annihilation(I.projectivized, G));
    CHECK(I.on_moduli == (I.k != 2));
  }

  // the short pipeline agrees with the explicit one
  auto F2 = first_integrals(a1, n);
  REQUIRE(F2.integrals.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(F2.integrals[i].f == F.integrals[i].f);

  Rng rng(3);
  CHECK(jacobian_rank(F, rng) == 4);

  // a non-integral picks up a witness
  RationalFunction bad(MultiPoly::var(reg, reg->a(2, 2)));
  auto w = verify_annihilation(bad, G);
  REQUIRE(w);
  CHECK(w->i == 0);
  CHECK(w->j == 0);
}

TEST_CASE("level-3 transverse coordinates at p=9") {
  auto reg = make_registry(9);
  ParamMatrix a1 = first_line(reg, {-1, 2, -2, rat(1, 4), rat(-1, 4), rat(1, 3)});
  Multiplicities n = ones(9);
  auto G = generators_symbolic(a1, n, 7, 3);
  auto split = split_coordinates(G, 3);
  REQUIRE(split.levels.count(3) == 1);
  const auto& L = split.levels.at(3);
  CHECK(L.rows_b.size() == 2);
  CHECK(L.rows_c.size() == 2);

  auto T = triangularize(G, split);
  REQUIRE(T.fields.size() == 2);
  for (const auto& Y : T.fields) {
    CHECK(Y.k == 3);
    CHECK(Y.b_comps.size() == 1);
    CHECK(Y.c_comps.empty());
  }

  // the subsystem below the first transverse level is empty: f = c
  auto var = [&](int k, int l) { return RationalFunction(MultiPoly::var(reg, reg->a(k, l))); };
  std::vector<RationalFunction> computed;
  for (int nn = 1; nn <= 2; ++nn) {
    CHECK(integrate_level(T, split, 3, nn).is_zero());
    RationalFunction f{MultiPoly(reg)};
    for (std::size_t l = 0; l < L.rows_c[nn - 1].size(); ++l)
      f += L.rows_c[nn - 1][l] * var(3, 3 + static_cast<int>(l));
    CHECK(*f.weighted_degree() == 2);
    RationalFunction proj = f / RationalFunction(MultiPoly::var(reg, reg->a(2, 2), 2));
    CHECK(!verify_annihilation(proj, G));
    computed.push_back(proj);
  }

  // the display pair circulating for this case (with its out-of-range index
  // read as a_{2,4}) is not a first-integral pair of these generators: the
  // level-3 generator display it accompanies is garbled, and the 10-branch
  // table fixes the convention independently.  Frozen facts: annihilation
  // fails and the spans differ at every sample point.
  RationalFunction a22_4(MultiPoly::var(reg, reg->a(2, 2), 4));
  auto K = [&](long num, long den) { return RationalFunction::constant(reg, rat(num, den)); };
  auto A = var;
  RationalFunction f5 =
      K(-1, 324) *
          (K(270, 1) * A(2, 2) * A(2, 6) + K(216, 1) * A(2, 4) * A(2, 6) -
           K(512, 1) * A(2, 2) * A(2, 4)) /
          a22_4 * A(3, 3) +
      K(1, 81) *
          (K(540, 1) * A(2, 3) * A(2, 6) - K(108, 1) * A(2, 2) * A(2, 6) -
           K(512, 1) * A(2, 2) * A(2, 3)) /
          a22_4 * A(3, 4) +
      (K(2, 1) * A(2, 2) * A(2, 4) + K(5, 1) * A(2, 2) * A(2, 3) - K(6, 1) * A(2, 3) * A(2, 4)) /
          a22_4 * A(3, 6);
  RationalFunction f6 =
      K(-1, 324) *
          (K(1215, 1) * A(2, 2) * A(2, 5) + K(405, 1) * A(2, 4) * A(2, 2) -
           K(1296, 1) * A(2, 4) * A(2, 5)) /
          a22_4 * A(3, 3) +
      K(1, 81) *
          (K(-486, 1) * A(2, 2) * A(2, 5) - K(405, 1) * A(2, 2) * A(2, 3) -
           K(162, 1) * A(2, 3) * A(2, 5)) /
          a22_4 * A(3, 4) +
      (K(2, 1) * A(2, 2) * A(2, 4) + K(5, 1) * A(2, 2) * A(2, 3) - K(6, 1) * A(2, 3) * A(2, 4)) /
          a22_4 * A(3, 5);
  auto w5 = verify_annihilation(f5, G);
  auto w6 = verify_annihilation(f6, G);
  REQUIRE(w5);
  REQUIRE(w6);
  CHECK(std::pair(w5->i, w5->j) == std::pair(0, 1));

  Rng rng(5);
  int equal = 0, total = 0;
  for (int t = 0; t < 20; ++t) {
    std::map<std::size_t, Rational> pt;
    for (int l = 2; l <= 6; ++l) pt[reg->a(2, l)] = rng.nonzero_rational(20, 10);
    auto covector = [&](const RationalFunction& f) {
      std::vector<Rational> row;
      for (int l = 3; l <= 6; ++l) row.push_back(f.derivative(reg->a(3, l)).eval(pt));
      return row;
    };
    Matrix<Rational> comp, printed;
    try {
      comp = {covector(computed[0]), covector(computed[1])};
      printed = {covector(f5), covector(f6)};
    } catch (const std::domain_error&) {
      continue;
    }
    if (matrix_rank(comp) != 2 || matrix_rank(printed) != 2) continue;
    ++total;
    Matrix<Rational> joint = comp;
    joint.push_back(printed[0]);
    joint.push_back(printed[1]);
    if (matrix_rank(joint) == 2) ++equal;
  }
  CHECK(total >= 15);
  CHECK(equal == 0);
}

TEST_CASE("full pipeline at p=8") {
  auto reg = make_registry(8);
  ParamMatrix a1 = first_line(reg, {2, -1, 3, rat(-1, 2), rat(1, 3)});
  Multiplicities n = ones(8);
  auto G = generators_symbolic(a1, n, 7);
  auto F = first_integrals(G, a1);
  CHECK(F.tau == 9);
  CHECK(F.tau_prime == 6);
  REQUIRE(F.integrals.size() == 9);

  const auto& top = F.integrals.back();
  CHECK(top.k == 3);
  CHECK(top.n == 1);
  CHECK(top.weight == 2);
  // ring membership: denominators stay in the level <= 2 variables
  for (const auto& I : F.integrals)
    for (const auto& [mono, coef] : I.f.den().terms())
      for (std::size_t v = 0; v < mono.size(); ++v)
        if (mono[v] != 0) CHECK(reg->info(v).level <= 2);

  auto P = projectivize(F);
  for (const auto& I : P.integrals) {
    CHECK(*I.projectivized.weighted_degree() == 0);
    CHECK(!verify_annihilation(I.projectivized, G));
  }

  Rng rng(3);
  for (int t = 0; t < 5; ++t) CHECK(jacobian_rank(F, rng) == 9);

  // scaling a by lambda multiplies the weight-2 integral by lambda^2 and
  // leaves the projectivized value unchanged
  Rng prng(17);
  ParamMatrix a(reg);
  for (auto [k, l] : all_entries(8)) a.set(k, l, prng.nonzero_rational(9, 3));
  Rational lam = rat(3, 2);
  ParamMatrix la = lambda_action(lam, a);
  auto raw0 = top.f.eval(a.bindings());
  auto raw1 = top.f.eval(la.bindings());
  CHECK(raw1 == raw0 * lam * lam);
  CHECK(raw1 != raw0);
  const auto& ptop = P.integrals.back();
  CHECK(ptop.projectivized.eval(a.bindings()) == ptop.projectivized.eval(la.bindings()));
}

TEST_CASE("nonzero integration step at p=10") {
  auto reg = make_registry(10);
  ParamMatrix a1 =
      first_line(reg, {-1, 2, -2, 3, -3, rat(1, 2), rat(-1, 2)});
  Multiplicities n = ones(10);
  auto G = generators_symbolic(a1, n, 7, 4);
  auto split = split_coordinates(G, 4);
  CHECK(split.levels.at(3).rows_c.size() == 3);
  CHECK(split.levels.at(4).rows_b.size() == 3);
  REQUIRE(split.levels.at(4).rows_c.size() == 1);

  auto T = triangularize(G, split);
  RationalFunction g = integrate_level(T, split, 4, 1);
  CHECK(!g.is_zero());

  const auto& L4 = split.levels.at(4);
  auto var = [&](int k, int l) { return RationalFunction(MultiPoly::var(reg, reg->a(k, l))); };
  RationalFunction f{MultiPoly(reg)};
  for (std::size_t l = 0; l < L4.rows_c[0].size(); ++l)
    f += L4.rows_c[0][l] * var(4, 4 + static_cast<int>(l));
  std::map<std::size_t, RationalFunction::Binding> back;
  for (const auto& [k, L] : split.levels) {
    auto form = [&](const std::vector<RationalFunction>& row) {
      RationalFunction expr{MultiPoly(reg)};
      for (std::size_t l = 0; l < row.size(); ++l)
        expr += row[l] * var(k, k + static_cast<int>(l));
      return expr;
    };
    for (std::size_t m = 0; m < L.rows_b.size(); ++m) back.emplace(L.b_vars[m], form(L.rows_b[m]));
    for (std::size_t m = 0; m < L.rows_c.size(); ++m) back.emplace(L.c_vars[m], form(L.rows_c[m]));
  }
  f += g.subst(back);
  REQUIRE(f.weighted_degree());
  CHECK(*f.weighted_degree() == 3);
  RationalFunction proj = f / RationalFunction(MultiPoly::var(reg, reg->a(2, 2), 3));
  CHECK(!verify_annihilation(proj, G));
}

TEST_CASE("curve invariants are biholomorphism invariants") {
  Rng rng(41);
  int p = 6;
  auto reg = make_registry(p);
  ParamMatrix a = random_matrix(reg, rng);
  auto c = branches_of_params(a, 2 * p);
  auto base = curve_invariants(c);
  REQUIRE(base.values.size() == 4);

  MultiPoly x = MultiPoly::var(reg, reg->x());
  MultiPoly y = MultiPoly::var(reg, reg->y());

  // random tangent-to-identity map
  MultiPoly A(reg), B(reg);
  for (int d = 2; d <= 3; ++d)
    for (int i = 0; i <= d; ++i) {
      A += MultiPoly::constant(reg, rng.rational(9, 3)) * x.pow(d - i) * y.pow(i);
      B += MultiPoly::constant(reg, rng.rational(9, 3)) * x.pow(d - i) * y.pow(i);
    }
  auto moved = apply_biholomorphism(Biholomorphism{A, B}, c);
  auto t1 = curve_invariants(moved);
  CHECK(t1.cross_ratios == base.cross_ratios);
  CHECK(t1.values == base.values);

  // dicritical map (x,y) -> (1+x)(x,y)
  auto dic = apply_biholomorphism(Biholomorphism{x * x, x * y}, c);
  auto t2 = curve_invariants(dic);
  CHECK(t2.values == base.values);

  // same first line, different level-2 ratio: different invariants
  ParamMatrix a2 = a;
  a2.set(2, 3, a.value(2, 3) + 1);
  auto other = curve_invariants(branches_of_params(a2, 2 * p));
  CHECK(other.cross_ratios == base.cross_ratios);
  CHECK(other.values != base.values);

  // scaling the matrix moves the raw parameters but not the invariants
  auto scaled = curve_invariants(branches_of_params(lambda_action(rat(5, 3), a), 2 * p));
  CHECK(scaled.values == base.values);
}

TEST_CASE("curve invariants reuse a precomputed set") {
  Rng rng(43);
  int p = 7;
  auto reg = make_registry(p);
  ParamMatrix a = random_matrix(reg, rng);
  auto c = branches_of_params(a, 2 * p);

  ParamMatrix a1(reg);
  for (int l = 1; l <= p - 3; ++l) a1.set(1, l, a.value(1, l));
  auto F = first_integrals(a1, ones(p));
  auto direct = curve_invariants(c);
  auto reused = curve_invariants(c, F);
  CHECK(direct.values == reused.values);

  ParamMatrix b = random_matrix(reg, rng);
  CHECK_THROWS_WITH(curve_invariants(branches_of_params(b, 2 * p), F),
                    doctest::Contains("first line"));
}

TEST_CASE("non-generic leaves are rejected") {
  int p = 6;
  auto reg = make_registry(p);
  ParamMatrix a(reg);
  a.set(1, 1, 2);
  a.set(1, 2, 3);
  a.set(1, 3, 5);
  a.set(2, 2, 0);
  a.set(2, 3, 7);
  a.set(3, 3, 0);
  auto c = branches_of_params(a, 2 * p);
  CHECK_THROWS_WITH(curve_invariants(c), doctest::Contains("non-generic leaf"));
}
