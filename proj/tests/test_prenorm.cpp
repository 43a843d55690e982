#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "moduli/prenorm.hpp"
#include "moduli/rng.hpp"

using namespace moduli;

static ParamMatrix random_params(const RegistryPtr& reg, Rng& rng) {
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
    for (int l = k; l <= p - 3; ++l) a.set(k, l, rng.rational(15, 4));
  return a;
}

TEST_CASE("cone matrix of normal forms") {
  auto reg = make_registry(4);
  ParamMatrix a(reg);
  a.set(1, 1, 2);
  auto c = branches_of_params(a, 3);
  auto m = cone_matrix(c, 2);
  CHECK(m.at(1, 1).inf);
  CHECK(m.at(1, 2).v == 0);
  CHECK(m.at(1, 3).v == 1);
  CHECK(m.at(1, 4).v == 2);
  for (int k = 1; k <= 4; ++k) {
    CHECK(!m.at(2, k).inf);
    CHECK(m.at(2, k).v == 0);
  }

  auto reg5 = make_registry(5);
  ParamMatrix a5(reg5);
  a5.set(1, 1, 2);
  a5.set(1, 2, 3);
  a5.set(2, 2, 7);
  auto m5 = cone_matrix(branches_of_params(a5, 4), 2);
  CHECK(m5.at(2, 5).v == 7);
  CHECK(m5.at(2, 1).v == 0);
  CHECK(m5.at(2, 2).v == 0);
  CHECK(m5.at(2, 3).v == 0);
  CHECK(m5.at(2, 4).v == 0);

  // branch y = x + x^3
  CurveInput single;
  TruncatedSeries s(3);
  s.set_coeff(1, 1);
  s.set_coeff(3, 1);
  single.branches.push_back({BranchSeries::Orient::YofX, s});
  auto ms = cone_matrix(single, 3);
  CHECK(ms.at(1, 1).v == -1);
  CHECK(ms.at(2, 1).v == 0);
  CHECK(ms.at(3, 1).v == -1);

  CHECK_THROWS_WITH(cone_matrix(single, 5), doctest::Contains("need higher order"));
}

TEST_CASE("tangent cone normalization") {
  auto reg = make_registry(4);
  ParamMatrix a(reg);
  a.set(1, 1, -5);
  auto c = branches_of_params(a, 4);
  auto [L, out] = normalize_tangent_cone(c);
  CHECK(L.is_identity());
  for (int k = 0; k < 4; ++k) CHECK(out.branches[k].series == c.branches[k].series);

  // four lines y = x, 2x, 3x, 4x
  CurveInput lines;
  for (int sl = 1; sl <= 4; ++sl) {
    TruncatedSeries s(3);
    s.set_coeff(1, sl);
    lines.branches.push_back({BranchSeries::Orient::YofX, s});
  }
  auto [L2, n2] = normalize_tangent_cone(lines);
  auto row = cone_matrix(n2, 1);
  CHECK(row.at(1, 1).inf);
  CHECK(row.at(1, 2).v == 0);
  CHECK(row.at(1, 3).v == 1);
  CHECK(!row.at(1, 4).inf);
  Rational t = row.at(1, 4).v;
  CHECK(t != 0);
  CHECK(t != 1);

  // swapping two marked lines relabels the row accordingly
  std::swap(lines.branches[2], lines.branches[3]);
  auto [L3, n3] = normalize_tangent_cone(lines);
  auto row3 = cone_matrix(n3, 1);
  CHECK(row3.at(1, 3).v == 1);
  CHECK(row3.at(1, 4).v != t);

  CurveInput dup = lines;
  dup.branches[3] = dup.branches[2];
  CHECK_THROWS_AS(normalize_tangent_cone(dup), std::domain_error);
}

TEST_CASE("biholomorphism action on branches") {
  auto reg = make_registry(4);
  MultiPoly x = MultiPoly::var(reg, reg->x());
  MultiPoly y = MultiPoly::var(reg, reg->y());

  ParamMatrix a(reg);
  a.set(1, 1, 3);
  auto c = branches_of_params(a, 5);

  Biholomorphism ident{MultiPoly(reg), MultiPoly(reg)};
  auto same = apply_biholomorphism(ident, c);
  for (int k = 0; k < 4; ++k) CHECK(same.branches[k].series == c.branches[k].series);

  // (x, y + x^2) maps y=0 to y=-x^2
  Biholomorphism sq{MultiPoly(reg), x * x};
  auto moved = apply_biholomorphism(sq, c);
  TruncatedSeries expect(5);
  expect.set_coeff(2, -1);
  CHECK(moved.branches[1].series == expect);

  // pullbacks compose contravariantly: psi after sq acts like sq(psi(x,y))
  Biholomorphism psi{y * y, x * y * rat(2)};
  auto two_steps = apply_biholomorphism(psi, apply_biholomorphism(sq, c));
  // sq(psi) = (x + y^2, y + 2xy + (x + y^2)^2)
  Biholomorphism comp{y * y, x * y * rat(2) + (x + y * y) * (x + y * y)};
  auto one_step = apply_biholomorphism(comp, c);
  for (int k = 0; k < 4; ++k)
    CHECK(two_steps.branches[k].series == one_step.branches[k].series);
}

TEST_CASE("cone killing steps") {
  Rng rng(31);
  auto reg = make_registry(4);
  ParamMatrix a = random_params(reg, rng);
  auto c = branches_of_params(a, 6);

  // already normal at height 2: identity step
  auto [phi0, out0] = kill_height(c, 1, reg);
  CHECK(phi0.A.is_zero());
  CHECK(phi0.B.is_zero());

  // perturb all branches at height 2, then one step kills them (p=4, N=1)
  CurveInput pert = c;
  for (auto& b : pert.branches) b.series.set_coeff(2, rng.rational(9, 3));
  auto [phi1, out1] = kill_height(pert, 1, reg);
  auto m = cone_matrix(out1, 2);
  for (int k = 1; k <= 4; ++k) CHECK(m.at(2, k).v == 0);
  // height-1 row untouched
  auto before = cone_matrix(pert, 1), after = cone_matrix(out1, 1);
  for (int k = 2; k <= 4; ++k) CHECK(after.at(1, k).v == before.at(1, k).v);
}

TEST_CASE("prenormalization is idempotent on normal forms") {
  Rng rng(57);
  for (int p : {4, 5, 6, 7}) {
    auto reg = make_registry(p);
    ParamMatrix a = random_params(reg, rng);
    auto c = branches_of_params(a, 2 * p);
    auto [got, report] = prenormalize(c);
    CHECK(report.residuals.empty());
    CHECK(report.flattened_height == 2 * p);
    for (int k = 1; k <= p - 3; ++k)
      for (int l = k; l <= p - 3; ++l) CHECK(got.value(k, l) == a.value(k, l));
  }
}

TEST_CASE("prenormalization undoes a high-order conjugation") {
  Rng rng(98);
  int p = 6;
  auto reg = make_registry(p);
  ParamMatrix a = random_params(reg, rng);
  auto c = branches_of_params(a, 2 * p);

  // random map tangent to identity at order p-2
  MultiPoly x = MultiPoly::var(reg, reg->x());
  MultiPoly y = MultiPoly::var(reg, reg->y());
  MultiPoly A(reg), B(reg);
  for (int i = 0; i <= p - 2; ++i) {
    A += MultiPoly::constant(reg, rng.rational(9, 3)) * x.pow(p - 2 - i) * y.pow(i);
    B += MultiPoly::constant(reg, rng.rational(9, 3)) * x.pow(p - 2 - i) * y.pow(i);
  }
  auto moved = apply_biholomorphism(Biholomorphism{A, B}, c);
  auto [got, report] = prenormalize(moved);
  for (int k = 1; k <= p - 3; ++k)
    for (int l = k; l <= p - 3; ++l) CHECK(got.value(k, l) == a.value(k, l));
}

TEST_CASE("dicritical conjugation changes the matrix") {
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

  // (x,y) -> (1+x)(x,y)
  MultiPoly x = MultiPoly::var(reg, reg->x());
  MultiPoly y = MultiPoly::var(reg, reg->y());
  auto moved = apply_biholomorphism(Biholomorphism{x * x, x * y}, c);
  auto [got, report] = prenormalize(moved);
  CHECK(report.residuals.empty());
  CHECK(got.value(1, 1) == 2);
  CHECK(got.value(1, 2) == 3);
  CHECK(got.value(1, 3) == 5);
  CHECK(got.value(2, 3) == 7);
  CHECK(got.value(3, 3) == 7);  // the extra term created by the dicritical map
  CHECK(got.value(2, 2) == 0);
}
