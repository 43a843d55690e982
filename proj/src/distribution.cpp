#include "moduli/distribution.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "moduli/interpolate.hpp"
#include "moduli/linalg.hpp"
#include "moduli/rng.hpp"

namespace moduli {

MultiPoly DerivationOnA::comp(int k, int l) const {
  auto it = comps_.find({k, l});
  return it == comps_.end() ? MultiPoly(reg_) : it->second;
}

void DerivationOnA::set_comp(int k, int l, MultiPoly c) {
  reg_->a(k, l);  // range check
  if (k == 1 && !c.is_zero())
    throw std::logic_error("derivations on A have no level-1 components");
  if (c.is_zero())
    comps_.erase({k, l});
  else
    comps_[{k, l}] = std::move(c);
}

bool DerivationOnA::is_zero() const {
  for (const auto& [kl, c] : comps_)
    if (!c.is_zero()) return false;
  return true;
}

MultiPoly DerivationOnA::apply(const MultiPoly& f) const {
  MultiPoly out(reg_);
  for (const auto& [kl, c] : comps_) out += c * f.derivative(reg_->a(kl.first, kl.second));
  return out;
}

DerivationOnA DerivationOnA::operator+(const DerivationOnA& o) const {
  DerivationOnA r(*this);
  for (const auto& [kl, c] : o.comps_) r.set_comp(kl.first, kl.second, r.comp(kl.first, kl.second) + c);
  return r;
}

DerivationOnA DerivationOnA::operator-(const DerivationOnA& o) const {
  DerivationOnA r(*this);
  for (const auto& [kl, c] : o.comps_) r.set_comp(kl.first, kl.second, r.comp(kl.first, kl.second) - c);
  return r;
}

DerivationOnA DerivationOnA::scaled(const MultiPoly& f) const {
  DerivationOnA r(reg_);
  for (const auto& [kl, c] : comps_) r.set_comp(kl.first, kl.second, c * f);
  return r;
}

DerivationOnA DerivationOnA::scaled(const Rational& c) const {
  return scaled(MultiPoly::constant(reg_, c));
}

std::vector<Rational> DerivationOnA::eval(const std::map<std::size_t, Rational>& point) const {
  std::vector<Rational> out;
  int p = reg_->p();
  for (int k = 2; k <= p - 3; ++k)
    for (int l = k; l <= p - 3; ++l) out.push_back(comp(k, l).eval(point));
  return out;
}

DerivationOnA lie_bracket(const DerivationOnA& X, const DerivationOnA& Y) {
  DerivationOnA r(X.registry());
  std::set<std::pair<int, int>> targets;
  for (const auto& [kl, c] : X.comps()) targets.insert(kl);
  for (const auto& [kl, c] : Y.comps()) targets.insert(kl);
  for (const auto& kl : targets)
    r.set_comp(kl.first, kl.second,
               X.apply(Y.comp(kl.first, kl.second)) - Y.apply(X.comp(kl.first, kl.second)));
  return r;
}

DerivationOnA level_projection(const DerivationOnA& X, int m) {
  int p = X.p();
  if (m < 2 || m > p - 3) throw std::domain_error("level outside 2..p-3");
  DerivationOnA r(X.registry());
  for (const auto& [kl, c] : X.comps())
    if (kl.first == m) r.set_comp(kl.first, kl.second, c);
  return r;
}

const Generator& GeneratorSet::at(int i, int j) const {
  for (const auto& g : gens)
    if (g.i == i && g.j == j) return g;
  throw std::out_of_range("no such generator");
}

DerivationOnA x00_closed_form(const RegistryPtr& reg, const Multiplicities& n) {
  int p = reg->p();
  n.require_valid(p);
  Rational total = n.total();
  if (total == 0) throw std::domain_error("total multiplicity must be nonzero");
  DerivationOnA X(reg);
  for (int k = 2; k <= p - 3; ++k)
    for (int l = k; l <= p - 3; ++l)
      X.set_comp(k, l, MultiPoly::var(reg, reg->a(k, l)) * (Rational(k - 1) / total));
  return X;
}

namespace {

struct ColInfo {
  int kind;  // 0 = X unknown, 1 = alpha coefficient, 2 = beta coefficient
  int k = 0, l = 0;
  int s = 0, t = 0;
};

long ceil_abs(const Rational& r) {
  Rational v = r < 0 ? -r : Rational(r);
  mpz_class q = v.get_num() / v.get_den();
  if (q * v.get_den() != v.get_num()) q += 1;
  return q.get_si();
}

struct PointSystem {
  std::vector<ColInfo> cols;
  std::vector<MultiPoly> col_polys;
  std::vector<MultiPoly> rhs_polys;
};

}  // namespace

PointGenerators solve_generators_at_point(const ParamMatrix& a, const Multiplicities& n,
                                          const std::vector<std::pair<int, int>>& pairs,
                                          long D, bool include_level1) {
  const RegistryPtr& reg = a.registry();
  int p = reg->p();
  a.require_valid();
  n.require_valid(p);
  for (auto [i, j] : pairs)
    if (i < 0 || j < 0 || i + j > p - 4)
      throw std::domain_error("generator index outside i+j <= p-4");
  for (int k = 1; k <= p - 3; ++k)
    for (int l = k; l <= p - 3; ++l)
      if (!a.is_numeric(k, l))
        throw std::invalid_argument("generator solve needs a numeric parameter point");

  NormalForm nf = build_normal_form(a, n, true);
  const std::vector<Rational>& lambda = n.values;

  // products of all branches but one
  std::vector<MultiPoly> pref(p + 1, MultiPoly::constant(reg, 1));
  std::vector<MultiPoly> suf(p + 1, MultiPoly::constant(reg, 1));
  for (int m = 0; m < p; ++m) pref[m + 1] = pref[m] * nf.branches[m];
  for (int m = p - 1; m >= 0; --m) suf[m] = suf[m + 1] * nf.branches[m];
  std::vector<MultiPoly> except(p, MultiPoly(reg));
  for (int m = 0; m < p; ++m) except[m] = pref[m] * suf[m + 1];
  MultiPoly full = pref[p];

  MultiPoly Dx(reg), Dy(reg);
  for (int m = 0; m < p; ++m) {
    Dx += except[m] * nf.branches[m].derivative(reg->x()) * lambda[m];
    Dy += except[m] * nf.branches[m].derivative(reg->y()) * lambda[m];
  }

  long base = std::max<long>(p, ceil_abs(n.total()));
  long D0 = D > 0 ? D : base + p;
  long cap = base + 8 * p;
  MultiPoly xv = MultiPoly::var(reg, reg->x());
  MultiPoly yv = MultiPoly::var(reg, reg->y());

  for (long Dcur = D0;; Dcur = std::min(Dcur * 2, cap)) {
    PointSystem sys;
    int kmin = include_level1 ? 1 : 2;
    for (int l = 1; l <= p - 3; ++l)
      for (int k = kmin; k <= l; ++k) {
        sys.cols.push_back({0, k, l, 0, 0});
        sys.col_polys.push_back((except[l + 2] * xv.pow(k) * lambda[l + 2 + 1 - 1]).truncate_xy(Dcur));
      }
    long DZ = Dcur - (p - 1);
    for (long d = 0; d <= DZ; ++d)
      for (long s = 0; s <= d; ++s) {
        MultiPoly mono = xv.pow(s) * yv.pow(d - s);
        sys.cols.push_back({1, 0, 0, static_cast<int>(s), static_cast<int>(d - s)});
        sys.col_polys.push_back((-(mono * Dx)).truncate_xy(Dcur));
        sys.cols.push_back({2, 0, 0, static_cast<int>(s), static_cast<int>(d - s)});
        sys.col_polys.push_back((-(mono * Dy)).truncate_xy(Dcur));
      }
    for (auto [i, j] : pairs)
      sys.rhs_polys.push_back((xv.pow(i) * yv.pow(j) * full).truncate_xy(Dcur));

    // rows: monomials x^ex y^ey with p-1 <= ex+ey <= Dcur
    std::vector<long> offset(Dcur + 2, 0);
    for (long d = p - 1; d <= Dcur; ++d) offset[d + 1] = offset[d] + (d + 1);
    long rows = offset[Dcur + 1];
    std::size_t C = sys.cols.size(), R = sys.rhs_polys.size();
    Matrix<Rational> aug(rows, std::vector<Rational>(C + R, Rational(0)));
    auto fill = [&](const MultiPoly& poly, std::size_t col) {
      for (const auto& [mono, c] : poly.terms()) {
        long ex = mono.size() > 0 ? mono[0] : 0;
        long ey = mono.size() > 1 ? mono[1] : 0;
        long d = ex + ey;
        if (d < p - 1) continue;
        aug[offset[d] + ex][col] = c;
      }
    };
    for (std::size_t c = 0; c < C; ++c) fill(sys.col_polys[c], c);
    for (std::size_t r = 0; r < R; ++r) fill(sys.rhs_polys[r], C + r);

    std::vector<std::size_t> pivots = rref_in_place(aug);
    for (std::size_t c : pivots)
      if (c >= C) throw std::runtime_error("no generator");

    std::vector<long> pivot_row(C, -1);
    for (std::size_t r = 0; r < pivots.size(); ++r) pivot_row[pivots[r]] = static_cast<long>(r);
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < C; ++c)
      if (pivot_row[c] < 0) free_cols.push_back(c);

    bool x_unique = true;
    for (std::size_t c = 0; c < C && x_unique; ++c) {
      if (sys.cols[c].kind != 0) continue;
      if (pivot_row[c] < 0) {
        x_unique = false;
        break;
      }
      for (std::size_t f : free_cols)
        if (aug[pivot_row[c]][f] != 0) {
          x_unique = false;
          break;
        }
    }
    if (!x_unique) {
      if (Dcur >= cap) throw std::runtime_error("truncation cap exceeded");
      continue;
    }

    PointGenerators out;
    out.D_used = Dcur;
    for (std::size_t r = 0; r < R; ++r) {
      auto key = pairs[r];
      auto& xmap = out.X[key];
      MultiPoly alpha(reg), beta(reg);
      for (std::size_t c = 0; c < C; ++c) {
        if (pivot_row[c] < 0) continue;
        const Rational& v = aug[pivot_row[c]][C + r];
        if (v == 0) continue;
        const ColInfo& ci = sys.cols[c];
        if (ci.kind == 0)
          xmap[{ci.k, ci.l}] = v;
        else {
          MultiPoly mono = xv.pow(ci.s) * yv.pow(ci.t) * v;
          (ci.kind == 1 ? alpha : beta) += mono;
        }
      }
      out.Z[key] = {std::move(alpha), std::move(beta)};
    }
    return out;
  }
}

Generator solve_generator(int i, int j, const ParamMatrix& a, const Multiplicities& n,
                          long D, bool include_level1) {
  auto res = solve_generators_at_point(a, n, {{i, j}}, D, include_level1);
  const RegistryPtr& reg = a.registry();
  Generator g;
  g.i = i;
  g.j = j;
  g.X = DerivationOnA(reg);
  for (const auto& [kl, v] : res.X.at({i, j})) {
    if (kl.first == 1) {
      if (v != 0) throw std::logic_error("unexpected level-1 component");
      continue;
    }
    g.X.set_comp(kl.first, kl.second, MultiPoly::constant(reg, v));
  }
  auto& [alpha, beta] = res.Z.at({i, j});
  g.Z = {alpha, beta, res.D_used};
  g.diag.D_used = res.D_used;

  if (i == 0 && j == 0) {
    // solver X00 must be proportional to sum (k-1) a_{k,l} d/da_{k,l}
    bool have = false;
    Rational c = 0;
    int p = reg->p();
    for (int k = 2; k <= p - 3; ++k)
      for (int l = k; l <= p - 3; ++l) {
        Rational ref = Rational(k - 1) * a.value(k, l);
        Rational val = g.X.comp(k, l).is_zero() ? Rational(0) : g.X.comp(k, l).constant_value();
        if (ref == 0) {
          if (val != 0) throw std::logic_error("X00 not proportional to the closed form");
          continue;
        }
        Rational ratio = val / ref;
        if (!have) {
          c = ratio;
          have = true;
        } else if (ratio != c) {
          throw std::logic_error("X00 not proportional to the closed form");
        }
      }
    g.diag.kappa = c * n.total();
  }
  return g;
}

namespace {

std::vector<std::size_t> level_vars(const RegistryPtr& reg, int lo, int hi) {
  std::vector<std::size_t> vars;
  int p = reg->p();
  for (int k = std::max(2, lo); k <= std::min(hi, p - 3); ++k)
    for (int l = k; l <= p - 3; ++l) vars.push_back(reg->a(k, l));
  return vars;
}

ParamMatrix random_point(const ParamMatrix& a1, Rng& rng) {
  ParamMatrix pt = a1;
  int p = a1.p();
  for (int k = 2; k <= p - 3; ++k)
    for (int l = k; l <= p - 3; ++l) pt.set(k, l, rng.nonzero_rational(20, 10));
  return pt;
}

}  // namespace

GeneratorSet generators_symbolic(const ParamMatrix& a1, const Multiplicities& n,
                                 std::uint64_t seed, int level_cap) {
  const RegistryPtr& reg = a1.registry();
  int p = reg->p();
  a1.require_valid();
  n.require_valid(p);
  int cap = level_cap == 0 ? p - 3 : std::min(level_cap, p - 3);

  GeneratorSet set;
  set.p = p;
  set.n = n;

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i <= p - 4; ++i)
    for (int j = 0; i + j <= p - 4; ++j) pairs.push_back({i, j});

  if (p == 4) {
    Generator g;
    g.X = DerivationOnA(reg);
    set.gens.push_back(std::move(g));
    return set;
  }

  // solver pairs: only those with a component at or below the level cap,
  // plus (0,0) which is handled through its closed-form shape
  std::vector<std::pair<int, int>> solver_pairs;
  for (auto [i, j] : pairs)
    if (i + j == 0 || i + j + 2 <= cap) solver_pairs.push_back({i, j});

  // sample budget from the largest interpolation target
  std::size_t max_monos = 1;
  for (auto [i, j] : solver_pairs) {
    if (i + j == 0) continue;
    for (int nu = i + j + 2; nu <= cap; ++nu) {
      long d = nu - 1 - (i + j);
      auto monos = weighted_monomials(reg, level_vars(reg, 2, nu - 1), d);
      max_monos = std::max(max_monos, monos.size());
    }
  }
  std::size_t S = max_monos + 2;
  if (S < 2) S = 2;

  for (int attempt = 0;; ++attempt) {
    Rng rng(seed + 104729 * attempt);
    std::vector<ParamMatrix> points;
    std::vector<PointGenerators> solved;
    for (std::size_t s = 0; s < S; ++s) {
      points.push_back(random_point(a1, rng));
      solved.push_back(solve_generators_at_point(points.back(), n, solver_pairs));
    }

    try {
      std::vector<Generator> gens;
      for (auto [i, j] : pairs) {
        Generator g;
        g.i = i;
        g.j = j;
        g.X = DerivationOnA(reg);
        bool in_solver =
            std::find(solver_pairs.begin(), solver_pairs.end(), std::make_pair(i, j)) !=
            solver_pairs.end();
        if (in_solver) {
          auto& [alpha, beta] = solved[0].Z.at({i, j});
          g.Z = {alpha, beta, solved[0].D_used};
          g.diag.D_used = solved[0].D_used;
        }
        if (i == 0 && j == 0) {
          // fit the proportionality constant and verify on a second point
          for (std::size_t s = 0; s < 2 && s < S; ++s) {
            Generator num = solve_generator(0, 0, points[s], n);
            if (s == 0)
              g.diag.kappa = num.diag.kappa;
            else if (num.diag.kappa != g.diag.kappa)
              throw std::logic_error("X00 normalization is not constant");
          }
          g.X = x00_closed_form(reg, n).scaled(g.diag.kappa);
        } else if (in_solver) {
          for (int nu = i + j + 2; nu <= cap; ++nu) {
            long d = nu - 1 - (i + j);
            auto vars = level_vars(reg, 2, nu - 1);
            for (int l = nu; l <= p - 3; ++l) {
              std::vector<Sample> samples;
              for (std::size_t s = 0; s < S; ++s) {
                Rational v = 0;
                auto& xmap = solved[s].X.at({i, j});
                auto it = xmap.find({nu, l});
                if (it != xmap.end()) v = it->second;
                samples.push_back({points[s].bindings(), v});
              }
              MultiPoly c = interpolate_weighted_poly(reg, vars, d, samples);
              g.X.set_comp(nu, l, std::move(c));
            }
          }
        }
        gens.push_back(std::move(g));
      }
      set.gens = std::move(gens);
      return set;
    } catch (const std::runtime_error& e) {
      std::string msg = e.what();
      if (msg == "degree bound violated")
        throw std::runtime_error("homogeneity bound violated");
      if (msg != "degenerate samples" || attempt >= 2) throw;
      // resample with fresh randomness
    }
  }
}

RankReport generic_rank(const GeneratorSet& G, const ParamMatrix& sample) {
  const RegistryPtr& reg = sample.registry();
  int p = reg->p();
  auto point = sample.bindings();

  RankReport report;
  Matrix<Rational> rows;
  for (const auto& g : G.gens)
    if (!g.X.is_zero()) rows.push_back(g.X.eval(point));
  report.total = rows.empty() ? 0 : static_cast<long>(matrix_rank(rows));

  for (int m = 2; m <= p - 3; ++m) {
    Matrix<Rational> lvl;
    for (const auto& g : G.gens) {
      if (g.i + g.j != m - 2) continue;
      std::vector<Rational> row;
      for (int l = m; l <= p - 3; ++l) row.push_back(g.X.comp(m, l).eval(point));
      lvl.push_back(std::move(row));
    }
    report.per_level[m] = lvl.empty() ? 0 : static_cast<long>(matrix_rank(lvl));
  }
  return report;
}

std::vector<CommutingField> commuting_family(const GeneratorSet& G) {
  std::vector<CommutingField> out;
  if (G.gens.empty()) return out;
  const Generator& g00 = G.at(0, 0);
  const RegistryPtr& reg = g00.X.registry();
  if (g00.X.is_zero()) return out;

  // X00 . a22 = c * a22
  MultiPoly a22 = MultiPoly::var(reg, reg->a(2, 2));
  MultiPoly applied = g00.X.apply(a22);
  Monomial a22_mono(reg->a(2, 2) + 1, 0);
  a22_mono[reg->a(2, 2)] = 1;
  Rational c = applied.coeff(a22_mono);
  if (applied != a22 * c) throw std::logic_error("X00 does not rescale a22");
  if (c == 0) throw std::logic_error("X00 has no weight on a22");

  for (const auto& g : G.gens) {
    if (g.i == 0 && g.j == 0) continue;
    if (g.X.is_zero()) continue;
    DerivationOnA bracket = lie_bracket(g00.X, g.X);
    // eigenvalue e with bracket = e * X
    Rational e = 0;
    bool have = false;
    for (const auto& [kl, comp] : g.X.comps()) {
      if (comp.is_zero()) continue;
      const auto& [mono, lead] = *comp.terms().begin();
      e = bracket.comp(kl.first, kl.second).coeff(mono) / lead;
      have = true;
      break;
    }
    if (!have) continue;
    if (!(bracket - g.X.scaled(e)).is_zero())
      throw std::logic_error("bracket with X00 is not an eigenvector relation");

    Rational mrat = -e / c;
    if (!rat_is_integer(mrat) || mrat < 0)
      throw std::logic_error("no integer exponent commutes with X00");
    long m = mrat.get_num().get_si();
    CommutingField f;
    f.i = g.i;
    f.j = g.j;
    f.exponent = m;
    f.field = g.X.scaled(a22.pow(m));
    if (!lie_bracket(g00.X, f.field).is_zero())
      throw std::logic_error("commuting family bracket does not vanish");
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace moduli
