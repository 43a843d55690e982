#include "moduli/integrals.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

#include "moduli/rng.hpp"

namespace moduli {

namespace {

RationalFunction rf_zero(const RegistryPtr& reg) { return RationalFunction(MultiPoly(reg)); }

RationalFunction rf_var(const RegistryPtr& reg, std::size_t idx) {
  return RationalFunction(MultiPoly::var(reg, idx));
}

RationalFunction rf_a22(const RegistryPtr& reg) { return rf_var(reg, reg->a(2, 2)); }

std::size_t derived_var(const RegistryPtr& reg, const std::string& name, int level, int idx) {
  return reg->has(name) ? reg->index_of(name) : reg->add_derived(name, level, idx);
}

bool monomial_uses(const Monomial& m, const std::vector<bool>& flagged) {
  for (std::size_t v = 0; v < m.size() && v < flagged.size(); ++v)
    if (m[v] != 0 && flagged[v]) return true;
  return false;
}

// true when every variable of f has level <= 2 (constants included)
bool level2_only(const MultiPoly& f) {
  const auto& reg = f.registry();
  for (const auto& [mono, coef] : f.terms())
    for (std::size_t v = 0; v < mono.size(); ++v)
      if (mono[v] != 0 && (reg->info(v).level > 2 || reg->info(v).level == 0)) return false;
  return true;
}

// termwise antiderivative along v; the denominator must not involve v
RationalFunction antiderivative(const RationalFunction& h, std::size_t v) {
  for (const auto& [mono, coef] : h.den().terms())
    if (mono.size() > v && mono[v] != 0)
      throw std::logic_error("integration variable appears in a denominator");
  MultiPoly num(h.registry());
  for (const auto& [mono, coef] : h.num().terms()) {
    Monomial m = mono;
    if (m.size() <= v) m.resize(v + 1, 0);
    m[v] += 1;
    num.set_coeff(m, coef / Rational(m[v]));
  }
  return RationalFunction(num, h.den());
}

const RegistryPtr& registry_of(const GeneratorSet& G) {
  if (G.gens.empty()) throw std::invalid_argument("empty generator set");
  return G.gens.front().X.registry();
}

MultiPoly poly_det(const Matrix<MultiPoly>& m) {
  std::size_t d = m.size();
  if (d == 0) throw std::invalid_argument("determinant of an empty matrix");
  if (d == 1) return m[0][0];
  const RegistryPtr& reg = m[0][0].registry();
  MultiPoly acc(reg);
  for (std::size_t i = 0; i < d; ++i) {
    if (m[i][0].is_zero()) continue;
    Matrix<MultiPoly> minor;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == i) continue;
      minor.emplace_back(m[r].begin() + 1, m[r].end());
    }
    MultiPoly term = m[i][0] * poly_det(minor);
    if (i % 2) acc -= term;
    else acc += term;
  }
  return acc;
}

// adj(Q) with adj(Q) Q = det(Q) I
Matrix<MultiPoly> poly_adjugate(const Matrix<MultiPoly>& q) {
  std::size_t d = q.size();
  const RegistryPtr& reg = q[0][0].registry();
  Matrix<MultiPoly> adj(d, std::vector<MultiPoly>(d, MultiPoly(reg)));
  if (d == 1) {
    adj[0][0] = MultiPoly::constant(reg, 1);
    return adj;
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Matrix<MultiPoly> minor;
      for (std::size_t r = 0; r < d; ++r) {
        if (r == j) continue;
        std::vector<MultiPoly> row;
        for (std::size_t c = 0; c < d; ++c)
          if (c != i) row.push_back(q[r][c]);
        minor.push_back(std::move(row));
      }
      MultiPoly cof = poly_det(minor);
      adj[i][j] = ((i + j) % 2) ? -cof : cof;
    }
  return adj;
}

// exact symbolic rank of a small matrix of polynomials, by minors
std::size_t minor_rank(const Matrix<MultiPoly>& m) {
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::size_t best = 0;
  std::vector<std::size_t> ri, ci;
  std::function<bool(std::size_t, std::size_t, std::size_t)> pick_cols =
      [&](std::size_t s, std::size_t start, std::size_t want) -> bool {
    if (ci.size() == want) {
      Matrix<MultiPoly> sub;
      for (std::size_t r : ri) {
        std::vector<MultiPoly> row;
        for (std::size_t c : ci) row.push_back(m[r][c]);
        sub.push_back(std::move(row));
      }
      return !poly_det(sub).is_zero();
    }
    for (std::size_t c = start; c < cols; ++c) {
      ci.push_back(c);
      if (pick_cols(s, c + 1, want)) return true;
      ci.pop_back();
    }
    return false;
  };
  std::function<bool(std::size_t, std::size_t, std::size_t)> pick_rows =
      [&](std::size_t s, std::size_t start, std::size_t want) -> bool {
    if (ri.size() == want) return pick_cols(s, 0, want);
    for (std::size_t r = start; r < rows; ++r) {
      ri.push_back(r);
      if (pick_rows(s, r + 1, want)) return true;
      ri.pop_back();
    }
    return false;
  };
  for (std::size_t s = std::min(rows, cols); s >= 1; --s) {
    ri.clear();
    ci.clear();
    if (pick_rows(s, 0, s)) {
      best = s;
      break;
    }
  }
  return best;
}

}  // namespace

std::map<std::size_t, RationalFunction::Binding> CoordinateSplit::to_bc() const {
  std::map<std::size_t, RationalFunction::Binding> out;
  for (const auto& [k, L] : levels) {
    const auto& reg = L.rows_b.empty() ? L.rows_c[0][0].registry() : L.rows_b[0][0].registry();
    std::vector<std::size_t> bc = L.b_vars;
    bc.insert(bc.end(), L.c_vars.begin(), L.c_vars.end());
    for (std::size_t l = 0; l < L.inv.size(); ++l) {
      RationalFunction expr = rf_zero(reg);
      for (std::size_t j = 0; j < bc.size(); ++j) expr += L.inv[l][j] * rf_var(reg, bc[j]);
      out.emplace(reg->a(k, k + static_cast<int>(l)), expr);
    }
  }
  return out;
}

CoordinateSplit split_coordinates(const GeneratorSet& G, int level_cap) {
  const RegistryPtr& reg = registry_of(G);
  int p = G.p;
  int top = p - 3;
  if (level_cap > 0) top = std::min(top, level_cap);
  RationalFunction zero = rf_zero(reg);
  MultiPoly a22_poly = MultiPoly::var(reg, reg->a(2, 2));

  CoordinateSplit S;
  for (int k = 3; k <= top; ++k) {
    int d = p - 2 - k;
    int r = std::min(k - 1, d);
    LevelSplit L;
    L.k = k;

    // initial parts at this level, linear in the level-2 variables
    std::vector<std::pair<int, int>> pair_of_row;
    Matrix<MultiPoly> V;
    for (int i = k - 2; i >= 0; --i) {
      int j = k - 2 - i;
      std::vector<MultiPoly> row;
      for (int l = k; l <= p - 3; ++l) row.push_back(G.at(i, j).X.comp(k, l));
      V.push_back(std::move(row));
      pair_of_row.emplace_back(i, j);
    }

    // pivot rows and columns from an exact evaluation at a sample point;
    // a nonzero numeric pivot minor certifies the symbolic one
    Rng rng(0x5eed0000u + static_cast<std::uint64_t>(k));
    std::vector<std::size_t> sel_rows, sel_cols;
    for (int attempt = 0; attempt < 6 && static_cast<int>(sel_rows.size()) < r; ++attempt) {
      std::map<std::size_t, Rational> pt;
      for (int l = 2; l <= p - 3; ++l) pt[reg->a(2, l)] = rng.nonzero_rational(20, 10);
      sel_rows.clear();
      Matrix<Rational> picked;
      for (std::size_t i = 0; i < V.size() && static_cast<int>(sel_rows.size()) < r; ++i) {
        std::vector<Rational> row;
        for (const auto& e : V[i]) row.push_back(e.is_zero() ? Rational(0) : e.eval(pt));
        Matrix<Rational> trial = picked;
        trial.push_back(row);
        if (matrix_rank(trial) > picked.size()) {
          picked.push_back(std::move(row));
          sel_rows.push_back(i);
        }
      }
      if (static_cast<int>(sel_rows.size()) == r) sel_cols = rref_in_place(picked);
    }
    if (static_cast<int>(sel_rows.size()) < r) {
      if (minor_rank(V) < static_cast<std::size_t>(r))
        throw std::domain_error("non-generic first-line data");
      throw std::logic_error("pivot sampling failed on a generic configuration");
    }
    for (std::size_t i : sel_rows) L.pivots.push_back(pair_of_row[i]);

    // Q = pivot block; everything below is adj(Q)/det(Q), so denominators
    // stay one small determinant per level
    Matrix<MultiPoly> Q;
    for (std::size_t i : sel_rows) {
      std::vector<MultiPoly> row;
      for (std::size_t c : sel_cols) row.push_back(V[i][c]);
      Q.push_back(std::move(row));
    }
    MultiPoly det = poly_det(Q);
    if (det.is_zero()) throw std::logic_error("numeric pivot certificate failed");
    Matrix<MultiPoly> adj = poly_adjugate(Q);

    std::vector<bool> is_pivot_col(d, false);
    for (std::size_t c : sel_cols) is_pivot_col[c] = true;
    std::vector<std::size_t> free_cols;
    for (int c = 0; c < d; ++c)
      if (!is_pivot_col[c]) free_cols.push_back(c);

    // b_m = a22 sum_i adj[i][m] a_{S_i} / det
    for (int m = 0; m < r; ++m) {
      std::vector<RationalFunction> row(d, zero);
      for (int i = 0; i < r; ++i)
        row[sel_cols[i]] = RationalFunction(a22_poly * adj[i][m], det);
      L.rows_b.push_back(std::move(row));
    }
    // c_n = a_{t_n} - sum_i (adj V_t)_i a_{S_i} / det
    for (std::size_t t : free_cols) {
      std::vector<RationalFunction> row(d, zero);
      row[t] = RationalFunction::constant(reg, 1);
      for (int i = 0; i < r; ++i) {
        MultiPoly acc(reg);
        for (int q = 0; q < r; ++q) acc += adj[i][q] * V[sel_rows[q]][t];
        if (!acc.is_zero()) row[sel_cols[i]] = RationalFunction(-acc, det);
      }
      L.rows_c.push_back(std::move(row));
    }
    // closed-form inverse: a_S = Q^T b / a22, a_t = c + V_t . b / a22
    L.inv.assign(d, std::vector<RationalFunction>(d, zero));
    for (int i = 0; i < r; ++i)
      for (int m = 0; m < r; ++m)
        if (!Q[m][i].is_zero()) L.inv[sel_cols[i]][m] = RationalFunction(Q[m][i], a22_poly);
    for (std::size_t n = 0; n < free_cols.size(); ++n) {
      std::size_t t = free_cols[n];
      for (int m = 0; m < r; ++m) {
        const MultiPoly& e = V[sel_rows[m]][t];
        if (!e.is_zero()) L.inv[t][m] = RationalFunction(e, a22_poly);
      }
      L.inv[t][r + n] = RationalFunction::constant(reg, 1);
    }

    for (int m = 1; m <= r; ++m)
      L.b_vars.push_back(derived_var(reg, "b_" + std::to_string(k) + "_" + std::to_string(m), k, m));
    for (int n = 1; n <= d - r; ++n)
      L.c_vars.push_back(derived_var(reg, "c_" + std::to_string(k) + "_" + std::to_string(n), k, n));

    S.levels.emplace(k, std::move(L));
  }
  return S;
}

TriangularSystem triangularize(const GeneratorSet& G, const CoordinateSplit& split) {
  const RegistryPtr& reg = registry_of(G);
  int p = G.p;
  RationalFunction a22 = rf_a22(reg);
  TriangularSystem T;
  std::map<std::pair<int, int>, std::size_t> position;

  // top level first: by the time a field is processed, every higher pivot
  // field is already triangular
  for (auto it = split.levels.rbegin(); it != split.levels.rend(); ++it) {
    const LevelSplit& L = it->second;
    for (int m = 1; m <= static_cast<int>(L.rows_b.size()); ++m) {
      auto [gi, gj] = L.pivots[m - 1];
      const Generator& gen = G.at(gi, gj);
      TriangularField Y;
      Y.k = L.k;
      Y.m = m;
      Y.source = {gi, gj};

      for (auto jt = split.levels.find(L.k); jt != split.levels.end(); ++jt) {
        const LevelSplit& Lv = jt->second;
        int v = Lv.k;
        std::vector<RationalFunction> comp;
        for (int l = v; l <= p - 3; ++l) comp.emplace_back(gen.X.comp(v, l));
        for (std::size_t mm = 0; mm < Lv.rows_b.size(); ++mm) {
          RationalFunction val = rf_zero(reg);
          for (std::size_t l = 0; l < comp.size(); ++l) val += Lv.rows_b[mm][l] * comp[l];
          if (!val.is_zero()) Y.b_comps[{v, static_cast<int>(mm) + 1}] = val;
        }
        for (std::size_t nn = 0; nn < Lv.rows_c.size(); ++nn) {
          RationalFunction val = rf_zero(reg);
          for (std::size_t l = 0; l < comp.size(); ++l) val += Lv.rows_c[nn][l] * comp[l];
          if (!val.is_zero()) Y.c_comps[{v, static_cast<int>(nn) + 1}] = val;
        }
      }

      // the change of coordinates diagonalizes the own level exactly
      for (int mm = 1; mm <= static_cast<int>(L.rows_b.size()); ++mm) {
        auto bt = Y.b_comps.find({L.k, mm});
        RationalFunction got = bt == Y.b_comps.end() ? rf_zero(reg) : bt->second;
        if (got != (mm == m ? a22 : rf_zero(reg)))
          throw std::domain_error("non-generic configuration");
      }
      for (int nn = 1; nn <= static_cast<int>(L.rows_c.size()); ++nn)
        if (Y.c_comps.count({L.k, nn})) throw std::domain_error("non-generic configuration");

      // eliminate b-components above the own level, bottom-up
      std::vector<std::pair<int, int>> high;
      for (const auto& [key, val] : Y.b_comps)
        if (key.first > L.k) high.push_back(key);
      for (const auto& key : high) {
        RationalFunction beta = Y.b_comps.at(key);
        Y.b_comps.erase(key);
        const TriangularField& H = T.fields[position.at(key)];
        RationalFunction f = beta / a22;
        for (const auto& [ck, cv] : H.c_comps) {
          auto [slot, fresh] = Y.c_comps.emplace(ck, rf_zero(reg));
          slot->second -= f * cv;
          if (slot->second.is_zero()) Y.c_comps.erase(slot);
        }
      }

      position[{L.k, m}] = T.fields.size();
      T.fields.push_back(std::move(Y));
    }
  }
  return T;
}

std::vector<RationalFunction> level2_integrals(const RegistryPtr& reg) {
  std::vector<RationalFunction> out;
  for (int l = 3; l <= reg->p() - 3; ++l)
    out.emplace_back(MultiPoly::var(reg, reg->a(2, l)), MultiPoly::var(reg, reg->a(2, 2)));
  return out;
}

RationalFunction integrate_level(const TriangularSystem& T, const CoordinateSplit& split,
                                 int k, int n) {
  if (!split.levels.count(k) || n < 1 ||
      n > static_cast<int>(split.levels.at(k).c_vars.size()))
    throw std::out_of_range("no c-coordinate with that label");
  const RegistryPtr& reg = split.levels.at(k).rows_b.empty()
                               ? split.levels.at(k).rows_c[0][0].registry()
                               : split.levels.at(k).rows_b[0][0].registry();
  auto bc = split.to_bc();
  RationalFunction a22 = rf_a22(reg);

  // c-coordinates of lower levels are annihilated by every field of the
  // system, so they may enter g as passive coefficients; coordinates of
  // level >= k must not appear
  std::vector<bool> too_high(reg->size(), false);
  for (const auto& [lvl, L] : split.levels)
    if (lvl >= k) {
      for (std::size_t v : L.b_vars) too_high[v] = true;
      for (std::size_t v : L.c_vars) too_high[v] = true;
    }

  // right-hand sides, one per b-direction below level k, in (level, m) order
  std::map<std::pair<int, int>, RationalFunction> rhs;
  for (const auto& F : T.fields) {
    if (F.k >= k) continue;
    auto it = F.c_comps.find({k, n});
    RationalFunction gamma = it == F.c_comps.end() ? rf_zero(reg) : it->second;
    RationalFunction R = -(gamma.subst(bc)) / a22;
    if (!level2_only(R.den()))
      throw std::logic_error("right-hand side denominator leaves the level-2 ring");
    for (const auto& [mono, coef] : R.num().terms())
      if (monomial_uses(mono, too_high))
        throw std::logic_error("right-hand side reaches its own level");
    rhs[{F.k, F.m}] = R;
  }

  RationalFunction g = rf_zero(reg);
  for (const auto& [key, R] : rhs) {
    std::size_t v = split.levels.at(key.first).b_vars[key.second - 1];
    g += antiderivative(R - g.derivative(v), v);
  }
  for (const auto& [key, R] : rhs) {
    std::size_t v = split.levels.at(key.first).b_vars[key.second - 1];
    if (g.derivative(v) != R)
      throw std::logic_error("cross-derivative check failed: the subsystem is not involutive");
  }
  return g;
}

namespace {

// (b,c) coordinates -> their linear forms in the a variables
std::map<std::size_t, RationalFunction::Binding> bc_to_a(const CoordinateSplit& split) {
  std::map<std::size_t, RationalFunction::Binding> out;
  for (const auto& [k, L] : split.levels) {
    if (L.rows_b.empty()) continue;
    const auto& reg = L.rows_b[0][0].registry();
    auto linear_form = [&](const std::vector<RationalFunction>& row) {
      RationalFunction expr = rf_zero(reg);
      for (std::size_t l = 0; l < row.size(); ++l)
        expr += row[l] * rf_var(reg, reg->a(k, k + static_cast<int>(l)));
      return expr;
    };
    for (std::size_t m = 0; m < L.rows_b.size(); ++m)
      out.emplace(L.b_vars[m], linear_form(L.rows_b[m]));
    for (std::size_t n = 0; n < L.rows_c.size(); ++n)
      out.emplace(L.c_vars[n], linear_form(L.rows_c[n]));
  }
  return out;
}

void push_base_integrals(FirstIntegralSet& F, const RegistryPtr& reg) {
  int p = reg->p();
  for (int l = 1; l <= p - 3; ++l)
    F.integrals.push_back({1, l, rf_var(reg, reg->a(1, l)), 0, {}, true});
  for (int l = 3; l <= p - 3; ++l)
    F.integrals.push_back(
        {2, l, rf_var(reg, reg->a(2, l)) / rf_var(reg, reg->a(2, 2)), 0, {}, true});
}

void read_first_line(FirstIntegralSet& F, const ParamMatrix& a1) {
  for (int l = 1; l <= a1.p() - 3; ++l) {
    if (!a1.is_numeric(1, l)) throw std::invalid_argument("first line must be numeric");
    F.first_line.push_back(a1.value(1, l));
  }
}

}  // namespace

FirstIntegralSet first_integrals(const GeneratorSet& G, const ParamMatrix& a1) {
  if (G.p != a1.p()) throw std::invalid_argument("generator set and first line disagree on p");
  const RegistryPtr& reg = a1.registry();
  int p = G.p;
  auto d = dims(p);

  FirstIntegralSet F;
  F.p = p;
  F.tau = d.tau;
  F.tau_prime = d.tauPrime;
  read_first_line(F, a1);
  push_base_integrals(F, reg);

  // the subsystem for f_{k,n} only reaches b variables of levels < k, so the
  // split can stop at the highest level carrying transverse coordinates
  int top_c = 0;
  for (int k = 3; k <= p - 3; ++k)
    if (p - 2 * k - 1 > 0) top_c = k;
  if (top_c > 0) {
    auto split = split_coordinates(G, top_c);
    auto T = triangularize(G, split);
    auto back = bc_to_a(split);
    for (const auto& [k, L] : split.levels) {
      for (int n = 1; n <= static_cast<int>(L.c_vars.size()); ++n) {
        RationalFunction g = integrate_level(T, split, k, n);
        RationalFunction f = rf_zero(reg);
        for (std::size_t l = 0; l < L.rows_c[n - 1].size(); ++l)
          f += L.rows_c[n - 1][l] * rf_var(reg, reg->a(k, k + static_cast<int>(l)));
        f += g.subst(back);
        auto w = f.weighted_degree();
        if (!w || *w != k - 1) throw std::logic_error("first integral lost its homogeneity");
        F.integrals.push_back({k, n, f, k - 1, {}, true});
      }
    }
  }
  if (static_cast<long>(F.integrals.size()) != F.tau)
    throw std::logic_error("first integral count disagrees with tau");
  return F;
}

FirstIntegralSet first_integrals(const ParamMatrix& a1, const Multiplicities& n,
                                 std::uint64_t seed) {
  int p = a1.p();
  bool any_c = false;
  for (int k = 3; k <= p - 3; ++k) any_c = any_c || p - 2 * k - 1 > 0;
  if (!any_c) {
    auto d = dims(p);
    FirstIntegralSet F;
    F.p = p;
    F.tau = d.tau;
    F.tau_prime = d.tauPrime;
    read_first_line(F, a1);
    push_base_integrals(F, a1.registry());
    if (static_cast<long>(F.integrals.size()) != F.tau)
      throw std::logic_error("first integral count disagrees with tau");
    return F;
  }
  GeneratorSet G = generators_symbolic(a1, n, seed);
  return first_integrals(G, a1);
}

FirstIntegralSet projectivize(const FirstIntegralSet& F) {
  FirstIntegralSet out = F;
  for (auto& I : out.integrals) {
    auto w = I.f.weighted_degree();
    if (!w) throw std::logic_error("inhomogeneous first integral");
    if (*w != I.weight) throw std::logic_error("recorded weight disagrees with the integral");
    const RegistryPtr& reg = I.f.registry();
    I.projectivized =
        *w == 0 ? I.f
                : I.f / RationalFunction(MultiPoly::var(reg, reg->a(2, 2), static_cast<int>(*w)));
    I.on_moduli = I.k != 2;
  }
  return out;
}

std::optional<AnnihilationWitness> verify_annihilation(const RationalFunction& f,
                                                       const GeneratorSet& G) {
  for (const auto& gen : G.gens) {
    MultiPoly res = gen.X.apply(f.num()) * f.den() - f.num() * gen.X.apply(f.den());
    if (!res.is_zero()) return AnnihilationWitness{gen.i, gen.j, res};
  }
  return std::nullopt;
}

namespace {

InvariantTuple evaluate_invariants(const FirstIntegralSet& F, const ParamMatrix& a) {
  auto P = projectivize(F);
  InvariantTuple t;
  t.cross_ratios = P.first_line;
  auto point = a.bindings();
  for (const auto& I : P.integrals) t.values.push_back(I.projectivized.eval(point));
  return t;
}

ParamMatrix check_generic_leaf(const CurveInput& c) {
  auto [a, report] = prenormalize(c);
  if (a.p() >= 6 && a.value(2, 2) == 0)
    throw std::domain_error("non-generic leaf: invariants undefined at this point");
  return a;
}

}  // namespace

InvariantTuple curve_invariants(const CurveInput& c) {
  ParamMatrix a = check_generic_leaf(c);
  int p = a.p();
  Multiplicities n;
  n.values.assign(p, 1);
  ParamMatrix a1(a.registry());
  for (int l = 1; l <= p - 3; ++l) a1.set(1, l, a.value(1, l));
  return evaluate_invariants(first_integrals(a1, n), a);
}

InvariantTuple curve_invariants(const CurveInput& c, const FirstIntegralSet& F) {
  ParamMatrix a = check_generic_leaf(c);
  if (a.p() != F.p) throw std::invalid_argument("integral set computed for a different p");
  for (int l = 1; l <= a.p() - 3; ++l)
    if (a.value(1, l) != F.first_line[l - 1])
      throw std::domain_error("first line of the curve does not match the integral set");
  return evaluate_invariants(F, a);
}

}  // namespace moduli
