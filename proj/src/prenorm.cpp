#include "moduli/prenorm.hpp"

#include <stdexcept>

#include "moduli/linalg.hpp"

namespace moduli {

CurveInput branches_of_params(const ParamMatrix& a, long T) {
  int p = a.p();
  if (T < 1) throw std::invalid_argument("truncation order must be positive");
  CurveInput c;
  c.branches.push_back({BranchSeries::Orient::XofY, TruncatedSeries(T)});
  c.branches.push_back({BranchSeries::Orient::YofX, TruncatedSeries(T)});
  TruncatedSeries third(T);
  third.set_coeff(1, -1);
  c.branches.push_back({BranchSeries::Orient::YofX, third});
  for (int l = 1; l <= p - 3; ++l) {
    TruncatedSeries s(T);
    for (int k = 1; k <= l; ++k) {
      if (!a.is_numeric(k, l))
        throw std::invalid_argument("branch extraction needs a numeric matrix");
      s.set_coeff(k, -a.value(k, l));
    }
    c.branches.push_back({BranchSeries::Orient::YofX, s});
  }
  return c;
}

static void check_branch(const BranchSeries& b) {
  if (b.orientation == BranchSeries::Orient::XofY && b.series.order() >= 1 &&
      b.series.coeff(1) != 0)
    throw std::domain_error("x-of-y branch must be tangent to {x=0}");
}

ConeMatrix cone_matrix(const CurveInput& c, long H) {
  ConeMatrix m;
  m.H = H;
  for (const auto& b : c.branches) {
    check_branch(b);
    if (b.series.order() < H) throw std::runtime_error("need higher order");
  }
  for (long h = 1; h <= H; ++h) {
    std::vector<ConeEntry> row;
    for (const auto& b : c.branches) {
      ConeEntry e;
      if (b.orientation == BranchSeries::Orient::XofY && h == 1)
        e.inf = true;
      else
        e.v = -b.series.coeff(h);
      row.push_back(e);
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

static std::pair<Rational, Rational> tangent_dir(const BranchSeries& b) {
  if (b.orientation == BranchSeries::Orient::XofY) return {0, 1};
  return {1, b.series.coeff(1)};
}

CurveInput apply_linear(const LinearMap& L, const CurveInput& c) {
  if (L.a * L.d - L.b * L.c == 0) throw std::domain_error("linear map is singular");
  CurveInput out;
  for (const auto& br : c.branches) {
    check_branch(br);
    long T = br.series.order();
    TruncatedSeries id = TruncatedSeries::identity(T);
    TruncatedSeries X(T), Y(T);
    if (br.orientation == BranchSeries::Orient::YofX) {
      X = id * L.a + br.series * L.b;
      Y = id * L.c + br.series * L.d;
    } else {
      X = br.series * L.a + id * L.b;
      Y = br.series * L.c + id * L.d;
    }
    BranchSeries nb;
    if (X.coeff(1) != 0) {
      nb.orientation = BranchSeries::Orient::YofX;
      nb.series = Y.compose(X.reversion());
    } else {
      nb.orientation = BranchSeries::Orient::XofY;
      nb.series = X.compose(Y.reversion());
    }
    out.branches.push_back(std::move(nb));
  }
  return out;
}

std::pair<LinearMap, CurveInput> normalize_tangent_cone(const CurveInput& c) {
  if (c.p() < 3) throw std::domain_error("need at least three branches");
  std::vector<std::pair<Rational, Rational>> dirs;
  for (const auto& b : c.branches) {
    check_branch(b);
    dirs.push_back(tangent_dir(b));
  }
  for (std::size_t i = 0; i < dirs.size(); ++i)
    for (std::size_t j = i + 1; j < dirs.size(); ++j)
      if (dirs[i].first * dirs[j].second - dirs[i].second * dirs[j].first == 0)
        throw std::domain_error("branches with coincident tangents");

  // L sends dirs[0] to {x=0}, dirs[1] to {y=0}, dirs[2] to {y+x=0}:
  // solve l2*d2 - l1*d1 = d3, set Linv = [l2*d2 | l1*d1] and invert.
  auto [d1x, d1y] = dirs[0];
  auto [d2x, d2y] = dirs[1];
  auto [d3x, d3y] = dirs[2];
  Matrix<Rational> m = {{d2x, -d1x}, {d2y, -d1y}};
  auto sol = solve_linear_exact<Rational>(m, {d3x, d3y}, 0, 1);
  if (!sol.consistent || !sol.kernel.empty())
    throw std::domain_error("degenerate tangent data");
  Rational l2 = sol.particular[0], l1 = sol.particular[1];
  Rational ia = l2 * d2x, ic = l2 * d2y;  // first column of Linv
  Rational ib = l1 * d1x, id = l1 * d1y;  // second column of Linv
  Rational det = ia * id - ib * ic;
  LinearMap L{id / det, -ib / det, -ic / det, ia / det};
  return {L, apply_linear(L, c)};
}

static void check_phi(const Biholomorphism& phi) {
  for (const MultiPoly* part : {&phi.A, &phi.B}) {
    if (part->max_var_index() > 1)
      throw std::invalid_argument("biholomorphism components must be plane polynomials");
    if (!part->is_zero() && part->xy_valuation() < 2)
      throw std::invalid_argument("biholomorphism must be tangent to the identity");
  }
}

CurveInput apply_biholomorphism(const Biholomorphism& phi, const CurveInput& c) {
  check_phi(phi);
  CurveInput out;
  for (const auto& br : c.branches) {
    check_branch(br);
    long T = br.series.order();
    TruncatedSeries id = TruncatedSeries::identity(T);
    const TruncatedSeries& s = br.series;
    TruncatedSeries cur = s;
    if (br.orientation == BranchSeries::Orient::YofX) {
      // sigma + B(x, sigma) = s(x + A(x, sigma)), solved by contraction
      for (long pass = 0; pass < T; ++pass)
        cur = s.compose(id + series_subst_poly(phi.A, id, cur)) -
              series_subst_poly(phi.B, id, cur);
      if (!(cur + series_subst_poly(phi.B, id, cur) -
            s.compose(id + series_subst_poly(phi.A, id, cur)))
               .is_zero())
        throw std::logic_error("branch transform did not converge");
    } else {
      // rho + A(rho, y) = s(y + B(rho, y))
      for (long pass = 0; pass < T; ++pass)
        cur = s.compose(id + series_subst_poly(phi.B, cur, id)) -
              series_subst_poly(phi.A, cur, id);
      if (!(cur + series_subst_poly(phi.A, cur, id) -
            s.compose(id + series_subst_poly(phi.B, cur, id)))
               .is_zero())
        throw std::logic_error("branch transform did not converge");
    }
    out.branches.push_back({br.orientation, cur});
  }
  return out;
}

std::pair<Biholomorphism, CurveInput> kill_height(const CurveInput& c, int N,
                                                  const RegistryPtr& reg) {
  if (N < 1) throw std::invalid_argument("height step must be >= 1");
  int p = c.p();
  ConeMatrix cone = cone_matrix(c, N + 1);
  if (!cone.at(1, 1).inf)
    throw std::domain_error("first branch must be tangent to {x=0}");
  int K = std::min(p, N + 3);

  // Correction polynomial R(s) on the slope line: the height-(N+1) entry of a
  // branch with slope s1 moves by s1*a(s1) - b(s1) = R(s1) under
  // (x,y) -> (x + A, y + B) with A(1,t) = a(t), B(1,t) = b(t).
  // Nodes are the slopes -u_k; the {x=0} branch pins the top coefficient.
  std::vector<int> support;
  if (K == N + 3)
    for (int e = 0; e <= N + 2; ++e) support.push_back(e);
  else {
    for (int e = 0; e <= p - 2; ++e) support.push_back(e);
    support.push_back(N + 2);
  }
  std::size_t cols = support.size();
  Matrix<Rational> m;
  std::vector<Rational> rhs;
  for (int k = 2; k <= K; ++k) {
    if (cone.at(1, k).inf) throw std::domain_error("only the first branch may be vertical");
    Rational node = -cone.at(1, k).v;
    std::vector<Rational> row(cols);
    for (std::size_t j = 0; j < cols; ++j) row[j] = rat_pow(node, support[j]);
    m.push_back(std::move(row));
    rhs.push_back(cone.at(N + 1, k).v);
  }
  {
    std::vector<Rational> row(cols, Rational(0));
    row[cols - 1] = 1;  // top coefficient r_{N+2}
    m.push_back(std::move(row));
    rhs.push_back(-cone.at(N + 1, 1).v);
  }
  auto sol = solve_linear_exact<Rational>(m, rhs, 0, 1);
  if (!sol.consistent || !sol.kernel.empty())
    throw std::logic_error("cone interpolation is degenerate");

  // split: a(s) = (R(s) - R(0))/s, b = -R(0)
  MultiPoly x = MultiPoly::var(reg, reg->x());
  MultiPoly y = MultiPoly::var(reg, reg->y());
  MultiPoly A(reg), B(reg);
  for (std::size_t j = 0; j < cols; ++j) {
    int e = support[j];
    const Rational& r = sol.particular[j];
    if (r == 0) continue;
    if (e == 0)
      B -= MultiPoly::constant(reg, r) * x.pow(N + 1);
    else
      A += MultiPoly::constant(reg, r) * x.pow(N + 2 - e) * y.pow(e - 1);
  }
  Biholomorphism phi{A, B};
  CurveInput out = apply_biholomorphism(phi, c);

  ConeMatrix check = cone_matrix(out, N + 1);
  for (int k = 1; k <= K; ++k)
    if (check.at(N + 1, k).v != 0) throw std::logic_error("cone killing failed");
  return {phi, out};
}

std::pair<ParamMatrix, PrenormReport> prenormalize(const CurveInput& c, long Hmax) {
  int p = c.p();
  if (p < 4) throw std::domain_error("branch count p must be >= 4");
  if (Hmax == 0) Hmax = 2 * p;
  if (Hmax < p - 2) throw std::domain_error("Hmax must be at least p-2");
  for (const auto& b : c.branches)
    if (b.series.order() < Hmax) throw std::runtime_error("need higher order");

  PrenormReport report;
  auto [L, cur] = normalize_tangent_cone(c);
  report.linear = L;
  RegistryPtr reg = make_registry(p);
  for (int N = 1; N < Hmax; ++N) cur = kill_height(cur, N, reg).second;

  ConeMatrix cone = cone_matrix(cur, Hmax);
  ParamMatrix a(reg);
  for (int l = 1; l <= p - 3; ++l)
    for (int k = 1; k <= l; ++k) a.set(k, l, cone.at(k, l + 3).v);

  // residuals: anything nonzero above the triangular profile
  auto profile_height = [&](int k) {  // last height allowed to be nonzero
    return k <= 3 ? 1L : static_cast<long>(k - 3);
  };
  report.flattened_height = Hmax;
  for (int k = 1; k <= p; ++k)
    for (long h = profile_height(k) + 1; h <= Hmax; ++h)
      if (cone.at(h, k).v != 0) {
        report.residuals.emplace_back(h, k, cone.at(h, k).v);
        report.flattened_height = std::min(report.flattened_height, h - 1);
      }
  a.require_valid();
  return {std::move(a), std::move(report)};
}

}  // namespace moduli
