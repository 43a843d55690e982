#include "moduli/series.hpp"

#include <stdexcept>
#include <utility>

namespace moduli {

TruncatedSeries::TruncatedSeries(long order, std::vector<Rational> coeffs) {
  if (static_cast<long>(coeffs.size()) > order)
    throw std::invalid_argument("more coefficients than the truncation order");
  c_ = std::move(coeffs);
  c_.resize(order, Rational(0));
}

TruncatedSeries TruncatedSeries::identity(long order) {
  if (order < 1) throw std::invalid_argument("identity needs order >= 1");
  TruncatedSeries s(order);
  s.c_[0] = 1;
  return s;
}

const Rational& TruncatedSeries::coeff(long j) const {
  if (j < 1 || j > order()) throw std::out_of_range("series coefficient index");
  return c_[j - 1];
}

void TruncatedSeries::set_coeff(long j, const Rational& v) {
  if (j < 1 || j > order()) throw std::out_of_range("series coefficient index");
  c_[j - 1] = v;
}

bool TruncatedSeries::is_zero() const {
  for (const Rational& v : c_)
    if (v != 0) return false;
  return true;
}

long TruncatedSeries::valuation() const {
  for (long j = 1; j <= order(); ++j)
    if (c_[j - 1] != 0) return j;
  return order() + 1;
}

TruncatedSeries TruncatedSeries::truncated(long new_order) const {
  if (new_order > order())
    throw std::invalid_argument("cannot extend a truncated series");
  TruncatedSeries s(new_order);
  for (long j = 0; j < new_order; ++j) s.c_[j] = c_[j];
  return s;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries r(*this);
  for (Rational& v : r.c_) v = -v;
  return r;
}

static void check_orders(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.order() != b.order())
    throw std::invalid_argument("mixing series of different truncation orders");
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  check_orders(*this, o);
  TruncatedSeries r(*this);
  for (long j = 0; j < order(); ++j) r.c_[j] += o.c_[j];
  return r;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
  check_orders(*this, o);
  TruncatedSeries r(*this);
  for (long j = 0; j < order(); ++j) r.c_[j] -= o.c_[j];
  return r;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  check_orders(*this, o);
  TruncatedSeries r(order());
  for (long i = 1; i < order(); ++i) {
    if (c_[i - 1] == 0) continue;
    for (long j = 1; i + j <= order(); ++j) r.c_[i + j - 1] += c_[i - 1] * o.c_[j - 1];
  }
  return r;
}

TruncatedSeries TruncatedSeries::operator*(const Rational& k) const {
  TruncatedSeries r(*this);
  for (Rational& v : r.c_) v *= k;
  return r;
}

TruncatedSeries TruncatedSeries::compose(const TruncatedSeries& inner) const {
  check_orders(*this, inner);
  TruncatedSeries acc(order());
  TruncatedSeries pw = inner;
  for (long j = 1; j <= order(); ++j) {
    if (c_[j - 1] != 0) acc = acc + pw * c_[j - 1];
    if (j < order()) {
      pw = pw * inner;
      if (pw.is_zero()) break;
    }
  }
  return acc;
}

TruncatedSeries TruncatedSeries::reversion() const {
  if (order() < 1 || c_[0] == 0)
    throw std::domain_error("reversion needs a unit linear coefficient");
  Rational inv = Rational(1) / c_[0];
  TruncatedSeries id = identity(order());
  TruncatedSeries g = id * inv;
  // each pass gains one order of agreement
  for (long pass = 1; pass < order(); ++pass) g = g - (compose(g) - id) * inv;
  if (!(compose(g) - id).is_zero()) throw std::logic_error("reversion did not converge");
  return g;
}

static TruncatedSeries series_pow(const TruncatedSeries& s, int e) {
  TruncatedSeries r = s;
  for (int k = 1; k < e; ++k) r = r * s;
  return r;
}

TruncatedSeries series_subst_poly(const MultiPoly& F, const TruncatedSeries& sx,
                                  const TruncatedSeries& sy) {
  check_orders(sx, sy);
  if (F.max_var_index() > 1)
    throw std::invalid_argument("series substitution needs a plane polynomial");
  TruncatedSeries acc(sx.order());
  for (const auto& [m, c] : F.terms()) {
    int ex = m.size() > 0 ? m[0] : 0;
    int ey = m.size() > 1 ? m[1] : 0;
    if (ex == 0 && ey == 0) {
      if (c != 0) throw std::invalid_argument("series substitution needs F(0,0)=0");
      continue;
    }
    TruncatedSeries term =
        ex > 0 ? series_pow(sx, ex) : series_pow(sy, ey);
    if (ex > 0 && ey > 0) term = term * series_pow(sy, ey);
    acc = acc + term * c;
  }
  return acc;
}

TruncatedSeries series_implicit_solve(const MultiPoly& F, long T) {
  if (T < 1) throw std::invalid_argument("truncation order must be positive");
  if (F.coeff({}) != 0) throw std::domain_error("curve does not pass through the origin");
  Rational c = F.coeff({0, 1});
  if (c == 0) throw std::domain_error("not a graph in this orientation");
  TruncatedSeries id = TruncatedSeries::identity(T);
  TruncatedSeries s(T);
  for (long pass = 0; pass < T; ++pass) {
    TruncatedSeries r = series_subst_poly(F, id, s);
    if (r.is_zero()) break;
    s = s - r * (Rational(1) / c);
  }
  if (!series_subst_poly(F, id, s).is_zero())
    throw std::logic_error("implicit solve did not converge");
  return s;
}

}  // namespace moduli
