#pragma once

#include <vector>

#include "moduli/multipoly.hpp"

namespace moduli {

// Truncated power series with zero constant term: c_1 t + ... + c_T t^T.
// All operations are exact up to the truncation order.
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  explicit TruncatedSeries(long order) : c_(order, Rational(0)) {}
  TruncatedSeries(long order, std::vector<Rational> coeffs);

  static TruncatedSeries identity(long order);  // the series t

  long order() const { return static_cast<long>(c_.size()); }
  // coefficient of t^j, 1 <= j <= order
  const Rational& coeff(long j) const;
  void set_coeff(long j, const Rational& v);
  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const;
  long valuation() const;  // smallest j with c_j != 0; order+1 when zero

  TruncatedSeries truncated(long new_order) const;

  TruncatedSeries operator-() const;
  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const Rational& k) const;
  bool operator==(const TruncatedSeries& o) const { return c_ == o.c_; }

  // this(inner(t)); inner must have zero constant term by construction.
  TruncatedSeries compose(const TruncatedSeries& inner) const;

  // Inverse under composition; requires c_1 != 0.
  TruncatedSeries reversion() const;

 private:
  std::vector<Rational> c_;
};

// F(sx(t), sy(t)) as a truncated series. F must involve only the plane
// variables and satisfy F(0,0)=0.
TruncatedSeries series_subst_poly(const MultiPoly& F, const TruncatedSeries& sx,
                                  const TruncatedSeries& sy);

// Solves F(x, s(x)) = 0 mod x^{T+1} for s, order by order.
// Requires F(0,0)=0 and dF/dy(0,0) != 0.
TruncatedSeries series_implicit_solve(const MultiPoly& F, long T);

}  // namespace moduli
