#pragma once

#include <map>

#include "moduli/multipoly.hpp"

namespace moduli {

// Quotient of two MultiPoly. Equality is decided by cross-multiplication;
// reduction is limited to monomial/content stripping (no multivariate gcd).
class RationalFunction {
 public:
  RationalFunction() = default;
  RationalFunction(MultiPoly num, MultiPoly den);
  /* implicit */ RationalFunction(const MultiPoly& num);

  static RationalFunction constant(const RegistryPtr& reg, const Rational& c) {
    return RationalFunction(MultiPoly::constant(reg, c));
  }

  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }
  const RegistryPtr& registry() const { return num_.registry(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

  RationalFunction operator-() const;
  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator/(const RationalFunction& o) const;
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

  // Cross-multiplication equality: n1*d2 == n2*d1.
  bool operator==(const RationalFunction& o) const;
  bool operator!=(const RationalFunction& o) const { return !(*this == o); }

  RationalFunction derivative(std::size_t var_index) const;

  using Binding = std::variant<Rational, RationalFunction>;
  RationalFunction subst(const std::map<std::size_t, Binding>& bindings) const;

  Rational eval(const std::map<std::size_t, Rational>& point) const;

  // wdeg(num) - wdeg(den); nullopt when either part is inhomogeneous.
  std::optional<long> weighted_degree() const;

  std::string str() const;

 private:
  void normalize();

  MultiPoly num_, den_;
};

inline bool fe_is_zero(const RationalFunction& r) { return r.is_zero(); }

}  // namespace moduli
