#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "moduli/rational.hpp"
#include "moduli/registry.hpp"

namespace moduli {

// Exponent vector over a VarRegistry, trailing zeros trimmed.
using Monomial = std::vector<int>;

long mono_total_degree(const Monomial& m);

// Graded lexicographic order on the registry index.
struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// Sparse multivariate polynomial over Rational in a registered variable set.
class MultiPoly {
 public:
  using TermMap = std::map<Monomial, Rational, MonoLess>;

  MultiPoly() = default;
  explicit MultiPoly(RegistryPtr reg) : reg_(std::move(reg)) {}

  static MultiPoly zero(RegistryPtr reg) { return MultiPoly(std::move(reg)); }
  static MultiPoly constant(RegistryPtr reg, const Rational& c);
  static MultiPoly var(RegistryPtr reg, std::size_t index, int exponent = 1);

  const RegistryPtr& registry() const { return reg_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // requires is_constant()

  Rational coeff(const Monomial& m) const;
  void set_coeff(const Monomial& m, const Rational& c);

  MultiPoly operator-() const;
  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o) { *this = *this * o; return *this; }
  MultiPoly operator*(const Rational& c) const;
  MultiPoly operator/(const Rational& c) const;
  bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  MultiPoly pow(long e) const;
  MultiPoly derivative(std::size_t var_index) const;

  // Exact substitution; unbound variables pass through.
  using Binding = std::variant<Rational, MultiPoly>;
  MultiPoly subst(const std::map<std::size_t, Binding>& bindings) const;

  // Full numeric evaluation; every variable present in the polynomial must be bound.
  Rational eval(const std::map<std::size_t, Rational>& point) const;

  // Degree in the plane variables (x,y) only.
  long xy_degree() const;
  long xy_valuation() const;  // min (x,y)-degree over terms; 0 for the zero polynomial
  MultiPoly truncate_xy(long max_degree) const;

  // Slices by (x,y)-homogeneous degree; the returned components sum to *this.
  std::map<long, MultiPoly> homogeneous_components() const;

  // Weighted degree under the registry weights; nullopt when inhomogeneous.
  // The zero polynomial reports degree 0.
  std::optional<long> weighted_degree() const;

  long total_degree() const;

  // Largest variable index actually used, or -1 for a constant.
  long max_var_index() const;

  std::string str() const;

 private:
  void strip_zeros();
  void check_same_registry(const MultiPoly& o) const;

  RegistryPtr reg_;
  TermMap terms_;
};

inline MultiPoly operator*(const Rational& c, const MultiPoly& p) { return p * c; }

}  // namespace moduli
