#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moduli/multipoly.hpp"

namespace moduli {

// A point of (or symbolic coordinates on) the triangular parameter space A.
// Entries left unset stay symbolic and materialize as their a_{k,l} variable.
class ParamMatrix {
 public:
  explicit ParamMatrix(RegistryPtr reg);

  int p() const { return reg_->p(); }
  const RegistryPtr& registry() const { return reg_; }

  void set(int k, int l, const Rational& v);
  void unset(int k, int l);  // back to symbolic
  bool is_numeric(int k, int l) const;
  const Rational& value(int k, int l) const;  // requires is_numeric

  // The entry as a polynomial: a constant or the a_{k,l} variable.
  MultiPoly entry(int k, int l) const;

  // Numeric bindings for every set entry, for substitution into symbolic data.
  std::map<std::size_t, Rational> bindings() const;

  std::vector<std::string> validate() const;
  void require_valid() const;  // throws domain_error listing the violations

 private:
  RegistryPtr reg_;
  std::map<std::pair<int, int>, Rational> values_;
};

enum class MultMode { Integral, Darboux };

struct Multiplicities {
  std::vector<Rational> values;
  MultMode mode = MultMode::Integral;

  Rational total() const;
  void require_valid(int p) const;  // length, positivity / nonzero-sum checks
};

struct DimensionReport {
  int p = 0;
  long dimA = 0;
  long delta = 0;
  long tau = 0;
  long tauPrime = 0;
  long genericRank = 0;
  long freeIntegrals = 0;
  long fixedFirstLineDim = 0;            // dimA - (p-3)
  std::map<int, long> levelDims;         // m=1 -> p-3, m>=2 -> p-2-m
};

DimensionReport dims(int p);

struct NormalForm {
  std::vector<MultiPoly> branches;       // P_1..P_p
  std::vector<Rational> exponents;       // n_1..n_p
  std::optional<MultiPoly> expanded;     // integral mode only
};

// N_a^{(n)} = x^{n1} y^{n2} (y+x)^{n3} prod_l (y + sum_k a_{k,l} x^k)^{n_{l+3}}.
NormalForm build_normal_form(const ParamMatrix& a, const Multiplicities& n,
                             bool reduced = false);

// lambda . (a_{k,l}) = lambda^{k-1} a_{k,l}; needs every entry numeric.
ParamMatrix lambda_action(const Rational& lambda, const ParamMatrix& a);

}  // namespace moduli
