#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "moduli/normal_form.hpp"

namespace moduli {

// Vector field on the parameter space A: map (k,l) -> coefficient of
// d/da_{k,l}. Level-1 components are identically zero.
class DerivationOnA {
 public:
  DerivationOnA() = default;
  explicit DerivationOnA(RegistryPtr reg) : reg_(std::move(reg)) {}

  const RegistryPtr& registry() const { return reg_; }
  int p() const { return reg_->p(); }

  MultiPoly comp(int k, int l) const;
  void set_comp(int k, int l, MultiPoly c);
  const std::map<std::pair<int, int>, MultiPoly>& comps() const { return comps_; }

  bool is_zero() const;

  // action as a derivation: sum of comp_{k,l} * df/da_{k,l}
  MultiPoly apply(const MultiPoly& f) const;

  DerivationOnA operator+(const DerivationOnA& o) const;
  DerivationOnA operator-(const DerivationOnA& o) const;
  DerivationOnA scaled(const MultiPoly& f) const;
  DerivationOnA scaled(const Rational& c) const;

  // numeric coefficient vector at a parameter point, ordered by (k,l)
  std::vector<Rational> eval(const std::map<std::size_t, Rational>& point) const;

 private:
  RegistryPtr reg_;
  std::map<std::pair<int, int>, MultiPoly> comps_;
};

DerivationOnA lie_bracket(const DerivationOnA& X, const DerivationOnA& Y);
DerivationOnA level_projection(const DerivationOnA& X, int m);

// Z = alpha d/dx + beta d/dy, exact up to total degree D in (x,y).
struct PlaneVectorField {
  MultiPoly alpha, beta;
  long D = 0;
};

struct GeneratorDiagnostics {
  long D_used = 0;
  // for (0,0): solver X is kappa/|n| times sum (k-1) a_{k,l} d/da_{k,l}
  Rational kappa = 0;
};

struct Generator {
  int i = 0, j = 0;
  DerivationOnA X;
  PlaneVectorField Z;
  GeneratorDiagnostics diag;
};

struct GeneratorSet {
  int p = 0;
  Multiplicities n;
  std::vector<Generator> gens;  // all (i,j) with i+j <= p-4
  const Generator& at(int i, int j) const;
};

// (1/|n|) sum (k-1) a_{k,l} d/da_{k,l}
DerivationOnA x00_closed_form(const RegistryPtr& reg, const Multiplicities& n);

// Batched solve of X.N = Z.N + x^i y^j N (cleared-denominator form) at one
// numeric parameter point, one right-hand side per requested (i,j).
struct PointGenerators {
  long D_used = 0;
  std::map<std::pair<int, int>, std::map<std::pair<int, int>, Rational>> X;
  std::map<std::pair<int, int>, std::pair<MultiPoly, MultiPoly>> Z;
};
PointGenerators solve_generators_at_point(const ParamMatrix& a, const Multiplicities& n,
                                          const std::vector<std::pair<int, int>>& pairs,
                                          long D = 0, bool include_level1 = false);

Generator solve_generator(int i, int j, const ParamMatrix& a, const Multiplicities& n,
                          long D = 0, bool include_level1 = false);

// Symbolic generators over the a-variables of levels >= 2, with the first
// line frozen to the numeric values in a1. level_cap limits the computed
// components (0 means all levels); pairs with i+j+2 > level_cap are dropped.
GeneratorSet generators_symbolic(const ParamMatrix& a1, const Multiplicities& n,
                                 std::uint64_t seed = 1, int level_cap = 0);

struct RankReport {
  long total = 0;
  std::map<int, long> per_level;  // m -> rank of the initial parts at level m
};
RankReport generic_rank(const GeneratorSet& G, const ParamMatrix& sample);

// a_{2,2}^{k+l} X_{k,l}: the integer exponent is solved from the bracket
// relation with X_{0,0} and the vanishing is asserted exactly.
struct CommutingField {
  int i = 0, j = 0;
  long exponent = 0;
  DerivationOnA field;
};
std::vector<CommutingField> commuting_family(const GeneratorSet& G);

}  // namespace moduli
