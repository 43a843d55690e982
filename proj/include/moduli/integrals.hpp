#pragma once

#include <optional>

#include "moduli/distribution.hpp"
#include "moduli/linalg.hpp"
#include "moduli/prenorm.hpp"
#include "moduli/ratfun.hpp"

namespace moduli {

// Linear change a_{k,.} -> (b_{k,1..r}, c_{k,1..d-r}) at one level, with
// coefficients rational in the level-2 variables. Each pivot generator's
// initial part becomes exactly a_{2,2} d/db_{k,m}.
struct LevelSplit {
  int k = 0;
  std::vector<std::pair<int, int>> pivots;  // generator (i,j) behind each b-direction
  Matrix<RationalFunction> rows_b;          // b_{k,m} = sum_l rows_b[m][l] a_{k,k+l}
  Matrix<RationalFunction> rows_c;
  Matrix<RationalFunction> inv;             // a_{k,k+l} = sum_j inv[l][j] (b,c)_j
  std::vector<std::size_t> b_vars, c_vars;  // registry indices
};

struct CoordinateSplit {
  std::map<int, LevelSplit> levels;
  // substitution bindings a_{k,l} -> linear form in the (b,c) variables
  std::map<std::size_t, RationalFunction::Binding> to_bc() const;
};

// level_cap restricts to levels 3..level_cap (0 means all levels up to p-3).
CoordinateSplit split_coordinates(const GeneratorSet& G, int level_cap = 0);

// A pivot generator rewritten on (b,c): one b-component a_{2,2} d/db_{k,m}
// and c-components on strictly higher levels only.
struct TriangularField {
  int k = 0, m = 0;
  std::pair<int, int> source;
  std::map<std::pair<int, int>, RationalFunction> b_comps, c_comps;
};

struct TriangularSystem {
  std::vector<TriangularField> fields;
};

TriangularSystem triangularize(const GeneratorSet& G, const CoordinateSplit& split);

// {a_{2,l}/a_{2,2} : l = 3..p-3}; empty for p <= 5.
std::vector<RationalFunction> level2_integrals(const RegistryPtr& reg);

// g_{k,n}: polynomial in the b variables of levels < k solving
// a_{2,2} dg/db_{k',m} = -gamma^{(k',m)}_{(k,n)}, with exact cross-derivative
// checks. f_{k,n} = c_{k,n} + g_{k,n}.
RationalFunction integrate_level(const TriangularSystem& T, const CoordinateSplit& split,
                                 int k, int n);

struct FirstIntegral {
  int k = 0, n = 0;
  RationalFunction f;  // in the a variables
  long weight = 0;
  RationalFunction projectivized;  // filled by projectivize
  bool on_moduli = true;
};

struct FirstIntegralSet {
  int p = 0;
  std::vector<Rational> first_line;
  std::vector<FirstIntegral> integrals;
  long tau = 0, tau_prime = 0;
};

FirstIntegralSet first_integrals(const GeneratorSet& G, const ParamMatrix& a1);
FirstIntegralSet first_integrals(const ParamMatrix& a1, const Multiplicities& n,
                                 std::uint64_t seed = 1);

// Divides each integral by a_{2,2}^weight; the level-2 ratios are marked as
// constant on the lambda-quotient (on_moduli = false).
FirstIntegralSet projectivize(const FirstIntegralSet& F);

struct AnnihilationWitness {
  int i = 0, j = 0;
  MultiPoly residual;
};
std::optional<AnnihilationWitness> verify_annihilation(const RationalFunction& f,
                                                       const GeneratorSet& G);

struct InvariantTuple {
  std::vector<Rational> cross_ratios;
  std::vector<Rational> values;  // projectivized integrals at the recovered matrix
};

InvariantTuple curve_invariants(const CurveInput& c);
// Reuses a precomputed integral set; the recovered first line must match.
InvariantTuple curve_invariants(const CurveInput& c, const FirstIntegralSet& F);

}  // namespace moduli
