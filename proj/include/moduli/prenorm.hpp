#pragma once

#include <string>
#include <vector>

#include "moduli/normal_form.hpp"
#include "moduli/series.hpp"

namespace moduli {

// One smooth branch through the origin as a truncated graph.
struct BranchSeries {
  enum class Orient { YofX, XofY };
  Orient orientation = Orient::YofX;
  TruncatedSeries series;  // y = s(x), or x = s(y) with zero slope
};

struct CurveInput {
  std::vector<BranchSeries> branches;
  int p() const { return static_cast<int>(branches.size()); }
};

// Entry of the complete cone; branch tangent to {x=0} carries inf at height 1.
struct ConeEntry {
  bool inf = false;
  Rational v = 0;
};

struct ConeMatrix {
  long H = 0;
  // rows[h-1][k-1] = entry of branch k at height h
  std::vector<std::vector<ConeEntry>> rows;
  const ConeEntry& at(long h, int k) const { return rows.at(h - 1).at(k - 1); }
};

// phi(x,y) = (x + A, y + B), A and B of valuation >= 2.
struct Biholomorphism {
  MultiPoly A, B;
};

// Invertible linear map (x,y) -> (a x + b y, c x + d y).
struct LinearMap {
  Rational a = 1, b = 0, c = 0, d = 1;
  bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }
};

// Branch list of N_a^{(1)} for a fully numeric matrix, truncated at order T.
CurveInput branches_of_params(const ParamMatrix& a, long T);

// Branch k with graph y = sum s_h x^h yields entries t_{h,k} = -s_h, so a
// normal-form curve reproduces the matrix a directly.
ConeMatrix cone_matrix(const CurveInput& c, long H);

std::pair<LinearMap, CurveInput> normalize_tangent_cone(const CurveInput& c);

CurveInput apply_linear(const LinearMap& L, const CurveInput& c);

CurveInput apply_biholomorphism(const Biholomorphism& phi, const CurveInput& c);

// One cone-killing step: returns the tangent-to-identity map of order N+1
// that zeroes the height-(N+1) cone entries of branches 1..min(p, N+3), and
// the transformed curve. Entries at heights <= N are untouched.
std::pair<Biholomorphism, CurveInput> kill_height(const CurveInput& c, int N,
                                                  const RegistryPtr& reg);

struct PrenormReport {
  LinearMap linear;
  long flattened_height = 0;  // all branches have zero entries up to this height
  // nonzero cone entries above the triangular profile, as (height, branch, value)
  std::vector<std::tuple<long, int, Rational>> residuals;
};

// Full prenormalization: tangent-cone normalization followed by cone killing
// for N = 1..Hmax-1; reads the parameter matrix off the resulting cone.
std::pair<ParamMatrix, PrenormReport> prenormalize(const CurveInput& c, long Hmax = 0);

}  // namespace moduli
