#pragma once

#include <map>
#include <vector>

#include "moduli/multipoly.hpp"

namespace moduli {

// All monomials in the given variables with weighted degree exactly d.
// Every listed variable must have positive weight.
std::vector<Monomial> weighted_monomials(const RegistryPtr& reg,
                                         const std::vector<std::size_t>& vars, long d);

struct Sample {
  std::map<std::size_t, Rational> point;
  Rational value;
};

// Reconstructs the unique weighted-homogeneous polynomial of degree d in the
// given variables through the samples. When more than #monomials samples are
// supplied, the last two are held out and used as a consistency check.
// Throws: "degenerate samples" on a rank-deficient fit, "degree bound
// violated" on an inconsistent fit or a held-out mismatch.
MultiPoly interpolate_weighted_poly(const RegistryPtr& reg,
                                    const std::vector<std::size_t>& vars, long d,
                                    const std::vector<Sample>& samples);

}  // namespace moduli
