#pragma once

#include <cstdint>
#include <random>

#include "moduli/rational.hpp"

namespace moduli {

// Deterministic sample-point source. Small numerators and denominators keep
// the exact arithmetic cheap.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  Rational rational(long max_abs_num = 100, long max_den = 100) {
    std::uniform_int_distribution<long> num(-max_abs_num, max_abs_num);
    std::uniform_int_distribution<long> den(1, max_den);
    return rat(num(eng_), den(eng_));
  }

  Rational nonzero_rational(long max_abs_num = 100, long max_den = 100) {
    Rational r;
    do {
      r = rational(max_abs_num, max_den);
    } while (r == 0);
    return r;
  }

  long integer(long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    return d(eng_);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace moduli
