#include "moduli/interpolate.hpp"

#include <stdexcept>

#include "moduli/linalg.hpp"

namespace moduli {

static void enumerate(const RegistryPtr& reg, const std::vector<std::size_t>& vars,
                      std::size_t i, long remaining, Monomial& current,
                      std::vector<Monomial>& out) {
  if (i == vars.size()) {
    if (remaining == 0) {
      Monomial m = current;
      while (!m.empty() && m.back() == 0) m.pop_back();
      out.push_back(std::move(m));
    }
    return;
  }
  long w = reg->weight(vars[i]);
  for (long e = 0; e * w <= remaining; ++e) {
    current[vars[i]] = static_cast<int>(e);
    enumerate(reg, vars, i + 1, remaining - e * w, current, out);
  }
  current[vars[i]] = 0;
}

std::vector<Monomial> weighted_monomials(const RegistryPtr& reg,
                                         const std::vector<std::size_t>& vars, long d) {
  if (d < 0) return {};
  std::size_t top = 0;
  for (std::size_t v : vars) {
    if (reg->weight(v) <= 0)
      throw std::invalid_argument("weighted enumeration over a weight-0 variable");
    top = std::max(top, v + 1);
  }
  Monomial current(top, 0);
  std::vector<Monomial> out;
  enumerate(reg, vars, 0, d, current, out);
  return out;
}

static Rational mono_eval(const Monomial& m, const std::map<std::size_t, Rational>& point) {
  Rational v = 1;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    auto it = point.find(i);
    if (it == point.end()) throw std::invalid_argument("sample point misses a variable");
    v *= rat_pow(it->second, m[i]);
  }
  return v;
}

MultiPoly interpolate_weighted_poly(const RegistryPtr& reg,
                                    const std::vector<std::size_t>& vars, long d,
                                    const std::vector<Sample>& samples) {
  std::vector<Monomial> monos = weighted_monomials(reg, vars, d);
  if (samples.size() < monos.size())
    throw std::invalid_argument("fewer samples than weighted monomials");
  std::size_t held_out = samples.size() >= monos.size() + 2 ? 2 : 0;
  std::size_t fit = samples.size() - held_out;

  Matrix<Rational> mat(fit, std::vector<Rational>(monos.size(), Rational(0)));
  std::vector<Rational> rhs(fit);
  for (std::size_t r = 0; r < fit; ++r) {
    for (std::size_t c = 0; c < monos.size(); ++c) mat[r][c] = mono_eval(monos[c], samples[r].point);
    rhs[r] = samples[r].value;
  }
  LinearSolution<Rational> sol = solve_linear_exact(mat, rhs, Rational(0), Rational(1));
  if (!sol.consistent) throw std::runtime_error("degree bound violated");
  if (!sol.kernel.empty()) throw std::runtime_error("degenerate samples");

  MultiPoly result(reg);
  for (std::size_t c = 0; c < monos.size(); ++c) result.set_coeff(monos[c], sol.particular[c]);
  for (std::size_t r = fit; r < samples.size(); ++r)
    if (result.eval(samples[r].point) != samples[r].value)
      throw std::runtime_error("degree bound violated");
  return result;
}

}  // namespace moduli
