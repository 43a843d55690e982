#include "moduli/normal_form.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace moduli {

ParamMatrix::ParamMatrix(RegistryPtr reg) : reg_(std::move(reg)) {
  if (!reg_) throw std::invalid_argument("ParamMatrix needs a registry");
}

static void check_range(int p, int k, int l) {
  if (k < 1 || l < k || l > p - 3)
    throw std::out_of_range("entry (" + std::to_string(k) + "," + std::to_string(l) +
                            ") outside the triangular range");
}

void ParamMatrix::set(int k, int l, const Rational& v) {
  check_range(p(), k, l);
  values_[{k, l}] = v;
}

void ParamMatrix::unset(int k, int l) {
  check_range(p(), k, l);
  values_.erase({k, l});
}

bool ParamMatrix::is_numeric(int k, int l) const {
  check_range(p(), k, l);
  return values_.count({k, l}) != 0;
}

const Rational& ParamMatrix::value(int k, int l) const {
  check_range(p(), k, l);
  auto it = values_.find({k, l});
  if (it == values_.end()) throw std::logic_error("entry is symbolic");
  return it->second;
}

MultiPoly ParamMatrix::entry(int k, int l) const {
  check_range(p(), k, l);
  auto it = values_.find({k, l});
  if (it != values_.end()) return MultiPoly::constant(reg_, it->second);
  return MultiPoly::var(reg_, reg_->a(k, l));
}

std::map<std::size_t, Rational> ParamMatrix::bindings() const {
  std::map<std::size_t, Rational> b;
  for (const auto& [kl, v] : values_) b[reg_->a(kl.first, kl.second)] = v;
  return b;
}

std::vector<std::string> ParamMatrix::validate() const {
  std::vector<std::string> violations;
  std::set<Rational> seen;
  for (int l = 1; l <= p() - 3; ++l) {
    if (!is_numeric(1, l)) {
      violations.push_back("first-line entry a_{1," + std::to_string(l) + "} is not numeric");
      continue;
    }
    const Rational& v = value(1, l);
    if (v == 0) violations.push_back("first-line entry a_{1," + std::to_string(l) + "} equals 0");
    if (v == 1) violations.push_back("first-line entry a_{1," + std::to_string(l) + "} equals 1");
    if (!seen.insert(v).second) violations.push_back("first-line entries not distinct");
  }
  return violations;
}

void ParamMatrix::require_valid() const {
  auto violations = validate();
  if (violations.empty()) return;
  std::ostringstream os;
  os << "invalid parameter matrix:";
  for (const auto& v : violations) os << " " << v << ";";
  throw std::domain_error(os.str());
}

Rational Multiplicities::total() const {
  Rational s = 0;
  for (const Rational& v : values) s += v;
  return s;
}

void Multiplicities::require_valid(int p) const {
  if (static_cast<int>(values.size()) != p)
    throw std::domain_error("multiplicity vector length differs from the branch count");
  if (mode == MultMode::Integral) {
    for (const Rational& v : values)
      if (!rat_is_integer(v) || v <= 0)
        throw std::domain_error("integral mode needs positive integer multiplicities");
  } else {
    if (total() == 0) throw std::domain_error("darboux multiplicities must not sum to zero");
  }
}

DimensionReport dims(int p) {
  if (p < 4) throw std::domain_error("branch count p must be >= 4");
  DimensionReport r;
  r.p = p;
  r.dimA = static_cast<long>(p - 2) * (p - 3) / 2;
  r.delta = r.dimA;
  r.tau = (p % 2 == 0) ? static_cast<long>(p - 2) * (p - 2) / 4
                       : static_cast<long>(p - 1) * (p - 3) / 4;
  r.tauPrime = r.tau - (p - 5);
  r.genericRank = r.dimA - r.tau;
  r.freeIntegrals = r.tau - (p - 3);
  r.fixedFirstLineDim = r.dimA - (p - 3);
  r.levelDims[1] = p - 3;
  for (int m = 2; m <= p - 3; ++m) r.levelDims[m] = p - 2 - m;
  return r;
}

NormalForm build_normal_form(const ParamMatrix& a, const Multiplicities& n, bool reduced) {
  a.require_valid();
  n.require_valid(a.p());
  const RegistryPtr& reg = a.registry();
  int p = a.p();

  NormalForm nf;
  MultiPoly x = MultiPoly::var(reg, reg->x());
  MultiPoly y = MultiPoly::var(reg, reg->y());
  nf.branches.push_back(x);
  nf.branches.push_back(y);
  nf.branches.push_back(y + x);
  for (int l = 1; l <= p - 3; ++l) {
    MultiPoly b = y;
    for (int k = 1; k <= l; ++k) b += a.entry(k, l) * x.pow(k);
    nf.branches.push_back(b);
  }

  nf.exponents = reduced ? std::vector<Rational>(p, Rational(1)) : n.values;

  bool integral = reduced || n.mode == MultMode::Integral;
  if (integral) {
    MultiPoly prod = MultiPoly::constant(reg, 1);
    for (int i = 0; i < p; ++i) prod *= nf.branches[i].pow(nf.exponents[i].get_num().get_si());
    nf.expanded = std::move(prod);
  }
  return nf;
}

ParamMatrix lambda_action(const Rational& lambda, const ParamMatrix& a) {
  if (lambda == 0) throw std::domain_error("lambda must be nonzero");
  ParamMatrix r(a.registry());
  int p = a.p();
  for (int k = 1; k <= p - 3; ++k)
    for (int l = k; l <= p - 3; ++l) {
      if (!a.is_numeric(k, l))
        throw std::invalid_argument("lambda action needs numeric entries");
      r.set(k, l, a.value(k, l) * rat_pow(lambda, k - 1));
    }
  return r;
}

}  // namespace moduli
