#include "moduli/ratfun.hpp"

#include <algorithm>
#include <stdexcept>

namespace moduli {

RationalFunction::RationalFunction(MultiPoly num, MultiPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  normalize();
}

RationalFunction::RationalFunction(const MultiPoly& num)
    : num_(num), den_(MultiPoly::constant(num.registry(), 1)) {}

void RationalFunction::normalize() {
  const RegistryPtr& reg = num_.registry() ? num_.registry() : den_.registry();
  if (num_.is_zero()) {
    den_ = MultiPoly::constant(reg, 1);
    return;
  }
  if (den_.is_constant()) {
    num_ = num_ / den_.constant_value();
    den_ = MultiPoly::constant(reg, 1);
    return;
  }
  // strip the common monomial factor
  std::vector<int> gcd;
  bool first = true;
  auto fold = [&](const MultiPoly& p) {
    for (const auto& [m, c] : p.terms()) {
      if (first) {
        gcd = m;
        first = false;
      } else {
        if (m.size() < gcd.size()) gcd.resize(m.size());
        for (std::size_t i = 0; i < gcd.size(); ++i) gcd[i] = std::min(gcd[i], m[i]);
      }
      while (!gcd.empty() && gcd.back() == 0) gcd.pop_back();
      if (gcd.empty()) return;
    }
  };
  fold(num_);
  fold(den_);
  if (!gcd.empty()) {
    auto divide = [&](const MultiPoly& p) {
      MultiPoly q(reg);
      for (const auto& [m, c] : p.terms()) {
        Monomial d = m;
        for (std::size_t i = 0; i < gcd.size(); ++i) d[i] -= gcd[i];
        q.set_coeff(d, c);
      }
      return q;
    };
    num_ = divide(num_);
    den_ = divide(den_);
  }
  // make the leading denominator coefficient 1
  Rational lead = den_.terms().rbegin()->second;
  if (lead != 1) {
    num_ = num_ / lead;
    den_ = den_ / lead;
  }
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r(*this);
  r.num_ = -r.num_;
  return r;
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  if (den_ == o.den_) return RationalFunction(num_ + o.num_, den_);
  return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
  if (den_ == o.den_) return RationalFunction(num_ - o.num_, den_);
  return RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  if (o.is_zero()) throw std::domain_error("division by the zero rational function");
  return RationalFunction(num_ * o.den_, den_ * o.num_);
}

bool RationalFunction::operator==(const RationalFunction& o) const {
  return num_ * o.den_ == o.num_ * den_;
}

RationalFunction RationalFunction::derivative(std::size_t var_index) const {
  MultiPoly dn = num_.derivative(var_index);
  MultiPoly dd = den_.derivative(var_index);
  if (dd.is_zero()) return RationalFunction(dn, den_);
  return RationalFunction(dn * den_ - num_ * dd, den_ * den_);
}

RationalFunction RationalFunction::subst(const std::map<std::size_t, Binding>& bindings) const {
  const RegistryPtr& reg = num_.registry();
  // one shared denominator (the product of binding denominators at their
  // maximal exponents) keeps repeated additions from stacking factors
  auto apply = [&](const MultiPoly& p) -> RationalFunction {
    std::map<std::size_t, std::pair<MultiPoly, MultiPoly>> nd;
    std::map<std::size_t, int> maxdeg;
    for (const auto& [m, c] : p.terms())
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0 || !bindings.count(i)) continue;
        if (!nd.count(i)) {
          const Binding& b = bindings.at(i);
          if (std::holds_alternative<Rational>(b))
            nd.emplace(i, std::make_pair(MultiPoly::constant(reg, std::get<Rational>(b)),
                                         MultiPoly::constant(reg, 1)));
          else
            nd.emplace(i, std::make_pair(std::get<RationalFunction>(b).num(),
                                         std::get<RationalFunction>(b).den()));
        }
        maxdeg[i] = std::max(maxdeg[i], m[i]);
      }
    auto trivial = [](const MultiPoly& d) { return d.is_constant() && d.constant_value() == 1; };
    MultiPoly den_total = MultiPoly::constant(reg, 1);
    for (const auto& [i, d] : maxdeg)
      if (!trivial(nd.at(i).second)) den_total *= nd.at(i).second.pow(d);
    MultiPoly acc(reg);
    for (const auto& [m, c] : p.terms()) {
      MultiPoly term = MultiPoly::constant(reg, c);
      Monomial rest(m.size(), 0);
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!nd.count(i)) rest[i] = m[i];
        else term *= nd.at(i).first.pow(m[i]);
      }
      for (const auto& [i, d] : maxdeg) {
        int e = i < m.size() ? m[i] : 0;
        const MultiPoly& D = nd.at(i).second;
        if (d > e && !trivial(D)) term *= D.pow(d - e);
      }
      MultiPoly tail(reg);
      tail.set_coeff(rest, 1);
      acc += term * tail;
    }
    return RationalFunction(acc, den_total);
  };
  return apply(num_) / apply(den_);
}

Rational RationalFunction::eval(const std::map<std::size_t, Rational>& point) const {
  Rational d = den_.eval(point);
  if (d == 0) throw std::domain_error("rational function evaluated on the denominator zero set");
  return num_.eval(point) / d;
}

std::optional<long> RationalFunction::weighted_degree() const {
  auto wn = num_.weighted_degree();
  auto wd = den_.weighted_degree();
  if (!wn || !wd) return std::nullopt;
  return *wn - *wd;
}

std::string RationalFunction::str() const {
  if (den_.is_constant() && den_.constant_value() == 1) return num_.str();
  return "(" + num_.str() + ") / (" + den_.str() + ")";
}

}  // namespace moduli
