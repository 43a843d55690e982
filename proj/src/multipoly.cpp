#include "moduli/multipoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace moduli {

long mono_total_degree(const Monomial& m) {
  long d = 0;
  for (int e : m) d += e;
  return d;
}

static void mono_trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

static int mono_exp(const Monomial& m, std::size_t i) {
  return i < m.size() ? m[i] : 0;
}

bool MonoLess::operator()(const Monomial& a, const Monomial& b) const {
  long da = mono_total_degree(a), db = mono_total_degree(b);
  if (da != db) return da < db;
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int ea = mono_exp(a, i), eb = mono_exp(b, i);
    if (ea != eb) return ea > eb;
  }
  return false;
}

MultiPoly MultiPoly::constant(RegistryPtr reg, const Rational& c) {
  MultiPoly p(std::move(reg));
  if (c != 0) p.terms_[{}] = c;
  return p;
}

MultiPoly MultiPoly::var(RegistryPtr reg, std::size_t index, int exponent) {
  if (index >= reg->size()) throw std::out_of_range("variable index outside registry");
  MultiPoly p(std::move(reg));
  if (exponent < 0) throw std::invalid_argument("negative exponent");
  if (exponent == 0) return constant(p.reg_, 1);
  Monomial m(index + 1, 0);
  m[index] = exponent;
  p.terms_[std::move(m)] = 1;
  return p;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational MultiPoly::constant_value() const {
  if (terms_.empty()) return 0;
  if (!is_constant()) throw std::logic_error("constant_value on a non-constant polynomial");
  return terms_.begin()->second;
}

Rational MultiPoly::coeff(const Monomial& m) const {
  Monomial key = m;
  mono_trim(key);
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

void MultiPoly::set_coeff(const Monomial& m, const Rational& c) {
  Monomial key = m;
  mono_trim(key);
  if (c == 0)
    terms_.erase(key);
  else
    terms_[std::move(key)] = c;
}

void MultiPoly::strip_zeros() {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = (it->second == 0) ? terms_.erase(it) : std::next(it);
}

void MultiPoly::check_same_registry(const MultiPoly& o) const {
  if (reg_ && o.reg_ && reg_ != o.reg_)
    throw std::logic_error("mixing polynomials from different registries");
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_same_registry(o);
  if (!reg_) reg_ = o.reg_;
  for (const auto& [m, c] : o.terms_) {
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  check_same_registry(o);
  if (!reg_) reg_ = o.reg_;
  for (const auto& [m, c] : o.terms_) {
    auto [it, fresh] = terms_.emplace(m, -c);
    if (!fresh) {
      it->second -= c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  MultiPoly r(*this);
  r += o;
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
  MultiPoly r(*this);
  r -= o;
  return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  check_same_registry(o);
  MultiPoly r(reg_ ? reg_ : o.reg_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m(std::max(ma.size(), mb.size()), 0);
      for (std::size_t i = 0; i < ma.size(); ++i) m[i] += ma[i];
      for (std::size_t i = 0; i < mb.size(); ++i) m[i] += mb[i];
      mono_trim(m);
      auto [it, fresh] = r.terms_.emplace(std::move(m), ca * cb);
      if (!fresh) it->second += ca * cb;
    }
  r.strip_zeros();
  return r;
}

MultiPoly MultiPoly::operator*(const Rational& c) const {
  if (c == 0) return MultiPoly(reg_);
  MultiPoly r(*this);
  for (auto& [m, v] : r.terms_) v *= c;
  return r;
}

MultiPoly MultiPoly::operator/(const Rational& c) const {
  if (c == 0) throw std::domain_error("division by zero");
  MultiPoly r(*this);
  for (auto& [m, v] : r.terms_) v /= c;
  return r;
}

MultiPoly MultiPoly::pow(long e) const {
  if (e < 0) throw std::invalid_argument("negative polynomial power");
  MultiPoly acc = constant(reg_, 1);
  MultiPoly base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    if (e >>= 1) base = base * base;
  }
  return acc;
}

MultiPoly MultiPoly::derivative(std::size_t var_index) const {
  MultiPoly r(reg_);
  for (const auto& [m, c] : terms_) {
    int e = mono_exp(m, var_index);
    if (e == 0) continue;
    Monomial d = m;
    d[var_index] -= 1;
    mono_trim(d);
    r.terms_[std::move(d)] = c * e;
  }
  return r;
}

MultiPoly MultiPoly::subst(const std::map<std::size_t, Binding>& bindings) const {
  for (const auto& [idx, b] : bindings)
    if (idx >= reg_->size()) throw std::out_of_range("substitution of an unregistered variable");
  MultiPoly result(reg_);
  // per-variable power cache
  std::map<std::pair<std::size_t, int>, MultiPoly> powers;
  auto bound_power = [&](std::size_t idx, int e) -> const MultiPoly& {
    auto key = std::make_pair(idx, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    const Binding& b = bindings.at(idx);
    MultiPoly base = std::holds_alternative<Rational>(b)
                         ? constant(reg_, std::get<Rational>(b))
                         : std::get<MultiPoly>(b);
    return powers.emplace(key, base.pow(e)).first->second;
  };
  for (const auto& [m, c] : terms_) {
    MultiPoly term = constant(reg_, c);
    Monomial rest(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (bindings.count(i))
        term = term * bound_power(i, m[i]);
      else
        rest[i] = m[i];
    }
    mono_trim(rest);
    if (!rest.empty()) {
      MultiPoly passthrough(reg_);
      passthrough.terms_[std::move(rest)] = 1;
      term = term * passthrough;
    }
    result += term;
  }
  return result;
}

Rational MultiPoly::eval(const std::map<std::size_t, Rational>& point) const {
  Rational acc = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      auto it = point.find(i);
      if (it == point.end())
        throw std::invalid_argument("eval: unbound variable " + reg_->info(i).name);
      t *= rat_pow(it->second, m[i]);
    }
    acc += t;
  }
  return acc;
}

static long mono_xy_degree(const Monomial& m) {
  return mono_exp(m, 0) + mono_exp(m, 1);
}

long MultiPoly::xy_degree() const {
  long d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, mono_xy_degree(m));
  return d;
}

long MultiPoly::xy_valuation() const {
  if (terms_.empty()) return 0;
  long d = -1;
  for (const auto& [m, c] : terms_) {
    long v = mono_xy_degree(m);
    if (d < 0 || v < d) d = v;
  }
  return d;
}

MultiPoly MultiPoly::truncate_xy(long max_degree) const {
  MultiPoly r(reg_);
  for (const auto& [m, c] : terms_)
    if (mono_xy_degree(m) <= max_degree) r.terms_.emplace(m, c);
  return r;
}

std::map<long, MultiPoly> MultiPoly::homogeneous_components() const {
  std::map<long, MultiPoly> comps;
  for (const auto& [m, c] : terms_) {
    long d = mono_xy_degree(m);
    auto it = comps.find(d);
    if (it == comps.end()) it = comps.emplace(d, MultiPoly(reg_)).first;
    it->second.terms_.emplace(m, c);
  }
  return comps;
}

std::optional<long> MultiPoly::weighted_degree() const {
  if (terms_.empty()) return 0;
  std::optional<long> deg;
  for (const auto& [m, c] : terms_) {
    long w = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] != 0) w += m[i] * reg_->weight(i);
    if (!deg)
      deg = w;
    else if (*deg != w)
      return std::nullopt;
  }
  return deg;
}

long MultiPoly::total_degree() const {
  long d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, mono_total_degree(m));
  return d;
}

long MultiPoly::max_var_index() const {
  long top = -1;
  for (const auto& [m, c] : terms_)
    if (!m.empty()) top = std::max<long>(top, static_cast<long>(m.size()) - 1);
  return top;
}

std::string MultiPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << rat_str(c);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      os << "*" << reg_->info(i).name;
      if (m[i] != 1) os << "^" << m[i];
    }
  }
  return os.str();
}

}  // namespace moduli
