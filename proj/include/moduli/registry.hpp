#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace moduli {

enum class VarKind { X, Y, Param, Derived };

struct VarInfo {
  std::string name;
  long weight = 0;   // w(x)=w(y)=1, w(a_{k,l})=k-1, derived coords carry their level weight
  VarKind kind = VarKind::Derived;
  int level = 0;     // k for a_{k,l} and for derived level coordinates; 0 for x,y
  int index2 = 0;    // l for a_{k,l}; m/n for derived coordinates
};

// Ordered variable set for a fixed branch count p: x, y, a_{k,l} (1<=k<=l<=p-3),
// plus derived linear coordinates appended by the integrals pipeline.
// Append-only: indices are stable for the lifetime of the registry.
class VarRegistry {
 public:
  explicit VarRegistry(int p) : p_(p) {
    if (p < 4) throw std::domain_error("branch count p must be >= 4");
    add({"x", 1, VarKind::X, 0, 0});
    add({"y", 1, VarKind::Y, 0, 0});
    for (int k = 1; k <= p - 3; ++k)
      for (int l = k; l <= p - 3; ++l)
        add({a_name(k, l), k - 1, VarKind::Param, k, l});
  }

  static std::string a_name(int k, int l) {
    return "a_" + std::to_string(k) + "_" + std::to_string(l);
  }

  int p() const { return p_; }
  std::size_t size() const { return vars_.size(); }
  const VarInfo& info(std::size_t i) const { return vars_.at(i); }

  std::size_t x() const { return 0; }
  std::size_t y() const { return 1; }

  std::size_t a(int k, int l) const {
    if (k < 1 || l < k || l > p_ - 3)
      throw std::out_of_range("a_{" + std::to_string(k) + "," + std::to_string(l) +
                              "} outside the triangular range");
    return index_of(a_name(k, l));
  }

  bool has(const std::string& name) const { return by_name_.count(name) != 0; }

  std::size_t index_of(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw std::out_of_range("unknown variable: " + name);
    return it->second;
  }

  // Appends a derived linear coordinate (b_{k,m} / c_{k,n}); weight is that of its level.
  std::size_t add_derived(const std::string& name, int level, int index2) {
    return add({name, level - 1, VarKind::Derived, level, index2});
  }

  long weight(std::size_t i) const { return vars_.at(i).weight; }

 private:
  std::size_t add(VarInfo v) {
    if (by_name_.count(v.name)) throw std::invalid_argument("duplicate variable: " + v.name);
    by_name_[v.name] = vars_.size();
    vars_.push_back(std::move(v));
    return vars_.size() - 1;
  }

  int p_;
  std::vector<VarInfo> vars_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

using RegistryPtr = std::shared_ptr<VarRegistry>;

inline RegistryPtr make_registry(int p) { return std::make_shared<VarRegistry>(p); }

}  // namespace moduli
