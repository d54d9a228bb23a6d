#pragma once

#include <string>
#include <vector>

#include "symdyn/element_set.hpp"
#include "symdyn/group.hpp"

namespace testutil {

using namespace symdyn;

inline Group Zd(int d) { return Group(GroupSpec::free_abelian(d)); }
inline Group Fk(int k) { return Group(GroupSpec::free(k)); }

inline GroupElement el(const Group& G, const json& j) { return G.from_json(j); }
inline GroupElement z(const Group& G, int x) { return G.from_json(json::array({x})); }
inline GroupElement z2(const Group& G, int x, int y) { return G.from_json(json::array({x, y})); }

inline ElementSet elems(const Group& G, const json& arr) { return set_from_json(G, arr); }

inline ElementSet zrange(const Group& G, int lo, int hi) {
  std::vector<GroupElement> v;
  for (int x = lo; x <= hi; ++x) v.push_back(z(G, x));
  return ElementSet(G, std::move(v));
}

inline std::vector<std::string> fmt(const Group& G, const ElementSet& A) {
  std::vector<std::string> out;
  for (const auto& a : A) out.push_back(G.format(a));
  return out;
}

inline std::vector<std::string> fmt(const Group& G, const std::vector<GroupElement>& A) {
  std::vector<std::string> out;
  for (const auto& a : A) out.push_back(G.format(a));
  return out;
}

}  // namespace testutil
