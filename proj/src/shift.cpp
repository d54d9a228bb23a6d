#include "symdyn/shift.hpp"

#include <algorithm>
#include <deque>

#include "symdyn/error.hpp"

namespace symdyn {

PatternPoint shift(const GroupElement& g, const PatternPoint& x) {
  const Group& G = x.group();
  const GroupElement gi = G.inverse(g);
  std::vector<std::pair<GroupElement, std::uint8_t>> cells;
  cells.reserve(x.domain().size());
  for (std::size_t i = 0; i < x.domain().size(); ++i) cells.emplace_back(G.multiply(x.domain()[i], gi), x.bits()[i]);
  std::vector<GroupElement> dom;
  dom.reserve(cells.size());
  for (const auto& c : cells) dom.push_back(c.first);
  ElementSet domain(G, std::move(dom));
  std::vector<std::uint8_t> bits(domain.size());
  for (const auto& [h, b] : cells) bits[*domain.position(h)] = b;
  return PatternPoint(G, std::move(domain), std::move(bits), x.exactness(), x.justification());
}

CylinderSpec::CylinderSpec(const Group& G, ElementSet F, std::vector<std::uint8_t> phi)
    : group_(G), F_(std::move(F)), phi_(std::move(phi)) {
  if (F_.empty()) throw Error(ErrorCode::kInvalidArgument, "cylinder needs a nonempty F");
  if (phi_.size() != F_.size()) throw Error(ErrorCode::kInvalidArgument, "phi must be total on F");
  for (auto& b : phi_) b = b ? 1 : 0;
}

CylinderSpec CylinderSpec::identity_one(const Group& G) { return CylinderSpec(G, singleton(G, G.identity()), {1}); }

json CylinderSpec::to_json() const {
  std::string b;
  for (auto v : phi_) b.push_back(v ? '1' : '0');
  return json{{"F", set_to_json(group_, F_)}, {"phi", b}};
}

json ReturnSet::to_json(const Group& G) const {
  return json{{"elements", set_to_json(G, elements)},
              {"completeness", {{"kind", "EXACT_ON"}, {"size", completeness.size()},
                                {"elements", set_to_json(G, completeness)}}}};
}

ReturnSet return_set(const PatternPoint& x, const CylinderSpec& cyl) {
  const Group& G = x.group();
  const ElementSet& W = x.domain();
  const auto& F = cyl.F();
  // every g with F g ⊆ W has F[0] g in W
  const GroupElement f0i = G.inverse(F[0]);
  std::vector<GroupElement> region, hits;
  for (const auto& w : W) {
    const GroupElement g = G.multiply(f0i, w);
    bool total = true, match = true;
    for (std::size_t i = 0; i < F.size(); ++i) {
      auto p = W.position(G.multiply(F[i], g));
      if (!p) {
        total = false;
        break;
      }
      if (x.bits()[*p] != cyl.phi()[i]) match = false;
    }
    if (!total) continue;
    region.push_back(g);
    if (match) hits.push_back(g);
  }
  return ReturnSet{ElementSet(G, std::move(hits)), ElementSet(G, std::move(region))};
}

json GapStatistics::to_json() const {
  json j{{"covering_radius", covering_radius},
         {"sentinel", sentinel},
         {"reached_all", reached_all},
         {"region_size", region_size}};
  if (max_gap) j["max_gap"] = *max_gap;
  return j;
}

GapStatistics gap_statistics(const Group& G, const ReturnSet& rs, const ElementSet& window) {
  const auto& spec = G.spec();
  if (spec.kind != GroupSpec::Kind::kFreeAbelian && spec.kind != GroupSpec::Kind::kFree)
    throw Error(ErrorCode::kUnsupportedGroup, "gap statistics need a free abelian or free group");
  GapStatistics st;
  st.sentinel = max_length(G, window);
  const ElementSet& R = rs.completeness;
  st.region_size = R.size();

  // multi-source BFS, edges y -> s y, through R and the window; distances
  // are read off on R
  std::vector<GroupElement> nodes(R.begin(), R.end());
  nodes.insert(nodes.end(), window.begin(), window.end());
  const ElementSet U(G, std::move(nodes));
  std::vector<int> dist(U.size(), -1);
  std::deque<std::size_t> q;
  for (const auto& s : rs.elements)
    if (R.contains(s)) {
      auto p = *U.position(s);
      dist[p] = 0;
      q.push_back(p);
    }
  while (!q.empty()) {
    const auto i = q.front();
    q.pop_front();
    for (const auto& t : G.generators()) {
      auto p = U.position(G.multiply(t, U[i]));
      if (p && dist[*p] < 0) {
        dist[*p] = dist[i] + 1;
        q.push_back(*p);
      }
    }
  }
  int radius = 0;
  st.reached_all = !R.empty();
  for (const auto& g : R) {
    const int d = dist[*U.position(g)];
    if (d < 0) st.reached_all = false;
    radius = std::max(radius, d);
  }
  st.covering_radius = st.reached_all ? radius : st.sentinel;

  if (spec.kind == GroupSpec::Kind::kFreeAbelian && spec.rank == 1) {
    std::vector<std::int64_t> v;
    for (const auto& s : rs.elements)
      if (R.contains(s)) v.push_back(s.data()[0]);
    std::sort(v.begin(), v.end());
    if (v.size() >= 2) {
      std::int64_t m = 0;
      for (std::size_t i = 1; i < v.size(); ++i) m = std::max(m, v[i] - v[i - 1]);
      st.max_gap = m;
    } else {
      st.max_gap = st.sentinel;
    }
  }
  return st;
}

}  // namespace symdyn
