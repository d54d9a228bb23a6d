#include "symdyn/pattern.hpp"

#include "symdyn/error.hpp"

namespace symdyn {

std::string_view to_string(Exactness e) {
  return e == Exactness::kExactOnWindow ? "EXACT_ON_WINDOW" : "SAMPLED";
}

PatternPoint::PatternPoint(Group group, ElementSet domain, std::vector<std::uint8_t> bits,
                           Exactness exactness, std::string justification)
    : group_(std::move(group)),
      domain_(std::move(domain)),
      bits_(std::move(bits)),
      exactness_(exactness),
      justification_(std::move(justification)) {
  if (bits_.size() != domain_.size())
    throw Error(ErrorCode::kInvalidArgument, "pattern bits must be total on the window");
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::optional<bool> PatternPoint::at(const GroupElement& g) const {
  auto p = domain_.position(g);
  if (!p) return std::nullopt;
  return bits_[*p] != 0;
}

ElementSet PatternPoint::ones() const {
  std::vector<GroupElement> v;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) v.push_back(domain_[i]);
  return ElementSet(group_, std::move(v));
}

json PatternPoint::to_json() const {
  std::string b(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) b[i] = '1';
  return json{{"group", group_.spec()},
              {"exactness", std::string(to_string(exactness_))},
              {"justification", justification_},
              {"window", set_to_json(group_, domain_)},
              {"bits", b}};
}

PatternPoint PatternPoint::from_json(const json& j) {
  try {
    Group G(j.at("group").get<GroupSpec>());
    const auto& w = j.at("window");
    if (!w.is_array()) throw Error(ErrorCode::kParse, "pattern window must be an array");
    std::vector<GroupElement> elems;
    for (const auto& e : w) elems.push_back(G.from_json(e));
    const std::string b = j.at("bits").get<std::string>();
    if (b.size() != elems.size()) throw Error(ErrorCode::kParse, "pattern bits/window length mismatch");
    // bits follow the listed order; re-key them before canonical sorting
    ElementHashSet seen;
    std::vector<std::pair<GroupElement, std::uint8_t>> pairs;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (b[i] != '0' && b[i] != '1') throw Error(ErrorCode::kParse, "pattern bits must be 0/1");
      if (!seen.insert(elems[i]).second) throw Error(ErrorCode::kParse, "duplicate window element");
      pairs.emplace_back(elems[i], b[i] == '1');
    }
    ElementSet domain(G, std::move(elems));
    std::vector<std::uint8_t> bits(domain.size());
    for (const auto& [g, v] : pairs) bits[*domain.position(g)] = v;
    const std::string ex = j.value("exactness", "EXACT_ON_WINDOW");
    Exactness e = ex == "SAMPLED" ? Exactness::kSampled : Exactness::kExactOnWindow;
    return PatternPoint(G, std::move(domain), std::move(bits), e, j.value("justification", ""));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("pattern point: ") + e.what());
  }
}

}  // namespace symdyn
