#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symdyn/element_set.hpp"
#include "symdyn/pattern.hpp"
#include "symdyn/report.hpp"

namespace symdyn {

// (g.x)(h) = x(hg), defined on {h : hg in window(x)}.
PatternPoint shift(const GroupElement& g, const PatternPoint& x);

// Cylinder U[phi] = {xi : xi|_F = phi}. phi[i] is the value at F[i].
class CylinderSpec {
 public:
  CylinderSpec(const Group& G, ElementSet F, std::vector<std::uint8_t> phi);
  // U[e -> 1]
  static CylinderSpec identity_one(const Group& G);

  const ElementSet& F() const { return F_; }
  const std::vector<std::uint8_t>& phi() const { return phi_; }

  json to_json() const;

 private:
  Group group_;
  ElementSet F_;
  std::vector<std::uint8_t> phi_;
};

// N(x, U[phi]) restricted to the region where every f g lies in the window.
struct ReturnSet {
  ElementSet elements;
  ElementSet completeness;  // {g : F g ⊆ window(x)}

  json to_json(const Group& G) const;
};

ReturnSet return_set(const PatternPoint& x, const CylinderSpec& cyl);

struct GapStatistics {
  // Largest distance from a completeness-region point to the nearest element
  // of rs, along left-multiplication generator paths inside window ∪ region. Equals
  // `sentinel` when rs is empty or some region point cannot reach rs.
  int covering_radius = 0;
  int sentinel = 0;  // window radius
  bool reached_all = false;
  // Z only: largest difference of consecutive elements of rs.
  std::optional<std::int64_t> max_gap;
  std::uint64_t region_size = 0;

  json to_json() const;
};

GapStatistics gap_statistics(const Group& G, const ReturnSet& rs, const ElementSet& window);

}  // namespace symdyn
