#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symdyn/element_set.hpp"
#include "symdyn/largeness.hpp"
#include "symdyn/report.hpp"
#include "symdyn/set_expr.hpp"

namespace symdyn {

inline constexpr std::uint64_t kMaxLevelSize = 1'000'000;
inline constexpr int kMaxDepth = 4;

enum class GrowthRule {
  kAdaptive,    // smallest k whose greedy disjoint translates reach 3|H_{n-1}|
  kLemmaBound,  // k = 3|H|(|H|^2+1)
};

struct GrowthOptions {
  GrowthRule rule = GrowthRule::kAdaptive;
  std::uint64_t max_level_size = kMaxLevelSize;
  int max_depth = kMaxDepth;
  std::uint64_t symbolic_budget = 200'000'000;  // exclusion probes
  std::uint64_t scan_budget = kDefaultThickBudget;
};

struct GrowthLevel {
  ElementSet H;
  std::uint64_t k = 0;
  GroupElement h;
  std::vector<GroupElement> disjoint;  // g_i (i < k) with H_{n-1} g_i pairwise disjoint
  ThickSearchStats search;
  std::uint64_t envelope_size = 0;  // |(H_{n-1}H_{n-1}^-1)...(H_0H_0^-1)H_{n-1}|
};

class GrowthSequence {
 public:
  GrowthSequence(Group G, SetExpr T, GrowthRule rule) : group_(std::move(G)), T_(std::move(T)), rule_(rule) {}

  const Group& group() const { return group_; }
  const SetExpr& T() const { return T_; }
  GrowthRule rule() const { return rule_; }
  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  const ElementSet& H(int n) const { return levels_.at(static_cast<std::size_t>(n)).H; }
  const GrowthLevel& level(int n) const { return levels_.at(static_cast<std::size_t>(n)); }
  std::vector<GrowthLevel>& levels() { return levels_; }
  const std::vector<GrowthLevel>& levels() const { return levels_; }

  json to_json() const;

 private:
  Group group_;
  SetExpr T_;
  GrowthRule rule_;
  std::vector<GrowthLevel> levels_;
};

// (H_{n-1}H_{n-1}^-1)...(H_0H_0^-1)H_{n-1}
ElementSet growth_envelope(const Group& G, const std::vector<ElementSet>& H, int n, std::uint64_t cap);

GrowthSequence build_growth_sequence(const Group& G, const SetExpr& T, const ElementSet& A, int depth,
                                     const GrowthOptions& options = {});

VerificationReport verify_growth_sequence(const GrowthSequence& gs);

}  // namespace symdyn
