#pragma once

#include <memory>
#include <vector>

#include "symdyn/cosets.hpp"
#include "symdyn/element_set.hpp"
#include "symdyn/group.hpp"
#include "symdyn/pattern.hpp"

namespace symdyn {

enum class Side { kLeft, kRight };

enum class SparseRule {
  kGeneratorPow2,  // {s^(+-2^j) : s an infinite-order generator}
  kIndexPow2,      // {g_(2^j) : j >= 0} in the canonical enumeration
};

inline constexpr int kMaxExprDepth = 32;
inline constexpr std::uint64_t kSparseRankCap = 10'000'000;

// Immutable expression tree denoting a subset of G.
class SetExpr {
 public:
  enum class Kind {
    kFull,
    kEmpty,
    kFinite,
    kSparse,
    kCosetUnion,
    kTranslate,
    kUnion,
    kIntersection,
    kComplement,
    kBlueprintOutput,
  };

  static SetExpr full();
  static SetExpr empty();
  static SetExpr finite(ElementSet elements);
  static SetExpr sparse(SparseRule rule);
  static SetExpr coset_union(FiniteIndexData H, const std::vector<GroupElement>& cosets);
  static SetExpr translate(GroupElement by, SetExpr of, Side side);
  static SetExpr union_of(std::vector<SetExpr> children);
  static SetExpr intersection_of(std::vector<SetExpr> children);
  static SetExpr complement(SetExpr of);
  // 1-set of a pattern point; false outside the pattern's window.
  static SetExpr blueprint_output(std::shared_ptr<const PatternPoint> pattern);

  Kind kind() const;
  int depth() const;

  const ElementSet& elements() const;
  SparseRule rule() const;
  const FiniteIndexData& subgroup() const;
  const ElementHashSet& coset_reps() const;
  const GroupElement& by() const;
  Side side() const;
  const std::vector<SetExpr>& children() const;
  const SetExpr& child() const;
  const PatternPoint& pattern() const;

 private:
  struct Node;
  explicit SetExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

bool membership(const Group& G, const SetExpr& expr, const GroupElement& g);

json set_expr_to_json(const Group& G, const SetExpr& expr);
SetExpr set_expr_from_json(const Group& G, const json& j);

}  // namespace symdyn
