#include "symdyn/set_expr.hpp"

#include <algorithm>

#include "symdyn/error.hpp"

namespace symdyn {

struct SetExpr::Node {
  Kind kind = Kind::kFull;
  int depth = 1;
  ElementSet elements;
  SparseRule rule = SparseRule::kGeneratorPow2;
  std::optional<FiniteIndexData> subgroup;
  ElementHashSet coset_reps;
  std::vector<GroupElement> coset_list;  // as given, canonical order
  GroupElement by;
  Side side = Side::kRight;
  std::vector<SetExpr> children;
  std::shared_ptr<const PatternPoint> pattern;
};

namespace {

int depth_of(const std::vector<SetExpr>& ch) {
  int d = 0;
  for (const auto& c : ch) d = std::max(d, c.depth());
  if (d + 1 > kMaxExprDepth)
    throw Error(ErrorCode::kInvalidArgument, "set expression deeper than " + std::to_string(kMaxExprDepth));
  return d + 1;
}

bool is_pow2(std::uint64_t v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

SetExpr SetExpr::full() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kFull;
  return SetExpr(std::move(n));
}

SetExpr SetExpr::empty() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kEmpty;
  return SetExpr(std::move(n));
}

SetExpr SetExpr::finite(ElementSet elements) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kFinite;
  n->elements = std::move(elements);
  return SetExpr(std::move(n));
}

SetExpr SetExpr::sparse(SparseRule rule) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kSparse;
  n->rule = rule;
  return SetExpr(std::move(n));
}

SetExpr SetExpr::coset_union(FiniteIndexData H, const std::vector<GroupElement>& cosets) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kCosetUnion;
  std::vector<GroupElement> reps;
  for (const auto& c : cosets) {
    auto r = H.representative(c);
    if (n->coset_reps.insert(r).second) reps.push_back(r);
  }
  std::sort(reps.begin(), reps.end(), H.group().ordering());
  n->coset_list = std::move(reps);
  n->subgroup.emplace(std::move(H));
  return SetExpr(std::move(n));
}

SetExpr SetExpr::translate(GroupElement by, SetExpr of, Side side) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kTranslate;
  n->by = std::move(by);
  n->side = side;
  n->children.push_back(std::move(of));
  n->depth = depth_of(n->children);
  return SetExpr(std::move(n));
}

SetExpr SetExpr::union_of(std::vector<SetExpr> children) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kUnion;
  n->children = std::move(children);
  n->depth = depth_of(n->children);
  return SetExpr(std::move(n));
}

SetExpr SetExpr::intersection_of(std::vector<SetExpr> children) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kIntersection;
  n->children = std::move(children);
  n->depth = depth_of(n->children);
  return SetExpr(std::move(n));
}

SetExpr SetExpr::complement(SetExpr of) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kComplement;
  n->children.push_back(std::move(of));
  n->depth = depth_of(n->children);
  return SetExpr(std::move(n));
}

SetExpr SetExpr::blueprint_output(std::shared_ptr<const PatternPoint> pattern) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kBlueprintOutput;
  n->pattern = std::move(pattern);
  return SetExpr(std::move(n));
}

SetExpr::Kind SetExpr::kind() const { return node_->kind; }
int SetExpr::depth() const { return node_->depth; }
const ElementSet& SetExpr::elements() const { return node_->elements; }
SparseRule SetExpr::rule() const { return node_->rule; }
const FiniteIndexData& SetExpr::subgroup() const { return *node_->subgroup; }
const ElementHashSet& SetExpr::coset_reps() const { return node_->coset_reps; }
const GroupElement& SetExpr::by() const { return node_->by; }
Side SetExpr::side() const { return node_->side; }
const std::vector<SetExpr>& SetExpr::children() const { return node_->children; }
const SetExpr& SetExpr::child() const { return node_->children.front(); }
const PatternPoint& SetExpr::pattern() const { return *node_->pattern; }

bool membership(const Group& G, const SetExpr& expr, const GroupElement& g) {
  switch (expr.kind()) {
    case SetExpr::Kind::kFull: return true;
    case SetExpr::Kind::kEmpty: return false;
    case SetExpr::Kind::kFinite: return expr.elements().contains(g);
    case SetExpr::Kind::kSparse:
      if (expr.rule() == SparseRule::kGeneratorPow2) return G.is_generator_power_of_two(g);
      return is_pow2(G.rank(g, kSparseRankCap));
    case SetExpr::Kind::kCosetUnion: return expr.coset_reps().contains(expr.subgroup().representative(g));
    case SetExpr::Kind::kTranslate: {
      const GroupElement inv = G.inverse(expr.by());
      const GroupElement x = expr.side() == Side::kRight ? G.multiply(g, inv) : G.multiply(inv, g);
      return membership(G, expr.child(), x);
    }
    case SetExpr::Kind::kUnion:
      for (const auto& c : expr.children())
        if (membership(G, c, g)) return true;
      return false;
    case SetExpr::Kind::kIntersection:
      for (const auto& c : expr.children())
        if (!membership(G, c, g)) return false;
      return true;
    case SetExpr::Kind::kComplement: return !membership(G, expr.child(), g);
    case SetExpr::Kind::kBlueprintOutput: return expr.pattern().at(g).value_or(false);
  }
  return false;
}

json set_expr_to_json(const Group& G, const SetExpr& expr) {
  switch (expr.kind()) {
    case SetExpr::Kind::kFull: return json{{"kind", "full"}};
    case SetExpr::Kind::kEmpty: return json{{"kind", "empty"}};
    case SetExpr::Kind::kFinite: return json{{"kind", "finite"}, {"elements", set_to_json(G, expr.elements())}};
    case SetExpr::Kind::kSparse:
      return json{{"kind", "sparse"},
                  {"rule", expr.rule() == SparseRule::kGeneratorPow2 ? "generator_pow2" : "index_pow2"}};
    case SetExpr::Kind::kCosetUnion: {
      std::vector<GroupElement> reps(expr.coset_reps().begin(), expr.coset_reps().end());
      std::sort(reps.begin(), reps.end(), G.ordering());
      json cs = json::array();
      for (const auto& r : reps) cs.push_back(G.to_json(r));
      return json{{"kind", "coset_union"}, {"subgroup", expr.subgroup().to_json()}, {"cosets", cs}};
    }
    case SetExpr::Kind::kTranslate:
      return json{{"kind", "translate"},
                  {"by", G.to_json(expr.by())},
                  {"side", expr.side() == Side::kRight ? "right" : "left"},
                  {"of", set_expr_to_json(G, expr.child())}};
    case SetExpr::Kind::kUnion:
    case SetExpr::Kind::kIntersection: {
      json ch = json::array();
      for (const auto& c : expr.children()) ch.push_back(set_expr_to_json(G, c));
      return json{{"kind", expr.kind() == SetExpr::Kind::kUnion ? "union" : "intersection"}, {"of", ch}};
    }
    case SetExpr::Kind::kComplement: return json{{"kind", "complement"}, {"of", set_expr_to_json(G, expr.child())}};
    case SetExpr::Kind::kBlueprintOutput: return json{{"kind", "blueprint_output"}, {"pattern", expr.pattern().to_json()}};
  }
  return {};
}

namespace {

SetExpr parse_expr(const Group& G, const json& j, int depth) {
  if (depth > kMaxExprDepth)
    throw Error(ErrorCode::kParse, "set expression deeper than " + std::to_string(kMaxExprDepth));
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw Error(ErrorCode::kParse, "set expression node must be an object with a string \"kind\"");
  const std::string kind = j["kind"];
  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw Error(ErrorCode::kParse, "\"" + kind + "\" node needs \"" + key + "\"");
    return j[key];
  };
  auto children = [&]() {
    const json& of = need("of");
    if (!of.is_array()) throw Error(ErrorCode::kParse, "\"" + kind + "\" needs an array \"of\"");
    std::vector<SetExpr> ch;
    for (const auto& c : of) ch.push_back(parse_expr(G, c, depth + 1));
    return ch;
  };
  if (kind == "full") return SetExpr::full();
  if (kind == "empty") return SetExpr::empty();
  if (kind == "finite") return SetExpr::finite(set_from_json(G, need("elements")));
  if (kind == "sparse") {
    const std::string rule = need("rule").get<std::string>();
    if (rule == "generator_pow2") return SetExpr::sparse(SparseRule::kGeneratorPow2);
    if (rule == "index_pow2") return SetExpr::sparse(SparseRule::kIndexPow2);
    throw Error(ErrorCode::kParse, "unknown sparse rule \"" + rule + "\"");
  }
  if (kind == "coset_union") {
    auto H = FiniteIndexData::from_json(G, need("subgroup"));
    std::vector<GroupElement> cs;
    for (const auto& c : need("cosets")) cs.push_back(G.from_json(c));
    return SetExpr::coset_union(std::move(H), cs);
  }
  if (kind == "translate") {
    const std::string side = j.value("side", "right");
    if (side != "left" && side != "right") throw Error(ErrorCode::kParse, "side must be left or right");
    return SetExpr::translate(G.from_json(need("by")), parse_expr(G, need("of"), depth + 1),
                              side == "right" ? Side::kRight : Side::kLeft);
  }
  if (kind == "union") return SetExpr::union_of(children());
  if (kind == "intersection") return SetExpr::intersection_of(children());
  if (kind == "complement") return SetExpr::complement(parse_expr(G, need("of"), depth + 1));
  if (kind == "blueprint_output") {
    auto p = std::make_shared<const PatternPoint>(PatternPoint::from_json(need("pattern")));
    if (!(p->group() == G)) throw Error(ErrorCode::kMixedGroup, "pattern belongs to another group");
    return SetExpr::blueprint_output(std::move(p));
  }
  throw Error(ErrorCode::kParse, "unknown set expression kind \"" + kind + "\"");
}

}  // namespace

SetExpr set_expr_from_json(const Group& G, const json& j) {
  try {
    return parse_expr(G, j, 1);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("set expression: ") + e.what());
  }
}

}  // namespace symdyn
