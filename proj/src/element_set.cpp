#include "symdyn/element_set.hpp"

#include <algorithm>

#include "symdyn/error.hpp"

namespace symdyn {

// Index positions into the element vector; hashing looks through to the
// element so lookups by GroupElement work without storing elements twice.
struct ElementSet::Index {
  struct Hash {
    using is_transparent = void;
    const std::vector<GroupElement>* items;
    std::size_t operator()(std::uint32_t i) const { return absl::Hash<GroupElement>{}((*items)[i]); }
    std::size_t operator()(const GroupElement& e) const { return absl::Hash<GroupElement>{}(e); }
  };
  struct Eq {
    using is_transparent = void;
    const std::vector<GroupElement>* items;
    bool operator()(std::uint32_t a, std::uint32_t b) const { return a == b; }
    bool operator()(std::uint32_t a, const GroupElement& e) const { return (*items)[a] == e; }
    bool operator()(const GroupElement& e, std::uint32_t a) const { return (*items)[a] == e; }
  };

  explicit Index(const std::vector<GroupElement>* items) : set(0, Hash{items}, Eq{items}) {}

  absl::flat_hash_set<std::uint32_t, Hash, Eq> set;
};

ElementSet::ElementSet() : items_(std::make_unique<std::vector<GroupElement>>()) { rebuild_index(); }

ElementSet::ElementSet(const Group& group, std::vector<GroupElement> elements)
    : items_(std::make_unique<std::vector<GroupElement>>(std::move(elements))) {
  group.sort_unique(*items_);
  rebuild_index();
}

ElementSet::ElementSet(const Group& group, const ElementHashSet& elements)
    : ElementSet(group, std::vector<GroupElement>(elements.begin(), elements.end())) {}

ElementSet::ElementSet(const ElementSet& other)
    : items_(std::make_unique<std::vector<GroupElement>>(*other.items_)) {
  rebuild_index();
}

ElementSet& ElementSet::operator=(const ElementSet& other) {
  if (this != &other) {
    items_ = std::make_unique<std::vector<GroupElement>>(*other.items_);
    rebuild_index();
  }
  return *this;
}

// Moving keeps the heap vector in place, so the index functors stay valid.
ElementSet::ElementSet(ElementSet&& other) noexcept
    : items_(std::move(other.items_)), index_(std::move(other.index_)) {
  other.items_ = std::make_unique<std::vector<GroupElement>>();
  other.rebuild_index();
}

ElementSet& ElementSet::operator=(ElementSet&& other) noexcept {
  if (this != &other) {
    items_ = std::move(other.items_);
    index_ = std::move(other.index_);
    other.items_ = std::make_unique<std::vector<GroupElement>>();
    other.rebuild_index();
  }
  return *this;
}

ElementSet::~ElementSet() = default;

void ElementSet::rebuild_index() {
  index_ = std::make_unique<Index>(items_.get());
  index_->set.reserve(items_->size());
  for (std::uint32_t i = 0; i < items_->size(); ++i) index_->set.insert(i);
}

bool ElementSet::contains(const GroupElement& g) const { return index_->set.contains(g); }

std::optional<std::size_t> ElementSet::position(const GroupElement& g) const {
  auto it = index_->set.find(g);
  if (it == index_->set.end()) return std::nullopt;
  return *it;
}

ElementSet product_set(const Group& G, const ElementSet& A, const ElementSet& B) {
  ElementHashSet out;
  out.reserve(A.size() * B.size());
  for (const auto& a : A)
    for (const auto& b : B) out.insert(G.multiply(a, b));
  return ElementSet(G, out);
}

ElementSet inverse_set(const Group& G, const ElementSet& A) {
  std::vector<GroupElement> v;
  v.reserve(A.size());
  for (const auto& a : A) v.push_back(G.inverse(a));
  return ElementSet(G, std::move(v));
}

ElementSet translate_right(const Group& G, const ElementSet& A, const GroupElement& g) {
  std::vector<GroupElement> v;
  v.reserve(A.size());
  for (const auto& a : A) v.push_back(G.multiply(a, g));
  return ElementSet(G, std::move(v));
}

ElementSet translate_left(const Group& G, const GroupElement& g, const ElementSet& A) {
  std::vector<GroupElement> v;
  v.reserve(A.size());
  for (const auto& a : A) v.push_back(G.multiply(g, a));
  return ElementSet(G, std::move(v));
}

ElementSet set_union(const Group& G, const ElementSet& A, const ElementSet& B) {
  std::vector<GroupElement> v;
  v.reserve(A.size() + B.size());
  std::merge(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(v), G.ordering());
  return ElementSet(G, std::move(v));
}

ElementSet set_intersection(const Group& G, const ElementSet& A, const ElementSet& B) {
  std::vector<GroupElement> v;
  const ElementSet& small = A.size() <= B.size() ? A : B;
  const ElementSet& big = A.size() <= B.size() ? B : A;
  for (const auto& a : small)
    if (big.contains(a)) v.push_back(a);
  return ElementSet(G, std::move(v));
}

ElementSet set_difference(const Group& G, const ElementSet& A, const ElementSet& B) {
  std::vector<GroupElement> v;
  for (const auto& a : A)
    if (!B.contains(a)) v.push_back(a);
  return ElementSet(G, std::move(v));
}

bool is_subset(const ElementSet& A, const ElementSet& B) {
  if (A.size() > B.size()) return false;
  return std::all_of(A.begin(), A.end(), [&](const GroupElement& a) { return B.contains(a); });
}

bool intersects(const ElementSet& A, const ElementSet& B) {
  const ElementSet& small = A.size() <= B.size() ? A : B;
  const ElementSet& big = A.size() <= B.size() ? B : A;
  return std::any_of(small.begin(), small.end(), [&](const GroupElement& a) { return big.contains(a); });
}

ElementSet singleton(const Group& G, const GroupElement& g) { return ElementSet(G, std::vector{g}); }

int max_length(const Group& G, const ElementSet& A) {
  int r = 0;
  for (const auto& a : A) r = std::max(r, G.length(a));
  return r;
}

json set_to_json(const Group& G, const ElementSet& A) {
  json j = json::array();
  for (const auto& a : A) j.push_back(G.to_json(a));
  return j;
}

ElementSet set_from_json(const Group& G, const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "element set must be a JSON array");
  std::vector<GroupElement> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(G.from_json(e));
  return ElementSet(G, std::move(v));
}

EnumerationWindow enumerate_prefix(const Group& G, std::uint64_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "prefix length must be at least 1");
  std::vector<GroupElement> v;
  EnumerationCursor cur(G);
  while (v.size() < n) {
    auto g = cur.next();
    if (!g) break;
    v.push_back(std::move(*g));
  }
  EnumerationWindow w;
  w.kind = EnumerationWindow::Kind::kPrefix;
  w.parameter = n;
  w.elements = ElementSet(G, std::move(v));
  return w;
}

ElementSet ball(const Group& G, int r) {
  std::vector<GroupElement> v;
  for (int i = 0; i <= r && i <= G.max_radius(); ++i) {
    auto s = G.sphere(i);
    v.insert(v.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
  }
  return ElementSet(G, std::move(v));
}

EnumerationWindow ball_window(const Group& G, int r) {
  EnumerationWindow w;
  w.kind = EnumerationWindow::Kind::kBall;
  w.parameter = static_cast<std::uint64_t>(r);
  w.elements = ball(G, r);
  return w;
}

}  // namespace symdyn
