#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <absl/container/flat_hash_set.h>

#include "symdyn/group.hpp"

namespace symdyn {

using ElementHashSet = absl::flat_hash_set<GroupElement>;

// Finite set of group elements kept in canonical enumeration order, with an
// O(1) membership/position index.
class ElementSet {
 public:
  ElementSet();
  ElementSet(const Group& group, std::vector<GroupElement> elements);
  ElementSet(const Group& group, const ElementHashSet& elements);

  ElementSet(const ElementSet& other);
  ElementSet& operator=(const ElementSet& other);
  ElementSet(ElementSet&&) noexcept;
  ElementSet& operator=(ElementSet&&) noexcept;
  ~ElementSet();

  std::size_t size() const { return items_->size(); }
  bool empty() const { return items_->empty(); }
  const GroupElement& operator[](std::size_t i) const { return (*items_)[i]; }
  auto begin() const { return items_->begin(); }
  auto end() const { return items_->end(); }
  const std::vector<GroupElement>& elements() const { return *items_; }

  bool contains(const GroupElement& g) const;
  std::optional<std::size_t> position(const GroupElement& g) const;

  friend bool operator==(const ElementSet& a, const ElementSet& b) {
    return a.elements() == b.elements();
  }

 private:
  struct Index;
  void rebuild_index();

  std::unique_ptr<std::vector<GroupElement>> items_;
  std::unique_ptr<Index> index_;
};

// {ab : a in A, b in B}
ElementSet product_set(const Group& G, const ElementSet& A, const ElementSet& B);
ElementSet inverse_set(const Group& G, const ElementSet& A);
ElementSet translate_right(const Group& G, const ElementSet& A, const GroupElement& g);  // Ag
ElementSet translate_left(const Group& G, const GroupElement& g, const ElementSet& A);   // gA
ElementSet set_union(const Group& G, const ElementSet& A, const ElementSet& B);
ElementSet set_intersection(const Group& G, const ElementSet& A, const ElementSet& B);
ElementSet set_difference(const Group& G, const ElementSet& A, const ElementSet& B);
bool is_subset(const ElementSet& A, const ElementSet& B);
bool intersects(const ElementSet& A, const ElementSet& B);
ElementSet singleton(const Group& G, const GroupElement& g);
int max_length(const Group& G, const ElementSet& A);

json set_to_json(const Group& G, const ElementSet& A);
ElementSet set_from_json(const Group& G, const json& j);

struct EnumerationWindow {
  enum class Kind { kPrefix, kBall };
  Kind kind = Kind::kPrefix;
  std::uint64_t parameter = 0;  // prefix length or ball radius
  ElementSet elements;
  // Enumeration order; for ball windows this coincides with a prefix.
  std::size_t size() const { return elements.size(); }
};

EnumerationWindow enumerate_prefix(const Group& G, std::uint64_t n);
EnumerationWindow ball_window(const Group& G, int r);
ElementSet ball(const Group& G, int r);

}  // namespace symdyn
