#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <absl/container/inlined_vector.h>
#include <absl/hash/hash.h>
#include <json.hpp>

namespace symdyn {

using json = nlohmann::json;

struct GroupSpec {
  enum class Kind { kFreeAbelian, kFree, kFinite, kProduct };

  Kind kind = Kind::kFreeAbelian;
  int rank = 1;                          // free abelian / free
  std::vector<std::vector<int>> table;   // finite: table[i][j] = index of g_i g_j
  std::vector<GroupSpec> factors;        // product

  static GroupSpec free_abelian(int d);
  static GroupSpec free(int k);
  static GroupSpec finite(std::vector<std::vector<int>> table);
  static GroupSpec cyclic(int n);
  static GroupSpec product(std::vector<GroupSpec> factors);

  bool is_infinite() const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

void to_json(json& j, const GroupSpec& spec);
void from_json(const json& j, GroupSpec& spec);

// Canonical form of a group element plus the tag of the group it came from.
// The storage layout is group specific and only interpreted by Group.
class GroupElement {
 public:
  using Storage = absl::InlinedVector<std::int32_t, 6>;

  GroupElement() = default;
  GroupElement(std::uint32_t tag, Storage data) : tag_(tag), data_(std::move(data)) {}

  std::uint32_t tag() const noexcept { return tag_; }
  std::span<const std::int32_t> data() const noexcept { return {data_.data(), data_.size()}; }
  const Storage& storage() const noexcept { return data_; }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.tag_ == b.tag_ && a.data_ == b.data_;
  }

  template <typename H>
  friend H AbslHashValue(H h, const GroupElement& e) {
    return H::combine_contiguous(H::combine(std::move(h), e.tag_), e.data_.data(),
                                 e.data_.size());
  }

 private:
  std::uint32_t tag_ = 0;
  Storage data_;
};

namespace detail {
class GroupImpl;
}

class Group {
 public:
  explicit Group(const GroupSpec& spec);

  const GroupSpec& spec() const;
  std::uint32_t tag() const;
  bool is_finite() const;
  std::uint64_t order() const;  // 0 when infinite

  GroupElement identity() const;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  bool is_identity(const GroupElement& a) const;

  int length(const GroupElement& a) const;
  // Canonical enumeration order: word length, then lexicographic on normal forms.
  int compare(const GroupElement& a, const GroupElement& b) const;
  bool less(const GroupElement& a, const GroupElement& b) const { return compare(a, b) < 0; }

  struct Less {
    const Group* group;
    bool operator()(const GroupElement& a, const GroupElement& b) const {
      return group->compare(a, b) < 0;
    }
  };
  Less ordering() const { return Less{this}; }
  // Sort into canonical order and drop duplicates.
  void sort_unique(std::vector<GroupElement>& v) const;

  // Symmetric generating set (all length-one elements), canonical order.
  const std::vector<GroupElement>& generators() const;
  std::vector<GroupElement> sphere(int r) const;
  std::uint64_t sphere_size(int r) const;  // saturates at UINT64_MAX
  std::uint64_t ball_size(int r) const;
  int max_radius() const;  // largest nonempty sphere, INT32_MAX when infinite

  // Generators of infinite order and their powers; drives the sparse set rule.
  int infinite_generator_count() const;
  GroupElement generator_power(int i, std::int64_t exponent) const;
  // Membership in {s^(+-2^j) : s an infinite-order generator, j >= 0}.
  bool is_generator_power_of_two(const GroupElement& a) const;

  // Index in the canonical enumeration. Throws kBudgetExceeded when it cannot
  // be found without enumerating more than `cap` elements.
  std::uint64_t rank(const GroupElement& a, std::uint64_t cap) const;

  json to_json(const GroupElement& a) const;
  GroupElement from_json(const json& j) const;
  std::string format(const GroupElement& a) const;

  void check(const GroupElement& a) const;  // throws kMixedGroup

  friend bool operator==(const Group& a, const Group& b) { return a.tag() == b.tag(); }

 private:
  struct State;
  std::shared_ptr<const State> state_;
};

// Walks the canonical enumeration g_0 = e, g_1, g_2, ... one sphere at a time.
class EnumerationCursor {
 public:
  explicit EnumerationCursor(Group group);

  std::optional<GroupElement> next();
  std::uint64_t index() const { return index_; }  // index of the next element
  int radius() const { return radius_; }

 private:
  Group group_;
  std::vector<GroupElement> sphere_;
  std::size_t pos_ = 0;
  int radius_ = -1;
  std::uint64_t index_ = 0;
};

}  // namespace symdyn
