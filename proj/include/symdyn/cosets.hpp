#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symdyn/group.hpp"

namespace symdyn {

// A finite-index normal subgroup H, given either by a lattice basis (free
// abelian groups) or as the kernel of a homomorphism onto a finite group.
class FiniteIndexData {
 public:
  enum class Kind { kLattice, kHomomorphism };

  static FiniteIndexData lattice(const Group& G, std::vector<std::vector<std::int64_t>> rows);
  static FiniteIndexData homomorphism(const Group& G, const GroupSpec& target, std::vector<int> images);

  Kind kind() const { return kind_; }
  const Group& group() const { return group_; }
  std::uint64_t index() const { return index_; }

  GroupElement representative(const GroupElement& g) const;
  bool same_coset(const GroupElement& a, const GroupElement& b) const;
  // One canonical representative per coset, in canonical enumeration order.
  const std::vector<GroupElement>& representatives() const { return reps_; }
  // Length of the longest representative.
  int max_representative_length() const;

  json to_json() const;
  static FiniteIndexData from_json(const Group& G, const json& j);

 private:
  explicit FiniteIndexData(Group G) : group_(std::move(G)) {}
  int image(const GroupElement& g) const;

  Kind kind_ = Kind::kLattice;
  Group group_;
  std::uint64_t index_ = 0;
  std::vector<std::vector<std::int64_t>> input_rows_;
  std::vector<std::vector<std::int64_t>> basis_;  // upper triangular, positive diagonal
  std::optional<Group> target_;
  std::vector<int> images_;
  std::vector<int> image_to_rep_;  // target index -> position in reps_, or -1
  std::vector<GroupElement> reps_;
};

GroupElement coset_representative(const FiniteIndexData& H, const GroupElement& g);

}  // namespace symdyn
