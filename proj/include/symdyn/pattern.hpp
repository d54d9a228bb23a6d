#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/element_set.hpp"
#include "symdyn/group.hpp"

namespace symdyn {

enum class Exactness { kExactOnWindow, kSampled };

std::string_view to_string(Exactness e);

// A point of 2^G known on a finite window (its domain).
class PatternPoint {
 public:
  PatternPoint(Group group, ElementSet domain, std::vector<std::uint8_t> bits,
               Exactness exactness = Exactness::kExactOnWindow, std::string justification = {});

  const Group& group() const { return group_; }
  const ElementSet& domain() const { return domain_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  Exactness exactness() const { return exactness_; }
  const std::string& justification() const { return justification_; }

  std::optional<bool> at(const GroupElement& g) const;
  ElementSet ones() const;

  json to_json() const;
  static PatternPoint from_json(const json& j);

  friend bool operator==(const PatternPoint& a, const PatternPoint& b) {
    return a.group_ == b.group_ && a.domain_ == b.domain_ && a.bits_ == b.bits_;
  }

 private:
  Group group_;
  ElementSet domain_;
  std::vector<std::uint8_t> bits_;
  Exactness exactness_;
  std::string justification_;
};

}  // namespace symdyn
