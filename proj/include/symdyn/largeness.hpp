#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symdyn/element_set.hpp"
#include "symdyn/report.hpp"
#include "symdyn/set_expr.hpp"

namespace symdyn {

inline constexpr std::uint64_t kDefaultThickBudget = 1'000'000;
inline constexpr std::uint64_t kDefaultWindow = 10'000;
// Certificates must be small next to the window they are checked on.
inline constexpr std::uint64_t kWindowRatio = 20;

// Witness for right syndeticity: G = FS.
struct SyndeticCertificate {
  ElementSet F;
};

struct ThickTranslateFinder {
  enum class Strategy { kAuto, kSymbolic, kScan };
  Strategy strategy = Strategy::kAuto;
  std::uint64_t budget = kDefaultThickBudget;  // membership calls or exclusion probes
};

struct ThickSearchStats {
  std::uint64_t candidates = 0;
  std::uint64_t probes = 0;
  bool symbolic = false;
};

// A set of the shape G \ B where B is a finite set plus, optionally, the
// generator-power sparse set. This is the class with a symbolic rule.
struct ExcludedSet {
  ElementSet finite;
  bool sparse = false;

  bool contains(const Group& G, const GroupElement& g) const;
  // Points of B whose word length lies in [lo, hi].
  std::vector<GroupElement> points_with_length(const Group& G, std::int64_t lo, std::int64_t hi) const;
  // Upper bound on |B ∩ Y| for any Y whose diameter |xy^-1| is at most `diameter`.
  std::uint64_t cluster_bound(const Group& G, std::uint64_t diameter) const;
};

std::optional<ExcludedSet> complement_form(const Group& G, const SetExpr& expr);

class ThicklySyndeticCertificate {
 public:
  struct Witness {
    SetExpr Q = SetExpr::full();  // A Q ⊆ T
    SyndeticCertificate cert;  // G = F Q
    std::uint64_t cluster_bound = 0;
  };

  ThicklySyndeticCertificate(Group G, ExcludedSet excluded)
      : group_(std::move(G)), excluded_(std::move(excluded)) {}

  Witness for_set(const ElementSet& A) const;
  const ExcludedSet& excluded() const { return excluded_; }
  json to_json() const;

 private:
  Group group_;
  ExcludedSet excluded_;
};

ThicklySyndeticCertificate derive_thickly_syndetic_cert(const Group& G, const SetExpr& expr);

VerificationReport verify_right_syndetic(const Group& G, const SetExpr& S, const SyndeticCertificate& cert,
                                         const EnumerationWindow& window);

GroupElement find_thick_translate(const Group& G, const SetExpr& S, const ElementSet& A,
                                  const ThickTranslateFinder& finder, ThickSearchStats* stats = nullptr);

VerificationReport check_piecewise_syndetic_window(const Group& G, const SetExpr& S, const ElementSet& F,
                                                   const EnumerationWindow& window, int probes);

// Syndetic certificate read off a coset union (nonempty): F = {r c^-1}.
SyndeticCertificate coset_union_certificate(const Group& G, const SetExpr& S);

// Smallest enumeration prefix F that passes verify_right_syndetic on the window,
// searched up to max_size; nullopt if none does.
std::optional<SyndeticCertificate> search_syndetic_certificate(const Group& G, const SetExpr& S,
                                                               const EnumerationWindow& window,
                                                               std::uint64_t max_size);

}  // namespace symdyn
