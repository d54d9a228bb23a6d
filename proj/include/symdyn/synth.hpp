#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symdyn/blueprint.hpp"
#include "symdyn/cosets.hpp"
#include "symdyn/largeness.hpp"
#include "symdyn/pattern.hpp"
#include "symdyn/report.hpp"
#include "symdyn/shift.hpp"
#include "symdyn/translates.hpp"

namespace symdyn {

// kWindowRatio (largeness.hpp) also bounds |ball(pattern radius)| and any
// certified |F| against the window size.

// A pattern only counts as certified when the condition was evaluated on at
// least this fraction of the window; otherwise a window edge could vouch for it.
inline constexpr double kMinCertCoverage = 0.5;
// F grows past the smallest violation-free prefix until this coverage.
inline constexpr double kTargetCoverage = 0.95;
inline constexpr std::uint64_t kDefaultMaxF = 4096;

// Positions of P[k] * W[i] in W for P = ball(radius), W the point's window.
class PointIndex {
 public:
  PointIndex(const PatternPoint& x, int radius, int jobs = 1);

  const PatternPoint& point() const { return x_; }
  int radius() const { return radius_; }
  const std::vector<GroupElement>& P() const { return P_; }
  std::size_t size() const { return x_.domain().size(); }
  // -1 when P[k] W[i] is outside the window
  std::int32_t pos(std::size_t i, std::size_t k) const { return table_[i * P_.size() + k]; }
  std::size_t index_of(const GroupElement& p) const;  // position in P, throws if absent
  const std::vector<std::size_t>& generator_slots() const { return gens_; }
  std::uint8_t bit(std::int32_t i) const { return x_.bits()[static_cast<std::size_t>(i)]; }

 private:
  const PatternPoint& x_;
  int radius_;
  std::vector<GroupElement> P_;
  std::vector<std::size_t> gens_;
  std::vector<std::int32_t> table_;
};

// {e} when e in T (S = Delta_0), else F_0 ∩ T.
ElementSet theorem_b_generator(const BlueprintBundle& bundle);

// 1_S on the window ∩_{a in A} a F_N, S = A D_0.
PatternPoint synthesize_minimal_in_T(const BlueprintBundle& bundle, const ElementSet& A);

// All A ⊆ ball(radius) with 1 <= |A| <= max_size, by size then position.
std::vector<ElementSet> pattern_windows(const Group& G, int radius, int max_size);

struct CertifyOptions {
  int max_pattern_size = 4;
  std::uint64_t max_F = kDefaultMaxF;
  int jobs = 1;
};

struct PatternCertificate {
  ElementSet A;
  bool certified = false;
  GroupElement h;
  std::uint64_t F_prefix = 0;  // F = first F_prefix elements of the enumeration
  std::uint64_t F_min = 0;     // smallest prefix with no violation
  int gap = 0;                 // max word length over F
  int gap_min = 0;             // same over the F_min prefix
  std::uint64_t evaluated = 0;  // g with a witness f
  double coverage = 0;
  std::uint64_t h_tried = 0;
  std::string reason;
};

struct MinimalityCertificate {
  int pattern_radius = 0;
  std::uint64_t window_size = 0;
  std::vector<PatternCertificate> patterns;

  bool all_certified() const;
  double min_coverage() const;
  const PatternCertificate* find(const ElementSet& A) const;
  json to_json(const Group& G) const;
};

// Searches h in the first search_budget enumeration elements and F as the
// shortest enumeration prefix with
//   for all g  exists f in F  for all a in A:  x(a h f g) = x(a h).
// A witness f only counts when f g and every a h f g lie in the window; g is a
// violation only when every f in F is fully inside the window and none
// matches. `evaluated` counts the g with a witness.
MinimalityCertificate certify_minimal(const PatternPoint& x, int pattern_radius, std::uint64_t search_budget,
                                      const CertifyOptions& options = {});

// Direct re-evaluation of every certified entry. Slow; meant for small windows.
VerificationReport verify_minimality_certificate(const PatternPoint& x, const MinimalityCertificate& cert);

// I = (∩ f1^-1 S) ∩ (∩ f2^-1 S^c) over {g in W : (F1 ∪ F2) g ⊆ W}; PASS when
// every region point is within a finite covering radius r of I (generator
// paths through any window point) with
// |ball(r)| * kWindowRatio <= |region|.
VerificationReport check_symmetrically_syndetic(const PointIndex& index, const ElementSet& F1, const ElementSet& F2);
VerificationReport check_symmetrically_syndetic(const PatternPoint& S, const ElementSet& F1, const ElementSet& F2);
VerificationReport check_symmetrically_syndetic(const Group& G, const SetExpr& S, const ElementSet& F1,
                                                const ElementSet& F2, const ElementSet& window);

// N(x, U[e -> 1])
ElementSet extract_m_set(const PatternPoint& x);

// x(g) = phi(f) when g ∈ fH, else 0.
PatternPoint synthesize_periodic(const Group& G, const ElementSet& F, const std::vector<std::uint8_t>& phi,
                                 const FiniteIndexData& H, const ElementSet& window);

struct ResonatingPoint {
  PatternPoint x;
  ElementSet B;
  SeparatedSubset separated;
  VerificationReport report;
};

// x(f b) = phi(f) for f in Fn, b in B ∪ {e}; 0 elsewhere.
ResonatingPoint synthesize_resonating(const Group& G, const SetExpr& A, const SyndeticCertificate& cert,
                                      const ElementSet& Fn, const std::vector<std::uint8_t>& phi,
                                      const EnumerationWindow& window);

}  // namespace symdyn
