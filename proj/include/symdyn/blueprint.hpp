#pragma once

#include <optional>
#include <vector>

#include "symdyn/growth.hpp"

namespace symdyn {

// Finite-depth T-blueprint: F_0..F_N, delta_k^n (k < n), D_k^n (k <= n).
class BlueprintBundle {
 public:
  explicit BlueprintBundle(GrowthSequence growth) : growth_(std::move(growth)) {}

  const Group& group() const { return growth_.group(); }
  const SetExpr& T() const { return growth_.T(); }
  const GrowthSequence& growth() const { return growth_; }
  int depth() const { return static_cast<int>(F_.size()) - 1; }

  const ElementSet& F(int n) const { return F_.at(static_cast<std::size_t>(n)); }
  const ElementSet& delta(int k, int n) const { return delta_.at(static_cast<std::size_t>(n)).at(static_cast<std::size_t>(k)); }
  const ElementSet& D(int k, int n) const { return D_.at(static_cast<std::size_t>(n)).at(static_cast<std::size_t>(k)); }

  // Mutable access for construction and for negative tests.
  std::vector<ElementSet>& F_mut() { return F_; }
  std::vector<std::vector<ElementSet>>& delta_mut() { return delta_; }  // [n][k]
  std::vector<std::vector<ElementSet>>& D_mut() { return D_; }          // [n][k]

  // Recompute D from delta: D_k^k = {e}, D_k^n = U_{k<=m<n} D_k^m delta_m^n.
  void rebuild_D();

  json to_json() const;

  // Report from the verification run inside build_blueprint.
  const VerificationReport& construction_report() const { return report_; }
  void set_construction_report(VerificationReport r) { report_ = std::move(r); }

 private:
  GrowthSequence growth_;
  VerificationReport report_{"preblueprint"};
  std::vector<ElementSet> F_;
  std::vector<std::vector<ElementSet>> delta_;
  std::vector<std::vector<ElementSet>> D_;
};

// {g in T : (F_{n-1}F_{n-1}^-1)...(F_{k+1}F_{k+1}^-1) g ⊆ H_n}, using F_0..F_{n-1}.
ElementSet compute_Tkn(const Group& G, const SetExpr& T, const std::vector<ElementSet>& F, const ElementSet& Hn,
                       int k, int n);

BlueprintBundle build_blueprint(const GrowthSequence& growth);

// Conditions (i)-(vi) of the preblueprint construction plus the bundle axioms
// over the D-sets. Chains for (iv) are enumerated when n-k <= kMaxChainSpan.
inline constexpr int kMaxChainSpan = 6;
VerificationReport verify_preblueprint(const BlueprintBundle& bundle);

// Window check of G = A_n F_n^-1 F_n Delta_n using the thickly syndetic
// witness for F_n.
VerificationReport verify_blueprint_syndetic(const BlueprintBundle& bundle, int n, const EnumerationWindow& window,
                                             const std::optional<ThicklySyndeticCertificate>& cert);

struct DeltaWindow {
  ElementSet elements;  // D_k^N
  ElementSet exact_on;  // F_N, where Delta_k ∩ F_N = D_k^N
  std::string guarantee;
};

DeltaWindow delta_window(const BlueprintBundle& bundle, int k);

}  // namespace symdyn
