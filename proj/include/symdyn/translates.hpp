#pragma once

#include <cstdint>
#include <vector>

#include "symdyn/element_set.hpp"
#include "symdyn/largeness.hpp"
#include "symdyn/report.hpp"
#include "symdyn/set_expr.hpp"

namespace symdyn {

// Undirected graph on vertices 0..n-1 without loops or multi-edges.
class SimpleGraph {
 public:
  explicit SimpleGraph(std::size_t n) : adj_(n) {}

  void add_edge(std::size_t u, std::size_t v);
  std::size_t size() const { return adj_.size(); }
  const std::vector<std::size_t>& neighbours(std::size_t v) const { return adj_[v]; }
  bool adjacent(std::size_t u, std::size_t v) const;
  std::size_t max_degree() const;

  static SimpleGraph complete(std::size_t n);
  static SimpleGraph path(std::size_t n);

 private:
  std::vector<std::vector<std::size_t>> adj_;
};

// Greedy in vertex order; size >= ceil(|V|/(d+1)).
std::vector<std::size_t> greedy_independent_set(const SimpleGraph& g);

// b ~ b' iff Ab and Ab' meet.
class TranslateGraph {
 public:
  TranslateGraph(const Group& G, ElementSet A, std::vector<GroupElement> vertices);

  const std::vector<GroupElement>& vertices() const { return vertices_; }
  const SimpleGraph& graph() const { return graph_; }
  std::vector<GroupElement> greedy_independent_set() const;

 private:
  std::vector<GroupElement> vertices_;
  SimpleGraph graph_;
};

struct DisjointTranslates {
  std::vector<GroupElement> elements;
  bool precondition_met = true;  // |B| >= n(|A|^2+1)
};

// First n of the greedy independent set of the translate graph on B (canonical order).
DisjointTranslates disjoint_translates(const Group& G, const ElementSet& A, const ElementSet& B, std::uint64_t n);

struct SeparatedSubset {
  std::vector<GroupElement> B;
  SyndeticCertificate certificate;  // E F^-1 F {e, b^-1}
  VerificationReport report;
  std::uint64_t inner_radius = 0;
};

// Greedy maximal B within A ∩ window with Fb, Fb' disjoint for distinct
// b, b' in B ∪ {e}. `cert` is a syndetic certificate for A (G = EA).
SeparatedSubset separated_syndetic_subset(const Group& G, const SetExpr& A, const SyndeticCertificate& cert,
                                          const ElementSet& F, const EnumerationWindow& window);

// Largest r with ball(r) inside the window.
int full_radius(const Group& G, const ElementSet& window);

}  // namespace symdyn
