#include "symdyn/translates.hpp"

#include <algorithm>

#include <absl/container/flat_hash_map.h>

#include "symdyn/error.hpp"

namespace symdyn {

void SimpleGraph::add_edge(std::size_t u, std::size_t v) {
  if (u == v || adjacent(u, v)) return;
  adj_[u].push_back(v);
  adj_[v].push_back(u);
}

bool SimpleGraph::adjacent(std::size_t u, std::size_t v) const {
  return std::find(adj_[u].begin(), adj_[u].end(), v) != adj_[u].end();
}

std::size_t SimpleGraph::max_degree() const {
  std::size_t d = 0;
  for (const auto& a : adj_) d = std::max(d, a.size());
  return d;
}

SimpleGraph SimpleGraph::complete(std::size_t n) {
  SimpleGraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

SimpleGraph SimpleGraph::path(std::size_t n) {
  SimpleGraph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

std::vector<std::size_t> greedy_independent_set(const SimpleGraph& g) {
  std::vector<char> blocked(g.size(), 0);
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (blocked[v]) continue;
    out.push_back(v);
    for (auto u : g.neighbours(v)) blocked[u] = 1;
  }
  return out;
}

TranslateGraph::TranslateGraph(const Group& G, ElementSet A, std::vector<GroupElement> vertices)
    : vertices_(std::move(vertices)), graph_(vertices_.size()) {
  absl::flat_hash_map<GroupElement, std::size_t> pos;
  for (std::size_t i = 0; i < vertices_.size(); ++i) pos.emplace(vertices_[i], i);
  const ElementSet AinvA = product_set(G, inverse_set(G, A), A);
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (const auto& x : AinvA) {
      auto it = pos.find(G.multiply(x, vertices_[i]));
      if (it != pos.end() && it->second != i) graph_.add_edge(i, it->second);
    }
}

std::vector<GroupElement> TranslateGraph::greedy_independent_set() const {
  std::vector<GroupElement> out;
  for (auto v : symdyn::greedy_independent_set(graph_)) out.push_back(vertices_[v]);
  return out;
}

DisjointTranslates disjoint_translates(const Group& G, const ElementSet& A, const ElementSet& B, std::uint64_t n) {
  DisjointTranslates r;
  const std::uint64_t a = A.size();
  r.precondition_met = B.size() >= n * (a * a + 1);
  TranslateGraph tg(G, A, B.elements());
  auto I = tg.greedy_independent_set();
  if (I.size() > n) I.resize(n);
  r.elements = std::move(I);
  return r;
}

int full_radius(const Group& G, const ElementSet& window) {
  if (window.empty() || !window.contains(G.identity())) return -1;
  int r = 0;
  while (r < G.max_radius()) {
    bool inside = true;
    for (const auto& s : G.sphere(r + 1))
      if (!window.contains(s)) {
        inside = false;
        break;
      }
    if (!inside) break;
    ++r;
  }
  return r;
}

SeparatedSubset separated_syndetic_subset(const Group& G, const SetExpr& A, const SyndeticCertificate& cert,
                                          const ElementSet& F, const EnumerationWindow& window) {
  std::vector<GroupElement> members;
  for (const auto& g : window.elements)
    if (membership(G, A, g)) members.push_back(g);
  if (members.empty()) throw Error(ErrorCode::kEmptyResult, "A does not meet the window");

  const ElementSet FinvF = product_set(G, inverse_set(G, F), F);
  ElementHashSet blocked(FinvF.begin(), FinvF.end());
  std::vector<GroupElement> B;
  for (const auto& g : members) {
    if (blocked.contains(g)) continue;
    B.push_back(g);
    for (const auto& x : FinvF) blocked.insert(G.multiply(x, g));
  }

  SeparatedSubset out;
  out.report = VerificationReport("separated_syndetic_subset");
  auto& sep = out.report.add("separation");
  {
    std::vector<GroupElement> all = B;
    all.push_back(G.identity());
    ElementHashSet seen;
    for (const auto& b : all)
      for (const auto& f : F) {
        ++sep.evaluated;
        if (!seen.insert(G.multiply(f, b)).second) sep.violate(G.to_json(b));
      }
  }
  out.B = B;
  if (B.empty()) {
    auto& c = out.report.add("syndetic certificate");
    c.status = Status::kFail;
    c.note = "B is empty on this window";
    return out;
  }

  // G = E F^-1 F {e, b^-1} B
  std::vector<GroupElement> tail{G.identity(), G.inverse(B.front())};
  ElementSet env = product_set(G, product_set(G, cert.F, FinvF), ElementSet(G, std::move(tail)));
  out.certificate = SyndeticCertificate{env};

  const int R = full_radius(G, window.elements);
  const int inner = R - max_length(G, cert.F);
  auto& c = out.report.add("syndetic certificate on inner window");
  if (inner < 0) {
    c.status = Status::kSkipped;
    c.note = "window too small for the certificate";
  } else {
    out.inner_radius = static_cast<std::uint64_t>(inner);
    auto inner_window = ball_window(G, inner);
    auto rep = verify_right_syndetic(G, SetExpr::finite(ElementSet(G, B)), out.certificate, inner_window);
    const auto& rc = rep.checks().front();
    c.evaluated = rc.evaluated;
    c.violations = rc.violations;
    c.status = rc.status;
    c.witnesses = rc.witnesses;
    c.note = "inner radius " + std::to_string(inner);
  }
  out.report.stats["B_size"] = B.size();
  out.report.stats["certificate_size"] = out.certificate.F.size();
  return out;
}

}  // namespace symdyn
