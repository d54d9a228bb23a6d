#include "symdyn/growth.hpp"

#include <string>

#include "symdyn/error.hpp"
#include "symdyn/translates.hpp"

namespace symdyn {

namespace {

std::string level_tag(int n) { return "level " + std::to_string(n) + ": "; }

void cap_check(std::uint64_t size, std::uint64_t cap, int n, const char* what) {
  if (size > cap)
    throw Error(ErrorCode::kDepthTooLarge, level_tag(n) + what + " has " + std::to_string(size) +
                                               " elements, over the cap of " + std::to_string(cap));
}

}  // namespace

ElementSet growth_envelope(const Group& G, const std::vector<ElementSet>& H, int n, std::uint64_t cap) {
  ElementSet Y = H.at(static_cast<std::size_t>(n - 1));
  for (int j = 0; j < n; ++j) {
    const auto& Hj = H[static_cast<std::size_t>(j)];
    ElementSet D = product_set(G, Hj, inverse_set(G, Hj));
    const std::uint64_t products = static_cast<std::uint64_t>(D.size()) * Y.size();
    if (cap < UINT64_MAX / 64 && products > 64 * cap)
      throw Error(ErrorCode::kDepthTooLarge, level_tag(n) + "envelope needs " + std::to_string(products) +
                                                 " products");
    Y = product_set(G, D, Y);
    cap_check(Y.size(), cap, n, "envelope");
  }
  return Y;
}

GrowthSequence build_growth_sequence(const Group& G, const SetExpr& T, const ElementSet& A, int depth,
                                     const GrowthOptions& options) {
  if (G.is_finite()) throw Error(ErrorCode::kUnsupportedGroup, "growth sequences need an infinite group");
  if (!A.contains(G.identity())) throw Error(ErrorCode::kInvalidArgument, "A must contain the identity");
  if (depth < 0 || depth > options.max_depth)
    throw Error(ErrorCode::kDepthTooLarge, "depth " + std::to_string(depth) + " outside [0, " +
                                               std::to_string(options.max_depth) + "]");

  GrowthSequence gs(G, T, options.rule);
  GrowthLevel l0;
  l0.H = A;
  gs.levels().push_back(std::move(l0));
  const bool symbolic = complement_form(G, T).has_value();

  std::vector<ElementSet> Hs{A};
  for (int n = 1; n <= depth; ++n) {
    const ElementSet& H = Hs.back();
    const std::uint64_t need = 3 * static_cast<std::uint64_t>(H.size());
    GrowthLevel lvl;

    // pick k and the disjoint g_i
    const ElementSet HinvH = product_set(G, inverse_set(G, H), H);
    ElementHashSet blocked;
    EnumerationCursor cur(G);
    if (options.rule == GrowthRule::kAdaptive) {
      cap_check(need * H.size(), options.max_level_size, n, "the required disjoint translates");
      while (lvl.disjoint.size() < need) {
        auto g = cur.next();
        if (!blocked.contains(*g)) {
          lvl.disjoint.push_back(*g);
          for (const auto& x : HinvH) blocked.insert(G.multiply(x, *g));
        }
        lvl.k = cur.index();
      }
    } else {
      const std::uint64_t s = H.size();
      lvl.k = 3 * s * (s * s + 1);
      cap_check(lvl.k, options.max_level_size, n, "the lemma-bound translate family");
      for (std::uint64_t i = 0; i < lvl.k; ++i) {
        auto g = cur.next();
        if (lvl.disjoint.size() < need && !blocked.contains(*g)) {
          lvl.disjoint.push_back(*g);
          for (const auto& x : HinvH) blocked.insert(G.multiply(x, *g));
        }
      }
      if (lvl.disjoint.size() < need)
        throw Error(ErrorCode::kInternalAxiomViolation, level_tag(n) + "fewer disjoint translates than the lemma");
    }

    // X = H {g_0..g_{k-1}}; only the outer shell of the prefix can leave it
    const auto E = enumerate_prefix(G, lvl.k).elements;
    const int r_full = full_radius(G, E);
    const int rho = max_length(G, H);
    ElementHashSet X(E.begin(), E.end());
    for (const auto& g : E) {
      if (G.length(g) <= r_full - rho) continue;
      for (const auto& x : H) X.insert(G.multiply(x, g));
      cap_check(X.size(), options.max_level_size, n, "the translate union");
    }
    const ElementSet Xs(G, X);

    ThickTranslateFinder finder;
    finder.budget = symbolic ? options.symbolic_budget : options.scan_budget;
    try {
      lvl.h = find_thick_translate(G, T, Xs, finder, &lvl.search);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBudgetExhausted) throw;
      throw Error(ErrorCode::kThicknessSearchFailed,
                  level_tag(n) + "no h with (H g_0 ∪ ... ∪ H g_{k-1}) h inside T; " + e.what());
    }

    ElementSet env = growth_envelope(G, Hs, n, options.max_level_size);
    lvl.envelope_size = env.size();
    ElementSet Hn = set_union(G, set_union(G, enumerate_prefix(G, static_cast<std::uint64_t>(n) + 1).elements, env),
                              translate_right(G, Xs, lvl.h));
    cap_check(Hn.size(), options.max_level_size, n, "H_n");
    lvl.H = Hn;
    Hs.push_back(std::move(Hn));
    gs.levels().push_back(std::move(lvl));
  }
  return gs;
}

json GrowthSequence::to_json() const {
  json levels = json::array();
  for (std::size_t n = 0; n < levels_.size(); ++n) {
    const auto& l = levels_[n];
    json j{{"n", n}, {"size", l.H.size()}};
    if (n > 0) {
      j["k"] = l.k;
      j["h"] = group_.to_json(l.h);
      j["disjoint_translates"] = l.disjoint.size();
      j["envelope_size"] = l.envelope_size;
      j["search"] = {{"candidates", l.search.candidates},
                     {"probes", l.search.probes},
                     {"symbolic", l.search.symbolic}};
    } else {
      j["H"] = set_to_json(group_, l.H);
    }
    levels.push_back(std::move(j));
  }
  return json{{"rule", rule_ == GrowthRule::kAdaptive ? "adaptive" : "lemma_bound"}, {"levels", levels}};
}

VerificationReport verify_growth_sequence(const GrowthSequence& gs) {
  const Group& G = gs.group();
  VerificationReport rep("growth_sequence");
  auto& c0 = rep.add("identity in H_0");
  ++c0.evaluated;
  if (!gs.H(0).contains(G.identity())) c0.violate("e");

  auto& nested = rep.add("nested");
  auto& envelope = rep.add("envelope (iii)");
  auto& exhaust = rep.add("exhaustion");
  auto& disj = rep.add("disjoint translates in H_n ∩ T (iv)");
  std::vector<ElementSet> Hs;
  for (int n = 0; n <= gs.depth(); ++n) Hs.push_back(gs.H(n));
  for (int n = 1; n <= gs.depth(); ++n) {
    const auto& H = gs.H(n - 1);
    const auto& Hn = gs.H(n);
    for (const auto& x : H) {
      ++nested.evaluated;
      if (!Hn.contains(x)) nested.violate(json{{"n", n}, {"element", G.to_json(x)}});
    }
    for (const auto& x : growth_envelope(G, Hs, n, UINT64_MAX)) {
      ++envelope.evaluated;
      if (!Hn.contains(x)) envelope.violate(json{{"n", n}, {"element", G.to_json(x)}});
    }
    for (const auto& x : enumerate_prefix(G, static_cast<std::uint64_t>(n) + 1).elements) {
      ++exhaust.evaluated;
      if (!Hn.contains(x)) exhaust.violate(json{{"n", n}, {"element", G.to_json(x)}});
    }
    const auto& lvl = gs.level(n);
    ++disj.evaluated;
    if (lvl.disjoint.size() < 3 * H.size()) disj.violate(json{{"n", n}, {"count", lvl.disjoint.size()}});
    ElementHashSet seen;
    for (const auto& g : lvl.disjoint) {
      const GroupElement gh = G.multiply(g, lvl.h);
      for (const auto& x : H) {
        ++disj.evaluated;
        const GroupElement y = G.multiply(x, gh);
        if (!Hn.contains(y) || !membership(G, gs.T(), y) || !seen.insert(y).second) {
          disj.violate(json{{"n", n}, {"translate", G.to_json(g)}, {"element", G.to_json(y)}});
          break;
        }
      }
    }
  }
  std::vector<json> sizes;
  for (int n = 0; n <= gs.depth(); ++n) sizes.push_back(gs.H(n).size());
  rep.stats["level_sizes"] = sizes;
  return rep;
}

}  // namespace symdyn
