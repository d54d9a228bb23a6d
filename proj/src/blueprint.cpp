#include "symdyn/blueprint.hpp"

#include <deque>

#include <absl/container/flat_hash_map.h>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

// Left-multiplication neighbour table over a fixed finite region, used to
// peel {y in W : D y ⊆ W} without testing points far from the boundary.
class Peeler {
 public:
  Peeler(const Group& G, const ElementSet& region) : G_(G), region_(region) {
    std::vector<GroupElement> moves;
    for (const auto& s : G.generators()) {
      moves.push_back(s);
      auto si = G.inverse(s);
      if (!(si == s)) moves.push_back(si);
    }
    degree_ = moves.size();
    nb_.assign(region.size() * degree_, -1);
    for (std::size_t i = 0; i < region.size(); ++i)
      for (std::size_t m = 0; m < degree_; ++m)
        if (auto p = region.position(G.multiply(moves[m], region[i])))
          nb_[i * degree_ + m] = static_cast<std::int64_t>(*p);
  }

  // alive' = {y alive : D y ⊆ alive}
  std::vector<char> peel(const std::vector<char>& alive, const ElementSet& D) const {
    const int rho = max_length(G_, D);
    std::vector<char> out = alive;
    std::vector<int> dist(region_.size(), -1);
    std::deque<std::size_t> q;
    for (std::size_t i = 0; i < region_.size(); ++i) {
      if (!alive[i]) continue;
      for (std::size_t m = 0; m < degree_; ++m) {
        auto j = nb_[i * degree_ + m];
        if (j < 0 || !alive[static_cast<std::size_t>(j)]) {
          dist[i] = 1;
          q.push_back(i);
          break;
        }
      }
    }
    while (!q.empty()) {
      auto i = q.front();
      q.pop_front();
      if (dist[i] >= rho) continue;
      for (std::size_t m = 0; m < degree_; ++m) {
        auto j = nb_[i * degree_ + m];
        if (j >= 0 && alive[static_cast<std::size_t>(j)] && dist[static_cast<std::size_t>(j)] < 0) {
          dist[static_cast<std::size_t>(j)] = dist[i] + 1;
          q.push_back(static_cast<std::size_t>(j));
        }
      }
    }
    for (std::size_t i = 0; i < region_.size(); ++i) {
      if (dist[i] < 0) continue;
      for (const auto& d : D) {
        auto p = region_.position(G_.multiply(d, region_[i]));
        if (!p || !alive[*p]) {
          out[i] = 0;
          break;
        }
      }
    }
    return out;
  }

 private:
  const Group& G_;
  const ElementSet& region_;
  std::size_t degree_ = 0;
  std::vector<std::int64_t> nb_;
};

ElementSet collect(const Group& G, const ElementSet& region, const std::vector<char>& mask) {
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < region.size(); ++i)
    if (mask[i]) out.push_back(region[i]);
  return ElementSet(G, std::move(out));
}

// Greedy maximal family of F-translates contained in `inside` (a mask over
// region), pairwise disjoint and disjoint from the translates by `pre`.
std::vector<GroupElement> greedy_pack(const Group& G, const ElementSet& F, const ElementSet& region,
                                      const std::vector<char>& inside, const std::vector<GroupElement>& pre) {
  const ElementSet FinvF = product_set(G, inverse_set(G, F), F);
  ElementHashSet blocked;
  std::vector<GroupElement> chosen = pre;
  for (const auto& g : pre)
    for (const auto& x : FinvF) blocked.insert(G.multiply(x, g));
  for (std::size_t i = 0; i < region.size(); ++i) {
    if (!inside[i]) continue;
    const GroupElement& g = region[i];
    if (blocked.contains(g)) continue;
    bool fits = true;
    for (const auto& f : F) {
      auto p = region.position(G.multiply(f, g));
      if (!p || !inside[*p]) {
        fits = false;
        break;
      }
    }
    if (!fits) continue;
    chosen.push_back(g);
    for (const auto& x : FinvF) blocked.insert(G.multiply(x, g));
  }
  return chosen;
}

}  // namespace

ElementSet compute_Tkn(const Group& G, const SetExpr& T, const std::vector<ElementSet>& F, const ElementSet& Hn, int k,
                       int n) {
  if (k < 0 || k >= n || static_cast<int>(F.size()) < n)
    throw Error(ErrorCode::kInvalidArgument, "compute_Tkn needs 0 <= k < n and F_0..F_{n-1}");
  std::vector<char> alive(Hn.size(), 1);
  if (k < n - 1) {
    Peeler peeler(G, Hn);
    for (int j = n - 1; j > k; --j) {
      const auto& Fj = F[static_cast<std::size_t>(j)];
      alive = peeler.peel(alive, product_set(G, Fj, inverse_set(G, Fj)));
    }
  }
  for (std::size_t i = 0; i < Hn.size(); ++i)
    if (alive[i] && !membership(G, T, Hn[i])) alive[i] = 0;
  return collect(G, Hn, alive);
}

void BlueprintBundle::rebuild_D() {
  const Group& G = group();
  const int N = depth();
  D_.assign(static_cast<std::size_t>(N) + 1, {});
  for (int n = 0; n <= N; ++n) {
    auto& row = D_[static_cast<std::size_t>(n)];
    row.resize(static_cast<std::size_t>(n) + 1);
    row[static_cast<std::size_t>(n)] = singleton(G, G.identity());
    for (int k = 0; k < n; ++k) {
      ElementHashSet acc;
      for (int m = k; m < n; ++m)
        for (const auto& y : delta(m, n))
          for (const auto& x : D(k, m)) acc.insert(G.multiply(x, y));
      row[static_cast<std::size_t>(k)] = ElementSet(G, acc);
    }
  }
}

BlueprintBundle build_blueprint(const GrowthSequence& growth) {
  const Group& G = growth.group();
  const SetExpr& T = growth.T();
  const int N = growth.depth();
  if (G.is_finite()) throw Error(ErrorCode::kUnsupportedGroup, "blueprints need an infinite group");
  auto grep = verify_growth_sequence(growth);
  if (!grep.ok()) throw Error(ErrorCode::kGrowthInvalid, "growth sequence fails its invariants: " + grep.to_json().dump());

  BlueprintBundle b(growth);
  auto& F = b.F_mut();
  auto& delta = b.delta_mut();
  F.push_back(growth.H(0));
  delta.emplace_back();

  for (int n = 1; n <= N; ++n) {
    const ElementSet& Hn = growth.H(n);
    std::vector<ElementSet> row(static_cast<std::size_t>(n));
    std::vector<char> inT(Hn.size(), 0);
    for (std::size_t i = 0; i < Hn.size(); ++i) inT[i] = membership(G, T, Hn[i]) ? 1 : 0;

    // delta_{n-1}^n: e plus a maximal disjoint family inside H_n ∩ T
    row[static_cast<std::size_t>(n - 1)] =
        ElementSet(G, greedy_pack(G, F[static_cast<std::size_t>(n - 1)], Hn, inT, {G.identity()}));

    // covered[i]: H_n[i] lies in some F_m delta_m^n with m > current k
    std::vector<char> covered(Hn.size(), 0);
    auto cover = [&](int m) {
      for (const auto& d : row[static_cast<std::size_t>(m)])
        for (const auto& f : F[static_cast<std::size_t>(m)]) {
          auto p = Hn.position(G.multiply(f, d));
          if (!p) throw Error(ErrorCode::kInternalAxiomViolation, "F_m delta_m^n leaves H_n");
          covered[*p] = 1;
        }
    };
    cover(n - 1);

    std::vector<char> alive(Hn.size(), 1);
    if (n >= 2) {
      Peeler peeler(G, Hn);
      for (int k = n - 2; k >= 0; --k) {
        const auto& Fk1 = F[static_cast<std::size_t>(k + 1)];
        alive = peeler.peel(alive, product_set(G, Fk1, inverse_set(G, Fk1)));
        std::vector<char> inside(Hn.size(), 0);
        for (std::size_t i = 0; i < Hn.size(); ++i) inside[i] = alive[i] && inT[i] && !covered[i];
        row[static_cast<std::size_t>(k)] = ElementSet(G, greedy_pack(G, F[static_cast<std::size_t>(k)], Hn, inside, {}));
        cover(k);
      }
    }

    ElementSet Fn;
    {
      // covered marks exactly U F_k delta_k^n inside H_n
      std::vector<GroupElement> acc;
      for (std::size_t i = 0; i < Hn.size(); ++i)
        if (covered[i]) acc.push_back(Hn[i]);
      Fn = ElementSet(G, std::move(acc));
    }
    F.push_back(std::move(Fn));
    delta.push_back(std::move(row));
  }
  b.rebuild_D();

  auto rep = verify_preblueprint(b);
  if (rep.overall() == Status::kFail)
    throw Error(ErrorCode::kInternalAxiomViolation, "constructed bundle fails verification: " + rep.to_json().dump());
  b.set_construction_report(std::move(rep));
  return b;
}

json BlueprintBundle::to_json() const {
  const Group& G = group();
  json levels = json::array();
  for (int n = 0; n <= depth(); ++n) {
    json delta_j = json::object(), D_j = json::object();
    for (int k = 0; k < n; ++k) delta_j[std::to_string(k)] = set_to_json(G, delta(k, n));
    for (int k = 0; k <= n; ++k) D_j[std::to_string(k)] = set_to_json(G, D(k, n));
    levels.push_back(json{{"n", n}, {"F", set_to_json(G, F(n))}, {"delta", delta_j}, {"D", D_j}});
  }
  return json{{"group", G.spec()},
              {"T", set_expr_to_json(G, T())},
              {"depth", depth()},
              {"growth", growth_.to_json()},
              {"levels", levels}};
}

// ---------------------------------------------------------------------------

namespace {

// x -> index of the translate F gamma (gamma in Dset) containing x.
struct OwnerMap {
  absl::flat_hash_map<GroupElement, std::uint32_t> owner;
  std::uint64_t collisions = 0;
  json first_collision;
};

OwnerMap owners(const Group& G, const ElementSet& F, const ElementSet& Dset) {
  OwnerMap m;
  for (std::uint32_t i = 0; i < Dset.size(); ++i)
    for (const auto& f : F) {
      auto [it, fresh] = m.owner.emplace(G.multiply(f, Dset[i]), i);
      if (!fresh) {
        if (m.collisions++ == 0) m.first_collision = G.to_json(Dset[i]);
      }
    }
  return m;
}

// Visits a*b for a in A, b in B (with repeats) until visit returns false.
template <typename Visit>
void each_product(const Group& G, const ElementSet& A, const ElementSet& B, Visit visit) {
  for (const auto& b : B)
    for (const auto& a : A)
      if (!visit(G.multiply(a, b))) return;
}

bool contained_in_T(const Group& G, const SetExpr& T, const ElementSet& F, const GroupElement& g) {
  for (const auto& f : F)
    if (!membership(G, T, G.multiply(f, g))) return false;
  return true;
}

}  // namespace

VerificationReport verify_preblueprint(const BlueprintBundle& b) {
  const Group& G = b.group();
  const SetExpr& T = b.T();
  const int N = b.depth();
  const GroupElement e = G.identity();
  VerificationReport rep("preblueprint");

  auto& c1 = rep.add("(i) e in delta_{n-1}^n");
  auto& c2 = rep.add("(ii) |delta_{n-1}^n| >= 3");
  auto& c3 = rep.add("(iii) delta_k^n translates of F_k disjoint");
  auto& c4 = rep.add("(iv) chain products land in T");
  auto& c5 = rep.add("(v) F_m delta_m^n, F_k delta_k^n disjoint");
  auto& c6 = rep.add("(vi) F_n = U F_k delta_k^n");
  for (int n = 1; n <= N; ++n) {
    const auto& top = b.delta(n - 1, n);
    ++c1.evaluated;
    if (!top.contains(e)) c1.violate(json{{"n", n}});
    ++c2.evaluated;
    if (top.size() < 3) c2.violate(json{{"n", n}, {"size", top.size()}});

    absl::flat_hash_map<GroupElement, int> level_of;
    ElementHashSet uni;
    for (int k = 0; k < n; ++k) {
      auto own = owners(G, b.F(k), b.delta(k, n));
      c3.evaluated += b.delta(k, n).size();
      if (own.collisions) c3.violate(json{{"n", n}, {"k", k}, {"translate", own.first_collision}});
      for (const auto& [x, idx] : own.owner) {
        ++c5.evaluated;
        auto [it, fresh] = level_of.emplace(x, k);
        if (!fresh && it->second != k)
          c5.violate(json{{"n", n}, {"m", it->second}, {"k", k}, {"element", G.to_json(x)}});
        uni.insert(x);
      }

      // (iv): every chain k < i_1 < ... < i_t < n
      const int span = n - k - 1;
      if (n - k > kMaxChainSpan) {
        if (c4.status == Status::kPass) c4.status = Status::kPartial;
        c4.note = "chains with n-k > " + std::to_string(kMaxChainSpan) + " skipped";
        continue;
      }
      for (std::uint32_t mask = 0; mask < (1u << span); ++mask) {
        ElementSet prod = singleton(G, e);
        int prev = k;
        for (int i = 0; i < span; ++i)
          if (mask & (1u << i)) {
            prod = product_set(G, prod, b.delta(prev, k + 1 + i));
            prev = k + 1 + i;
          }
        each_product(G, prod, b.delta(prev, n), [&](const GroupElement& g) {
          if (g == e) return true;
          ++c4.evaluated;
          if (!contained_in_T(G, T, b.F(k), g))
            c4.violate(json{{"n", n}, {"k", k}, {"chain", mask}, {"g", G.to_json(g)}});
          return true;
        });
      }
    }
    c6.evaluated += b.F(n).size();
    if (uni.size() != b.F(n).size()) c6.violate(json{{"n", n}, {"union", uni.size()}, {"F_n", b.F(n).size()}});
    else
      for (const auto& x : b.F(n))
        if (!uni.contains(x)) {
          c6.violate(json{{"n", n}, {"element", G.to_json(x)}});
          break;
        }
  }

  // bundle axioms over D_k^N
  auto& dj = rep.add("disjoint");
  auto& tc = rep.add("T-covered");
  auto& co = rep.add("coherent");
  auto& un = rep.add("uniform");
  auto& gr = rep.add("growth");
  auto& ce = rep.add("centered");
  std::vector<OwnerMap> own(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) {
    const auto& Dn = b.D(n, N);
    own[static_cast<std::size_t>(n)] = owners(G, b.F(n), Dn);
    dj.evaluated += Dn.size();
    if (own[static_cast<std::size_t>(n)].collisions)
      dj.violate(json{{"n", n}, {"translate", own[static_cast<std::size_t>(n)].first_collision}});
    ++tc.evaluated;
    if (!b.F(n).contains(e)) tc.violate(json{{"n", n}, {"missing", "e"}});
    for (const auto& g : Dn) {
      if (g == e) continue;
      ++tc.evaluated;
      if (!contained_in_T(G, T, b.F(n), g)) tc.violate(json{{"n", n}, {"g", G.to_json(g)}});
    }
    ++ce.evaluated;
    if (!Dn.contains(e)) ce.violate(json{{"n", n}, {"D_n^N", "missing e"}});
    if (n < N) {
      ++ce.evaluated;
      if (!b.delta(n, n + 1).contains(e)) ce.violate(json{{"n", n}, {"delta_n^{n+1}", "missing e"}});
    }
  }
  for (int n = 1; n <= N; ++n) {
    const auto& ownN = own[static_cast<std::size_t>(n)].owner;
    const auto& Dn = b.D(n, N);
    for (int k = 0; k < n; ++k) {
      const auto& Dk = b.D(k, N);
      const auto& Dkn = b.D(k, n);
      std::vector<std::uint64_t> per_gamma(Dn.size(), 0);
      for (const auto& psi : Dk) {
        ++co.evaluated;
        std::int64_t who = -1;
        bool all = true, mixed = false;
        for (const auto& f : b.F(k)) {
          auto it = ownN.find(G.multiply(f, psi));
          if (it == ownN.end()) {
            all = false;
            continue;
          }
          if (who < 0) who = it->second;
          else if (who != static_cast<std::int64_t>(it->second)) mixed = true;
        }
        if (who >= 0 && (!all || mixed))
          co.violate(json{{"k", k}, {"n", n}, {"psi", G.to_json(psi)}});
        // uniform: psi in F_n gamma  =>  psi gamma^-1 in D_k^n
        auto it = ownN.find(psi);
        if (it == ownN.end()) continue;
        ++un.evaluated;
        const auto& gamma = Dn[it->second];
        if (!Dkn.contains(G.multiply(psi, G.inverse(gamma))))
          un.violate(json{{"k", k}, {"n", n}, {"psi", G.to_json(psi)}, {"gamma", G.to_json(gamma)}});
        else
          ++per_gamma[it->second];
      }
      for (std::size_t i = 0; i < Dn.size(); ++i) {
        ++un.evaluated;
        if (per_gamma[i] != Dkn.size())
          un.violate(json{{"k", k}, {"n", n}, {"gamma", G.to_json(Dn[i])}, {"found", per_gamma[i]},
                          {"expected", Dkn.size()}});
        if (k == n - 1) {
          ++gr.evaluated;
          if (per_gamma[i] < 3) gr.violate(json{{"n", n}, {"gamma", G.to_json(Dn[i])}, {"count", per_gamma[i]}});
        }
      }
    }
  }

  auto& cl1 = rep.add("Claim 1: F_k D_k^n ⊆ F_n");
  auto& cl2 = rep.add("Claim 2: D_k^m D_m^n ⊆ D_k^n");
  for (int n = 0; n <= N; ++n)
    for (int k = 0; k <= n; ++k) {
      each_product(G, b.F(k), b.D(k, n), [&](const GroupElement& x) {
        ++cl1.evaluated;
        if (b.F(n).contains(x)) return true;
        cl1.violate(json{{"k", k}, {"n", n}, {"element", G.to_json(x)}});
        return false;
      });
      for (int m = k; m <= n; ++m)
        each_product(G, b.D(k, m), b.D(m, n), [&](const GroupElement& x) {
          ++cl2.evaluated;
          if (b.D(k, n).contains(x)) return true;
          cl2.violate(json{{"k", k}, {"m", m}, {"n", n}, {"element", G.to_json(x)}});
          return false;
        });
    }

  auto& md = rep.add("maximally disjoint within H_{n-1} ∩ T");
  for (int n = 1; n <= N; ++n) {
    const auto& Hp = b.growth().H(n - 1);
    for (int k = 0; k < n; ++k) {
      const auto& Fk = b.F(k);
      ElementHashSet cover;
      each_product(G, Fk, b.D(k, n), [&](const GroupElement& x) { return cover.insert(x), true; });
      for (const auto& g : Hp) {
        bool inside = true;
        for (const auto& f : Fk) {
          auto y = G.multiply(f, g);
          if (!Hp.contains(y) || !membership(G, T, y)) {
            inside = false;
            break;
          }
        }
        if (!inside) continue;
        ++md.evaluated;
        bool meets = false;
        for (const auto& f : Fk)
          if (cover.contains(G.multiply(f, g))) {
            meets = true;
            break;
          }
        if (!meets) md.violate(json{{"k", k}, {"n", n}, {"g", G.to_json(g)}});
      }
    }
  }

  auto& di = rep.add("directed");
  for (int k = 0; k < N; ++k) {
    ++di.evaluated;
    bool ok = true;
    each_product(G, b.F(k), b.D(k, N), [&](const GroupElement& x) { return ok = b.F(N).contains(x); });
    if (!ok) di.violate(json{{"k", k}});
  }
  if (di.status == Status::kPass) {
    di.status = Status::kPartial;
    di.note = "pairs in D_k^N share the witness F_N e; pairs outside F_N need deeper levels";
  }

  std::vector<json> sizes;
  for (int n = 0; n <= N; ++n) sizes.push_back(b.F(n).size());
  rep.stats["F_sizes"] = sizes;
  return rep;
}

VerificationReport verify_blueprint_syndetic(const BlueprintBundle& b, int n, const EnumerationWindow& window,
                                             const std::optional<ThicklySyndeticCertificate>& cert) {
  const Group& G = b.group();
  const int N = b.depth();
  VerificationReport rep("blueprint_syndetic");
  auto& c = rep.add("G = A_n F_n^-1 F_n D_n^N");
  if (n < 0 || n > N) throw Error(ErrorCode::kInvalidArgument, "level outside the bundle");
  if (n == N) {
    c.status = Status::kSkipped;
    c.note = "top level: D_N^N = {e}, needs a deeper table";
    return rep;
  }
  if (!cert) throw Error(ErrorCode::kCertificateMissing, "T has no thickly syndetic certificate");
  const auto wit = cert->for_set(b.F(n));
  const ElementSet& Fn = b.F(n);
  const ElementSet& Hp = b.growth().H(N - 1);
  ElementHashSet cover;
  each_product(G, Fn, b.D(n, N), [&](const GroupElement& x) { return cover.insert(x), true; });
  std::vector<GroupElement> ainv;
  for (const auto& a : wit.cert.F) ainv.push_back(G.inverse(a));

  std::uint64_t unevaluable = 0;
  for (const auto& g : window.elements) {
    bool inQ = false, evaluable = false, met = false;
    for (const auto& ai : ainv) {
      const GroupElement q = G.multiply(ai, g);
      if (!membership(G, wit.Q, q)) continue;
      inQ = true;
      bool inside = true;
      for (const auto& f : Fn)
        if (!Hp.contains(G.multiply(f, q))) {
          inside = false;
          break;
        }
      if (!inside) continue;
      evaluable = true;
      for (const auto& f : Fn)
        if (cover.contains(G.multiply(f, q))) {
          met = true;
          break;
        }
      if (met) break;
    }
    if (!inQ) {
      c.violate(json{{"g", G.to_json(g)}, {"reason", "no a with a^-1 g in Q_n"}});
      continue;
    }
    if (!evaluable) {
      ++unevaluable;
      continue;
    }
    ++c.evaluated;
    if (!met) c.violate(json{{"g", G.to_json(g)}, {"reason", "F_n a^-1 g misses F_n D_n^N"}});
  }
  c.note = std::to_string(unevaluable) + " window points need data beyond H_{N-1}";
  rep.stats["evaluated"] = c.evaluated;
  rep.stats["unevaluable"] = unevaluable;
  rep.stats["A_n_size"] = wit.cert.F.size();
  if (c.evaluated == 0 && c.status == Status::kPass) c.status = Status::kVacuous;
  return rep;
}

DeltaWindow delta_window(const BlueprintBundle& b, int k) {
  if (k < 0 || k > b.depth()) throw Error(ErrorCode::kInvalidArgument, "level outside the bundle");
  return DeltaWindow{b.D(k, b.depth()), b.F(b.depth()),
                     "Delta_k ∩ F_N = D_k^N (uniform with gamma = e, e in Delta_N by centeredness)"};
}

}  // namespace symdyn
