#include "symdyn/largeness.hpp"

#include <algorithm>
#include <bit>

#include "symdyn/error.hpp"

namespace symdyn {

// ---------------------------------------------------------------------------
// Complement form G \ B

bool ExcludedSet::contains(const Group& G, const GroupElement& g) const {
  return finite.contains(g) || (sparse && G.is_generator_power_of_two(g));
}

namespace {

std::vector<GroupElement> sparse_points(const Group& G, std::int64_t lo, std::int64_t hi) {
  std::vector<GroupElement> out;
  const int r = G.infinite_generator_count();
  for (std::int64_t len = 1; len <= hi && len < (std::int64_t{1} << 27); len <<= 1) {
    if (len < lo) continue;
    for (int i = 0; i < r; ++i) {
      out.push_back(G.generator_power(i, len));
      out.push_back(G.generator_power(i, -len));
    }
  }
  return out;
}

std::optional<ExcludedSet> bad_part(const Group& G, const SetExpr& e) {
  switch (e.kind()) {
    case SetExpr::Kind::kEmpty: return ExcludedSet{};
    case SetExpr::Kind::kFinite: return ExcludedSet{e.elements(), false};
    case SetExpr::Kind::kSparse:
      if (e.rule() == SparseRule::kGeneratorPow2) return ExcludedSet{ElementSet(), true};
      return std::nullopt;
    case SetExpr::Kind::kUnion: {
      ExcludedSet acc;
      for (const auto& c : e.children()) {
        auto b = bad_part(G, c);
        if (!b) return std::nullopt;
        acc.finite = set_union(G, acc.finite, b->finite);
        acc.sparse = acc.sparse || b->sparse;
      }
      return acc;
    }
    default: return std::nullopt;
  }
}

}  // namespace

std::vector<GroupElement> ExcludedSet::points_with_length(const Group& G, std::int64_t lo,
                                                          std::int64_t hi) const {
  std::vector<GroupElement> out;
  for (const auto& b : finite) {
    int l = G.length(b);
    if (l >= lo && l <= hi) out.push_back(b);
  }
  if (sparse) {
    auto s = sparse_points(G, lo, hi);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

std::uint64_t ExcludedSet::cluster_bound(const Group& G, std::uint64_t diameter) const {
  std::uint64_t m = finite.size();
  if (sparse) {
    // Two distinct points s^(+-2^i), t^(+-2^j) with i >= j are at distance at
    // least 2^(i-1), so a set of diameter D only holds exponents <= log2(D)+1.
    std::uint64_t r = static_cast<std::uint64_t>(G.infinite_generator_count());
    std::uint64_t s = 1;
    if (diameter >= 1) {
      std::uint64_t lg = static_cast<std::uint64_t>(std::bit_width(diameter) - 1);
      s = std::max<std::uint64_t>(1, 2 * r * (lg + 2));
    }
    m += s;
  }
  return m;
}

std::optional<ExcludedSet> complement_form(const Group& G, const SetExpr& expr) {
  switch (expr.kind()) {
    case SetExpr::Kind::kFull: return ExcludedSet{};
    case SetExpr::Kind::kComplement: return bad_part(G, expr.child());
    case SetExpr::Kind::kIntersection: {
      ExcludedSet acc;
      for (const auto& c : expr.children()) {
        auto b = complement_form(G, c);
        if (!b) return std::nullopt;
        acc.finite = set_union(G, acc.finite, b->finite);
        acc.sparse = acc.sparse || b->sparse;
      }
      return acc;
    }
    case SetExpr::Kind::kUnion:
      // a certificate for one member serves the union
      for (const auto& c : expr.children())
        if (auto b = complement_form(G, c)) return b;
      return std::nullopt;
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Thickly syndetic certificates

ThicklySyndeticCertificate derive_thickly_syndetic_cert(const Group& G, const SetExpr& expr) {
  if (G.is_finite() && !(expr.kind() == SetExpr::Kind::kFull))
    throw Error(ErrorCode::kNotDerivable, "finite group: only the full set has a symbolic rule");
  auto b = complement_form(G, expr);
  if (!b)
    throw Error(ErrorCode::kNotDerivable,
                "expression is not a finite union/intersection of Full, complements of finite sets and "
                "complements of the generator-power sparse set");
  return ThicklySyndeticCertificate(G, std::move(*b));
}

ThicklySyndeticCertificate::Witness ThicklySyndeticCertificate::for_set(const ElementSet& A) const {
  const Group& G = group_;
  Witness w;
  if (A.empty() || (excluded_.finite.empty() && !excluded_.sparse)) {
    w.Q = SetExpr::full();
    w.cert.F = singleton(G, G.identity());
    return w;
  }
  // Q = G \ A^-1 B
  std::vector<SetExpr> parts;
  for (const auto& a : A) {
    GroupElement ainv = G.inverse(a);
    if (!excluded_.finite.empty())
      parts.push_back(SetExpr::translate(ainv, SetExpr::finite(excluded_.finite), Side::kLeft));
    if (excluded_.sparse)
      parts.push_back(SetExpr::translate(ainv, SetExpr::sparse(SparseRule::kGeneratorPow2), Side::kLeft));
  }
  w.Q = SetExpr::complement(SetExpr::union_of(std::move(parts)));

  // Choose P with the translates Ap pairwise disjoint and |P| larger than the
  // number of B points any translate of AP can hold; then G = P^-1 Q.
  ElementSet AinvA = product_set(G, inverse_set(G, A), A);
  ElementHashSet blocked;
  std::vector<GroupElement> P;
  int max_len = 0;
  const int rhoA = max_length(G, A);
  EnumerationCursor cur(G);
  while (true) {
    std::uint64_t diameter = 2 * static_cast<std::uint64_t>(max_len);
    std::uint64_t m = excluded_.cluster_bound(G, diameter);
    if (P.size() > m) {
      w.cluster_bound = m;
      break;
    }
    auto p = cur.next();
    if (!p) throw Error(ErrorCode::kNotDerivable, "group too small for disjoint translates");
    if (blocked.contains(*p)) continue;
    P.push_back(*p);
    for (const auto& x : AinvA) blocked.insert(G.multiply(x, *p));
    max_len = std::max(max_len, rhoA + G.length(*p));
  }
  std::vector<GroupElement> F;
  for (const auto& p : P) F.push_back(G.inverse(p));
  w.cert.F = ElementSet(G, std::move(F));
  return w;
}

json ThicklySyndeticCertificate::to_json() const {
  return json{{"rule", "complement"},
              {"excluded_finite", set_to_json(group_, excluded_.finite)},
              {"excluded_sparse", excluded_.sparse ? "generator_pow2" : "none"}};
}

// ---------------------------------------------------------------------------

VerificationReport verify_right_syndetic(const Group& G, const SetExpr& S, const SyndeticCertificate& cert,
                                         const EnumerationWindow& window) {
  VerificationReport rep("right_syndetic");
  auto& c = rep.add("G = FS on window");
  std::vector<GroupElement> finv;
  for (const auto& f : cert.F) finv.push_back(G.inverse(f));
  for (const auto& g : window.elements) {
    ++c.evaluated;
    bool hit = false;
    for (const auto& fi : finv)
      if (membership(G, S, G.multiply(fi, g))) {
        hit = true;
        break;
      }
    if (!hit) c.violate(G.to_json(g));
  }
  rep.stats["certificate_size"] = cert.F.size();
  rep.stats["window_size"] = window.size();
  return rep;
}

std::optional<SyndeticCertificate> search_syndetic_certificate(const Group& G, const SetExpr& S,
                                                               const EnumerationWindow& window,
                                                               std::uint64_t max_size) {
  auto prefix = enumerate_prefix(G, std::max<std::uint64_t>(1, max_size));
  std::vector<GroupElement> inv;
  for (const auto& f : prefix.elements) inv.push_back(G.inverse(f));
  std::size_t need = 1;
  for (const auto& g : window.elements) {
    bool hit = false;
    for (std::size_t i = 0; i < inv.size(); ++i)
      if (membership(G, S, G.multiply(inv[i], g))) {
        need = std::max(need, i + 1);
        hit = true;
        break;
      }
    if (!hit) return std::nullopt;
  }
  return SyndeticCertificate{enumerate_prefix(G, need).elements};
}

SyndeticCertificate coset_union_certificate(const Group& G, const SetExpr& S) {
  if (S.kind() != SetExpr::Kind::kCosetUnion || S.coset_reps().empty())
    throw Error(ErrorCode::kInvalidArgument, "need a nonempty coset union");
  std::vector<GroupElement> reps(S.coset_reps().begin(), S.coset_reps().end());
  std::sort(reps.begin(), reps.end(), G.ordering());
  const GroupElement cinv = G.inverse(reps.front());
  std::vector<GroupElement> F;
  for (const auto& r : S.subgroup().representatives()) F.push_back(G.multiply(r, cinv));
  return SyndeticCertificate{ElementSet(G, std::move(F))};
}

// ---------------------------------------------------------------------------

GroupElement find_thick_translate(const Group& G, const SetExpr& S, const ElementSet& A,
                                  const ThickTranslateFinder& finder, ThickSearchStats* stats) {
  ThickSearchStats local;
  ThickSearchStats& st = stats ? *stats : local;
  st = ThickSearchStats{};

  std::optional<ExcludedSet> ex;
  if (finder.strategy != ThickTranslateFinder::Strategy::kScan) ex = complement_form(G, S);
  if (finder.strategy == ThickTranslateFinder::Strategy::kSymbolic && !ex)
    throw Error(ErrorCode::kNotDerivable, "no symbolic rule for this expression");
  st.symbolic = ex.has_value();
  const std::int64_t rhoA = max_length(G, A);

  auto exhausted = [&]() {
    return Error(ErrorCode::kBudgetExhausted, "no translate found after " + std::to_string(st.candidates) +
                                                  " candidates and " + std::to_string(st.probes) + " probes");
  };

  EnumerationCursor cur(G);
  while (true) {
    auto h = cur.next();
    if (!h) throw exhausted();
    ++st.candidates;
    bool ok = true;
    if (ex) {
      // Ah meets B iff b h^-1 lies in A for some b in B; only b with
      // | |b| - |h| | <= max|A| can qualify.
      const GroupElement hinv = G.inverse(*h);
      for (const auto& b : ex->finite) {
        if (++st.probes > finder.budget) throw exhausted();
        if (A.contains(G.multiply(b, hinv))) {
          ok = false;
          break;
        }
      }
      if (ok && ex->sparse) {
        const std::int64_t lh = G.length(*h);
        for (const auto& u : sparse_points(G, lh - rhoA, lh + rhoA)) {
          if (++st.probes > finder.budget) throw exhausted();
          if (A.contains(G.multiply(u, hinv))) {
            ok = false;
            break;
          }
        }
      }
    } else {
      for (const auto& a : A) {
        if (++st.probes > finder.budget) throw exhausted();
        if (!membership(G, S, G.multiply(a, *h))) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    if (ex)
      for (const auto& a : A)
        if (!membership(G, S, G.multiply(a, *h)))
          throw Error(ErrorCode::kInternalAxiomViolation, "symbolic translate failed membership re-check");
    return *h;
  }
}

// ---------------------------------------------------------------------------

VerificationReport check_piecewise_syndetic_window(const Group& G, const SetExpr& S, const ElementSet& F,
                                                   const EnumerationWindow& window, int probes) {
  VerificationReport rep("piecewise_syndetic");
  const auto& W = window.elements;
  std::vector<SetExpr> parts;
  for (const auto& f : F) parts.push_back(SetExpr::translate(f, S, Side::kLeft));
  const SetExpr FS = SetExpr::union_of(std::move(parts));

  int r_max = 0;
  while (true) {
    int r = r_max + 1;
    if (r > G.max_radius() || G.ball_size(r) * kWindowRatio > W.size()) break;
    bool inside = true;
    for (const auto& b : G.sphere(r))
      if (!W.contains(b)) {
        inside = false;
        break;
      }
    if (!inside) break;
    r_max = r;
  }

  auto& thick = rep.add("ball translates into FS");
  const std::uint64_t budget = 10 * kDefaultThickBudget;
  std::uint64_t calls = 0;
  int largest = -1;
  bool inconclusive = false;
  for (int r = 0; r <= r_max; ++r) {
    ++thick.evaluated;
    auto A = ball(G, r);
    bool found = false;
    for (const auto& h : W) {
      bool ok = true;
      for (const auto& a : A) {
        ++calls;
        if (!membership(G, FS, G.multiply(a, h))) {
          ok = false;
          break;
        }
      }
      if (ok) {
        found = true;
        break;
      }
      if (calls > budget) break;
    }
    if (!found) {
      if (calls > budget) {
        inconclusive = true;
      } else {
        thick.violate(json{{"radius", r}});
      }
      break;
    }
    largest = r;
  }
  if (inconclusive && thick.status != Status::kFail) thick.status = Status::kInconclusive;
  thick.note = "largest radius with a translate in the window: " + std::to_string(largest) + " of " +
               std::to_string(r_max);
  rep.stats["largest_radius"] = largest;
  rep.stats["max_radius_tested"] = r_max;

  auto& dual = rep.add("meets thickly syndetic probes");
  if (G.is_finite() || probes <= 0) {
    dual.status = Status::kSkipped;
    dual.note = G.is_finite() ? "finite group" : "no probes requested";
  } else {
    // Probe j removes an initial chunk of the window and a translate of the
    // sparse set; such sets are thickly syndetic in any infinite G.
    for (int j = 1; j <= probes; ++j) {
      ++dual.evaluated;
      const std::size_t cut = W.size() * static_cast<std::size_t>(j) / (2 * static_cast<std::size_t>(probes));
      std::vector<GroupElement> removed(W.begin(), W.begin() + static_cast<std::ptrdiff_t>(cut));
      const GroupElement shift = W[static_cast<std::size_t>(j) % W.size()];
      SetExpr T = SetExpr::complement(SetExpr::union_of(
          {SetExpr::finite(ElementSet(G, std::move(removed))),
           SetExpr::translate(shift, SetExpr::sparse(SparseRule::kGeneratorPow2), Side::kRight)}));
      bool met = false;
      for (const auto& g : W)
        if (membership(G, S, g) && membership(G, T, g)) {
          met = true;
          break;
        }
      if (!met) dual.violate(json{{"probe", j}});
    }
  }
  return rep;
}

}  // namespace symdyn
