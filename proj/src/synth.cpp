#include "symdyn/synth.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <thread>

#include <absl/container/flat_hash_map.h>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

// fn(begin, end, worker) over [0, n) split into contiguous chunks.
template <typename Fn>
int parallel_chunks(std::size_t n, int jobs, Fn fn) {
  const int t = static_cast<int>(std::clamp<std::size_t>(n / 4096 + 1, 1, static_cast<std::size_t>(std::max(jobs, 1))));
  if (t == 1) {
    fn(std::size_t{0}, n, 0);
    return 1;
  }
  std::vector<std::thread> th;
  for (int w = 0; w < t; ++w)
    th.emplace_back(fn, n * static_cast<std::size_t>(w) / static_cast<std::size_t>(t),
                    n * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(t), w);
  for (auto& x : th) x.join();
  return t;
}

using Bits = std::vector<std::uint64_t>;

template <typename Fn>
void each_bit(const Bits& b, Fn fn) {
  for (std::size_t w = 0; w < b.size(); ++w)
    for (std::uint64_t v = b[w]; v; v &= v - 1) fn(w * 64 + static_cast<std::size_t>(std::countr_zero(v)));
}

std::vector<std::uint64_t> pattern_masks(std::size_t p, int max_size) {
  std::vector<std::uint64_t> out;
  for (int s = 1; s <= max_size && s <= static_cast<int>(p); ++s) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(s));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    while (true) {
      std::uint64_t m = 0;
      for (auto i : idx) m |= std::uint64_t{1} << i;
      out.push_back(m);
      int i = s - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == p - static_cast<std::size_t>(s - i)) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (auto j = static_cast<std::size_t>(i) + 1; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace

PointIndex::PointIndex(const PatternPoint& x, int radius, int jobs) : x_(x), radius_(radius) {
  const Group& G = x.group();
  const ElementSet& W = x.domain();
  P_ = ball(G, std::max(radius, 1)).elements();
  for (const auto& s : G.generators()) gens_.push_back(index_of(s));
  const std::size_t p = P_.size();
  table_.assign(W.size() * p, -1);
  parallel_chunks(W.size(), jobs, [&](std::size_t b, std::size_t e, int) {
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t k = 0; k < p; ++k)
        if (auto q = W.position(G.multiply(P_[k], W[i]))) table_[i * p + k] = static_cast<std::int32_t>(*q);
  });
}

std::size_t PointIndex::index_of(const GroupElement& g) const {
  auto it = std::find(P_.begin(), P_.end(), g);
  if (it == P_.end()) throw Error(ErrorCode::kInvalidArgument, "element outside the indexed ball");
  return static_cast<std::size_t>(it - P_.begin());
}

ElementSet theorem_b_generator(const BlueprintBundle& b) {
  // F_N = F_0 D_0^N, so A = F_0 would make S fill the whole window
  if (membership(b.group(), b.T(), b.group().identity())) return singleton(b.group(), b.group().identity());
  std::vector<GroupElement> v;
  for (const auto& f : b.F(0))
    if (membership(b.group(), b.T(), f)) v.push_back(f);
  return ElementSet(b.group(), std::move(v));
}

PatternPoint synthesize_minimal_in_T(const BlueprintBundle& b, const ElementSet& A) {
  const Group& G = b.group();
  const int N = b.depth();
  if (A.empty()) throw Error(ErrorCode::kInvalidArgument, "A must be nonempty");
  for (const auto& a : A) {
    if (!membership(G, b.T(), a)) throw Error(ErrorCode::kSubsetViolation, "A is not inside T at " + G.format(a));
    if (!b.F(0).contains(a)) throw Error(ErrorCode::kInvalidArgument, "A is not inside F_0 at " + G.format(a));
  }
  const ElementSet& FN = b.F(N);
  const ElementSet& D0 = b.D(0, N);
  std::vector<GroupElement> ainv;
  for (const auto& a : A) ainv.push_back(G.inverse(a));

  // W = ∩ a F_N; on W every a^-1 g lies in F_N where Delta_0 is known exactly
  std::vector<GroupElement> dom;
  for (const auto& f : FN) {
    GroupElement g = G.multiply(A[0], f);
    bool inside = true;
    for (const auto& ai : ainv)
      if (!FN.contains(G.multiply(ai, g))) {
        inside = false;
        break;
      }
    if (inside) dom.push_back(std::move(g));
  }
  ElementSet W(G, std::move(dom));
  std::vector<std::uint8_t> bits(W.size(), 0);
  for (std::size_t i = 0; i < W.size(); ++i)
    for (const auto& ai : ainv)
      if (D0.contains(G.multiply(ai, W[i]))) {
        bits[i] = 1;
        break;
      }
  for (std::size_t i = 0; i < W.size(); ++i)
    if (bits[i] && !membership(G, b.T(), W[i]))
      throw Error(ErrorCode::kInternalAxiomViolation, "synthesized S leaves T at " + G.format(W[i]));
  return PatternPoint(G, std::move(W), std::move(bits), Exactness::kExactOnWindow,
                      "S = A Delta_0 with Delta_0 ∩ F_N = D_0^N (uniformity at gamma = e, centeredness); "
                      "window = intersection of a F_N over a in A");
}

std::vector<ElementSet> pattern_windows(const Group& G, int radius, int max_size) {
  const auto P = ball(G, radius);
  if (P.size() > 64) throw Error(ErrorCode::kInvalidArgument, "pattern ball has more than 64 elements");
  std::vector<ElementSet> out;
  for (auto m : pattern_masks(P.size(), max_size)) {
    std::vector<GroupElement> v;
    for (std::size_t k = 0; k < P.size(); ++k)
      if (m >> k & 1) v.push_back(P[k]);
    out.emplace_back(G, std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------

bool MinimalityCertificate::all_certified() const {
  return std::all_of(patterns.begin(), patterns.end(), [](const auto& p) { return p.certified; });
}

double MinimalityCertificate::min_coverage() const {
  double c = 1.0;
  for (const auto& p : patterns) c = std::min(c, p.certified ? p.coverage : 0.0);
  return patterns.empty() ? 0.0 : c;
}

const PatternCertificate* MinimalityCertificate::find(const ElementSet& A) const {
  for (const auto& p : patterns)
    if (p.A == A) return &p;
  return nullptr;
}

json MinimalityCertificate::to_json(const Group& G) const {
  json arr = json::array();
  std::uint64_t ok = 0;
  for (const auto& p : patterns) {
    json j{{"A", set_to_json(G, p.A)},
           {"status", p.certified ? "CERTIFIED" : "UNCERTIFIED"},
           {"h_tried", p.h_tried}};
    if (p.certified) {
      ++ok;
      j["h"] = G.to_json(p.h);
      j["F_prefix"] = p.F_prefix;
      j["F_min"] = p.F_min;
      j["gap"] = p.gap;
      j["gap_min"] = p.gap_min;
      j["evaluated"] = p.evaluated;
      // fixed-point permille keeps the file float free
      j["coverage_permille"] = window_size ? p.evaluated * 1000 / window_size : 0;
    } else {
      j["reason"] = p.reason;
    }
    arr.push_back(std::move(j));
  }
  return json{{"pattern_radius", pattern_radius},
              {"window_size", window_size},
              {"certified", ok},
              {"patterns", arr}};
}

MinimalityCertificate certify_minimal(const PatternPoint& x, int pattern_radius, std::uint64_t search_budget,
                                      const CertifyOptions& opt) {
  const Group& G = x.group();
  const ElementSet& W = x.domain();
  const std::size_t n = W.size();
  if (x.exactness() != Exactness::kExactOnWindow)
    throw Error(ErrorCode::kInvalidArgument, "certify_minimal needs a point exact on its window");
  const auto P = ball(G, pattern_radius).elements();
  if (P.size() > 64) throw Error(ErrorCode::kInvalidArgument, "pattern ball has more than 64 elements");
  if (n < kWindowRatio * P.size())
    throw Error(ErrorCode::kWindowTooSmall, "window has " + std::to_string(n) + " elements, needs " +
                                                std::to_string(kWindowRatio * P.size()));
  const std::uint64_t Mmax = std::max<std::uint64_t>(1, std::min<std::uint64_t>(n / kWindowRatio, opt.max_F));
  const auto E = enumerate_prefix(G, Mmax).elements.elements();
  std::vector<int> prefix_len(E.size());
  for (std::size_t j = 0; j < E.size(); ++j)
    prefix_len[j] = std::max(j ? prefix_len[j - 1] : 0, G.length(E[j]));
  const auto H = enumerate_prefix(G, std::max<std::uint64_t>(search_budget, 1)).elements.elements();

  const auto masks = pattern_masks(P.size(), opt.max_pattern_size);
  MinimalityCertificate cert;
  cert.pattern_radius = pattern_radius;
  cert.window_size = n;
  for (auto m : masks) {
    PatternCertificate pc;
    std::vector<GroupElement> v;
    for (std::size_t k = 0; k < P.size(); ++k)
      if (m >> k & 1) v.push_back(P[k]);
    pc.A = ElementSet(G, std::move(v));
    cert.patterns.push_back(std::move(pc));
  }
  std::vector<std::size_t> pending(masks.size());
  for (std::size_t i = 0; i < pending.size(); ++i) pending[i] = i;

  std::vector<std::uint64_t> d(n), u(n);
  for (const auto& h : H) {
    if (pending.empty()) break;
    for (auto t : pending) ++cert.patterns[t].h_tried;

    std::vector<GroupElement> Ph;
    std::uint64_t refunk = 0;
    std::vector<std::uint8_t> ref(P.size(), 0);
    for (std::size_t k = 0; k < P.size(); ++k) {
      Ph.push_back(G.multiply(P[k], h));
      if (auto q = W.position(Ph.back())) ref[k] = x.bits()[*q];
      else refunk |= std::uint64_t{1} << k;
    }
    if (std::all_of(pending.begin(), pending.end(), [&](std::size_t t) { return (masks[t] & refunk) != 0; })) {
      for (auto t : pending)
        if (cert.patterns[t].reason.empty()) cert.patterns[t].reason = "a h outside the window for every h tried";
      continue;
    }
    // d: cells where x(p h y) != x(p h); u: cells outside the window
    parallel_chunks(n, opt.jobs, [&](std::size_t b, std::size_t e, int) {
      for (std::size_t i = b; i < e; ++i) {
        std::uint64_t dd = 0, uu = 0;
        for (std::size_t k = 0; k < P.size(); ++k) {
          auto q = W.position(G.multiply(Ph[k], W[i]));
          if (!q) uu |= std::uint64_t{1} << k;
          else if (x.bits()[*q] != ref[k]) dd |= std::uint64_t{1} << k;
        }
        d[i] = dd;
        u[i] = uu;
      }
    });

    std::vector<std::size_t> active, still;
    for (auto t : pending) {
      if (masks[t] & refunk) {
        if (cert.patterns[t].reason.empty()) cert.patterns[t].reason = "a h outside the window for every h tried";
        still.push_back(t);
      } else {
        active.push_back(t);
      }
    }
    const std::size_t K = active.size();
    if (K == 0) {
      pending = std::move(still);
      continue;
    }
    const std::size_t words = (K + 63) / 64;
    Bits full(words, ~std::uint64_t{0});
    if (K % 64) full.back() = (std::uint64_t{1} << (K % 64)) - 1;

    auto resolved_bits = [&](std::uint64_t dd, std::uint64_t uu) {
      Bits r(words, 0);
      for (std::size_t t = 0; t < K; ++t) {
        const auto m = masks[active[t]];
        if ((m & uu) || !(m & dd)) r[t / 64] |= std::uint64_t{1} << (t % 64);
      }
      return r;
    };

    // pass 1: lb(g, A) = first j whose state is a match or unknown
    const int T = std::max(opt.jobs, 1);
    std::vector<std::vector<Bits>> need(static_cast<std::size_t>(T));
    std::vector<Bits> over(static_cast<std::size_t>(T), Bits(words, 0));
    parallel_chunks(n, opt.jobs, [&](std::size_t b, std::size_t e, int w) {
      absl::flat_hash_map<std::pair<std::uint64_t, std::uint64_t>, Bits> cache;
      auto& nd = need[static_cast<std::size_t>(w)];
      Bits rem(words);
      for (std::size_t i = b; i < e; ++i) {
        rem = full;
        for (std::size_t j = 0;; ++j) {
          if (j == E.size()) {
            for (std::size_t q = 0; q < words; ++q) over[static_cast<std::size_t>(w)][q] |= rem[q];
            break;
          }
          if (nd.size() <= j) nd.emplace_back(words, 0);
          for (std::size_t q = 0; q < words; ++q) nd[j][q] |= rem[q];
          auto y = W.position(G.multiply(E[j], W[i]));
          if (!y) break;
          auto key = std::make_pair(d[*y], u[*y]);
          auto it = cache.find(key);
          if (it == cache.end()) it = cache.emplace(key, resolved_bits(key.first, key.second)).first;
          bool left = false;
          for (std::size_t q = 0; q < words; ++q) {
            rem[q] &= ~it->second[q];
            left |= rem[q] != 0;
          }
          if (!left) break;
        }
      }
    });
    std::vector<std::uint64_t> mstar(K, 0);
    Bits overflow(words, 0);
    for (const auto& o : over)
      for (std::size_t q = 0; q < words; ++q) overflow[q] |= o[q];
    for (const auto& nd : need)
      for (std::size_t j = 0; j < nd.size(); ++j)
        each_bit(nd[j], [&](std::size_t t) { mstar[t] = std::max<std::uint64_t>(mstar[t], j + 1); });

    // pass 2: coverage at checkpoint prefix lengths c >= 1. g counts for A at c
    // when some f among the first c has every a h f g in W and matching.
    std::vector<std::uint64_t> checkpoints;
    for (std::uint64_t c = 1; c <= E.size(); c = c < 8 ? c + 1 : c + c / 2) checkpoints.push_back(c);
    for (std::size_t t = 0; t < K; ++t)
      if (!(overflow[t / 64] >> (t % 64) & 1)) checkpoints.push_back(mstar[t]);
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    const std::size_t C = checkpoints.size();
    auto match_bits = [&](std::uint64_t dd, std::uint64_t uu) {
      Bits r(words, 0);
      for (std::size_t t = 0; t < K; ++t) {
        const auto m = masks[active[t]];
        if (!(m & uu) && !(m & dd)) r[t / 64] |= std::uint64_t{1} << (t % 64);
      }
      return r;
    };
    // badc[w][c * K + t]: g without a witness among the first checkpoints[c]
    std::vector<std::vector<std::uint64_t>> badc(static_cast<std::size_t>(T), std::vector<std::uint64_t>(C * K, 0));
    parallel_chunks(n, opt.jobs, [&](std::size_t b, std::size_t e, int w) {
      absl::flat_hash_map<std::pair<std::uint64_t, std::uint64_t>, Bits> cache;
      auto& bc = badc[static_cast<std::size_t>(w)];
      Bits good(words), bad(words);
      for (std::size_t i = b; i < e; ++i) {
        std::fill(good.begin(), good.end(), 0);
        std::size_t c = 0;
        bool done = false;
        for (std::size_t j = 0; c < C; ++j) {
          if (!done) {
            if (auto y = W.position(G.multiply(E[j], W[i]))) {
              auto key = std::make_pair(d[*y], u[*y]);
              auto it = cache.find(key);
              if (it == cache.end()) it = cache.emplace(key, match_bits(key.first, key.second)).first;
              done = true;
              for (std::size_t q = 0; q < words; ++q) {
                good[q] |= it->second[q];
                done &= good[q] == full[q];
              }
            }
          }
          if (done) break;
          while (c < C && checkpoints[c] == j + 1) {
            for (std::size_t q = 0; q < words; ++q) bad[q] = full[q] & ~good[q];
            each_bit(bad, [&](std::size_t t) { ++bc[c * K + t]; });
            ++c;
          }
        }
      }
    });

    for (std::size_t t = 0; t < K; ++t) {
      auto& pc = cert.patterns[active[t]];
      if (overflow[t / 64] >> (t % 64) & 1) {
        pc.reason = "no enumeration prefix F with |F| <= " + std::to_string(E.size()) + " (budget)";
        still.push_back(active[t]);
        continue;
      }
      // smallest checkpoint >= m* reaching the target, else the best one
      std::uint64_t best_m = 0, best_ev = 0;
      for (std::size_t c = 0; c < C; ++c) {
        if (checkpoints[c] < mstar[t]) continue;
        std::uint64_t bad = 0;
        for (const auto& bc : badc) bad += bc[c * K + t];
        const std::uint64_t ev = n - bad;
        if (best_m == 0 || ev > best_ev) {
          best_m = checkpoints[c];
          best_ev = ev;
        }
        if (static_cast<double>(ev) >= kTargetCoverage * static_cast<double>(n)) break;
      }
      const double cov = static_cast<double>(best_ev) / static_cast<double>(n);
      if (cov < kMinCertCoverage) {
        pc.reason = "coverage below " + std::to_string(static_cast<int>(kMinCertCoverage * 100)) + "% of the window";
        still.push_back(active[t]);
        continue;
      }
      pc.certified = true;
      pc.reason.clear();
      pc.h = h;
      pc.F_min = mstar[t];
      pc.F_prefix = best_m;
      pc.gap = prefix_len[best_m - 1];
      pc.gap_min = prefix_len[mstar[t] - 1];
      pc.evaluated = best_ev;
      pc.coverage = cov;
    }
    std::sort(still.begin(), still.end());
    pending = std::move(still);
  }
  return cert;
}

VerificationReport verify_minimality_certificate(const PatternPoint& x, const MinimalityCertificate& cert) {
  const Group& G = x.group();
  const ElementSet& W = x.domain();
  VerificationReport rep("minimality_certificate");
  auto& c = rep.add("for all evaluable g exists f in F for all a in A: x(a h f g) = x(a h)");
  auto& cnt = rep.add("evaluated counts match");
  for (const auto& pc : cert.patterns) {
    if (!pc.certified) continue;
    const auto F = enumerate_prefix(G, pc.F_prefix).elements;
    std::vector<std::pair<std::size_t, std::uint8_t>> ref;
    std::vector<GroupElement> ah;
    bool ref_ok = true;
    for (const auto& a : pc.A) {
      ah.push_back(G.multiply(a, pc.h));
      auto q = W.position(ah.back());
      if (!q) ref_ok = false;
      else ref.emplace_back(*q, x.bits()[*q]);
    }
    std::uint64_t ev = 0;
    if (ref_ok)
      for (const auto& g : W) {
        bool all_known = true, found = false;
        for (const auto& f : F) {
          const GroupElement fg = G.multiply(f, g);
          bool known = W.contains(fg), match = true;
          for (std::size_t k = 0; k < ah.size() && known; ++k) {
            auto q = W.position(G.multiply(ah[k], fg));
            if (!q) known = false;
            else if (x.bits()[*q] != ref[k].second) match = false;
          }
          all_known &= known;
          if (known && match) {
            found = true;
            break;
          }
        }
        if (found) ++ev;
        if (found || all_known) ++c.evaluated;
        if (!found && all_known) c.violate(json{{"A", set_to_json(G, pc.A)}, {"g", G.to_json(g)}});
      }
    ++cnt.evaluated;
    if (ev != pc.evaluated) cnt.violate(json{{"A", set_to_json(G, pc.A)}, {"recount", ev}, {"reported", pc.evaluated}});
  }
  return rep;
}

// ---------------------------------------------------------------------------

VerificationReport check_symmetrically_syndetic(const PointIndex& idx, const ElementSet& F1, const ElementSet& F2) {
  const PatternPoint& x = idx.point();
  const Group& G = x.group();
  const ElementSet& W = x.domain();
  VerificationReport rep("symmetrically_syndetic");
  auto& c = rep.add("pattern intersection syndetic on the window");

  for (const auto& [Fs, want] : {std::pair{&F1, 1}, std::pair{&F2, 0}})
    for (const auto& f : *Fs) {
      auto v = x.at(f);
      if (!v || static_cast<int>(*v) != want) {
        c.status = Status::kVacuous;
        c.note = want ? "F1 is not inside S on the window" : "F2 is not inside the complement of S on the window";
        return rep;
      }
    }

  std::vector<std::pair<std::size_t, std::uint8_t>> cells;
  for (const auto& f : F1) cells.emplace_back(idx.index_of(f), 1);
  for (const auto& f : F2) cells.emplace_back(idx.index_of(f), 0);
  const std::size_t n = W.size();
  std::vector<std::int8_t> state(n, -1);  // -1 outside region, 0 region, 1 in I
  std::uint64_t region = 0, hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool total = true, match = true;
    for (const auto& [k, v] : cells) {
      auto q = idx.pos(i, k);
      if (q < 0) {
        total = false;
        break;
      }
      if (idx.bit(q) != v) match = false;
    }
    if (!total) continue;
    ++region;
    state[i] = match ? 1 : 0;
    hits += match;
  }

  std::vector<int> dist(n, -1);
  std::deque<std::size_t> q;
  for (std::size_t i = 0; i < n; ++i)
    if (state[i] == 1) {
      dist[i] = 0;
      q.push_back(i);
    }
  // paths may leave the region: only the endpoints need complete data
  int radius = 0;
  std::uint64_t reached = 0;
  while (!q.empty()) {
    const auto i = q.front();
    q.pop_front();
    if (state[i] >= 0) {
      ++reached;
      radius = std::max(radius, dist[i]);
    }
    for (auto s : idx.generator_slots()) {
      auto j = idx.pos(i, s);
      if (j >= 0 && dist[static_cast<std::size_t>(j)] < 0) {
        dist[static_cast<std::size_t>(j)] = dist[i] + 1;
        q.push_back(static_cast<std::size_t>(j));
      }
    }
  }
  const bool all = region > 0 && reached == region;
  const std::uint64_t bsize = G.ball_size(radius);
  const bool finite = all && bsize <= region / kWindowRatio;
  c.evaluated = region;
  rep.stats["region_size"] = region;
  rep.stats["intersection_size"] = hits;
  rep.stats["covering_radius"] = all ? radius : max_length(G, W);
  rep.stats["reached_all"] = all;
  rep.stats["finite_gap"] = finite;
  if (!finite)
    c.violate(json{{"covering_radius", all ? radius : -1},
                   {"unreached", region - reached},
                   {"ball_size", bsize}});
  return rep;
}

VerificationReport check_symmetrically_syndetic(const PatternPoint& S, const ElementSet& F1, const ElementSet& F2) {
  int r = 1;
  for (const auto& F : {&F1, &F2}) r = std::max(r, max_length(S.group(), *F));
  PointIndex idx(S, r);
  return check_symmetrically_syndetic(idx, F1, F2);
}

VerificationReport check_symmetrically_syndetic(const Group& G, const SetExpr& S, const ElementSet& F1,
                                                const ElementSet& F2, const ElementSet& window) {
  std::vector<std::uint8_t> bits(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) bits[i] = membership(G, S, window[i]);
  PatternPoint x(G, window, std::move(bits), Exactness::kExactOnWindow, "membership on the window");
  return check_symmetrically_syndetic(x, F1, F2);
}

ElementSet extract_m_set(const PatternPoint& x) {
  return return_set(x, CylinderSpec::identity_one(x.group())).elements;
}

PatternPoint synthesize_periodic(const Group& G, const ElementSet& F, const std::vector<std::uint8_t>& phi,
                                 const FiniteIndexData& H, const ElementSet& window) {
  if (F.empty() || phi.size() != F.size()) throw Error(ErrorCode::kInvalidArgument, "phi must be total on F");
  absl::flat_hash_map<GroupElement, std::uint8_t> by_coset;
  for (std::size_t i = 0; i < F.size(); ++i) {
    auto [it, fresh] = by_coset.emplace(coset_representative(H, F[i]), phi[i] ? 1 : 0);
    if (!fresh) throw Error(ErrorCode::kCosetCollision, "H does not separate F at " + G.format(F[i]));
  }
  std::vector<std::uint8_t> bits(window.size(), 0);
  for (std::size_t i = 0; i < window.size(); ++i) {
    auto it = by_coset.find(coset_representative(H, window[i]));
    if (it != by_coset.end()) bits[i] = it->second;
  }
  return PatternPoint(G, window, std::move(bits), Exactness::kExactOnWindow,
                      "coset rule evaluated at every window element");
}

ResonatingPoint synthesize_resonating(const Group& G, const SetExpr& A, const SyndeticCertificate& cert,
                                      const ElementSet& Fn, const std::vector<std::uint8_t>& phi,
                                      const EnumerationWindow& window) {
  if (Fn.empty() || phi.size() != Fn.size()) throw Error(ErrorCode::kInvalidArgument, "phi must be total on F_n");
  auto sep = separated_syndetic_subset(G, A, cert, Fn, window);
  const ElementSet& W = window.elements;
  std::vector<std::uint8_t> bits(W.size(), 0);
  std::vector<GroupElement> bases = sep.B;
  bases.push_back(G.identity());
  for (const auto& b : bases)
    for (std::size_t i = 0; i < Fn.size(); ++i)
      if (auto q = W.position(G.multiply(Fn[i], b))) bits[*q] = phi[i] ? 1 : 0;
  PatternPoint x(G, W, std::move(bits), Exactness::kExactOnWindow, "F_n translates by B ∪ {e} written on the window");
  ElementSet B(G, sep.B);

  VerificationReport rep("resonating");
  rep.merge(sep.report);
  auto& c = rep.add("N(x, U[phi]) ⊇ B");
  const auto rs = return_set(x, CylinderSpec(G, Fn, phi));
  std::uint64_t outside = 0;
  for (const auto& b : bases) {
    if (!rs.completeness.contains(b)) {
      ++outside;
      continue;
    }
    ++c.evaluated;
    if (!rs.elements.contains(b)) c.violate(G.to_json(b));
  }
  c.note = std::to_string(outside) + " elements of B ∪ {e} have F_n b leaving the window";
  rep.stats["B_size"] = B.size();
  rep.stats["return_set_size"] = rs.elements.size();
  return ResonatingPoint{std::move(x), std::move(B), std::move(sep), std::move(rep)};
}

}  // namespace symdyn
