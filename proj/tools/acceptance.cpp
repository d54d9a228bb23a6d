// Acceptance gate: one PASS/FAIL line per criterion on stdout, per-instance
// detail on stderr. Usage: symdyn_acceptance <path-to-symdyn-cli> <scratch-dir>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "symdyn/blueprint.hpp"
#include "symdyn/error.hpp"
#include "symdyn/largeness.hpp"
#include "symdyn/pipeline.hpp"
#include "symdyn/shift.hpp"
#include "symdyn/translates.hpp"

using namespace symdyn;
namespace fs = std::filesystem;

namespace {

// Pinned limits.
constexpr double kBlueprintSeconds = 60.0;
constexpr double kTheoremBSeconds = 120.0;
constexpr double kCoverage = 0.95;
constexpr std::uint64_t kLevelCap = 8'000'000;
constexpr int kPatternRadius = 2;
constexpr int kPatternMaxSize = 4;
constexpr int kSymsynMaxSize = 3;
constexpr int kPeriodicInstances = 20;
constexpr std::uint64_t kMaxIndex = 8;
constexpr int kResonatingInstances = 20;
constexpr int kFuzzPairs = 200;
constexpr int kReruns = 10;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fixed(double v, int digits = 1) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(digits);
  o << v;
  return o.str();
}

struct Verdict {
  bool pass = true;
  std::string detail;
  double seconds = 0;
};

void print(int id, const Verdict& v) {
  std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << "  " << v.detail << "  [" << fixed(v.seconds)
            << " s]" << std::endl;
}

// ---------------------------------------------------------------------------
// corpus

struct CorpusPair {
  std::string name;
  GroupSpec spec;
  std::string set_name;
  int depth;
};

SetExpr corpus_set(const Group& G, const std::string& which) {
  if (which == "Full") return SetExpr::full();
  if (which == "Sparse") return SetExpr::complement(SetExpr::sparse(SparseRule::kGeneratorPow2));
  // five elements of the enumeration prefix, avoiding e and the first generators
  auto p = enumerate_prefix(G, 8).elements;
  std::vector<GroupElement> v(p.begin() + 3, p.end());
  return SetExpr::complement(SetExpr::finite(ElementSet(G, std::move(v))));
}

std::vector<CorpusPair> corpus() {
  std::vector<CorpusPair> out;
  const std::vector<std::pair<std::string, GroupSpec>> groups = {
      {"Z", GroupSpec::free_abelian(1)}, {"Z2", GroupSpec::free_abelian(2)}, {"F2", GroupSpec::free(2)}};
  for (const auto& [gname, spec] : groups)
    for (const std::string s : {"Full", "Finite", "Sparse"})
      out.push_back({gname + "/" + s, spec, s, spec.kind == GroupSpec::Kind::kFree ? 2 : 3});
  return out;
}

struct CorpusResults {
  Verdict c1, c2, c5;
  int ok1 = 0, ok2 = 0, ok5 = 0;
  std::uint64_t symsyn_finite = 0, symsyn_nonvacuous = 0, incoherent = 0;
};

void fail(Verdict& v, const std::string& why) {
  v.pass = false;
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += why;
}

CorpusResults run_corpus() {
  CorpusResults r;
  const auto pairs = corpus();
  for (const auto& cp : pairs) {
    Group G(cp.spec);
    const auto T = corpus_set(G, cp.set_name);
    std::cerr << "[corpus] " << cp.name << " depth " << cp.depth << std::endl;

    // 1: construction + preblueprint report (build_blueprint runs verify_preblueprint)
    auto t0 = Clock::now();
    std::optional<BlueprintBundle> b;
    try {
      GrowthOptions o;
      o.max_level_size = kLevelCap;
      auto gs = build_growth_sequence(G, T, default_growth_seed(G), cp.depth, o);
      b.emplace(build_blueprint(gs));
    } catch (const Error& e) {
      const double s = seconds_since(t0);
      r.c1.seconds += s;
      std::cerr << "  construction failed after " << fixed(s) << " s: " << e.what() << std::endl;
      fail(r.c1, cp.name + " " + std::string(to_string(e.code())));
      fail(r.c2, cp.name + " no bundle");
      fail(r.c5, cp.name + " no bundle");
      continue;
    }
    const double s1 = seconds_since(t0);
    r.c1.seconds += s1;
    const auto& prep = b->construction_report();
    std::cerr << "  blueprint " << fixed(s1) << " s, |F_N| = " << b->F(b->depth()).size()
              << ", violations " << prep.total_violations() << ", " << to_string(prep.overall()) << std::endl;
    bool ok1 = prep.total_violations() == 0 && !has_failure(prep);
    if (!ok1) fail(r.c1, cp.name + " " + std::to_string(prep.total_violations()) + " violations");
    if (s1 > kBlueprintSeconds) {
      ok1 = false;
      fail(r.c1, cp.name + " took " + fixed(s1) + " s");
    }
    r.ok1 += ok1;

    // 2: Theorem B output on the bundle from 1
    t0 = Clock::now();
    MinimalParams mp;
    mp.pattern_radius = kPatternRadius;
    mp.max_pattern_size = kPatternMaxSize;
    mp.symmetric_syndetic = false;
    mp.symsyn_max_size = kSymsynMaxSize;
    auto m = analyze_minimal(*b, mp);
    const double s2 = seconds_since(t0);
    r.c2.seconds += s2;
    std::uint64_t certified = 0;
    for (const auto& pc : m.certificate.patterns) certified += pc.certified;
    std::cerr << "  theorem B " << fixed(s2) << " s, window " << m.x.domain().size() << ", certified " << certified
              << "/" << m.certificate.patterns.size() << ", min coverage " << fixed(m.certificate.min_coverage(), 4)
              << std::endl;
    bool ok2 = true;
    for (const auto& c : m.report.checks()) {
      std::cerr << "    " << c.name << ": " << to_string(c.status) << " (" << c.violations << "/" << c.evaluated << ")"
                << std::endl;
      if (c.status == Status::kFail) {
        ok2 = false;
        fail(r.c2, cp.name + " " + c.name);
      }
    }
    for (const auto& pc : m.certificate.patterns)
      if (pc.certified && pc.coverage < kCoverage) ok2 = false;  // also in the report; pinned here
    if (s2 > kTheoremBSeconds) {
      ok2 = false;
      fail(r.c2, cp.name + " took " + fixed(s2) + " s");
    }
    r.ok2 += ok2;

    // 5: symmetric syndeticity on the same output
    t0 = Clock::now();
    symmetric_syndetic_sweep(m, mp);
    r.c5.seconds += seconds_since(t0);
    const auto* fin = m.report.find("symmetric syndeticity: finite gap");
    const std::uint64_t nonvac = fin ? fin->evaluated : 0;
    r.symsyn_finite += m.symsyn_finite;
    r.symsyn_nonvacuous += nonvac;
    r.incoherent += m.incoherent;
    std::cerr << "  symmetric syndeticity: finite " << m.symsyn_finite << "/" << nonvac << ", vacuous "
              << m.symsyn_vacuous << ", incoherent " << m.incoherent << std::endl;
    const bool ok5 = m.symsyn_finite == nonvac && m.incoherent == 0;
    if (!ok5)
      fail(r.c5, cp.name + " finite " + std::to_string(m.symsyn_finite) + "/" + std::to_string(nonvac) +
                     ", incoherent " + std::to_string(m.incoherent));
    r.ok5 += ok5;
  }
  const std::string n = std::to_string(pairs.size());
  r.c1.detail = std::to_string(r.ok1) + "/" + n + " pairs" + (r.c1.detail.empty() ? "" : ": " + r.c1.detail);
  r.c2.detail = std::to_string(r.ok2) + "/" + n + " pairs" + (r.c2.detail.empty() ? "" : ": " + r.c2.detail);
  r.c5.detail = std::to_string(r.ok5) + "/" + n + " pairs, finite " + std::to_string(r.symsyn_finite) + "/" +
                std::to_string(r.symsyn_nonvacuous) + ", incoherent " + std::to_string(r.incoherent) +
                (r.c5.detail.empty() ? "" : ": " + r.c5.detail);
  return r;
}

// ---------------------------------------------------------------------------
// 3: disjoint_translates against brute force

ElementSet z_mask(const Group& G, unsigned mask, int bits) {
  std::vector<GroupElement> v;
  for (int i = 0; i < bits; ++i)
    if (mask >> i & 1u) v.push_back(G.from_json(json::array({i})));
  return ElementSet(G, std::move(v));
}

bool translates_disjoint(const Group& G, const ElementSet& A, const GroupElement& b1, const GroupElement& b2) {
  return !intersects(translate_right(G, A, b1), translate_right(G, A, b2));
}

Verdict criterion3() {
  Verdict v;
  const auto t0 = Clock::now();
  Group G(GroupSpec::free_abelian(1));
  std::uint64_t cases = 0, mismatches = 0;
  for (unsigned am = 1; am < (1u << 3); ++am) {
    const auto A = z_mask(G, am, 3);
    const std::uint64_t need = A.size() * A.size() + 1;
    for (unsigned bm = 1; bm < (1u << 12); ++bm) {
      const auto B = z_mask(G, bm, 12);
      for (std::uint64_t n = 1; n <= 2; ++n) {
        if (B.size() < n * need) continue;
        ++cases;
        // oracle: some n-subset of B with pairwise disjoint translates
        bool exists = n == 1;
        for (std::size_t i = 0; i < B.size() && !exists; ++i)
          for (std::size_t j = i + 1; j < B.size() && !exists; ++j) exists = translates_disjoint(G, A, B[i], B[j]);
        auto out = disjoint_translates(G, A, B, n);
        bool good = exists && out.precondition_met && out.elements.size() == n;
        for (std::size_t i = 0; i < out.elements.size() && good; ++i) {
          good = B.contains(out.elements[i]);
          for (std::size_t j = i + 1; j < out.elements.size() && good; ++j)
            good = translates_disjoint(G, A, out.elements[i], out.elements[j]);
        }
        mismatches += !good;
      }
    }
  }
  v.pass = mismatches == 0;
  v.detail = std::to_string(cases) + " cases, " + std::to_string(mismatches) + " mismatches";
  v.seconds = seconds_since(t0);
  return v;
}

// ---------------------------------------------------------------------------
// 4: compute_Tkn against the envelope definition

ElementSet tkn_brute(const Group& G, const SetExpr& T, const BlueprintBundle& b, const ElementSet& Hn, int k, int n) {
  std::vector<ElementSet> diff;  // F_m F_m^-1 for m = k+1 .. n-1
  for (int m = k + 1; m <= n - 1; ++m) diff.push_back(product_set(G, b.F(m), inverse_set(G, b.F(m))));
  const ElementHashSet H(Hn.begin(), Hn.end());
  std::vector<GroupElement> out;
  for (const auto& g : Hn) {
    if (!membership(G, T, g)) continue;
    ElementHashSet cur{g};
    bool ok = true;
    // D_{k+1} acts first. Every D contains e, so a partial product already
    // leaving H_n settles the answer.
    for (auto it = diff.begin(); it != diff.end() && ok; ++it) {
      ElementHashSet next;
      for (const auto& x : cur)
        for (const auto& d : *it) {
          auto y = G.multiply(d, x);
          if (!H.contains(y)) {
            ok = false;
            break;
          }
          next.insert(std::move(y));
        }
      cur = std::move(next);
    }
    if (ok) out.push_back(g);
  }
  return ElementSet(G, std::move(out));
}

Verdict criterion4() {
  Verdict v;
  const auto t0 = Clock::now();
  // (spec, set, depth, seed {e} instead of {e, first generator})
  std::vector<std::tuple<GroupSpec, std::string, int, bool>> list;
  for (const auto& spec : {GroupSpec::free_abelian(1), GroupSpec::free_abelian(2), GroupSpec::free(2)})
    for (const std::string s : {"Full", "Finite", "Sparse"}) list.emplace_back(spec, s, 2, false);
  // depth 3 envelopes cost |H_3| |D_1| |D_2|, out of reach for brute force
  list.emplace_back(GroupSpec::free_abelian(2), "Sparse", 2, true);
  int bundles = 0, matched = 0;
  std::uint64_t pairs = 0;
  for (const auto& [spec, s, depth, identity_seed] : list) {
    Group G(spec);
    const auto T = corpus_set(G, s);
    try {
      const auto seed = identity_seed ? singleton(G, G.identity()) : default_growth_seed(G);
      auto b = build_blueprint(build_growth_sequence(G, T, seed, depth));
      ++bundles;
      std::vector<ElementSet> F;
      for (int i = 0; i <= depth; ++i) F.push_back(b.F(i));
      bool all = true;
      for (int n = 1; n <= depth; ++n) {
        const auto& Hn = b.growth().H(n);
        std::vector<ElementSet> Fpre(F.begin(), F.begin() + n);
        for (int k = 0; k < n; ++k) {
          ++pairs;
          all = all && compute_Tkn(G, T, Fpre, Hn, k, n) == tkn_brute(G, T, b, Hn, k, n);
        }
      }
      std::cerr << "[tkn] " << json(spec).dump() << " " << s << " depth " << depth << ": |H_N| "
                << b.growth().H(depth).size() << (all ? " match" : " MISMATCH") << " at "
                << fixed(seconds_since(t0)) << " s" << std::endl;
      matched += all;
      if (!all) fail(v, s + " depth " + std::to_string(depth) + " mismatch");
    } catch (const Error& e) {
      fail(v, s + ": " + e.what());
    }
  }
  v.pass = v.pass && bundles == 10 && matched == 10;
  v.detail = std::to_string(matched) + "/" + std::to_string(bundles) + " bundles match over " + std::to_string(pairs) +
             " (k, n)" + (v.detail.empty() ? "" : ": " + v.detail);
  v.seconds = seconds_since(t0);
  return v;
}

// ---------------------------------------------------------------------------
// 6: periodic synthesis

Verdict criterion6() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937 rng(6);
  Group Z(GroupSpec::free_abelian(1)), Z2(GroupSpec::free_abelian(2));
  std::vector<FiniteIndexData> subgroups;
  for (int m = 1; m <= 8; ++m) subgroups.push_back(FiniteIndexData::lattice(Z, {{m}}));
  subgroups.push_back(FiniteIndexData::lattice(Z, {{6}}));
  subgroups.push_back(FiniteIndexData::lattice(Z, {{4}}));
  for (const auto& rows : std::vector<std::vector<std::vector<std::int64_t>>>{{{1, 0}, {0, 1}},
                                                                             {{2, 0}, {0, 1}},
                                                                             {{1, 0}, {0, 2}},
                                                                             {{2, 0}, {0, 2}},
                                                                             {{2, 1}, {0, 2}},
                                                                             {{3, 1}, {0, 2}},
                                                                             {{1, 0}, {0, 5}},
                                                                             {{7, 0}, {0, 1}},
                                                                             {{4, 0}, {0, 2}},
                                                                             {{2, 1}, {0, 4}}})
    subgroups.push_back(FiniteIndexData::lattice(Z2, rows));

  int ok = 0;
  for (const auto& H : subgroups) {
    const Group& G = H.group();
    if (H.index() > kMaxIndex) {
      fail(v, "index above bound in the instance list");
      continue;
    }
    // F: up to 4 ball(2) elements in distinct cosets, random skips
    std::vector<GroupElement> F;
    std::vector<std::uint8_t> phi;
    for (const auto& g : ball(G, 2)) {
      if (F.size() >= 4 || rng() % 3 == 0) continue;
      bool fresh = true;
      for (const auto& f : F) fresh = fresh && !H.same_coset(f, g);
      if (!fresh) continue;
      F.push_back(g);
      phi.push_back(rng() & 1);
    }
    ElementSet Fs(G, F);
    std::vector<std::uint8_t> phis;  // phi follows the canonical order of Fs
    for (const auto& f : Fs) phis.push_back(phi[std::find(F.begin(), F.end(), f) - F.begin()]);
    try {
      auto a = analyze_periodic(G, Fs, phis, H, PeriodicParams{});
      int gap = 0;
      for (const auto& pc : a.certificate.patterns) gap = std::max(gap, pc.gap_min);
      std::cerr << "[periodic] " << H.to_json().dump() << " |F| " << Fs.size() << ": orbit " << a.orbit_size
                << ", certified " << a.certificate.all_certified() << ", gap " << gap << " <= " << a.gap_bound
                << std::endl;
      if (has_failure(a.report)) {
        for (const auto& c : a.report.checks())
          if (c.status == Status::kFail) fail(v, H.to_json()["basis"].dump() + " " + c.name);
        continue;
      }
      ++ok;
    } catch (const Error& e) {
      fail(v, H.to_json()["basis"].dump() + ": " + e.what());
    }
  }
  v.pass = ok == kPeriodicInstances && static_cast<int>(subgroups.size()) == kPeriodicInstances;
  v.detail = std::to_string(ok) + "/" + std::to_string(subgroups.size()) + " instances" +
             (v.detail.empty() ? "" : ": " + v.detail);
  v.seconds = seconds_since(t0);
  return v;
}

// ---------------------------------------------------------------------------
// 7: resonating points

Verdict criterion7() {
  Verdict v;
  const auto t0 = Clock::now();
  Group G(GroupSpec::free_abelian(1));
  auto zs = [&](std::vector<int> xs) {
    std::vector<GroupElement> out;
    for (int x : xs) out.push_back(G.from_json(json::array({x})));
    return ElementSet(G, std::move(out));
  };
  const std::vector<std::pair<std::string, SetExpr>> As = {
      {"2Z", SetExpr::coset_union(FiniteIndexData::lattice(G, {{2}}), {G.identity()})},
      {"3Z", SetExpr::coset_union(FiniteIndexData::lattice(G, {{3}}), {G.identity()})},
      {"5Z+1", SetExpr::coset_union(FiniteIndexData::lattice(G, {{5}}), {G.from_json(json::array({1}))})}};
  const std::vector<std::vector<int>> Fs = {{0}, {0, 1}, {-1, 0, 1}, {0, 2}, {0, 1, 2}, {-2, 0, 3}, {0, 1, 2, 3}};
  std::mt19937 rng(7);
  const auto W = enumerate_prefix(G, 400);
  int instances = 0, ok = 0;
  std::uint64_t checked = 0, boundary = 0;
  for (int i = 0; instances < kResonatingInstances; ++i) {
    const auto& [name, A] = As[i % As.size()];
    const auto F = zs(Fs[i % Fs.size()]);
    std::vector<std::uint8_t> phi;
    for (std::size_t j = 0; j < F.size(); ++j) phi.push_back(rng() & 1);
    phi[0] = 1;  // keep the cylinder nontrivial on at least one cell
    ++instances;
    try {
      auto cert = syndetic_certificate_for(G, A, W);
      auto r = synthesize_resonating(G, A, cert, F, phi, W);
      // independent recomputation of N(x, U[phi]); b with F b leaving the
      // window carry no data and are counted apart
      auto rs = return_set(r.x, CylinderSpec(G, F, phi));
      std::uint64_t missing = 0, edge = 0;
      for (const auto& b : r.B) {
        if (!rs.completeness.contains(b)) {
          ++edge;
          continue;
        }
        ++checked;
        if (!rs.elements.contains(b)) ++missing;
      }
      const bool good = missing == 0 && !r.B.empty() && !has_failure(r.report);
      boundary += edge;
      std::cerr << "[resonating] " << name << " F " << set_to_json(G, F).dump() << ": |B| " << r.B.size()
                << ", checked " << r.B.size() - edge << ", missing " << missing << std::endl;
      ok += good;
      if (!good) fail(v, name + " F=" + set_to_json(G, F).dump());
    } catch (const Error& e) {
      fail(v, name + ": " + e.what());
    }
  }
  v.pass = ok == kResonatingInstances;
  v.detail = std::to_string(ok) + "/" + std::to_string(instances) + " instances, " + std::to_string(checked) +
             " elements of B checked, " + std::to_string(boundary) + " at the window edge" +
             (v.detail.empty() ? "" : ": " + v.detail);
  v.seconds = seconds_since(t0);
  return v;
}

// ---------------------------------------------------------------------------
// 8: thick meets syndetic

Verdict criterion8() {
  Verdict v;
  const auto t0 = Clock::now();
  int pairs = 0, violations = 0;
  struct Family {
    GroupSpec spec;
    int syndetic, thick;
  };
  // 80 + 64 + 56 = 200 pairs
  const std::vector<Family> families = {
      {GroupSpec::free_abelian(1), 10, 8}, {GroupSpec::free_abelian(2), 8, 8}, {GroupSpec::free(2), 7, 8}};
  for (const auto& fam : families) {
    Group G(fam.spec);
    const auto W = enumerate_prefix(G, 2000);
    const auto prefix = enumerate_prefix(G, 40).elements;
    const int d = fam.spec.kind == GroupSpec::Kind::kFree ? 0 : fam.spec.rank;

    std::vector<SetExpr> S;
    auto coset = [&](FiniteIndexData H, std::size_t rep) {
      return SetExpr::coset_union(H, {H.representatives()[rep % H.representatives().size()]});
    };
    std::vector<FiniteIndexData> Hs;
    if (d == 1)
      for (int m : {2, 3, 4, 5, 7}) Hs.push_back(FiniteIndexData::lattice(G, {{m}}));
    else if (d == 2)
      for (auto rows : std::vector<std::vector<std::vector<std::int64_t>>>{
               {{2, 0}, {0, 1}}, {{2, 1}, {0, 2}}, {{3, 0}, {0, 2}}, {{1, 0}, {0, 4}}})
        Hs.push_back(FiniteIndexData::lattice(G, rows));
    else {
      // kernels of maps onto Z/2 and Z/3 given by generator images
      Hs.push_back(FiniteIndexData::homomorphism(G, GroupSpec::cyclic(2), {1, 1}));
      Hs.push_back(FiniteIndexData::homomorphism(G, GroupSpec::cyclic(3), {1, 2}));
      Hs.push_back(FiniteIndexData::homomorphism(G, GroupSpec::cyclic(2), {1, 0}));
    }
    for (std::size_t i = 0; static_cast<int>(S.size()) < fam.syndetic - 2; ++i) S.push_back(coset(Hs[i % Hs.size()], i / Hs.size()));
    S.push_back(SetExpr::full());
    S.push_back(SetExpr::complement(SetExpr::finite(ElementSet(G, std::vector<GroupElement>(prefix.begin(), prefix.begin() + 7)))));

    std::vector<SetExpr> T;
    T.push_back(SetExpr::full());
    T.push_back(SetExpr::complement(SetExpr::sparse(SparseRule::kGeneratorPow2)));
    T.push_back(SetExpr::complement(SetExpr::sparse(SparseRule::kIndexPow2)));
    for (std::size_t n : {5u, 17u, 40u})
      T.push_back(SetExpr::complement(SetExpr::finite(ElementSet(G, std::vector<GroupElement>(prefix.begin(), prefix.begin() + n)))));
    T.push_back(SetExpr::translate(prefix[3], SetExpr::complement(SetExpr::finite(ElementSet(G, std::vector<GroupElement>(prefix.begin(), prefix.begin() + 20)))), Side::kRight));
    T.push_back(SetExpr::union_of({SetExpr::complement(SetExpr::sparse(SparseRule::kGeneratorPow2)), S.front()}));

    for (int i = 0; i < fam.syndetic; ++i) {
      SyndeticCertificate cert;
      try {
        cert = syndetic_certificate_for(G, S[i], W);
      } catch (const Error& e) {
        violations += fam.thick;
        pairs += fam.thick;
        fail(v, "no syndetic certificate: " + std::string(e.what()));
        continue;
      }
      if (verify_right_syndetic(G, S[i], cert, W).overall() != Status::kPass) fail(v, "certificate fails on window");
      for (int j = 0; j < fam.thick; ++j) {
        ++pairs;
        try {
          auto g = find_thick_translate(G, T[j], inverse_set(G, cert.F), {});
          // witness: first f in F with f^-1 g in S
          std::optional<GroupElement> w;
          for (const auto& f : cert.F) {
            auto s = G.multiply(G.inverse(f), g);
            if (membership(G, S[i], s)) {
              w = s;
              break;
            }
          }
          if (!w || !membership(G, T[j], *w)) ++violations;
        } catch (const Error& e) {
          ++violations;
          fail(v, std::string("thick search: ") + e.what());
        }
      }
    }
  }
  v.pass = v.pass && violations == 0 && pairs == kFuzzPairs;
  v.detail = std::to_string(pairs) + " pairs, " + std::to_string(violations) + " violations" +
             (v.detail.empty() ? "" : ": " + v.detail);
  v.seconds = seconds_since(t0);
  return v;
}

// ---------------------------------------------------------------------------
// 9: CLI determinism

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f << s;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// file name -> sha256, manifests without the wall clock
std::map<std::string, std::string> digest_dir(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& sub : fs::recursive_directory_iterator(dir)) {
    if (!sub.is_regular_file()) continue;
    const auto rel = fs::relative(sub.path(), dir).string();
    auto bytes = read_bytes(sub.path());
    if (sub.path().filename() == "manifest.json") {
      auto j = json::parse(bytes);
      j.erase("wall_clock_ms");
      bytes = j.dump();
    }
    out[rel] = sha256_hex(bytes);
  }
  return out;
}

Verdict criterion9(const std::string& cli, const fs::path& scratch) {
  Verdict v;
  const auto t0 = Clock::now();
  fs::remove_all(scratch);
  fs::create_directories(scratch / "in");
  const auto in = scratch / "in";
  write_text(in / "z.json", R"({"kind":"free_abelian","rank":1})");
  write_text(in / "z2.json", R"({"kind":"free_abelian","rank":2})");
  write_text(in / "f2.json", R"({"kind":"free","rank":2})");
  write_text(in / "no_pow2.json", R"({"kind":"complement","of":{"kind":"sparse","rule":"generator_pow2"}})");
  write_text(in / "two_z.json",
             R"({"kind":"coset_union","subgroup":{"kind":"lattice","basis":[[2]]},"cosets":[[0]]})");
  write_text(in / "periodic.json",
             R"({"F":[[0,0],[1,0],[0,1]],"phi":[1,0,1],"subgroup":{"kind":"lattice","basis":[[2,1],[0,2]]}})");
  write_text(in / "resonating.json",
             R"({"A":{"kind":"coset_union","subgroup":{"kind":"lattice","basis":[[3]]},"cosets":[[0]]},"F":[[0],[1]],"phi":[1,0]})");

  const auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"classify", "set-classify " + q(in / "z.json") + " " + q(in / "two_z.json")},
      {"blueprint", "blueprint " + q(in / "z.json") + " " + q(in / "no_pow2.json") + " --depth 2"},
      {"minimal_z", "synth minimal " + q(in / "z.json") + " " + q(in / "no_pow2.json") + " --depth 2 --format text"},
      {"minimal_f2", "synth minimal " + q(in / "f2.json") + " " + q(in / "no_pow2.json") + " --depth 2 --jobs 2"},
      {"periodic", "synth periodic " + q(in / "z2.json") + " " + q(in / "periodic.json") + " --format bitmap"},
      {"resonating", "synth resonating " + q(in / "z.json") + " " + q(in / "resonating.json") + " --window 600"},
  };
  std::map<std::string, std::string> reference;
  int identical = 0;
  for (int i = 0; i < kReruns; ++i) {
    const auto dir = scratch / ("run" + std::to_string(i));
    bool ok = true;
    for (const auto& [name, args] : runs) {
      const std::string cmd = q(cli) + " " + args + " --out " + q(dir / name) + " > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      if (rc == -1 || !fs::exists(dir / name / "manifest.json")) {
        ok = false;
        fail(v, "run " + std::to_string(i) + " " + name + " produced no manifest");
      }
    }
    auto d = digest_dir(dir);
    if (i == 0) reference = d;
    ok = ok && !d.empty() && d == reference;
    identical += ok;
  }
  v.pass = v.pass && identical == kReruns;
  v.detail = std::to_string(identical) + "/" + std::to_string(kReruns) + " reruns identical over " +
             std::to_string(reference.size()) + " files" + (v.detail.empty() ? "" : ": " + v.detail);
  v.seconds = seconds_since(t0);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: symdyn_acceptance <symdyn-cli> <scratch-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path scratch = argv[2];

  std::map<int, Verdict> v;
  auto note = [](int id, const Verdict& r) {
    std::cerr << "criterion " << id << " done: " << (r.pass ? "PASS" : "FAIL") << std::endl;
  };
  v[3] = criterion3();
  note(3, v[3]);
  v[4] = criterion4();
  note(4, v[4]);
  v[6] = criterion6();
  note(6, v[6]);
  v[7] = criterion7();
  note(7, v[7]);
  v[8] = criterion8();
  note(8, v[8]);
  v[9] = criterion9(cli, scratch);
  note(9, v[9]);
  auto c = run_corpus();
  v[1] = c.c1;
  v[2] = c.c2;
  v[5] = c.c5;

  int passed = 0;
  for (const auto& [id, verdict] : v) {
    print(id, verdict);
    passed += verdict.pass;
  }
  std::cout << passed << "/9 criteria pass" << std::endl;
  return passed == 9 ? 0 : 1;
}
