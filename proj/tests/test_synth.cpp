#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "symdyn/error.hpp"
#include "symdyn/synth.hpp"

using namespace testutil;

namespace {

PatternPoint point_from(const Group& G, const ElementSet& W, const std::function<int(const GroupElement&)>& f) {
  std::vector<std::uint8_t> bits;
  for (const auto& g : W) bits.push_back(static_cast<std::uint8_t>(f(g)));
  return PatternPoint(G, W, std::move(bits));
}

long zval(const GroupElement& g) { return g.data()[0]; }

BlueprintBundle bundle(const Group& G, const SetExpr& T, int N) {
  ElementSet A(G, std::vector<GroupElement>{G.identity(), G.generators()[0]});
  return build_blueprint(build_growth_sequence(G, T, A, N));
}

// Brute-force check of one certified entry: every g for which some f in F has
// all products inside the window must have a matching f; every g where all f
// are evaluable and none matches is a violation.
std::uint64_t oracle_violations(const PatternPoint& x, const PatternCertificate& pc) {
  const Group& G = x.group();
  auto F = enumerate_prefix(G, pc.F_prefix).elements;
  std::uint64_t bad = 0;
  for (const auto& g : x.domain()) {
    bool all_evaluable = true, some_match = false;
    for (const auto& f : F) {
      bool ev = true, match = true;
      for (const auto& a : pc.A) {
        auto ah = G.multiply(a, pc.h);
        auto u = x.at(G.multiply(G.multiply(ah, f), g));
        auto v = x.at(ah);
        if (!u || !v) {
          ev = false;
          break;
        }
        match = match && *u == *v;
      }
      all_evaluable = all_evaluable && ev;
      some_match = some_match || (ev && match);
    }
    if (all_evaluable && !some_match) ++bad;
  }
  return bad;
}

}  // namespace

TEST_CASE("certify_minimal: parity point") {
  auto G = Zd(1);
  auto W = enumerate_prefix(G, 401).elements;
  auto x = point_from(G, W, [](const GroupElement& g) { return std::abs(zval(g)) % 2; });
  auto cert = certify_minimal(x, 2, 16);
  CHECK(cert.patterns.size() == 30);
  CHECK(cert.all_certified());
  CHECK(cert.min_coverage() >= kTargetCoverage);
  for (const auto& pc : cert.patterns) {
    CHECK(pc.h == G.identity());
    CHECK(pc.F_min == 2);
    CHECK(enumerate_prefix(G, pc.F_min).elements == zrange(G, 0, 1));
    CHECK(oracle_violations(x, pc) == 0);
  }
  CHECK(verify_minimality_certificate(x, cert).ok());
}

TEST_CASE("certify_minimal: constant point and a non-recurrent point") {
  auto G = Zd(1);
  auto W = enumerate_prefix(G, 301).elements;
  auto one = point_from(G, W, [](const GroupElement&) { return 1; });
  auto c1 = certify_minimal(one, 2, 4);
  CHECK(c1.all_certified());
  for (const auto& pc : c1.patterns) CHECK(pc.F_min == 1);

  auto step = point_from(G, W, [](const GroupElement& g) { return zval(g) >= 0; });
  auto c2 = certify_minimal(step, 2, 64);
  auto* p0 = c2.find(singleton(G, G.identity()));
  REQUIRE(p0);
  CHECK_FALSE(p0->certified);
  CHECK_FALSE(c2.all_certified());
}

TEST_CASE("certify_minimal: window too small") {
  auto G = Zd(2);
  auto W = ball(G, 3);
  auto x = point_from(G, W, [](const GroupElement&) { return 0; });
  try {
    certify_minimal(x, 2, 4);
    FAIL("expected WindowTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kWindowTooSmall);
  }
}

TEST_CASE("property: certificates agree with brute force on random periodic points") {
  std::mt19937 rng(29);
  auto G = Zd(1);
  auto W = enumerate_prefix(G, 201).elements;
  for (int t = 0; t < 12; ++t) {
    int p = 1 + static_cast<int>(rng() % 5);
    std::vector<int> word(p);
    for (auto& b : word) b = static_cast<int>(rng() & 1);
    auto x = point_from(G, W, [&](const GroupElement& g) { return word[((zval(g) % p) + p) % p]; });
    auto cert = certify_minimal(x, 1, 8);
    CHECK(cert.all_certified());
    for (const auto& pc : cert.patterns) {
      CHECK(oracle_violations(x, pc) == 0);
      CHECK(pc.F_min <= static_cast<std::uint64_t>(2 * p + 1));
    }
    CHECK(verify_minimality_certificate(x, cert).ok());
  }
}

TEST_CASE("Theorem B synthesis on Z, T=Full, depth 2") {
  auto G = Zd(1);
  auto b = bundle(G, SetExpr::full(), 2);
  auto A = theorem_b_generator(b);
  CHECK(A == singleton(G, G.identity()));
  auto x = synthesize_minimal_in_T(b, A);
  CHECK(x.domain() == b.F(2));
  CHECK(x.ones() == delta_window(b, 0).elements);
  CHECK(*x.at(G.identity()) == 1);
  CHECK(extract_m_set(x) == x.ones());
}

TEST_CASE("Theorem B synthesis keeps S inside T") {
  auto G = Zd(1);
  auto T = SetExpr::complement(SetExpr::sparse(SparseRule::kGeneratorPow2));
  auto b = bundle(G, T, 2);
  auto A = theorem_b_generator(b);
  CHECK(A == singleton(G, G.identity()));
  auto x = synthesize_minimal_in_T(b, A);
  for (const auto& g : x.ones()) CHECK(membership(G, T, g));
  // window = ∩ a F_N
  for (const auto& g : x.domain())
    for (const auto& a : A) CHECK(b.F(2).contains(G.multiply(G.inverse(a), g)));
  // bit = 1 iff a^-1 g ∈ D_0^N for some a
  for (const auto& g : x.domain()) {
    bool want = false;
    for (const auto& a : A) want = want || b.D(0, 2).contains(G.multiply(G.inverse(a), g));
    CHECK(*x.at(g) == want);
  }
  CHECK(extract_m_set(x) == x.ones());

  try {
    synthesize_minimal_in_T(b, singleton(G, z(G, 1)));
    FAIL("expected SubsetViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSubsetViolation);
  }
}

TEST_CASE("Theorem B generator when e is outside T") {
  auto G = Zd(1);
  auto T = SetExpr::complement(SetExpr::finite(singleton(G, G.identity())));
  auto b = bundle(G, T, 2);
  auto A = theorem_b_generator(b);
  CHECK(A == singleton(G, z(G, 1)));
  auto x = synthesize_minimal_in_T(b, A);
  CHECK_FALSE(x.ones().empty());
  for (const auto& g : x.ones()) CHECK(membership(G, T, g));
  CHECK_FALSE(*x.at(z(G, 1)) == 0);
}

TEST_CASE("Theorem B output certifies and is symmetrically syndetic on Z") {
  auto G = Zd(1);
  auto b = bundle(G, SetExpr::full(), 2);
  auto x = synthesize_minimal_in_T(b, theorem_b_generator(b));
  auto cert = certify_minimal(x, 1, 64);
  CHECK(cert.all_certified());
  PointIndex idx(x, 1);
  for (const auto& Aw : pattern_windows(G, 1, 3)) {
    std::vector<GroupElement> f1, f2;
    for (const auto& a : Aw) (*x.at(a) ? f1 : f2).push_back(a);
    auto rep = check_symmetrically_syndetic(idx, ElementSet(G, f1), ElementSet(G, f2));
    CHECK(rep.overall() == Status::kPass);
  }
}

TEST_CASE("check_symmetrically_syndetic examples") {
  auto G = Zd(1);
  auto even = SetExpr::coset_union(FiniteIndexData::lattice(G, {{2}}), {z(G, 0)});
  auto W = zrange(G, -100, 100);
  auto rep = check_symmetrically_syndetic(G, even, singleton(G, z(G, 0)), singleton(G, z(G, 1)), W);
  CHECK(rep.overall() == Status::kPass);
  CHECK(rep.stats.at("covering_radius") == 1);
  CHECK(rep.stats.at("intersection_size") == 100);

  auto vac = check_symmetrically_syndetic(G, even, singleton(G, z(G, 1)), singleton(G, z(G, 0)), W);
  CHECK(vac.overall() == Status::kVacuous);

  auto step = SetExpr::finite(zrange(G, 0, 200));
  auto bad = check_symmetrically_syndetic(G, step, singleton(G, z(G, 0)), singleton(G, z(G, -1)), W);
  CHECK(bad.overall() == Status::kFail);
}

TEST_CASE("extract_m_set") {
  auto G = Zd(2);
  auto W = ball(G, 5);
  auto zero = point_from(G, W, [](const GroupElement&) { return 0; });
  CHECK(extract_m_set(zero).empty());
  std::mt19937 rng(31);
  for (int t = 0; t < 10; ++t) {
    auto x = point_from(G, W, [&](const GroupElement&) { return static_cast<int>(rng() & 1); });
    CHECK(extract_m_set(x) == x.ones());
    CHECK(extract_m_set(x) == return_set(x, CylinderSpec::identity_one(G)).elements);
  }
}

TEST_CASE("synthesize_periodic") {
  auto G = Zd(2);
  auto H = FiniteIndexData::lattice(G, {{2, 0}, {0, 1}});
  auto F = elems(G, json::array({json::array({0, 0}), json::array({1, 0})}));
  auto W = ball(G, 6);
  auto x = synthesize_periodic(G, F, {1, 0}, H, W);
  for (const auto& g : W) CHECK(*x.at(g) == (std::abs(g.data()[0]) % 2 == 0));
  // invariant under H on common windows
  for (const auto& h : {z2(G, 2, 0), z2(G, 0, 1)}) {
    auto y = shift(h, x);
    for (const auto& g : y.domain())
      if (auto v = x.at(g)) CHECK(*v == *y.at(g));
  }

  auto Z = Zd(1);
  auto all = synthesize_periodic(Z, singleton(Z, Z.identity()), {1}, FiniteIndexData::lattice(Z, {{1}}),
                                 zrange(Z, -5, 5));
  CHECK(all.ones().size() == 11);
  try {
    synthesize_periodic(Z, zrange(Z, 0, 1), {1, 0}, FiniteIndexData::lattice(Z, {{1}}), zrange(Z, -5, 5));
    FAIL("expected CosetCollision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCosetCollision);
  }
}

TEST_CASE("synthesize_resonating on 3Z") {
  auto G = Zd(1);
  auto A = SetExpr::coset_union(FiniteIndexData::lattice(G, {{3}}), {z(G, 0)});
  auto W = enumerate_prefix(G, 61);
  auto r = synthesize_resonating(G, A, {zrange(G, 0, 2)}, zrange(G, 0, 1), {1, 1}, W);
  CHECK(r.report.ok());
  // 11-blocks at every b in B ∪ {0}, zeros elsewhere
  ElementHashSet ones;
  std::vector<GroupElement> bases(r.B.begin(), r.B.end());
  bases.push_back(G.identity());
  for (const auto& b : bases)
    for (int f = 0; f <= 1; ++f) ones.insert(G.multiply(z(G, f), b));
  for (const auto& g : W.elements) CHECK(*r.x.at(g) == ones.contains(g));
  auto rs = return_set(r.x, CylinderSpec(G, zrange(G, 0, 1), {1, 1}));
  for (const auto& b : bases)
    if (rs.completeness.contains(b)) CHECK(rs.elements.contains(b));
  CHECK(rs.elements.contains(G.identity()));
}

TEST_CASE("minimality certificate JSON") {
  auto G = Zd(1);
  auto W = enumerate_prefix(G, 201).elements;
  auto x = point_from(G, W, [](const GroupElement& g) { return std::abs(zval(g)) % 3 == 0; });
  auto a = certify_minimal(x, 1, 8).to_json(G).dump();
  CertifyOptions opt;
  opt.jobs = 3;
  auto b = certify_minimal(x, 1, 8, opt).to_json(G).dump();
  CHECK(a == b);
}
