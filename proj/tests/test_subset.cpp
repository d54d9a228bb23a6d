#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "symdyn/error.hpp"
#include "symdyn/largeness.hpp"
#include "symdyn/set_expr.hpp"

using namespace testutil;

namespace {

SetExpr even(const Group& G) {
  return SetExpr::coset_union(FiniteIndexData::lattice(G, {{2}}), {z(G, 0)});
}

SetExpr mod3_nonzero(const Group& G) {
  return SetExpr::coset_union(FiniteIndexData::lattice(G, {{3}}), {z(G, 1), z(G, 2)});
}

SetExpr pow2(const Group&) { return SetExpr::sparse(SparseRule::kGeneratorPow2); }

bool is_pm_pow2(long v) {
  long a = v < 0 ? -v : v;
  return a > 0 && (a & (a - 1)) == 0;
}

// Raw re-evaluation of G = FS on a window, independent of the report code.
std::vector<GroupElement> raw_syndetic_failures(const Group& G, const SetExpr& S, const ElementSet& F,
                                                const ElementSet& W) {
  std::vector<GroupElement> bad;
  for (const auto& g : W) {
    bool hit = false;
    for (const auto& f : F) hit = hit || membership(G, S, G.multiply(G.inverse(f), g));
    if (!hit) bad.push_back(g);
  }
  return bad;
}

// A small random grammar over Z used by the property tests.
SetExpr random_expr(const Group& G, std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 7 : 3);
  std::uniform_int_distribution<int> small(-6, 6);
  switch (pick(rng)) {
    case 0: return SetExpr::full();
    case 1: {
      std::vector<GroupElement> v;
      for (int i = 0; i < 4; ++i) v.push_back(z(G, small(rng)));
      return SetExpr::finite(ElementSet(G, std::move(v)));
    }
    case 2: return pow2(G);
    case 3: {
      int m = 2 + (rng() % 3);
      return SetExpr::coset_union(FiniteIndexData::lattice(G, {{m}}), {z(G, static_cast<int>(rng() % m))});
    }
    case 4: return SetExpr::complement(random_expr(G, rng, depth - 1));
    case 5: return SetExpr::translate(z(G, small(rng)), random_expr(G, rng, depth - 1), Side::kRight);
    case 6: return SetExpr::union_of({random_expr(G, rng, depth - 1), random_expr(G, rng, depth - 1)});
    default: return SetExpr::intersection_of({random_expr(G, rng, depth - 1), random_expr(G, rng, depth - 1)});
  }
}

}  // namespace

TEST_CASE("membership examples") {
  auto G = Zd(1);
  CHECK(membership(G, even(G), z(G, 4)));
  CHECK_FALSE(membership(G, even(G), z(G, 3)));
  for (int g = -5; g <= 5; ++g) CHECK_FALSE(membership(G, SetExpr::complement(SetExpr::full()), z(G, g)));
  CHECK(membership(G, SetExpr::complement(pow2(G)), z(G, 33)));
  for (int g = -300; g <= 300; ++g) CHECK(membership(G, pow2(G), z(G, g)) == is_pm_pow2(g));
}

TEST_CASE("membership on Z2 and F2 generator powers") {
  auto G = Zd(2);
  CHECK(membership(G, pow2(G), z2(G, 0, -8)));
  CHECK(membership(G, pow2(G), z2(G, 4, 0)));
  CHECK_FALSE(membership(G, pow2(G), z2(G, 4, 4)));
  CHECK_FALSE(membership(G, pow2(G), z2(G, 3, 0)));
  auto F = Fk(2);
  CHECK(membership(F, pow2(F), el(F, "bbbb")));
  CHECK(membership(F, pow2(F), el(F, "A")));
  CHECK_FALSE(membership(F, pow2(F), el(F, "aaa")));
  CHECK_FALSE(membership(F, pow2(F), el(F, "ab")));
}

TEST_CASE("set expression JSON round trip") {
  auto G = Zd(1);
  std::mt19937 rng(7);
  for (int t = 0; t < 50; ++t) {
    auto e = random_expr(G, rng, 3);
    auto back = set_expr_from_json(G, set_expr_to_json(G, e));
    for (int g = -40; g <= 40; ++g) CHECK(membership(G, e, z(G, g)) == membership(G, back, z(G, g)));
  }
}

TEST_CASE("verify_right_syndetic examples") {
  auto G = Zd(1);
  auto W = enumerate_prefix(G, 101);
  CHECK(verify_right_syndetic(G, even(G), {zrange(G, 0, 1)}, W).overall() == Status::kPass);
  CHECK(verify_right_syndetic(G, mod3_nonzero(G), {zrange(G, 0, 1)}, W).overall() == Status::kPass);

  // {n >= 0} agrees with this finite set on everything f^-1 g reaches from the window
  auto nonneg = SetExpr::finite(zrange(G, 0, 60));
  auto rep = verify_right_syndetic(G, nonneg, {zrange(G, 0, 2)}, W);
  CHECK(rep.overall() == Status::kFail);
  const auto& c = rep.checks().front();
  CHECK(c.violations == 50);
  bool saw = false;
  for (const auto& w : c.witnesses) saw = saw || w == json::array({-3});
  CHECK(saw);
}

TEST_CASE("find_thick_translate examples") {
  auto G = Zd(1);
  CHECK(find_thick_translate(G, SetExpr::full(), zrange(G, -3, 3), {}) == G.identity());
  auto S = SetExpr::complement(pow2(G));
  for (auto strat : {ThickTranslateFinder::Strategy::kAuto, ThickTranslateFinder::Strategy::kScan}) {
    ThickTranslateFinder f;
    f.strategy = strat;
    CHECK(find_thick_translate(G, S, zrange(G, 0, 9), f) == z(G, 17));
  }
  ThickTranslateFinder small;
  small.budget = 20'000;
  try {
    find_thick_translate(G, even(G), zrange(G, 0, 1), small);
    FAIL("expected BudgetExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudgetExhausted);
  }
}

TEST_CASE("find_thick_translate agrees with a linear scan oracle") {
  auto G = Zd(1);
  auto S = SetExpr::complement(pow2(G));
  auto W = enumerate_prefix(G, 4001);
  for (int L = 0; L <= 12; ++L) {
    auto A = zrange(G, 0, L);
    GroupElement want;
    bool found = false;
    for (const auto& g : W.elements) {
      bool ok = true;
      for (const auto& a : A) ok = ok && membership(G, S, G.multiply(a, g));
      if (ok) {
        want = g;
        found = true;
        break;
      }
    }
    REQUIRE(found);
    CHECK(find_thick_translate(G, S, A, {}) == want);
  }
}

TEST_CASE("derive_thickly_syndetic_cert") {
  auto G = Zd(1);
  auto full = derive_thickly_syndetic_cert(G, SetExpr::full());
  auto w = full.for_set(zrange(G, 0, 4));
  CHECK(w.Q.kind() == SetExpr::Kind::kFull);
  CHECK(w.cert.F == singleton(G, G.identity()));

  CHECK_THROWS_AS(derive_thickly_syndetic_cert(G, even(G)), Error);
  try {
    derive_thickly_syndetic_cert(G, even(G));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotDerivable);
  }
}

TEST_CASE("thickly syndetic witness for Z minus powers of two") {
  auto G = Zd(1);
  auto S = SetExpr::complement(pow2(G));
  auto cert = derive_thickly_syndetic_cert(G, S);
  auto W = enumerate_prefix(G, 2001);
  for (int L : {0, 1, 3, 7}) {
    auto A = zrange(G, 0, L);
    auto w = cert.for_set(A);
    // A Q ⊆ S and G = F Q on the window
    for (const auto& g : W.elements)
      if (membership(G, w.Q, g))
        for (const auto& a : A) CHECK(membership(G, S, G.multiply(a, g)));
    CHECK(verify_right_syndetic(G, w.Q, w.cert, W).overall() == Status::kPass);
    // largest gap between run starts on the window is covered by |F|
    long prev = 0, gap = 0;
    bool first = true;
    for (int g = -1000; g <= 1000; ++g)
      if (membership(G, w.Q, z(G, g))) {
        if (!first) gap = std::max(gap, static_cast<long>(g) - prev);
        prev = g;
        first = false;
      }
    CHECK(gap <= static_cast<long>(max_length(G, w.cert.F)) * 2 + 1);
  }
}

TEST_CASE("check_piecewise_syndetic_window examples") {
  auto G = Zd(1);
  auto W = enumerate_prefix(G, 401);
  auto r1 = check_piecewise_syndetic_window(G, even(G), zrange(G, 0, 1), W, 4);
  CHECK(r1.overall() == Status::kPass);
  CHECK(r1.stats.at("largest_radius") == r1.stats.at("max_radius_tested"));

  auto r2 = check_piecewise_syndetic_window(G, pow2(G), zrange(G, 0, 1), W, 4);
  CHECK(r2.find("ball translates into FS")->status == Status::kFail);
  // oracle: longest run of consecutive integers in {±2^k} + {0,1}
  int run = 0, best = 0;
  for (int g = -200; g <= 200; ++g) {
    run = (is_pm_pow2(g) || is_pm_pow2(g - 1)) ? run + 1 : 0;
    best = std::max(best, run);
  }
  CHECK(r2.stats.at("largest_radius").get<int>() == (best - 1) / 2);
  CHECK(r2.stats.at("max_radius_tested").get<int>() > (best - 1) / 2);

  auto r3 = check_piecewise_syndetic_window(G, SetExpr::full(), singleton(G, G.identity()), W, 4);
  CHECK(r3.overall() == Status::kPass);
  CHECK(r3.find("meets thickly syndetic probes")->status == Status::kPass);
}

TEST_CASE("property: complement duality") {
  std::mt19937 rng(11);
  auto G = Zd(1);
  for (int t = 0; t < 200; ++t) {
    auto e = random_expr(G, rng, 3);
    auto c = SetExpr::complement(e);
    for (int g = -30; g <= 30; ++g) CHECK(membership(G, c, z(G, g)) == !membership(G, e, z(G, g)));
  }
}

TEST_CASE("property: syndetic reports agree with raw membership") {
  std::mt19937 rng(13);
  auto G = Zd(1);
  auto W = enumerate_prefix(G, 81);
  for (int t = 0; t < 150; ++t) {
    auto S = random_expr(G, rng, 2);
    auto F = zrange(G, 0, static_cast<int>(rng() % 4));
    auto rep = verify_right_syndetic(G, S, {F}, W);
    auto bad = raw_syndetic_failures(G, S, F, W.elements);
    CHECK((rep.overall() == Status::kPass) == bad.empty());
    CHECK(rep.total_violations() == bad.size());
  }
}

TEST_CASE("property: a FAIL persists on larger windows") {
  std::mt19937 rng(17);
  auto G = Zd(1);
  for (int t = 0; t < 100; ++t) {
    auto S = random_expr(G, rng, 2);
    auto F = zrange(G, 0, static_cast<int>(rng() % 3));
    bool failed = false;
    for (std::uint64_t n : {11u, 31u, 61u, 121u}) {
      bool fail = verify_right_syndetic(G, S, {F}, enumerate_prefix(G, n)).overall() == Status::kFail;
      if (failed) CHECK(fail);
      failed = failed || fail;
    }
  }
}

TEST_CASE("property: thick meets syndetic") {
  auto G = Zd(1);
  auto W = enumerate_prefix(G, 201);
  std::vector<std::pair<SetExpr, ElementSet>> syndetic = {
      {even(G), zrange(G, 0, 1)},
      {mod3_nonzero(G), zrange(G, 0, 1)},
      {SetExpr::coset_union(FiniteIndexData::lattice(G, {{5}}), {z(G, 3)}), zrange(G, 0, 4)},
      {SetExpr::full(), singleton(G, G.identity())},
  };
  std::vector<SetExpr> thick = {SetExpr::full(), SetExpr::complement(pow2(G)),
                                SetExpr::complement(SetExpr::finite(zrange(G, -20, 20)))};
  for (const auto& [S, F] : syndetic) {
    REQUIRE(verify_right_syndetic(G, S, {F}, W).overall() == Status::kPass);
    for (const auto& T : thick) {
      auto g = find_thick_translate(G, T, inverse_set(G, F), {});
      bool met = false;
      for (const auto& f : F) {
        auto s = G.multiply(G.inverse(f), g);
        met = met || (membership(G, S, s) && membership(G, T, s));
      }
      CHECK(met);
    }
  }
}
