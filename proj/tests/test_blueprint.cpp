#include <doctest.h>

#include "helpers.hpp"
#include "symdyn/blueprint.hpp"
#include "symdyn/error.hpp"

using namespace testutil;

namespace {

SetExpr no_pow2() { return SetExpr::complement(SetExpr::sparse(SparseRule::kGeneratorPow2)); }

BlueprintBundle bundle(const Group& G, const SetExpr& T, int N) {
  return build_blueprint(build_growth_sequence(G, T, singleton(G, G.identity()), N));
}

// T_k^n by direct envelope check of every g in H_n.
ElementSet tkn_oracle(const Group& G, const SetExpr& T, const BlueprintBundle& b, const ElementSet& Hn, int k,
                      int n) {
  std::vector<GroupElement> out;
  for (const auto& g : Hn) {
    if (!membership(G, T, g)) continue;
    std::vector<GroupElement> cur{g};
    bool ok = true;
    for (int m = k + 1; m <= n - 1 && ok; ++m) {
      ElementHashSet next;
      for (const auto& x : cur)
        for (const auto& f : b.F(m))
          for (const auto& f2 : b.F(m)) next.insert(G.multiply(G.multiply(f, G.inverse(f2)), x));
      cur.assign(next.begin(), next.end());
    }
    for (const auto& x : cur) ok = ok && Hn.contains(x);
    if (ok) out.push_back(g);
  }
  return ElementSet(G, std::move(out));
}

}  // namespace

TEST_CASE("growth sequence with the lemma bound: Z, T=Full, A={0}, N=1") {
  auto G = Zd(1);
  GrowthOptions opt;
  opt.rule = GrowthRule::kLemmaBound;
  auto gs = build_growth_sequence(G, SetExpr::full(), singleton(G, G.identity()), 1, opt);
  CHECK(gs.level(1).k == 6);
  CHECK(gs.level(1).h == G.identity());
  CHECK(gs.H(1) == zrange(G, -2, 3));
  CHECK(verify_growth_sequence(gs).ok());
}

TEST_CASE("growth sequence: identity start, adaptive rule") {
  for (auto G : {Zd(1), Zd(2), Fk(2)}) {
    auto gs = build_growth_sequence(G, SetExpr::full(), singleton(G, G.identity()), 2);
    CHECK(gs.H(0) == singleton(G, G.identity()));
    auto rep = verify_growth_sequence(gs);
    CHECK(rep.ok());
    CHECK(rep.find("envelope (iii)")->violations == 0);
  }
}

TEST_CASE("growth sequence: T=2Z is not thick") {
  auto G = Zd(1);
  GrowthOptions opt;
  opt.scan_budget = 20'000;
  opt.symbolic_budget = 20'000;
  auto T = SetExpr::coset_union(FiniteIndexData::lattice(G, {{2}}), {z(G, 0)});
  try {
    build_growth_sequence(G, T, singleton(G, G.identity()), 2, opt);
    FAIL("expected ThicknessSearchFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kThicknessSearchFailed);
  }
}

TEST_CASE("growth sequence: level cap") {
  auto G = Zd(2);
  GrowthOptions opt;
  opt.max_level_size = 500;
  try {
    build_growth_sequence(G, SetExpr::full(), singleton(G, G.identity()), 3, opt);
    FAIL("expected DepthTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDepthTooLarge);
  }
}

TEST_CASE("blueprint basics on Z, T=Full, N=2") {
  auto G = Zd(1);
  auto b = bundle(G, SetExpr::full(), 2);
  CHECK(b.F(0) == b.growth().H(0));
  CHECK(b.F(0).contains(G.identity()));
  for (int k = 0; k <= 2; ++k) CHECK(b.D(k, k) == singleton(G, G.identity()));
  auto rep = verify_preblueprint(b);
  CHECK(rep.ok());
  CHECK(rep.total_violations() == 0);
  CHECK(rep.find("directed")->status == Status::kPartial);
  CHECK(b.construction_report().ok());
}

TEST_CASE("every small bundle verifies") {
  struct Case {
    Group G;
    SetExpr T;
    int N;
  };
  std::vector<Case> cases = {{Zd(1), no_pow2(), 2},
                             {Zd(1), SetExpr::complement(SetExpr::finite(zrange(Zd(1), 3, 7))), 2},
                             {Zd(2), SetExpr::full(), 2},
                             {Fk(2), SetExpr::full(), 2},
                             {Fk(2), no_pow2(), 1}};
  for (const auto& c : cases) {
    auto b = bundle(c.G, c.T, c.N);
    auto rep = verify_preblueprint(b);
    CHECK(rep.ok());
    CHECK(rep.total_violations() == 0);
    CHECK(rep.find("Claim 1: F_k D_k^n ⊆ F_n")->violations == 0);
    CHECK(rep.find("Claim 2: D_k^m D_m^n ⊆ D_k^n")->violations == 0);
    CHECK(rep.find("maximally disjoint within H_{n-1} ∩ T")->violations == 0);
    for (int n = 1; n <= c.N; ++n) {
      CHECK(b.delta(n - 1, n).size() >= 3);
      CHECK(b.delta(n - 1, n).contains(c.G.identity()));
    }
  }
}

TEST_CASE("mutated bundles fail the right conditions") {
  auto G = Zd(1);
  auto b = bundle(G, SetExpr::full(), 2);

  auto m1 = b;
  auto& F1 = m1.F_mut()[1];
  std::vector<GroupElement> v(F1.begin(), F1.end());
  v.pop_back();
  F1 = ElementSet(G, std::move(v));
  CHECK(verify_preblueprint(m1).find("(vi) F_n = U F_k delta_k^n")->status == Status::kFail);

  auto m2 = b;
  auto& d = m2.delta_mut()[1][0];
  std::vector<GroupElement> w;
  for (const auto& x : d)
    if (x != G.identity()) w.push_back(x);
  d = ElementSet(G, std::move(w));
  m2.rebuild_D();
  CHECK(verify_preblueprint(m2).find("(i) e in delta_{n-1}^n")->status == Status::kFail);
}

TEST_CASE("compute_Tkn") {
  auto G = Zd(1);
  auto b = bundle(G, SetExpr::full(), 2);
  std::vector<ElementSet> F{b.F(0), b.F(1)};
  const auto& H2 = b.growth().H(2);
  CHECK(compute_Tkn(G, SetExpr::full(), F, H2, 1, 2) == H2);
  auto t02 = compute_Tkn(G, SetExpr::full(), F, H2, 0, 2);
  CHECK(t02 == tkn_oracle(G, SetExpr::full(), b, H2, 0, 2));
  CHECK(t02.size() < H2.size());

  // all F_i = {e}
  std::vector<ElementSet> E(2, singleton(G, G.identity()));
  CHECK(compute_Tkn(G, SetExpr::full(), E, H2, 0, 2) == H2);

  auto T = no_pow2();
  auto bt = bundle(G, T, 2);
  std::vector<ElementSet> Ft{bt.F(0), bt.F(1)};
  const auto& H2t = bt.growth().H(2);
  CHECK(compute_Tkn(G, T, Ft, H2t, 0, 2) == tkn_oracle(G, T, bt, H2t, 0, 2));
}

TEST_CASE("stability under deeper rebuilds") {
  for (auto G : {Zd(1), Zd(2), Fk(2)}) {
    auto b1 = bundle(G, SetExpr::full(), 1);
    auto b2 = bundle(G, SetExpr::full(), 2);
    CHECK(b1.F(0) == b2.F(0));
    CHECK(b1.F(1) == b2.F(1));
    CHECK(b1.delta(0, 1) == b2.delta(0, 1));
  }
  auto G = Zd(1);
  auto b2 = bundle(G, no_pow2(), 2);
  auto b3 = bundle(G, no_pow2(), 3);
  for (int n = 0; n <= 2; ++n) CHECK(b2.F(n) == b3.F(n));
  for (int n = 1; n <= 2; ++n)
    for (int k = 0; k < n; ++k) CHECK(b2.delta(k, n) == b3.delta(k, n));
}

TEST_CASE("delta_window") {
  auto G = Zd(1);
  auto b = bundle(G, no_pow2(), 2);
  CHECK(delta_window(b, 2).elements == singleton(G, G.identity()));
  for (int k = 0; k <= 2; ++k) CHECK(delta_window(b, k).elements.contains(G.identity()));
  // D_k^M = D_k^N ∩ F_M
  for (int M = 0; M <= 2; ++M)
    for (int k = 0; k <= M; ++k) {
      std::vector<GroupElement> cut;
      for (const auto& x : b.D(k, 2))
        if (b.F(M).contains(x)) cut.push_back(x);
      CHECK(b.D(k, M) == ElementSet(G, std::move(cut)));
    }
}

TEST_CASE("verify_blueprint_syndetic") {
  auto G = Zd(1);
  auto b = bundle(G, SetExpr::full(), 2);
  auto cert = derive_thickly_syndetic_cert(G, SetExpr::full());
  auto W = enumerate_prefix(G, 41);
  auto ok = verify_blueprint_syndetic(b, 0, W, cert);
  CHECK(ok.overall() == Status::kPass);
  CHECK(verify_blueprint_syndetic(b, 2, W, cert).overall() == Status::kSkipped);
  CHECK_THROWS_AS(verify_blueprint_syndetic(b, 0, W, std::nullopt), Error);

  auto thin = b;
  thin.D_mut()[2][0] = singleton(G, G.identity());
  auto bad = verify_blueprint_syndetic(thin, 0, W, cert);
  CHECK(bad.overall() == Status::kFail);
  CHECK_FALSE(bad.checks().front().witnesses.empty());
}

TEST_CASE("bundle JSON is stable") {
  auto G = Fk(2);
  auto a = bundle(G, SetExpr::full(), 1).to_json().dump();
  auto b = bundle(G, SetExpr::full(), 1).to_json().dump();
  CHECK(a == b);
}
