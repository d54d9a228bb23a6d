#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "symdyn/error.hpp"
#include "symdyn/translates.hpp"

using namespace testutil;

namespace {

bool disjoint(const Group& G, const ElementSet& A, const GroupElement& b, const GroupElement& c) {
  auto x = product_set(G, A, singleton(G, b));
  auto y = product_set(G, A, singleton(G, c));
  for (const auto& v : x)
    if (y.contains(v)) return false;
  return true;
}

ElementSet from_mask(const Group& G, unsigned mask, int n) {
  std::vector<GroupElement> v;
  for (int i = 0; i < n; ++i)
    if (mask & (1u << i)) v.push_back(z(G, i));
  return ElementSet(G, std::move(v));
}

}  // namespace

TEST_CASE("greedy_independent_set on small graphs") {
  CHECK(greedy_independent_set(SimpleGraph(5)) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(greedy_independent_set(SimpleGraph::path(3)) == std::vector<std::size_t>{0, 2});
  CHECK(greedy_independent_set(SimpleGraph::complete(4)).size() == 1);
  CHECK(SimpleGraph::complete(4).max_degree() == 3);
}

TEST_CASE("property: greedy independent set size bound on random graphs") {
  std::mt19937 rng(5);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 1 + rng() % 30;
    SimpleGraph g(n);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (rng() % 4 == 0) g.add_edge(u, v);
    auto I = greedy_independent_set(g);
    for (std::size_t i = 0; i < I.size(); ++i)
      for (std::size_t j = i + 1; j < I.size(); ++j) CHECK_FALSE(g.adjacent(I[i], I[j]));
    CHECK(I.size() * (g.max_degree() + 1) >= n);
  }
}

TEST_CASE("translate graph degree bound") {
  auto G = Fk(2);
  auto A = ball(G, 1);
  auto B = ball(G, 3);
  TranslateGraph tg(G, A, std::vector<GroupElement>(B.begin(), B.end()));
  CHECK(tg.graph().max_degree() <= A.size() * A.size());
  for (std::size_t u = 0; u < tg.vertices().size(); ++u)
    for (auto v : tg.graph().neighbours(u)) {
      CHECK(v != u);
      CHECK(tg.graph().adjacent(v, u));
      CHECK_FALSE(disjoint(G, A, tg.vertices()[u], tg.vertices()[v]));
    }
}

TEST_CASE("disjoint_translates examples") {
  auto G = Zd(1);
  auto r = disjoint_translates(G, zrange(G, 0, 1), zrange(G, 0, 9), 2);
  CHECK(r.precondition_met);
  CHECK(fmt(G, r.elements) == std::vector<std::string>{"0", "2"});

  auto r2 = disjoint_translates(G, zrange(G, 0, 2), zrange(G, 0, 19), 2);
  REQUIRE(r2.elements.size() == 2);
  auto gap = r2.elements[1].data()[0] - r2.elements[0].data()[0];
  CHECK(std::abs(gap) >= 3);

  auto e = disjoint_translates(G, singleton(G, G.identity()), zrange(G, 5, 9), 4);
  CHECK(e.elements.size() == 4);

  auto short_b = disjoint_translates(G, zrange(G, 0, 1), zrange(G, 0, 3), 2);
  CHECK_FALSE(short_b.precondition_met);
  CHECK(short_b.elements.size() == 2);
}

TEST_CASE("property: disjoint_translates exhaustive over small A and B in Z") {
  auto G = Zd(1);
  std::uint64_t runs = 0;
  for (unsigned am = 1; am < (1u << 3); ++am) {
    auto A = from_mask(G, am, 3);
    const std::uint64_t a2 = A.size() * A.size() + 1;
    for (unsigned bm = 1; bm < (1u << 12); ++bm) {
      auto B = from_mask(G, bm, 12);
      const std::uint64_t n = B.size() / a2;
      if (n == 0) continue;
      auto r = disjoint_translates(G, A, B, n);
      CHECK(r.precondition_met);
      REQUIRE(r.elements.size() == n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(B.contains(r.elements[i]));
        for (std::size_t j = i + 1; j < n; ++j) CHECK(disjoint(G, A, r.elements[i], r.elements[j]));
      }
      ++runs;
    }
  }
  CHECK(runs > 1000);
}

TEST_CASE("separated_syndetic_subset examples") {
  auto G = Zd(1);
  auto W = enumerate_prefix(G, 41);
  auto threeZ = SetExpr::coset_union(FiniteIndexData::lattice(G, {{3}}), {z(G, 0)});
  auto s = separated_syndetic_subset(G, threeZ, {zrange(G, 0, 2)}, zrange(G, 0, 1), W);
  std::vector<std::string> want;
  for (int k = 1; 3 * k <= 20; ++k) {
    want.push_back(std::to_string(3 * k));
    want.push_back(std::to_string(-3 * k));
  }
  CHECK(fmt(G, s.B) == want);
  CHECK(s.report.overall() == Status::kPass);

  auto all = separated_syndetic_subset(G, SetExpr::full(), {singleton(G, G.identity())},
                                       singleton(G, G.identity()), W);
  CHECK(all.B.size() == 40);
  for (const auto& b : all.B) CHECK(b != G.identity());
}

TEST_CASE("separated_syndetic_subset EmptyResult") {
  auto G = Zd(1);
  auto W = enumerate_prefix(G, 11);
  try {
    separated_syndetic_subset(G, SetExpr::finite(zrange(G, 100, 101)), {zrange(G, 0, 1)}, zrange(G, 0, 1), W);
    FAIL("expected EmptyResult");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyResult);
  }
}

TEST_CASE("property: separation and certificate on several groups") {
  struct Case {
    Group G;
    SetExpr A;
    ElementSet E;
    ElementSet F;
  };
  auto Z2 = Zd(2);
  auto F2 = Fk(2);
  std::vector<Case> cases;
  cases.push_back({Z2, SetExpr::coset_union(FiniteIndexData::lattice(Z2, {{2, 0}, {0, 2}}), {z2(Z2, 0, 0)}),
                   elems(Z2, json::array({json::array({0, 0}), json::array({1, 0}), json::array({0, 1}),
                                          json::array({1, 1})})),
                   elems(Z2, json::array({json::array({0, 0}), json::array({1, 0})}))});
  cases.push_back({F2, SetExpr::full(), singleton(F2, F2.identity()), ball(F2, 1)});
  for (const auto& c : cases) {
    auto W = ball_window(c.G, 6);
    auto s = separated_syndetic_subset(c.G, c.A, {c.E}, c.F, W);
    CHECK(s.report.ok());
    std::vector<GroupElement> Be = s.B;
    Be.push_back(c.G.identity());
    for (std::size_t i = 0; i < Be.size(); ++i) {
      CHECK(membership(c.G, c.A, Be[i]));
      for (std::size_t j = i + 1; j < Be.size(); ++j) CHECK(disjoint(c.G, c.F, Be[i], Be[j]));
    }
  }
}
