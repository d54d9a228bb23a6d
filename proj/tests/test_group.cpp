#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "helpers.hpp"
#include "symdyn/cosets.hpp"
#include "symdyn/error.hpp"

using namespace testutil;

namespace {

// Independent oracle: normal-form word of a vector in Z^d with letters
// a1<...<ad<A1<...<Ad encoded as chars '0'+code.
std::string zd_word(const std::vector<int>& x) {
  const int d = static_cast<int>(x.size());
  std::string w;
  for (int i = 0; i < d; ++i) {
    char c = static_cast<char>('0' + (x[i] > 0 ? i : d + i));
    w.append(static_cast<std::size_t>(std::abs(x[i])), c);
  }
  return w;
}

std::vector<std::vector<int>> zd_oracle_order(int d, int r) {
  std::vector<std::vector<int>> pts;
  std::vector<int> cur(d, -r);
  while (true) {
    int len = 0;
    for (int v : cur) len += std::abs(v);
    if (len <= r) pts.push_back(cur);
    int i = 0;
    while (i < d && cur[i] == r) cur[i++] = -r;
    if (i == d) break;
    ++cur[i];
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    auto wa = zd_word(a), wb = zd_word(b);
    if (wa.size() != wb.size()) return wa.size() < wb.size();
    return wa < wb;
  });
  return pts;
}

// All reduced words over a<b<A<B by brute force over every string.
std::vector<std::string> f2_oracle_order(int r) {
  const std::string alphabet = "abAB";
  std::vector<std::string> all{""};
  std::vector<std::string> layer{""};
  for (int len = 1; len <= r; ++len) {
    std::vector<std::string> next;
    for (const auto& w : layer)
      for (char c : alphabet) next.push_back(w + c);
    layer = next;
    for (const auto& w : layer) {
      bool reduced = true;
      for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        char x = w[i], y = w[i + 1];
        if (x != y && std::tolower(x) == std::tolower(y)) reduced = false;
      }
      if (reduced) all.push_back(w);
    }
  }
  auto key = [&](const std::string& w) {
    std::string k;
    for (char c : w) k += static_cast<char>('0' + alphabet.find(c));
    return k;
  };
  std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return key(a) < key(b);
  });
  return all;
}

}  // namespace

TEST_CASE("multiply and inverse examples") {
  auto Z2 = Zd(2);
  CHECK(Z2.multiply(z2(Z2, 1, 2), z2(Z2, 3, -1)) == z2(Z2, 4, 1));
  auto F2 = Fk(2);
  CHECK(F2.format(F2.multiply(el(F2, "ab"), el(F2, "b^-1a"))) == "aa");
  CHECK(F2.multiply(el(F2, "ab"), el(F2, "B" "a")) == el(F2, "aa"));
  CHECK(F2.format(F2.inverse(el(F2, "ab"))) == "BA");
  CHECK(el(F2, "b\xE2\x81\xBB\xC2\xB9" "a\xE2\x81\xBB\xC2\xB9") == el(F2, "BA"));
  auto Z = Zd(1);
  CHECK(Z.inverse(z(Z, 5)) == z(Z, -5));
  Group C3(GroupSpec::cyclic(3));
  CHECK(C3.inverse(el(C3, 1)) == el(C3, 2));
  for (const auto& G : {Z, Z2, F2, C3}) {
    for (const auto& g : ball(G, 2)) {
      CHECK(G.multiply(g, G.identity()) == g);
      CHECK(G.multiply(g, G.inverse(g)) == G.identity());
    }
  }
}

TEST_CASE("mixed-group operands are rejected") {
  auto Z = Zd(1);
  auto Z2 = Zd(2);
  CHECK_THROWS_AS(Z.multiply(z(Z, 1), z2(Z2, 1, 0)), Error);
  try {
    Z.multiply(z(Z, 1), z2(Z2, 1, 0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMixedGroup);
  }
  // Two groups built from equal specs are the same group.
  auto Z_again = Zd(1);
  CHECK(Z.multiply(z(Z, 1), z(Z_again, 2)) == z(Z, 3));
}

TEST_CASE("enumeration prefixes") {
  auto Z = Zd(1);
  CHECK(fmt(Z, enumerate_prefix(Z, 5).elements) == std::vector<std::string>{"0", "1", "-1", "2", "-2"});
  auto F1 = Fk(1);
  CHECK(fmt(F1, enumerate_prefix(F1, 5).elements) == std::vector<std::string>{"e", "a", "A", "aa", "AA"});

  // Z^2 against the brute-force word-order oracle.
  auto Z2 = Zd(2);
  auto oracle = zd_oracle_order(2, 6);
  std::vector<GroupElement> cursor_order;
  EnumerationCursor cur(Z2);
  for (std::size_t i = 0; i < oracle.size(); ++i) cursor_order.push_back(*cur.next());
  for (std::size_t i = 0; i < oracle.size(); ++i)
    CHECK(cursor_order[i] == z2(Z2, oracle[i][0], oracle[i][1]));
  CHECK(fmt(Z2, std::vector<GroupElement>(cursor_order.begin(), cursor_order.begin() + 5)) ==
        std::vector<std::string>{"(0,0)", "(1,0)", "(0,1)", "(-1,0)", "(0,-1)"});

  auto Z3 = Zd(3);
  auto o3 = zd_oracle_order(3, 4);
  EnumerationCursor c3(Z3);
  for (const auto& p : o3) CHECK(*c3.next() == el(Z3, json(p)));

  auto F2 = Fk(2);
  auto of2 = f2_oracle_order(5);
  EnumerationCursor cf(F2);
  for (const auto& w : of2) CHECK(*cf.next() == el(F2, w));
}

TEST_CASE("prefixes are nested and balls are prefixes") {
  for (const auto& G : {Zd(1), Zd(2), Fk(2), Group(GroupSpec::product({GroupSpec::free_abelian(1),
                                                                        GroupSpec::cyclic(3)}))}) {
    auto small = enumerate_prefix(G, 20);
    auto big = enumerate_prefix(G, 60);
    EnumerationCursor c1(G);
    std::vector<GroupElement> seq;
    for (int i = 0; i < 60; ++i) seq.push_back(*c1.next());
    CHECK(seq[0] == G.identity());
    for (int i = 0; i < 20; ++i) CHECK(small.elements[i] == seq[i]);
    CHECK(is_subset(small.elements, big.elements));
    // ordered element sets reproduce cursor order
    for (int i = 0; i < 60; ++i) CHECK(big.elements[i] == seq[i]);
    for (int r = 0; r <= 3; ++r) {
      auto B = ball(G, r);
      CHECK(B.size() == G.ball_size(r));
      auto P = enumerate_prefix(G, B.size());
      CHECK(P.elements == B);
    }
  }
}

TEST_CASE("ball sizes") {
  auto F2 = Fk(2);
  std::vector<std::uint64_t> f2{1, 5, 17, 53, 161};
  for (int r = 0; r < 5; ++r) CHECK(F2.ball_size(r) == f2[r]);
  auto Z2 = Zd(2);
  for (int r = 0; r < 8; ++r) CHECK(Z2.ball_size(r) == static_cast<std::uint64_t>(2 * r * r + 2 * r + 1));
  auto Z3 = Zd(3);
  for (int r = 0; r < 6; ++r) CHECK(Z3.sphere(r).size() == Z3.sphere_size(r));
}

TEST_CASE("rank agrees with enumeration") {
  for (const auto& G : {Zd(1), Zd(2), Fk(2), Fk(3),
                        Group(GroupSpec::product({GroupSpec::free(1), GroupSpec::free_abelian(1)}))}) {
    EnumerationCursor cur(G);
    for (std::uint64_t i = 0; i < 400; ++i) {
      auto g = *cur.next();
      CHECK(G.rank(g, 100000) == i);
    }
  }
  auto Z2 = Zd(2);
  CHECK_THROWS_AS(Z2.rank(z2(Z2, 5000, 0), 1000), Error);
}

TEST_CASE("product_set examples") {
  auto Z = Zd(1);
  CHECK(product_set(Z, elems(Z, {0, 1}), elems(Z, {0, 2})) == elems(Z, {0, 1, 2, 3}));
  auto A = elems(Z, {3, -1, 7});
  CHECK(product_set(Z, A, singleton(Z, Z.identity())) == A);
  auto F2 = Fk(2);
  auto AB = elems(F2, {"a", "b"});
  auto P = product_set(F2, inverse_set(F2, AB), AB);
  // Oracle: expand the four products by hand.
  CHECK(P == elems(F2, {"", "Ab", "Ba"}));
  CHECK(fmt(F2, P) == std::vector<std::string>{"e", "Ab", "Ba"});
}

TEST_CASE("group laws on balls and random triples") {
  std::mt19937_64 rng(12345);
  for (const auto& G : {Zd(1), Zd(2), Fk(2), Group(GroupSpec::cyclic(5)),
                        Group(GroupSpec::product({GroupSpec::free_abelian(1), GroupSpec::cyclic(2)}))}) {
    auto B = ball(G, 4);
    const auto& v = B.elements();
    std::size_t bad = 0;
    for (const auto& a : v) {
      if (G.multiply(a, G.inverse(a)) != G.identity()) ++bad;
      if (G.multiply(G.identity(), a) != a) ++bad;
      for (const auto& b : v) {
        auto ab = G.multiply(a, b);
        for (const auto& c : v)
          if (G.multiply(ab, c) != G.multiply(a, G.multiply(b, c))) ++bad;
      }
    }
    CHECK(bad == 0);
    auto big = ball(G, 9).elements();
    std::uniform_int_distribution<std::size_t> pick(0, big.size() - 1);
    for (int t = 0; t < 10000; ++t) {
      const auto& a = big[pick(rng)];
      const auto& b = big[pick(rng)];
      const auto& c = big[pick(rng)];
      if (G.multiply(G.multiply(a, b), c) != G.multiply(a, G.multiply(b, c))) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("finite tables are validated") {
  CHECK_THROWS_AS(Group(GroupSpec::finite({{0, 1}, {1, 1}})), Error);
  CHECK_THROWS_AS(Group(GroupSpec::finite({{0, 1, 2}, {1, 2, 0}, {2, 1, 0}})), Error);
  Group C4(GroupSpec::cyclic(4));
  CHECK(C4.order() == 4);
  CHECK(fmt(C4, enumerate_prefix(C4, 10).elements) == std::vector<std::string>{"e", "#1", "#2", "#3"});
}

TEST_CASE("group spec json") {
  GroupSpec s = json::parse(R"({"kind":"free_abelian","rank":2})").get<GroupSpec>();
  CHECK(s == GroupSpec::free_abelian(2));
  CHECK(json(s).dump() == R"({"kind":"free_abelian","rank":2})");
  auto p = json::parse(R"({"kind":"product","factors":[{"kind":"free","rank":2},{"kind":"cyclic","order":3}]})")
               .get<GroupSpec>();
  Group P(p);
  CHECK(P.order() == 0);
  auto g = P.from_json(json::parse(R"(["ab", 2])"));
  CHECK(P.from_json(P.to_json(g)) == g);
  CHECK_THROWS_AS(json::parse(R"({"kind":"hyperbolic"})").get<GroupSpec>(), Error);
  CHECK_THROWS_AS(Fk(2).from_json("abc"), Error);
}

TEST_CASE("coset representatives") {
  auto Z = Zd(1);
  auto H3 = FiniteIndexData::lattice(Z, {{3}});
  CHECK(coset_representative(H3, z(Z, 7)) == z(Z, 1));
  CHECK(coset_representative(H3, z(Z, -7)) == z(Z, 2));
  CHECK(H3.index() == 3);
  auto Z2 = Zd(2);
  auto H = FiniteIndexData::lattice(Z2, {{2, 0}, {0, 1}});
  CHECK(coset_representative(H, z2(Z2, 5, 9)) == z2(Z2, 1, 0));
  auto F2 = Fk(2);
  auto C2 = GroupSpec::cyclic(2);
  auto Hf = FiniteIndexData::homomorphism(F2, C2, {1, 0});
  // "ab" maps to c, the coset of "a", the first element with image c.
  CHECK(coset_representative(Hf, el(F2, "ab")) == el(F2, "a"));
  CHECK(Hf.index() == 2);
  CHECK_THROWS_AS(FiniteIndexData::lattice(Z2, {{2, 0}, {4, 0}}), Error);
}

TEST_CASE("coset representatives are constant on cosets and separate them") {
  auto Z2 = Zd(2);
  auto Z = Zd(1);
  auto F2 = Fk(2);
  std::vector<FiniteIndexData> subgroups{
      FiniteIndexData::lattice(Z, {{1}}),          FiniteIndexData::lattice(Z, {{8}}),
      FiniteIndexData::lattice(Z2, {{2, 1}, {0, 2}}), FiniteIndexData::lattice(Z2, {{2, 0}, {0, 4}}),
      FiniteIndexData::lattice(Z2, {{1, 3}, {3, 1}}), FiniteIndexData::lattice(Z2, {{4, 2}, {2, 4}, {0, 2}}),
      FiniteIndexData::homomorphism(F2, GroupSpec::cyclic(2), {1, 1}),
      FiniteIndexData::homomorphism(F2, GroupSpec::cyclic(4), {1, 2}),
      // S3 as permutations: 0=e,1=(12),2=(13),3=(23),4=(123),5=(132)
      FiniteIndexData::homomorphism(
          F2,
          GroupSpec::finite({{0, 1, 2, 3, 4, 5},
                             {1, 0, 4, 5, 2, 3},
                             {2, 5, 0, 4, 3, 1},
                             {3, 4, 5, 0, 1, 2},
                             {4, 3, 1, 2, 5, 0},
                             {5, 2, 3, 1, 0, 4}}),
          {1, 4})};
  for (const auto& H : subgroups) {
    const Group& G = H.group();
    CHECK(H.index() <= 8);
    // ball(3) in Z is too small to meet all cosets of 8Z
    const bool line = G.spec().kind == GroupSpec::Kind::kFreeAbelian && G.spec().rank == 1;
    auto B = ball(G, line ? 8 : 3).elements();
    std::map<std::string, int> classes;
    for (const auto& a : B) classes[G.format(H.representative(a))]++;
    CHECK(classes.size() == H.index());
    // membership test of a*b^-1 in H is independent: it must have the identity's representative
    for (const auto& a : B)
      for (const auto& b : B) {
        bool same = H.representative(a) == H.representative(b);
        bool oracle = H.representative(G.multiply(a, G.inverse(b))) == H.representative(G.identity());
        CHECK(same == oracle);
      }
    CHECK(H.representatives().size() == H.index());
  }
}
