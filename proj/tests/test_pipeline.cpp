#include <doctest.h>

#include <functional>
#include <regex>
#include <sstream>

#include "helpers.hpp"
#include "symdyn/error.hpp"
#include "symdyn/pipeline.hpp"

using namespace testutil;

namespace {

PatternPoint point_on(const Group& G, const ElementSet& W, const std::function<int(const GroupElement&)>& f) {
  std::vector<std::uint8_t> bits;
  for (const auto& g : W) bits.push_back(static_cast<std::uint8_t>(f(g)));
  return PatternPoint(G, W, std::move(bits));
}

SetExpr coset(const Group& G, std::int64_t m, int r) {
  return SetExpr::coset_union(FiniteIndexData::lattice(G, {{m}}), {z(G, r)});
}

json classes(const RunOutput& out) { return json::parse(out.files.at("classify.json"))["classes"]; }

std::string status(const json& classes, const char* name) { return classes[name]["status"].get<std::string>(); }

// Any JSON number with a fractional part or exponent.
bool has_float(const json& j) {
  if (j.is_number_float()) return true;
  if (j.is_structured())
    for (const auto& v : j)
      if (has_float(v)) return true;
  return false;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorCode::kParse) == 1);
  CHECK(exit_code_for(ErrorCode::kUnsupportedGroup) == 1);
  CHECK(exit_code_for(ErrorCode::kThicknessSearchFailed) == 2);
  CHECK(exit_code_for(ErrorCode::kDepthTooLarge) == 2);
  CHECK(exit_code_for(ErrorCode::kWindowTooSmall) == 2);
  CHECK(exit_code_for(ErrorCode::kInternalAxiomViolation) == 3);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("export formats") {
  auto G = Zd(1);
  std::vector<GroupElement> v{z(G, -2), z(G, 0), z(G, 1), z(G, 3)};
  auto x = point_on(G, ElementSet(G, v), [](const GroupElement& g) { return g.data()[0] >= 1; });
  CHECK(export_point(x, Format::kText) == "# Z window [-2, 3]\n0.01.1\n");
  CHECK(export_point(x, Format::kBitmap) == export_point(x, Format::kText));
  CHECK(PatternPoint::from_json(json::parse(export_point(x, Format::kJson))) == x);

  auto Z2 = Zd(2);
  auto y = point_on(Z2, ball(Z2, 1), [](const GroupElement& g) { return g.data()[0] == 0; });
  CHECK(export_point(y, Format::kBitmap) ==
        "# Z^2 window x in [-1, 1], y in [-1, 1], rows y descending\n.1.\n010\n.1.\n");

  auto F2 = Fk(2);
  auto w = point_on(F2, ball(F2, 1), [&](const GroupElement& g) { return F2.length(g); });
  CHECK(export_point(w, Format::kText) == "e 0\na 1\nb 1\nA 1\nB 1\n");
  CHECK_THROWS_AS(export_point(w, Format::kBitmap), Error);
  CHECK_THROWS_AS(parse_format("png"), Error);
}

TEST_CASE("set-classify examples") {
  auto G = Zd(1);
  auto even = classes(run_set_classify(G, coset(G, 2, 0), {}));
  CHECK(status(even, "syndetic") == "PASS");
  CHECK(even["syndetic"]["certificate"] == json::array({{0}, {1}}));
  CHECK(status(even, "thick") == "FAIL");
  CHECK(status(even, "thickly_syndetic") == "NOT_DERIVABLE");
  CHECK(status(even, "piecewise_syndetic") == "PASS");

  auto full = classes(run_set_classify(G, SetExpr::full(), {}));
  for (const char* c : {"syndetic", "thick", "thickly_syndetic", "piecewise_syndetic"}) CHECK(status(full, c) == "PASS");

  auto pow2 = classes(run_set_classify(G, SetExpr::sparse(SparseRule::kGeneratorPow2), {}));
  CHECK(status(pow2, "syndetic") == "FAIL");

  // a small budget leaves thickness undecided rather than refuted
  ClassifyParams p;
  p.budget = 10;
  auto small = classes(run_set_classify(G, coset(G, 2, 0), p));
  CHECK(status(small, "thick") == "INCONCLUSIVE");
}

TEST_CASE("blueprint command") {
  auto G = Zd(1);
  BlueprintParams p;
  p.A = singleton(G, G.identity());
  auto out = run_blueprint(G, SetExpr::full(), p);
  CHECK(out.exit_code == kExitOk);
  CHECK(out.files.count("bundle.json") == 1);
  CHECK(out.files.count("report.json") == 1);
  CHECK(run_blueprint(G, SetExpr::full(), p).files == out.files);

  try {
    run_blueprint(G, coset(G, 2, 0), {});
    FAIL("expected ThicknessSearchFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kThicknessSearchFailed);
    CHECK(exit_code_for(e.code()) == kExitConstruction);
  }
}

TEST_CASE("synth minimal command over Z without powers of two") {
  auto G = Zd(1);
  auto T = SetExpr::complement(SetExpr::sparse(SparseRule::kGeneratorPow2));
  auto out = run_synth_minimal(G, T, {}, {}, Format::kText);
  CHECK(out.exit_code == kExitOk);
  auto cert = json::parse(out.files.at("certificate.json"));
  auto rep = json::parse(out.files.at("report.json"));
  CHECK_FALSE(has_float(cert));
  CHECK_FALSE(has_float(rep));
  CHECK(out.files.at("point.txt").rfind("# Z window", 0) == 0);
  CHECK(run_synth_minimal(G, T, {}, {}, Format::kText).files == out.files);
}

TEST_CASE("synth periodic and resonating commands") {
  auto Z2 = Zd(2);
  auto H = FiniteIndexData::lattice(Z2, {{2, 0}, {0, 1}});
  auto F = elems(Z2, json::array({{0, 0}, {1, 0}}));
  auto a = analyze_periodic(Z2, F, {1, 0}, H, {});
  CHECK(a.orbit_size == 2);
  CHECK_FALSE(has_failure(a.report));
  auto out = run_synth_periodic(Z2, F, {1, 0}, H, {}, Format::kBitmap);
  CHECK(out.exit_code == kExitOk);
  // stripes: column x carries phi at (x mod 2, 0), so 1 on even x
  std::istringstream bm(out.files.at("point.bitmap.txt"));
  std::string line;
  std::getline(bm, line);
  std::smatch mt;
  REQUIRE(std::regex_search(line, mt, std::regex("x in \\[(-?[0-9]+),")));
  const long x0 = std::stol(mt[1]);
  std::uint64_t cells = 0, wrong = 0;
  while (std::getline(bm, line))
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '.') continue;
      ++cells;
      wrong += line[i] != ((x0 + static_cast<long>(i)) % 2 == 0 ? '1' : '0');
    }
  CHECK(cells == 4000);
  CHECK(wrong == 0);

  auto G = Zd(1);
  auto res = run_synth_resonating(G, coset(G, 3, 0), zrange(G, 0, 1), {1, 1}, 300, Format::kJson);
  CHECK(res.exit_code == kExitOk);
  auto rj = json::parse(res.files.at("report.json"));
  CHECK(rj["B"].size() > 0);
}

TEST_CASE("certify and export commands") {
  auto G = Zd(1);
  auto x = point_on(G, zrange(G, -200, 200), [](const GroupElement& g) { return std::abs(g.data()[0]) % 2; });
  auto out = run_certify(x, 2, 64, 2);
  CHECK(out.exit_code == kExitOk);
  CHECK(run_certify(x, 2, 64, 1).files == out.files);
  auto step = point_on(G, zrange(G, -200, 200), [](const GroupElement& g) { return g.data()[0] >= 0; });
  CHECK(run_certify(step, 1, 64, 1).exit_code == kExitVerification);
  CHECK(run_export(x, Format::kText).files.count("point.txt") == 1);
}

TEST_CASE("manifest") {
  auto G = Zd(1);
  RunOutput out;
  out.files["a.json"] = "{}\n";
  ManifestInputs in{"export", G.spec(), json{{"kind", "full"}}, json{{"format", "json"}}};
  auto m = make_manifest(in, out, 17);
  CHECK(m["outputs"]["a.json"] == sha256_hex("{}\n"));
  CHECK(m["wall_clock_ms"] == 17);
  CHECK(m["version"] == std::string(kToolVersion));
  CHECK(m["set_expr_sha256"] == sha256_hex(json{{"kind", "full"}}.dump()));
  m.erase("wall_clock_ms");
  auto m2 = make_manifest(in, out, 99);
  m2.erase("wall_clock_ms");
  CHECK(m == m2);
}
