#include "symdyn/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <set>

namespace symdyn {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kMixedGroup:
    case ErrorCode::kMalformedSubgroup:
    case ErrorCode::kUnsupportedGroup:
      return kExitUsage;
    case ErrorCode::kInternalAxiomViolation:
      return kExitVerification;
    default:
      return kExitConstruction;
  }
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::kInvalidArgument, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

Format parse_format(std::string_view s) {
  if (s == "json") return Format::kJson;
  if (s == "text") return Format::kText;
  if (s == "bitmap") return Format::kBitmap;
  throw Error(ErrorCode::kInvalidArgument, "unknown format \"" + std::string(s) + "\"");
}

std::string_view format_extension(Format f) {
  switch (f) {
    case Format::kJson: return "json";
    case Format::kText: return "txt";
    case Format::kBitmap: return "bitmap.txt";
  }
  return "txt";
}

bool has_failure(const VerificationReport& rep) {
  return std::any_of(rep.checks().begin(), rep.checks().end(),
                     [](const CheckResult& c) { return c.status == Status::kFail; });
}

namespace {

bool is_z(const Group& G) {
  return G.spec().kind == GroupSpec::Kind::kFreeAbelian && G.spec().rank == 1;
}
bool is_z2(const Group& G) {
  return G.spec().kind == GroupSpec::Kind::kFreeAbelian && G.spec().rank == 2;
}

std::string z_line(const PatternPoint& x) {
  const auto& W = x.domain();
  std::int64_t lo = 0, hi = -1;
  bool first = true;
  for (const auto& g : W) {
    const std::int64_t v = g.data()[0];
    if (first || v < lo) lo = v;
    if (first || v > hi) hi = v;
    first = false;
  }
  std::string out = "# Z window [" + std::to_string(lo) + ", " + std::to_string(hi) + "]\n";
  if (W.empty()) return out;
  std::string row(static_cast<std::size_t>(hi - lo + 1), '.');
  for (std::size_t i = 0; i < W.size(); ++i)
    row[static_cast<std::size_t>(W[i].data()[0] - lo)] = x.bits()[i] ? '1' : '0';
  return out + row + "\n";
}

std::string z2_bitmap(const PatternPoint& x) {
  const auto& W = x.domain();
  std::int64_t x0 = 0, x1 = -1, y0 = 0, y1 = -1;
  bool first = true;
  for (const auto& g : W) {
    const std::int64_t a = g.data()[0], b = g.data()[1];
    if (first) {
      x0 = x1 = a;
      y0 = y1 = b;
      first = false;
    }
    x0 = std::min(x0, a);
    x1 = std::max(x1, a);
    y0 = std::min(y0, b);
    y1 = std::max(y1, b);
  }
  std::string out = "# Z^2 window x in [" + std::to_string(x0) + ", " + std::to_string(x1) + "], y in [" +
                    std::to_string(y0) + ", " + std::to_string(y1) + "], rows y descending\n";
  if (W.empty()) return out;
  const auto w = static_cast<std::size_t>(x1 - x0 + 1);
  const auto h = static_cast<std::size_t>(y1 - y0 + 1);
  std::vector<std::string> rows(h, std::string(w, '.'));
  for (std::size_t i = 0; i < W.size(); ++i) {
    const auto r = static_cast<std::size_t>(y1 - W[i].data()[1]);
    rows[r][static_cast<std::size_t>(W[i].data()[0] - x0)] = x.bits()[i] ? '1' : '0';
  }
  for (const auto& r : rows) out += r + "\n";
  return out;
}

std::string word_list(const PatternPoint& x) {
  const Group& G = x.group();
  std::string out;
  for (std::size_t i = 0; i < x.domain().size(); ++i)
    out += G.format(x.domain()[i]) + (x.bits()[i] ? " 1\n" : " 0\n");
  return out;
}

json elements_json(const Group& G, const std::vector<GroupElement>& v) {
  json a = json::array();
  for (const auto& g : v) a.push_back(G.to_json(g));
  return a;
}

std::string point_file(Format f) { return "point." + std::string(format_extension(f)); }

}  // namespace

std::string export_point(const PatternPoint& x, Format f) {
  const Group& G = x.group();
  switch (f) {
    case Format::kJson: return x.to_json().dump() + "\n";
    case Format::kText:
      if (is_z(G)) return z_line(x);
      if (is_z2(G)) return z2_bitmap(x);
      return word_list(x);
    case Format::kBitmap:
      if (is_z(G)) return z_line(x);
      if (is_z2(G)) return z2_bitmap(x);
      throw Error(ErrorCode::kUnsupportedGroup, "bitmap export needs Z or Z^2");
  }
  return {};
}

// ---------------------------------------------------------------------------

RunOutput run_group_info(const Group& G, int radius, std::uint64_t count, Format f) {
  if (radius < 0) throw Error(ErrorCode::kInvalidArgument, "radius must be >= 0");
  auto prefix = enumerate_prefix(G, count).elements;
  json first = json::array(), formatted = json::array(), balls = json::array();
  for (const auto& g : prefix) {
    first.push_back(G.to_json(g));
    formatted.push_back(G.format(g));
  }
  const int rmax = std::min(radius, G.max_radius());
  for (int r = 0; r <= rmax; ++r) balls.push_back(G.ball_size(r));
  json j{{"group", G.spec()},
         {"infinite", !G.is_finite()},
         {"generators", elements_json(G, G.generators())},
         {"enumeration_prefix", first},
         {"enumeration_prefix_formatted", formatted},
         {"ball_sizes", balls}};
  if (G.is_finite()) j["order"] = G.order();

  RunOutput out;
  std::string text = "group: " + json(G.spec()).dump() + "\n";
  text += "first " + std::to_string(prefix.size()) + ":";
  for (std::size_t i = 0; i < prefix.size(); ++i) text += (i ? ", " : " ") + G.format(prefix[i]);
  text += "\nball sizes:";
  for (std::size_t r = 0; r < balls.size(); ++r) text += (r ? ", " : " ") + balls[r].dump();
  text += "\n";
  if (f == Format::kJson)
    out.files["group_info.json"] = canonical_dump(j);
  else
    out.files["group_info.txt"] = text;
  out.summary = text;
  return out;
}

// ---------------------------------------------------------------------------

RunOutput run_set_classify(const Group& G, const SetExpr& S, const ClassifyParams& p) {
  const auto W = enumerate_prefix(G, p.window);
  const std::uint64_t n = W.size();
  std::string text;

  // syndetic
  json syn;
  std::optional<SyndeticCertificate> cert;
  if (S.kind() == SetExpr::Kind::kCosetUnion && !S.coset_reps().empty())
    cert = coset_union_certificate(G, S);
  else
    cert = search_syndetic_certificate(G, S, W, std::max<std::uint64_t>(1, n / kWindowRatio));
  if (cert) {
    auto rep = verify_right_syndetic(G, S, *cert, W);
    syn = json{{"status", std::string(to_string(rep.overall()))},
               {"certificate", set_to_json(G, cert->F)},
               {"report", rep.to_json()}};
  } else {
    const std::uint64_t m = std::max<std::uint64_t>(1, n / kWindowRatio);
    auto rep = verify_right_syndetic(G, S, {enumerate_prefix(G, m).elements}, W);
    syn = json{{"status", "FAIL"},
               {"note", "no enumeration prefix of size <= " + std::to_string(m) + " covers the window"},
               {"report", rep.to_json()}};
  }
  text += "syndetic: " + syn["status"].get<std::string>();
  if (cert) text += " F = " + set_to_json(G, cert->F).dump();
  text += "\n";

  // thick: translates of balls, up to the largest radius the window supports
  int R = 0;
  while (R < p.max_thick_radius && R + 1 <= G.max_radius() && G.ball_size(R + 1) * kWindowRatio <= n) ++R;
  json thick_found = json::array();
  std::string thick_status = "PASS";
  json thick_note;
  for (int r = 0; r <= R; ++r) {
    ThickTranslateFinder finder;
    finder.budget = p.budget;
    ThickSearchStats st;
    try {
      auto h = find_thick_translate(G, S, ball(G, r), finder, &st);
      thick_found.push_back(json{{"radius", r}, {"translate", G.to_json(h)}});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBudgetExhausted) throw;
      // the scan walks the enumeration, so covering the window refutes it there
      thick_status = st.candidates >= n ? "FAIL" : "INCONCLUSIVE";
      thick_note = json{{"radius", r}, {"candidates", st.candidates}, {"probes", st.probes}};
      break;
    }
  }
  json thick{{"status", thick_status}, {"max_radius", R}, {"translates", thick_found}};
  if (!thick_note.is_null()) thick["stopped_at"] = thick_note;
  text += "thick: " + thick_status +
          (thick_note.is_null() ? " (balls up to radius " + std::to_string(R) + ")"
                                : " (no translate of the radius " + std::to_string(thick_note["radius"].get<int>()) +
                                      " ball in budget)") +
          "\n";

  // thickly syndetic
  json ts;
  try {
    auto tc = derive_thickly_syndetic_cert(G, S);
    json per = json::array();
    bool ok = true;
    for (int r = 0; r <= std::min(2, R); ++r) {
      const auto A = ball(G, r);
      auto wit = tc.for_set(A);
      std::uint64_t bad = 0;
      for (const auto& q : W.elements) {
        if (!membership(G, wit.Q, q)) continue;
        for (const auto& a : A)
          if (!membership(G, S, G.multiply(a, q))) ++bad;
      }
      auto rep = verify_right_syndetic(G, wit.Q, wit.cert, W);
      ok = ok && bad == 0 && rep.ok();
      per.push_back(json{{"radius", r},
                         {"A_Q_outside_S", bad},
                         {"F_size", wit.cert.F.size()},
                         {"G_eq_FQ", rep.to_json()}});
    }
    ts = json{{"status", ok ? "PASS" : "FAIL"}, {"rule", tc.to_json()}, {"witnesses", per}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotDerivable) throw;
    ts = json{{"status", "NOT_DERIVABLE"}, {"note", e.what()}};
  }
  text += "thickly syndetic: " + ts["status"].get<std::string>() + "\n";

  // piecewise syndetic
  auto F = cert ? cert->F : singleton(G, G.identity());
  auto pw = check_piecewise_syndetic_window(G, S, F, W, p.probes);
  json pws{{"status", std::string(to_string(pw.overall()))}, {"F", set_to_json(G, F)}, {"report", pw.to_json()}};
  text += "piecewise syndetic: " + pws["status"].get<std::string>() + "\n";

  json j{{"group", G.spec()},
         {"set", set_expr_to_json(G, S)},
         {"window", n},
         {"budget", p.budget},
         {"classes",
          {{"syndetic", syn}, {"thick", thick}, {"thickly_syndetic", ts}, {"piecewise_syndetic", pws}}}};
  RunOutput out;
  out.files["classify.json"] = canonical_dump(j);
  out.summary = text;
  return out;
}

// ---------------------------------------------------------------------------

ElementSet default_growth_seed(const Group& G) {
  std::vector<GroupElement> v{G.identity()};
  if (!G.generators().empty()) v.push_back(G.generators().front());
  return ElementSet(G, std::move(v));
}

namespace {

BlueprintBundle build_bundle(const Group& G, const SetExpr& T, const BlueprintParams& p) {
  GrowthOptions o;
  o.max_level_size = p.max_level_size;
  auto gs = build_growth_sequence(G, T, p.A ? *p.A : default_growth_seed(G), p.depth, o);
  return build_blueprint(gs);
}

std::string level_sizes(const BlueprintBundle& b) {
  std::string s;
  for (int n = 0; n <= b.depth(); ++n) s += (n ? ", " : "") + std::to_string(b.F(n).size());
  return s;
}

}  // namespace

RunOutput run_blueprint(const Group& G, const SetExpr& T, const BlueprintParams& p) {
  auto b = build_bundle(G, T, p);
  auto grep = verify_growth_sequence(b.growth());
  const auto& prep = b.construction_report();
  bool fail = has_failure(grep) || has_failure(prep);

  std::optional<ThicklySyndeticCertificate> tc;
  try {
    tc = derive_thickly_syndetic_cert(G, T);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotDerivable) throw;
  }
  const auto W = enumerate_prefix(G, p.syndetic_window);
  json syn = json::array();
  for (int n = 0; n <= b.depth(); ++n) {
    if (!tc && n < b.depth()) {
      syn.push_back(json{{"level", n}, {"status", "SKIPPED"}, {"note", "T has no derivable certificate"}});
      continue;
    }
    auto rep = verify_blueprint_syndetic(b, n, W, tc);
    fail = fail || has_failure(rep);
    syn.push_back(json{{"level", n}, {"report", rep.to_json()}});
  }

  json report{{"growth", grep.to_json()}, {"preblueprint", prep.to_json()}, {"blueprint_syndetic", syn}};
  RunOutput out;
  out.files["bundle.json"] = b.to_json().dump() + "\n";
  out.files["report.json"] = canonical_dump(report);
  out.exit_code = fail ? kExitVerification : kExitOk;
  out.summary = "blueprint depth " + std::to_string(b.depth()) + ", |F_n| = " + level_sizes(b) +
                "\ngrowth: " + std::string(to_string(grep.overall())) +
                "\npreblueprint: " + std::string(to_string(prep.overall())) + " (" +
                std::to_string(prep.total_violations()) + " violations)\n";
  return out;
}

// ---------------------------------------------------------------------------

void symmetric_syndetic_sweep(MinimalAnalysis& m, const MinimalParams& p) {
  const PatternPoint& x = m.x;
  const Group& G = x.group();
  auto& rep = m.report;
  PointIndex idx(x, p.pattern_radius, p.jobs);
  auto& fin = rep.add("symmetric syndeticity: finite gap");
  auto& coh = rep.add("coherent with the minimality certificate");
  for (const auto& Aw : pattern_windows(G, p.pattern_radius, p.symsyn_max_size)) {
    std::vector<GroupElement> f1, f2;
    bool known = true;
    for (const auto& a : Aw) {
      auto v = x.at(a);
      if (!v) {
        known = false;
        break;
      }
      (*v ? f1 : f2).push_back(a);
    }
    ++m.symsyn_checks;
    if (!known) {
      ++m.symsyn_vacuous;
      continue;
    }
    auto r = check_symmetrically_syndetic(idx, ElementSet(G, std::move(f1)), ElementSet(G, std::move(f2)));
    const auto st = r.checks().front().status;
    if (st == Status::kVacuous) {
      ++m.symsyn_vacuous;
      continue;
    }
    const bool finite = st == Status::kPass;
    ++fin.evaluated;
    if (finite)
      ++m.symsyn_finite;
    else
      fin.violate(json{{"pattern", set_to_json(G, Aw)}, {"detail", r.checks().front().witnesses}});
    const auto* pc = m.certificate.find(Aw);
    if (pc) {
      ++coh.evaluated;
      if (pc->certified != finite) {
        ++m.incoherent;
        coh.violate(json{{"pattern", set_to_json(G, Aw)}, {"certified", pc->certified}, {"finite_gap", finite}});
      }
    }
  }
  rep.stats["symsyn_checks"] = m.symsyn_checks;
  rep.stats["symsyn_finite"] = m.symsyn_finite;
  rep.stats["symsyn_vacuous"] = m.symsyn_vacuous;
}

MinimalAnalysis analyze_minimal(const BlueprintBundle& b, const MinimalParams& p) {
  const Group& G = b.group();
  auto A = theorem_b_generator(b);
  MinimalAnalysis m{A, synthesize_minimal_in_T(b, A), {}, VerificationReport("synth_minimal")};
  const PatternPoint& x = m.x;
  auto& rep = m.report;

  auto& sub = rep.add("S ⊆ T");
  const auto ones = x.ones();
  for (const auto& g : ones) {
    ++sub.evaluated;
    if (!membership(G, b.T(), g)) sub.violate(G.to_json(g));
  }

  CertifyOptions co;
  co.max_pattern_size = p.max_pattern_size;
  co.jobs = p.jobs;
  m.certificate = certify_minimal(x, p.pattern_radius, p.search_budget, co);
  auto& cc = rep.add("every pattern window certified");
  auto& cov = rep.add("coverage >= 95% of the window");
  for (const auto& pc : m.certificate.patterns) {
    ++cc.evaluated;
    if (!pc.certified) {
      cc.violate(json{{"A", set_to_json(G, pc.A)}, {"reason", pc.reason}});
      continue;
    }
    ++cov.evaluated;
    if (pc.coverage < kTargetCoverage)
      cov.violate(json{{"A", set_to_json(G, pc.A)},
                       {"coverage_permille", pc.evaluated * 1000 / m.certificate.window_size}});
  }

  auto& ms = rep.add("extract_m_set = S ∩ window");
  const auto mset = extract_m_set(x);
  ms.evaluated = x.domain().size();
  for (const auto& g : x.domain())
    if (mset.contains(g) != ones.contains(g)) ms.violate(G.to_json(g));

  if (p.symmetric_syndetic) symmetric_syndetic_sweep(m, p);
  rep.stats["window_size"] = x.domain().size();
  rep.stats["ones"] = ones.size();
  return m;
}

RunOutput run_synth_minimal(const Group& G, const SetExpr& T, const BlueprintParams& bp, const MinimalParams& mp,
                            Format f) {
  auto b = build_bundle(G, T, bp);
  const auto& prep = b.construction_report();
  auto m = analyze_minimal(b, mp);
  json report{{"generator", set_to_json(G, m.A)},
              {"preblueprint", prep.to_json()},
              {"synthesis", m.report.to_json()}};
  RunOutput out;
  out.files[point_file(f)] = export_point(m.x, f);
  out.files["certificate.json"] = canonical_dump(m.certificate.to_json(G));
  out.files["report.json"] = canonical_dump(report);
  const bool fail = has_failure(prep) || has_failure(m.report);
  out.exit_code = fail ? kExitVerification : kExitOk;
  out.summary = "S = " + set_to_json(G, m.A).dump() + " Delta_0 on a window of " +
                std::to_string(m.x.domain().size()) + " elements, " + std::to_string(m.x.ones().size()) +
                " ones\ncertified patterns: " +
                std::to_string(std::count_if(m.certificate.patterns.begin(), m.certificate.patterns.end(),
                                             [](const auto& pc) { return pc.certified; })) +
                " of " + std::to_string(m.certificate.patterns.size()) + "\n";
  for (const auto& c : m.report.checks())
    out.summary += c.name + ": " + std::string(to_string(c.status)) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

PeriodicAnalysis analyze_periodic(const Group& G, const ElementSet& F, const std::vector<std::uint8_t>& phi,
                                  const FiniteIndexData& H, const PeriodicParams& p) {
  const auto W = enumerate_prefix(G, p.window).elements;
  PeriodicAnalysis a{synthesize_periodic(G, F, phi, H, W), {}, 0, 0, VerificationReport("synth_periodic")};
  const PatternPoint& x = a.x;

  auto& ext = a.report.add("extends phi");
  for (std::size_t i = 0; i < F.size(); ++i) {
    ++ext.evaluated;
    auto v = x.at(F[i]);
    if (!v || *v != (phi[i] ? 1 : 0)) ext.violate(G.to_json(F[i]));
  }

  // explicit orbit: restrictions of g.x to a core ball, g over a ball that
  // holds every coset representative
  const int rep_len = H.max_representative_length();
  const int Rg = 2 * rep_len + 1, rc = 2 * rep_len + 1;
  if (full_radius(G, W) < Rg + rc)
    throw Error(ErrorCode::kWindowTooSmall, "window too small for the orbit enumeration");
  const auto C = ball(G, rc);
  std::set<std::string> orbit;
  for (const auto& g : ball(G, Rg)) {
    std::string s;
    for (const auto& c : C) s.push_back(*x.at(G.multiply(c, g)) ? '1' : '0');
    orbit.insert(std::move(s));
  }
  a.orbit_size = orbit.size();
  auto& orb = a.report.add("orbit size <= [G:H]");
  orb.evaluated = ball(G, Rg).size();
  if (a.orbit_size > H.index()) orb.violate(json{{"orbit_size", a.orbit_size}, {"index", H.index()}});

  a.certificate = certify_minimal(x, p.pattern_radius, p.search_budget);
  a.gap_bound = static_cast<int>(H.index()) * rep_len;
  auto& cc = a.report.add("every pattern window certified");
  // the bound is on the minimal certificate; F may be grown past it for coverage
  auto& gap = a.report.add("minimal certificate gap <= [G:H] * max representative length");
  for (const auto& pc : a.certificate.patterns) {
    ++cc.evaluated;
    if (!pc.certified) {
      cc.violate(json{{"A", set_to_json(G, pc.A)}, {"reason", pc.reason}});
      continue;
    }
    ++gap.evaluated;
    if (pc.gap_min > a.gap_bound) gap.violate(json{{"A", set_to_json(G, pc.A)}, {"gap_min", pc.gap_min}});
  }
  a.report.stats["orbit_size"] = a.orbit_size;
  a.report.stats["index"] = H.index();
  a.report.stats["gap_bound"] = a.gap_bound;
  return a;
}

RunOutput run_synth_periodic(const Group& G, const ElementSet& F, const std::vector<std::uint8_t>& phi,
                             const FiniteIndexData& H, const PeriodicParams& p, Format f) {
  auto a = analyze_periodic(G, F, phi, H, p);
  RunOutput out;
  out.files[point_file(f)] = export_point(a.x, f);
  out.files["certificate.json"] = canonical_dump(a.certificate.to_json(G));
  out.files["report.json"] = canonical_dump(json{{"subgroup", H.to_json()}, {"report", a.report.to_json()}});
  out.exit_code = has_failure(a.report) ? kExitVerification : kExitOk;
  out.summary = "periodic point, index " + std::to_string(H.index()) + ", orbit size " +
                std::to_string(a.orbit_size) + "\n";
  for (const auto& c : a.report.checks()) out.summary += c.name + ": " + std::string(to_string(c.status)) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

SyndeticCertificate syndetic_certificate_for(const Group& G, const SetExpr& A, const EnumerationWindow& window) {
  if (A.kind() == SetExpr::Kind::kCosetUnion && !A.coset_reps().empty()) return coset_union_certificate(G, A);
  auto c = search_syndetic_certificate(G, A, window, std::max<std::uint64_t>(1, window.size() / kWindowRatio));
  if (!c) throw Error(ErrorCode::kCertificateMissing, "A is not syndetic on the window with a small prefix");
  return *c;
}

RunOutput run_synth_resonating(const Group& G, const SetExpr& A, const ElementSet& Fn,
                               const std::vector<std::uint8_t>& phi, std::uint64_t window, Format f) {
  const auto W = enumerate_prefix(G, window);
  auto cert = syndetic_certificate_for(G, A, W);
  auto r = synthesize_resonating(G, A, cert, Fn, phi, W);
  RunOutput out;
  out.files[point_file(f)] = export_point(r.x, f);
  out.files["report.json"] = canonical_dump(json{{"B", set_to_json(G, r.B)},
                                                 {"syndetic_certificate", set_to_json(G, cert.F)},
                                                 {"report", r.report.to_json()}});
  out.exit_code = has_failure(r.report) ? kExitVerification : kExitOk;
  out.summary = "resonating point, |B| = " + std::to_string(r.B.size()) + "\n";
  for (const auto& c : r.report.checks()) out.summary += c.name + ": " + std::string(to_string(c.status)) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

RunOutput run_certify(const PatternPoint& x, int pattern_radius, std::uint64_t search_budget, int jobs) {
  CertifyOptions co;
  co.jobs = jobs;
  auto cert = certify_minimal(x, pattern_radius, search_budget, co);
  VerificationReport rep("certify");
  constexpr std::size_t kRecheckLimit = 20'000;
  if (x.domain().size() <= kRecheckLimit) {
    rep = verify_minimality_certificate(x, cert);
  } else {
    auto& c = rep.add("direct re-evaluation");
    c.status = Status::kSkipped;
    c.note = "window larger than " + std::to_string(kRecheckLimit);
  }
  RunOutput out;
  out.files["certificate.json"] = canonical_dump(cert.to_json(x.group()));
  out.files["report.json"] = canonical_dump(rep.to_json());
  out.exit_code = (!cert.all_certified() || has_failure(rep)) ? kExitVerification : kExitOk;
  std::size_t ok = 0;
  for (const auto& pc : cert.patterns) ok += pc.certified;
  out.summary = "certified " + std::to_string(ok) + " of " + std::to_string(cert.patterns.size()) +
                " pattern windows\n";
  return out;
}

RunOutput run_export(const PatternPoint& x, Format f) {
  RunOutput out;
  out.files[point_file(f)] = export_point(x, f);
  out.summary = out.files.begin()->second;
  return out;
}

// ---------------------------------------------------------------------------

json make_manifest(const ManifestInputs& in, const RunOutput& out, std::int64_t wall_clock_ms) {
  json outputs = json::object();
  for (const auto& [name, bytes] : out.files) outputs[name] = sha256_hex(bytes);
  json m{{"tool", "symdyn"},
         {"version", std::string(kToolVersion)},
         {"command", in.command},
         {"parameters", in.parameters},
         {"exit_code", out.exit_code},
         {"outputs", outputs},
         {"wall_clock_ms", wall_clock_ms}};
  if (in.group) m["group_spec_sha256"] = sha256_hex(json(*in.group).dump());
  if (in.set_expr) m["set_expr_sha256"] = sha256_hex(in.set_expr->dump());
  return m;
}

void write_run(const std::filesystem::path& dir, const RunOutput& out, const json& manifest) {
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& bytes) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::kInvalidArgument, "cannot write " + (dir / name).string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  };
  for (const auto& [name, bytes] : out.files) put(name, bytes);
  put("manifest.json", canonical_dump(manifest));
}

}  // namespace symdyn
