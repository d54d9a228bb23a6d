// symdyn: command-line driver for the construction pipeline.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "symdyn/pipeline.hpp"

using namespace symdyn;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    // e.byte is the 1-based offset of the offending character
    throw Error(ErrorCode::kParse, path + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

json parse_inline(const std::string& what, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, what + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

GroupSpec read_spec(const std::string& path) {
  try {
    return read_json_file(path).get<GroupSpec>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::kParse, where + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, where + ": \"" + key + "\": " + e.what());
  }
}

struct Common {
  std::uint64_t window = kDefaultWindow;
  int depth = 2;
  std::uint64_t budget = 0;  // 0: command default
  int jobs = 1;
  int radius = -1;           // -1: command default
  std::string out;
  std::string format = "json";
};

void add_flags(CLI::App* sc, Common& c, bool window, bool depth, bool budget, bool jobs, bool radius, bool format) {
  if (window) sc->add_option("--window", c.window, "enumeration prefix size")->check(CLI::PositiveNumber);
  if (depth) sc->add_option("--depth", c.depth, "blueprint depth N")->check(CLI::NonNegativeNumber);
  if (budget) sc->add_option("--budget", c.budget, "search budget")->check(CLI::PositiveNumber);
  if (jobs) sc->add_option("--jobs", c.jobs, "verification threads")->check(CLI::PositiveNumber);
  if (radius) sc->add_option("--radius", c.radius, "pattern / ball radius")->check(CLI::NonNegativeNumber);
  if (format)
    sc->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "text", "bitmap"}));
  sc->add_option("--out", c.out, "output directory (files + manifest.json)");
}

// What is known about the run before it starts; enough for a manifest even
// when the run throws.
struct RunContext {
  std::string command;
  std::optional<GroupSpec> spec;
  std::optional<json> set;
  json params = json::object();
};

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
}

int finish(const RunContext& ctx, const Common& c, RunOutput out, std::chrono::steady_clock::time_point t0) {
  std::cout << out.summary;
  if (!c.out.empty()) {
    ManifestInputs in{ctx.command, ctx.spec, ctx.set, ctx.params};
    write_run(c.out, out, make_manifest(in, out, elapsed_ms(t0)));
  }
  return out.exit_code;
}

int fail_run(const RunContext& ctx, const Common& c, int code, const std::string& what,
             std::chrono::steady_clock::time_point t0) {
  std::cerr << "error: " << what << "\n";
  if (!c.out.empty() && !ctx.command.empty()) {
    RunOutput out;
    out.exit_code = code;
    ManifestInputs in{ctx.command, ctx.spec, ctx.set, ctx.params};
    auto m = make_manifest(in, out, elapsed_ms(t0));
    m["error"] = what;
    try {
      write_run(c.out, out, m);
    } catch (const std::exception&) {
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symdyn: syndetic/thick set calculus, blueprints and minimal points of 2^G"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Common c;
  std::string spec_path, set_path, instance_path, point_path, A_text;
  std::uint64_t count = 10;

  auto* gi = app.add_subcommand("group-info", "enumeration prefix and ball sizes");
  gi->add_option("spec", spec_path, "group spec JSON")->required();
  gi->add_option("--count", count, "prefix length")->check(CLI::PositiveNumber);
  add_flags(gi, c, false, false, false, false, true, true);

  auto* sc = app.add_subcommand("set-classify", "window certification of the four largeness classes");
  sc->add_option("spec", spec_path)->required();
  sc->add_option("set", set_path, "set expression JSON")->required();
  add_flags(sc, c, true, false, true, false, false, false);

  auto* bp = app.add_subcommand("blueprint", "growth sequence, blueprint bundle and axiom report");
  bp->add_option("spec", spec_path)->required();
  bp->add_option("set", set_path)->required();
  bp->add_option("--A", A_text, "growth seed as a JSON element list (default {e, first generator})");
  add_flags(bp, c, true, true, true, false, false, false);

  auto* sy = app.add_subcommand("synth", "synthesize a point of 2^G");
  sy->require_subcommand(1);
  auto* sm = sy->add_subcommand("minimal", "minimal point inside T");
  sm->add_option("spec", spec_path)->required();
  sm->add_option("set", set_path, "T as a set expression JSON")->required();
  add_flags(sm, c, false, true, true, true, true, true);
  auto* sp = sy->add_subcommand("periodic", "H-periodic point extending a finite pattern");
  sp->add_option("spec", spec_path)->required();
  sp->add_option("instance", instance_path, "JSON {F, phi, subgroup}")->required();
  add_flags(sp, c, true, false, true, false, true, true);
  auto* sr = sy->add_subcommand("resonating", "point whose return set resonates with A");
  sr->add_option("spec", spec_path)->required();
  sr->add_option("instance", instance_path, "JSON {A, F, phi}")->required();
  add_flags(sr, c, true, false, false, false, false, true);

  auto* ce = app.add_subcommand("certify", "minimality certificate for a pattern point");
  ce->add_option("point", point_path, "pattern point JSON")->required();
  add_flags(ce, c, false, false, true, true, true, false);

  auto* ex = app.add_subcommand("export", "re-export a pattern point");
  ex->add_option("point", point_path)->required();
  add_flags(ex, c, false, false, false, false, false, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  RunContext ctx;
  try {
    const Format fmt = parse_format(c.format);
    if (*gi) {
      ctx.command = "group-info";
      const int r = c.radius < 0 ? 4 : c.radius;
      ctx.params = json{{"radius", r}, {"count", count}, {"format", c.format}};
      ctx.spec = read_spec(spec_path);
      Group G(*ctx.spec);
      return finish(ctx, c, run_group_info(G, r, count, fmt), t0);
    }
    if (*sc) {
      ctx.command = "set-classify";
      ClassifyParams p;
      p.window = c.window;
      if (c.budget) p.budget = c.budget;
      ctx.params = json{{"window", p.window}, {"budget", p.budget}};
      ctx.spec = read_spec(spec_path);
      Group G(*ctx.spec);
      ctx.set = read_json_file(set_path);
      auto S = set_expr_from_json(G, *ctx.set);
      return finish(ctx, c, run_set_classify(G, S, p), t0);
    }
    if (*bp) {
      ctx.command = "blueprint";
      BlueprintParams p;
      p.depth = c.depth;
      p.syndetic_window = std::min<std::uint64_t>(c.window, p.syndetic_window);
      if (c.budget) p.max_level_size = c.budget;
      ctx.params = json{{"depth", p.depth}, {"max_level_size", p.max_level_size}, {"syndetic_window", p.syndetic_window}};
      ctx.spec = read_spec(spec_path);
      Group G(*ctx.spec);
      ctx.set = read_json_file(set_path);
      auto T = set_expr_from_json(G, *ctx.set);
      if (!A_text.empty()) p.A = set_from_json(G, parse_inline("--A", A_text));
      ctx.params["A"] = set_to_json(G, p.A ? *p.A : default_growth_seed(G));
      return finish(ctx, c, run_blueprint(G, T, p), t0);
    }
    if (*sm) {
      ctx.command = "synth minimal";
      BlueprintParams b;
      b.depth = c.depth;
      MinimalParams m;
      m.jobs = c.jobs;
      if (c.radius >= 0) m.pattern_radius = c.radius;
      if (c.budget) m.search_budget = c.budget;
      ctx.params = json{{"depth", b.depth},
                        {"max_level_size", b.max_level_size},
                        {"radius", m.pattern_radius},
                        {"budget", m.search_budget},
                        {"format", c.format}};
      ctx.spec = read_spec(spec_path);
      Group G(*ctx.spec);
      ctx.set = read_json_file(set_path);
      auto T = set_expr_from_json(G, *ctx.set);
      return finish(ctx, c, run_synth_minimal(G, T, b, m, fmt), t0);
    }
    if (*sp) {
      ctx.command = "synth periodic";
      PeriodicParams p;
      if (c.window != kDefaultWindow) p.window = c.window;
      if (c.radius >= 0) p.pattern_radius = c.radius;
      if (c.budget) p.search_budget = c.budget;
      ctx.params = json{{"window", p.window}, {"radius", p.pattern_radius}, {"budget", p.search_budget},
                        {"format", c.format}};
      ctx.spec = read_spec(spec_path);
      Group G(*ctx.spec);
      ctx.set = read_json_file(instance_path);
      const json& ij = *ctx.set;
      auto F = set_from_json(G, field<json>(ij, "F", instance_path));
      auto phi = field<std::vector<std::uint8_t>>(ij, "phi", instance_path);
      auto H = FiniteIndexData::from_json(G, field<json>(ij, "subgroup", instance_path));
      return finish(ctx, c, run_synth_periodic(G, F, phi, H, p, fmt), t0);
    }
    if (*sr) {
      ctx.command = "synth resonating";
      ctx.params = json{{"window", c.window}, {"format", c.format}};
      ctx.spec = read_spec(spec_path);
      Group G(*ctx.spec);
      ctx.set = read_json_file(instance_path);
      const json& ij = *ctx.set;
      auto A = set_expr_from_json(G, field<json>(ij, "A", instance_path));
      auto F = set_from_json(G, field<json>(ij, "F", instance_path));
      auto phi = field<std::vector<std::uint8_t>>(ij, "phi", instance_path);
      return finish(ctx, c, run_synth_resonating(G, A, F, phi, c.window, fmt), t0);
    }
    if (*ce || *ex) {
      ctx.command = *ce ? "certify" : "export";
      const int r = c.radius < 0 ? 2 : c.radius;
      const std::uint64_t budget = c.budget ? c.budget : 256;
      ctx.params = *ce ? json{{"radius", r}, {"budget", budget}} : json{{"format", c.format}};
      auto x = PatternPoint::from_json(read_json_file(point_path));
      ctx.spec = x.group().spec();
      if (*ce) return finish(ctx, c, run_certify(x, r, budget, c.jobs), t0);
      return finish(ctx, c, run_export(x, fmt), t0);
    }
  } catch (const Error& e) {
    return fail_run(ctx, c, exit_code_for(e.code()), e.what(), t0);
  } catch (const json::exception& e) {
    return fail_run(ctx, c, kExitUsage, std::string("Parse: ") + e.what(), t0);
  } catch (const std::exception& e) {
    return fail_run(ctx, c, kExitConstruction, e.what(), t0);
  }
  return kExitUsage;
}
