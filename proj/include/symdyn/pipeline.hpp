#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symdyn/blueprint.hpp"
#include "symdyn/error.hpp"
#include "symdyn/synth.hpp"

namespace symdyn {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitConstruction = 2, kExitVerification = 3 };

int exit_code_for(ErrorCode code);

std::string sha256_hex(std::string_view bytes);

// Pretty JSON with sorted keys and a trailing newline.
std::string canonical_dump(const json& j);

enum class Format { kJson, kText, kBitmap };

Format parse_format(std::string_view s);
std::string_view format_extension(Format f);

// json: PatternPoint JSON. text: Z as a 0/1 line, Z^2 as a bitmap, other
// groups as "word bit" lines in enumeration order. bitmap: Z and Z^2 only.
// Cells outside the window print as '.'.
std::string export_point(const PatternPoint& x, Format f);

// Files of one run (name -> bytes) and its exit code; the manifest is added
// when the run is written out.
struct RunOutput {
  int exit_code = kExitOk;
  std::map<std::string, std::string> files;
  std::string summary;  // human readable, printed on stdout
};

bool has_failure(const VerificationReport& rep);

// ---------------------------------------------------------------------------

RunOutput run_group_info(const Group& G, int radius, std::uint64_t count, Format f);

struct ClassifyParams {
  std::uint64_t window = kDefaultWindow;
  std::uint64_t budget = kDefaultThickBudget;
  int probes = 4;
  int max_thick_radius = 16;
};

// Right-sided classes only. The exit code is 0 whatever the classes are.
RunOutput run_set_classify(const Group& G, const SetExpr& S, const ClassifyParams& p);

struct BlueprintParams {
  std::optional<ElementSet> A;  // default {e, first generator}
  int depth = 2;
  std::uint64_t max_level_size = kMaxLevelSize;
  std::uint64_t syndetic_window = 2000;
};

ElementSet default_growth_seed(const Group& G);

RunOutput run_blueprint(const Group& G, const SetExpr& T, const BlueprintParams& p);

struct MinimalParams {
  int pattern_radius = 2;
  int max_pattern_size = 4;
  std::uint64_t search_budget = 256;
  int jobs = 1;
  bool symmetric_syndetic = true;
  int symsyn_max_size = 3;
};

struct MinimalAnalysis {
  ElementSet A;  // Theorem B generator used
  PatternPoint x;
  MinimalityCertificate certificate;
  VerificationReport report{"synth_minimal"};
  std::uint64_t symsyn_checks = 0;
  std::uint64_t symsyn_finite = 0;
  std::uint64_t symsyn_vacuous = 0;
  std::uint64_t incoherent = 0;
};

// S ⊆ T, certify_minimal at the given radius (every pattern certified with
// coverage >= kTargetCoverage), extract_m_set, and optionally the symmetric
// syndeticity sweep with its coherence against the certificate.
MinimalAnalysis analyze_minimal(const BlueprintBundle& b, const MinimalParams& p);

// The sweep alone, on an analysis made with symmetric_syndetic = false.
void symmetric_syndetic_sweep(MinimalAnalysis& m, const MinimalParams& p);

RunOutput run_synth_minimal(const Group& G, const SetExpr& T, const BlueprintParams& bp, const MinimalParams& mp,
                            Format f);

struct PeriodicParams {
  std::uint64_t window = 4000;
  int pattern_radius = 2;
  std::uint64_t search_budget = 256;
};

struct PeriodicAnalysis {
  PatternPoint x;
  MinimalityCertificate certificate;
  std::uint64_t orbit_size = 0;
  int gap_bound = 0;  // index * max coset representative length
  VerificationReport report{"synth_periodic"};
};

PeriodicAnalysis analyze_periodic(const Group& G, const ElementSet& F, const std::vector<std::uint8_t>& phi,
                                  const FiniteIndexData& H, const PeriodicParams& p);

RunOutput run_synth_periodic(const Group& G, const ElementSet& F, const std::vector<std::uint8_t>& phi,
                             const FiniteIndexData& H, const PeriodicParams& p, Format f);

// Coset unions carry their own certificate; otherwise the smallest
// enumeration prefix that works on the window. Throws CertificateMissing.
SyndeticCertificate syndetic_certificate_for(const Group& G, const SetExpr& A, const EnumerationWindow& window);

RunOutput run_synth_resonating(const Group& G, const SetExpr& A, const ElementSet& Fn,
                               const std::vector<std::uint8_t>& phi, std::uint64_t window, Format f);

RunOutput run_certify(const PatternPoint& x, int pattern_radius, std::uint64_t search_budget, int jobs);

RunOutput run_export(const PatternPoint& x, Format f);

// ---------------------------------------------------------------------------

struct ManifestInputs {
  std::string command;
  std::optional<GroupSpec> group;
  std::optional<json> set_expr;
  json parameters = json::object();
};

json make_manifest(const ManifestInputs& in, const RunOutput& out, std::int64_t wall_clock_ms);

// Writes every file plus manifest.json into dir.
void write_run(const std::filesystem::path& dir, const RunOutput& out, const json& manifest);

}  // namespace symdyn
