#include "symdyn/report.hpp"

#include <algorithm>

namespace symdyn {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::kPass: return "PASS";
    case Status::kFail: return "FAIL";
    case Status::kPartial: return "PARTIAL";
    case Status::kSkipped: return "SKIPPED";
    case Status::kVacuous: return "VACUOUS";
    case Status::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

void CheckResult::violate(json witness) {
  ++violations;
  status = Status::kFail;
  if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(witness));
}

json CheckResult::to_json() const {
  json j{{"name", name},
         {"status", std::string(symdyn::to_string(status))},
         {"evaluated", evaluated},
         {"violations", violations}};
  if (!witnesses.empty()) j["witnesses"] = witnesses;
  if (!note.empty()) j["note"] = note;
  return j;
}

CheckResult& VerificationReport::add(std::string name) {
  checks_.push_back(CheckResult{});
  checks_.back().name = std::move(name);
  return checks_.back();
}

CheckResult* VerificationReport::find(const std::string& name) {
  for (auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
  for (auto c : other.checks_) {
    c.name = prefix + c.name;
    checks_.push_back(std::move(c));
  }
  for (const auto& [k, v] : other.stats) stats[prefix + k] = v;
}

Status VerificationReport::overall() const {
  auto any = [&](Status s) {
    return std::any_of(checks_.begin(), checks_.end(), [&](const CheckResult& c) { return c.status == s; });
  };
  auto all = [&](Status s) {
    return std::all_of(checks_.begin(), checks_.end(), [&](const CheckResult& c) { return c.status == s; });
  };
  if (checks_.empty()) return Status::kSkipped;
  if (any(Status::kFail)) return Status::kFail;
  if (any(Status::kInconclusive)) return Status::kInconclusive;
  if (all(Status::kVacuous)) return Status::kVacuous;
  if (all(Status::kSkipped)) return Status::kSkipped;
  if (any(Status::kPartial)) return Status::kPartial;
  return Status::kPass;
}

bool VerificationReport::ok() const {
  Status s = overall();
  return s == Status::kPass || s == Status::kPartial;
}

std::uint64_t VerificationReport::total_violations() const {
  std::uint64_t t = 0;
  for (const auto& c : checks_) t += c.violations;
  return t;
}

json VerificationReport::to_json() const {
  json checks = json::array();
  for (const auto& c : checks_) checks.push_back(c.to_json());
  json st = json::object();
  for (const auto& [k, v] : stats) st[k] = v;
  return json{{"subject", subject_},
              {"status", std::string(to_string(overall()))},
              {"pass", ok()},
              {"violations", total_violations()},
              {"checks", checks},
              {"stats", st}};
}

}  // namespace symdyn
