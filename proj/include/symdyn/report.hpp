#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "symdyn/group.hpp"

namespace symdyn {

enum class Status { kPass, kFail, kPartial, kSkipped, kVacuous, kInconclusive };

std::string_view to_string(Status s);

struct CheckResult {
  static constexpr std::size_t kMaxWitnesses = 16;

  std::string name;
  Status status = Status::kPass;
  std::uint64_t evaluated = 0;
  std::uint64_t violations = 0;
  std::vector<json> witnesses;
  std::string note;

  void violate(json witness);
  json to_json() const;
};

class VerificationReport {
 public:
  explicit VerificationReport(std::string subject = {}) : subject_(std::move(subject)) {}

  CheckResult& add(std::string name);
  CheckResult* find(const std::string& name);
  const CheckResult* find(const std::string& name) const;
  void merge(const VerificationReport& other, const std::string& prefix = {});

  const std::string& subject() const { return subject_; }
  const std::deque<CheckResult>& checks() const { return checks_; }
  std::deque<CheckResult>& checks() { return checks_; }

  Status overall() const;
  // PASS, or PARTIAL where a check is only partially decidable.
  bool ok() const;
  std::uint64_t total_violations() const;

  std::map<std::string, json> stats;

  json to_json() const;

 private:
  std::string subject_;
  std::deque<CheckResult> checks_;  // add() hands out stable references
};

}  // namespace symdyn
