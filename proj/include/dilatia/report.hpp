#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace dilatia {

using Json = nlohmann::json;

/// One verified identity: the largest violation seen over `samples`
/// evaluations, the worst witness, and the verdict against `tolerance`.
struct CheckRecord {
  std::string name;
  std::string anchor;  // the identity being checked, in formula form
  std::size_t samples = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  Json witness = Json::object();
  bool pass = true;
  std::string note;
};

inline void to_json(Json& j, const CheckRecord& c) {
  j = Json{{"name", c.name},
           {"anchor", c.anchor},
           {"samples", c.samples},
           {"max_violation", c.max_violation},
           {"tolerance", c.tolerance},
           {"witness", c.witness},
           {"pass", c.pass}};
  if (!c.note.empty()) j["note"] = c.note;
}

/// Accumulates the worst violation of one check. NaN violations count as
/// infinitely bad so they can never hide behind a comparison.
class CheckAccumulator {
 public:
  CheckAccumulator(std::string name, std::string anchor, double tolerance)
      : rec_{std::move(name), std::move(anchor), 0, 0.0, tolerance,
             Json::object(), true, {}} {}

  template <class WitnessFn>
  void observe(double violation, WitnessFn&& witness) {
    ++rec_.samples;
    if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
    if (rec_.samples == 1 || violation > rec_.max_violation) {
      rec_.max_violation = violation;
      rec_.witness = witness();
    }
  }

  void observe(double violation) {
    observe(violation, [] { return Json::object(); });
  }

  void set_note(std::string note) { rec_.note = std::move(note); }

  CheckRecord finish() const {
    CheckRecord r = rec_;
    r.pass = r.max_violation <= r.tolerance;
    return r;
  }

 private:
  CheckRecord rec_;
};

/// Ordered collection of check records plus free-form data.
struct VerificationReport {
  std::string subject;
  std::vector<CheckRecord> checks;
  Json data = Json::object();

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckRecord& c) { return c.pass; });
  }

  const CheckRecord* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  void add(CheckRecord rec) { checks.push_back(std::move(rec)); }

  void merge(const VerificationReport& other, const std::string& prefix = {}) {
    for (auto c : other.checks) {
      c.name = prefix + c.name;
      checks.push_back(std::move(c));
    }
    if (!other.data.empty()) {
      if (prefix.empty())
        data.update(other.data);
      else
        data[prefix.substr(0, prefix.size() - 1)] = other.data;
    }
  }

  /// Failing record without samples, used when a hypothesis blocks a check.
  void add_blocked(std::string name, std::string anchor, std::string note) {
    CheckRecord r;
    r.name = std::move(name);
    r.anchor = std::move(anchor);
    r.max_violation = std::numeric_limits<double>::infinity();
    r.pass = false;
    r.note = std::move(note);
    checks.push_back(std::move(r));
  }

  void sort_by_name() {
    std::stable_sort(checks.begin(), checks.end(),
                     [](const CheckRecord& a, const CheckRecord& b) {
                       return a.name < b.name;
                     });
  }
};

inline void to_json(Json& j, const VerificationReport& r) {
  j = Json{{"subject", r.subject}, {"checks", r.checks}, {"pass", r.passed()}};
  if (!r.data.empty()) j["data"] = r.data;
}

}  // namespace dilatia
