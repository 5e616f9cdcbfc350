#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace finloc {

// One verified law: pass/fail plus a witness when it fails.
// The witness carries both raw element indices and a rendered form so that
// reports stay useful without access to the original object.
struct LawCheck {
  std::string law;
  bool pass = true;
  std::string witness;           // human-readable, empty when passing
  std::vector<int> elems;        // indices involved in the witness

  static LawCheck ok(std::string name) { return LawCheck{std::move(name), true, "", {}}; }
  static LawCheck fail(std::string name, std::string witness, std::vector<int> elems = {}) {
    return LawCheck{std::move(name), false, std::move(witness), std::move(elems)};
  }
};

struct LawReport {
  std::string subject;
  std::vector<LawCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  const LawCheck* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }

  const LawCheck* find(const std::string& law) const {
    for (const auto& c : checks)
      if (c.law == law) return &c;
    return nullptr;
  }

  void add(LawCheck c) { checks.push_back(std::move(c)); }

  void merge(const LawReport& other, const std::string& prefix = "") {
    for (const auto& c : other.checks) {
      LawCheck copy = c;
      if (!prefix.empty()) copy.law = prefix + "/" + copy.law;
      checks.push_back(std::move(copy));
    }
  }

  std::string to_text() const {
    std::ostringstream os;
    os << subject << ":\n";
    for (const auto& c : checks) {
      os << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.law;
      if (!c.pass && !c.witness.empty()) os << "  -- " << c.witness;
      os << "\n";
    }
    return os.str();
  }
};

}  // namespace finloc
