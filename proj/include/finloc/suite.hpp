#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "finloc/fixtures.hpp"
#include "finloc/generators.hpp"
#include "finloc/hilbert.hpp"
#include "finloc/json_io.hpp"
#include "finloc/oracle.hpp"
#include "finloc/pmatrix.hpp"
#include "finloc/rng.hpp"

namespace finloc {

// One entry of the suite battery: an instance, its verdicts, and the laws
// that failed (if any). Reports carry no wall-clock data so that identical
// (input, seed) pairs serialize byte-identically.
struct SuiteEntry {
  std::string name;
  int carrier = 0;
  bool open = false;
  bool etale = false;
  bool clean = true;
  std::vector<std::string> failures;
};

struct SuiteOutcome {
  uint64_t seed = 0;
  int requested = 0;
  std::vector<SuiteEntry> entries;
  bool clean = true;

  std::string to_text() const {
    std::ostringstream os;
    os << "suite seed=" << seed << " instances=" << entries.size() << "\n";
    for (const auto& e : entries) {
      os << (e.clean ? "  ok   " : "  FAIL ") << e.name << " carrier=" << e.carrier
         << (e.open ? " open" : "") << (e.etale ? " etale" : "");
      for (const auto& f : e.failures) os << " [" << f << "]";
      os << "\n";
    }
    os << (clean ? "clean" : "UNCLEAN") << "\n";
    return os.str();
  }

  json to_json() const {
    json out;
    out["seed"] = seed;
    out["count"] = requested;
    json list = json::array();
    for (const auto& e : entries) {
      json je;
      je["name"] = e.name;
      je["carrier"] = e.carrier;
      je["open"] = e.open;
      je["etale"] = e.etale;
      je["clean"] = e.clean;
      je["failures"] = e.failures;
      list.push_back(std::move(je));
    }
    out["entries"] = std::move(list);
    out["clean"] = clean;
    return out;
  }
};

namespace detail {

inline void collect_failures(const LawReport& rep, SuiteEntry* entry) {
  for (const auto& c : rep.checks)
    if (!c.pass) {
      entry->clean = false;
      entry->failures.push_back(c.law);
    }
}

inline SuiteEntry run_battery(const std::string& name, const BModule& m) {
  SuiteEntry e;
  e.name = name;
  e.carrier = m.carrier().size();
  e.open = m.is_open();
  e.etale = e.open && m.is_etale();
  collect_failures(oracle_verify(m), &e);
  EtaleEquivalence eq = etale_equivalence_check(m);
  if (!eq.verdicts_agree) {
    e.clean = false;
    e.failures.push_back("etale-equivalence-verdicts");
  }
  if (e.etale) {
    InnerProduct ip = inner_from_support(m);
    const std::vector<int>& sec = m.sections();
    if (sec.size() <= 8) {
      BMatrix gram = matrix_from_module(ip, sec);
      MatrixModule mm = module_from_matrix(gram);
      collect_failures(mm.laws, &e);
      BMatrix back = matrix_from_module(mm.inner, mm.columns);
      if (back.entries != gram.entries) {
        e.clean = false;
        e.failures.push_back("matrix-round-trip");
      }
      CanonicalIso iso = canonical_iso(mm, ip, sec);
      collect_failures(iso.laws, &e);
    }
  }
  return e;
}

}  // namespace detail

// Fixtures first, then `count` seeded instances, each through the oracle
// battery; a couple of generated projection matrices round-trip as well.
// max_size only shrinks the generator guardrails, never raises them.
inline SuiteOutcome run_suite(uint64_t seed, int count, int max_size = kMaxGermCount) {
  SuiteOutcome out;
  out.seed = seed;
  out.requested = count;
  const int max_base = std::min(kMaxPresheafBase, max_size);
  const int max_total = std::min(kMaxGermCount, max_size);

  Fixtures f = fixtures();
  out.entries.push_back(detail::run_battery("fixture:FREE2", f.free2));
  out.entries.push_back(detail::run_battery("fixture:CHAIN3", f.chain3));
  out.entries.push_back(detail::run_battery("fixture:SIERP-PROD", f.sierp_prod));
  out.entries.push_back(detail::run_battery("fixture:IDENT", f.ident));
  out.entries.push_back(detail::run_battery("fixture:MERGE2", f.merge2));
  out.entries.push_back(detail::run_battery("fixture:NON-OPEN", f.non_open));
  {
    SuiteEntry e;
    e.name = "fixture:M3";
    e.carrier = f.m3.size();
    LawReport rep = verify_frame(f.m3);
    // The broken fixture must keep failing distributivity, nothing else.
    bool expected = !rep.all_pass() && !rep.find("meet-distributes-over-join")->pass;
    if (!expected) {
      e.clean = false;
      e.failures.push_back("m3-should-fail-distributivity");
    }
    out.entries.push_back(std::move(e));
  }

  SplitMix64 rng(seed);
  for (int i = 0; i < count; ++i) {
    const uint64_t inst_seed = rng.next();
    EtaleInstance inst = random_etale_instance(inst_seed, max_base, 3, max_total);
    SuiteEntry e = detail::run_battery("seed:" + std::to_string(inst_seed), inst.mod);
    detail::collect_failures(inst.laws, &e);
    out.entries.push_back(std::move(e));
  }
  {
    SuiteEntry e;
    e.name = "projection-matrices";
    for (int k = 0; k <= 3; ++k) {
      BMatrix m = random_projection_matrix(rng.next(), f.bd, k);
      if (!is_projection_matrix(m).pass) {
        e.clean = false;
        e.failures.push_back("not-a-projection");
        continue;
      }
      MatrixModule mm = module_from_matrix(m);
      detail::collect_failures(mm.laws, &e);
      BMatrix back = matrix_from_module(mm.inner, mm.columns);
      if (back.entries != m.entries) {
        e.clean = false;
        e.failures.push_back("matrix-round-trip");
      }
    }
    out.entries.push_back(std::move(e));
  }

  for (const auto& e : out.entries) out.clean = out.clean && e.clean;
  return out;
}

}  // namespace finloc
