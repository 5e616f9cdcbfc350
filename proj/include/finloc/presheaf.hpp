#pragma once

#include <string>
#include <utility>
#include <vector>

#include "finloc/bmodule.hpp"
#include "finloc/errors.hpp"
#include "finloc/lattice.hpp"
#include "finloc/poset.hpp"
#include "finloc/report.hpp"

namespace finloc {

// Default guardrails for generated instances: small enough that every
// downstream check stays exhaustive.
inline constexpr int kMaxPresheafBase = 5;
inline constexpr int kMaxGermCount = 10;

// A presheaf of finite sets on a poset: a fiber per element and a
// restriction map F(q) -> F(p) for every p <= q. Functoriality (identity
// and composition) is a checkable law, not an assumption.
struct Presheaf {
  Poset base;
  std::vector<std::vector<std::string>> fibers;     // names, per base element
  std::vector<std::vector<std::vector<int>>> res;   // res[q][p], defined when p <= q

  int fiber_size(int p) const { return static_cast<int>(fibers.at(p).size()); }
  int restrict_germ(int q, int p, int germ) const {
    if (!base.leq(p, q)) throw OutOfRange("restriction only goes downward");
    return res.at(q).at(p).at(germ);
  }
  int total_germs() const {
    int t = 0;
    for (const auto& f : fibers) t += static_cast<int>(f.size());
    return t;
  }
};

inline LawReport check_presheaf(const Presheaf& f) {
  LawReport rep;
  rep.subject = "presheaf laws";
  const Poset& p = f.base;
  {
    LawCheck c = LawCheck::ok("restrictions-total");
    for (int q = 0; q < p.size() && c.pass; ++q)
      for (int r = 0; r < p.size() && c.pass; ++r) {
        if (!p.leq(r, q)) continue;
        if (static_cast<int>(f.res.at(q).at(r).size()) != f.fiber_size(q)) {
          c = LawCheck::fail("restrictions-total", "missing restriction " + p.name(q) + " -> " +
                                                       p.name(r));
          break;
        }
        for (int g : f.res[q][r])
          if (g < 0 || g >= f.fiber_size(r)) {
            c = LawCheck::fail("restrictions-total", "restriction image out of range");
            break;
          }
      }
    rep.add(c);
    if (!c.pass) return rep;
  }
  {
    LawCheck c = LawCheck::ok("restriction-identity");
    for (int q = 0; q < p.size() && c.pass; ++q)
      for (int g = 0; g < f.fiber_size(q); ++g)
        if (f.res[q][q][g] != g) {
          c = LawCheck::fail("restriction-identity", "identity restriction moves a germ at " +
                                                         p.name(q));
          break;
        }
    rep.add(c);
  }
  {
    LawCheck c = LawCheck::ok("restrictions-compose");
    for (int q = 0; q < p.size() && c.pass; ++q)
      for (int r = 0; r < p.size() && c.pass; ++r) {
        if (r == q || !p.leq(r, q)) continue;
        for (int s = 0; s < p.size() && c.pass; ++s) {
          if (s == r || !p.leq(s, r)) continue;
          for (int g = 0; g < f.fiber_size(q); ++g)
            if (f.res[r][s][f.res[q][r][g]] != f.res[q][s][g]) {
              c = LawCheck::fail("restrictions-compose",
                                 "path " + p.name(q) + " -> " + p.name(r) + " -> " + p.name(s) +
                                     " disagrees with the direct restriction",
                                 {q, r, s, g});
              break;
            }
        }
      }
    rep.add(c);
  }
  return rep;
}

// An etale B-locale together with the combinatorial data it was built from.
struct EtaleInstance {
  std::string name;
  Presheaf presheaf;
  Poset germs;                             // the poset of elements (p, x)
  std::vector<std::pair<int, int>> germ_ids;  // germ index -> (base elem, fiber elem)
  BModule mod;
  LawReport laws;
};

// The etale B-locale of a presheaf: germs (p, x) ordered by restriction,
// carrier the down-sets of the germ poset, base the down-sets of the base
// poset, inverse image U |-> {(p, x) : p in U}. The result is open and etale
// for every presheaf, and every principal down-set of germs is a local
// section; all of that is verified on the result, not assumed.
inline EtaleInstance etale_from_presheaf(const Presheaf& f,
                                         const Lattice* shared_base = nullptr) {
  LawReport pre = check_presheaf(f);
  if (!pre.all_pass())
    throw ParseError("not a presheaf: " + pre.first_failure()->law + " (" +
                     pre.first_failure()->witness + ")");
  EtaleInstance out;
  out.presheaf = f;
  const Poset& p = f.base;

  std::vector<std::string> germ_names;
  for (int q = 0; q < p.size(); ++q)
    for (int g = 0; g < f.fiber_size(q); ++g) {
      out.germ_ids.emplace_back(q, g);
      germ_names.push_back(f.fibers[q][g] + "@" + p.name(q));
    }
  const int n = static_cast<int>(out.germ_ids.size());
  if (n > kMaxPosetElements)
    throw SizeExceeded("presheaf has " + std::to_string(n) + " germs; limit is " +
                       std::to_string(kMaxPosetElements));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto [pi, gi] = out.germ_ids[i];
      auto [pj, gj] = out.germ_ids[j];
      if (p.leq(pi, pj) && f.res[pj][pi][gj] == gi) pairs.emplace_back(i, j);
    }
  out.germs = Poset::from_pairs(germ_names, pairs);

  Lattice base = shared_base ? *shared_base : Lattice::downset_frame(p);
  Lattice carrier = Lattice::downset_frame(out.germs);
  std::vector<int> pstar(base.size());
  for (int b = 0; b < base.size(); ++b) {
    const uint32_t umask = base.mask(b);
    uint32_t gmask = 0;
    for (int i = 0; i < n; ++i)
      if ((umask >> out.germ_ids[i].first) & 1u) gmask |= 1u << i;
    pstar[b] = carrier.index_of_mask(gmask);
  }
  out.mod = BModule::from_map(base, carrier, pstar);

  out.laws.subject = "etale instance";
  out.laws.add(out.mod.is_open() ? LawCheck::ok("instance-open")
                                 : LawCheck::fail("instance-open", "support laws failed"));
  out.laws.add(out.mod.is_open() && out.mod.is_etale()
                   ? LawCheck::ok("instance-etale")
                   : LawCheck::fail("instance-etale", "sections do not cover the top"));
  {
    LawCheck c = LawCheck::ok("principal-downsets-are-sections");
    if (out.mod.is_open()) {
      const auto& sec = out.mod.sections();
      for (int i = 0; i < n && c.pass; ++i) {
        const int idx = carrier.index_of_mask(out.germs.down_mask(i));
        if (!std::binary_search(sec.begin(), sec.end(), idx))
          c = LawCheck::fail("principal-downsets-are-sections",
                             "germ " + germ_names[i] + " is not a local section", {i});
      }
    }
    out.laws.add(c);
  }
  return out;
}

}  // namespace finloc
