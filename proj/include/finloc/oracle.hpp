#pragma once

#include <string>
#include <vector>

#include "finloc/bmodule.hpp"
#include "finloc/hilbert.hpp"
#include "finloc/homs.hpp"
#include "finloc/lattice.hpp"
#include "finloc/report.hpp"
#include "finloc/rng.hpp"

namespace finloc {

// Recomputes every verdict carried by a module straight from the definitions
// (action table and lattice tables only, no cached flags) and diffs each one
// against what the module reports. Any disagreement is a failed check.
inline LawReport oracle_verify(const BModule& m) {
  LawReport rep;
  rep.subject = "oracle diff";
  const Lattice& B = m.base();
  const Lattice& X = m.carrier();
  const int nb = B.size(), nx = X.size();
  auto act = [&](int b, int x) { return m.act(b, x); };

  {
    const bool fresh = verify_frame(B).all_pass();
    rep.add(fresh == B.is_frame()
                ? LawCheck::ok("oracle-base-frame-laws")
                : LawCheck::fail("oracle-base-frame-laws", "cached frame verdict disagrees"));
  }
  {
    const bool fresh = verify_frame(X).all_pass();
    rep.add(fresh == m.carrier_is_frame()
                ? LawCheck::ok("oracle-carrier-frame-laws")
                : LawCheck::fail("oracle-carrier-frame-laws", "cached frame verdict disagrees"));
  }

  bool module_laws = true;
  for (int x = 0; x < nx && module_laws; ++x)
    module_laws = act(B.bot(), x) == X.bot() && act(B.top(), x) == x;
  for (int b = 0; b < nb && module_laws; ++b) module_laws = act(b, X.bot()) == X.bot();
  for (int a = 0; a < nb && module_laws; ++a)
    for (int b = 0; b < nb && module_laws; ++b)
      for (int x = 0; x < nx; ++x) {
        if (act(B.join(a, b), x) != X.join(act(a, x), act(b, x)) ||
            act(a, act(b, x)) != act(B.meet(a, b), x)) {
          module_laws = false;
          break;
        }
      }
  for (int b = 0; b < nb && module_laws; ++b)
    for (int x = 0; x < nx && module_laws; ++x)
      for (int y = 0; y < nx; ++y)
        if (act(b, X.join(x, y)) != X.join(act(b, x), act(b, y))) {
          module_laws = false;
          break;
        }
  rep.add(module_laws == m.module_ok()
              ? LawCheck::ok("oracle-module-laws")
              : LawCheck::fail("oracle-module-laws", "cached module verdict disagrees"));

  bool stable = true;
  for (int b = 0; b < nb && stable; ++b)
    for (int x = 0; x < nx; ++x)
      if (act(b, x) != X.meet(act(b, X.top()), x)) {
        stable = false;
        break;
      }
  rep.add(stable == m.stable()
              ? LawCheck::ok("oracle-stability")
              : LawCheck::fail("oracle-stability", "cached stability verdict disagrees"));

  // Support candidate from the raw adjoint formula.
  std::vector<int> spp(nx);
  for (int x = 0; x < nx; ++x) {
    int acc = B.top();
    for (int b = 0; b < nb; ++b)
      if (X.leq(x, act(b, X.top()))) acc = B.meet(acc, b);
    spp[x] = acc;
  }
  rep.add(spp == m.candidate_support()
              ? LawCheck::ok("oracle-support-candidate")
              : LawCheck::fail("oracle-support-candidate", "candidate support table disagrees"));

  bool monotone = true, equivariant = true, restoring = true;
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < nx; ++y)
      if (X.leq(x, y) && !B.leq(spp[x], spp[y])) monotone = false;
  for (int b = 0; b < nb; ++b)
    for (int x = 0; x < nx; ++x)
      if (spp[act(b, x)] != B.meet(b, spp[x])) equivariant = false;
  for (int x = 0; x < nx; ++x)
    if (act(spp[x], x) != x) restoring = false;
  const bool open = module_laws && stable && verify_frame(X).all_pass() && monotone &&
                    equivariant && restoring;
  rep.add(open == m.is_open()
              ? LawCheck::ok("oracle-openness")
              : LawCheck::fail("oracle-openness", "cached openness verdict disagrees"));
  if (!open) return rep;

  // The three support conditions must be equivalent for the candidate.
  {
    bool agree = true;
    for (int x = 0; x < nx && agree; ++x) {
      const bool c1 = X.leq(x, act(spp[x], X.top()));
      const bool c2 = X.leq(x, act(spp[x], x));
      const bool c3 = act(spp[x], x) == x;
      agree = (c1 == c2) && (c2 == c3);
    }
    rep.add(agree ? LawCheck::ok("oracle-support-conditions-equivalent")
                  : LawCheck::fail("oracle-support-conditions-equivalent",
                                   "the three conditions disagree on an open instance"));
  }

  std::vector<int> sections;
  for (int s = 0; s < nx; ++s) {
    bool sec = true;
    for (int x = 0; x < nx && sec; ++x)
      if (X.leq(x, s) && act(spp[x], s) != x) sec = false;
    if (sec) sections.push_back(s);
  }
  rep.add(sections == m.sections()
              ? LawCheck::ok("oracle-sections")
              : LawCheck::fail("oracle-sections", "section sets disagree"));

  int cover = X.bot();
  for (int s : sections) cover = X.join(cover, s);
  const bool etale = cover == X.top();
  rep.add(etale == m.is_etale()
              ? LawCheck::ok("oracle-etale")
              : LawCheck::fail("oracle-etale", "cached etale verdict disagrees"));

  // Canonical inner product, rebuilt and rechecked from scratch.
  std::vector<int> inner(static_cast<size_t>(nx) * nx);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < nx; ++y) inner[static_cast<size_t>(x) * nx + y] = spp[X.meet(x, y)];
  auto ip = [&](int x, int y) { return inner[static_cast<size_t>(x) * nx + y]; };
  {
    bool ax = true;
    for (int x = 0; x < nx && ax; ++x)
      for (int y = 0; y < nx; ++y)
        if (ip(x, y) != ip(y, x)) {
          ax = false;
          break;
        }
    for (int b = 0; b < nb && ax; ++b)
      for (int x = 0; x < nx && ax; ++x)
        for (int y = 0; y < nx; ++y)
          if (ip(act(b, x), y) != B.meet(b, ip(x, y))) {
            ax = false;
            break;
          }
    if (static_cast<double>(nx) * nx * nx <= 3e7) {
      for (int x = 0; x < nx && ax; ++x)
        for (int y = 0; y < nx && ax; ++y)
          for (int z = 0; z < nx; ++z)
            if (ip(X.join(x, y), z) != B.join(ip(x, z), ip(y, z))) {
              ax = false;
              break;
            }
    } else {
      SplitMix64 rng(0xACCE55ull);
      for (int trial = 0; trial < 200000 && ax; ++trial) {
        const int x = static_cast<int>(rng.below(nx));
        const int y = static_cast<int>(rng.below(nx));
        const int z = static_cast<int>(rng.below(nx));
        ax = ip(X.join(x, y), z) == B.join(ip(x, z), ip(y, z));
      }
    }
    for (int y = 0; y < nx && ax; ++y) ax = ip(X.bot(), y) == B.bot();
    rep.add(ax ? LawCheck::ok("oracle-inner-axioms")
               : LawCheck::fail("oracle-inner-axioms", "support inner product breaks an axiom"));
  }
  {
    bool supported = true;
    for (int x = 0; x < nx && supported; ++x) supported = act(ip(x, x), x) == x;
    rep.add(supported ? LawCheck::ok("oracle-supported")
                      : LawCheck::fail("oracle-supported", "<x,x>x != x on an open instance"));
  }
  {
    // Weak non-degeneracy: equal rows force equal pseudo-complements.
    bool weak = true;
    for (int x = 0; x < nx && weak; ++x)
      for (int y = x + 1; y < nx; ++y) {
        bool same = true;
        for (int z = 0; z < nx && same; ++z) same = ip(x, z) == ip(y, z);
        if (same && X.pseudo_complement(x) != X.pseudo_complement(y)) {
          weak = false;
          break;
        }
      }
    rep.add(weak ? LawCheck::ok("oracle-weak-nondegeneracy")
                 : LawCheck::fail("oracle-weak-nondegeneracy", "weak non-degeneracy fails"));
  }

  if (etale) {
    {
      bool recon = true;
      for (int x = 0; x < nx && recon; ++x) {
        int acc = X.bot();
        for (int s : sections) acc = X.join(acc, act(ip(x, s), s));
        recon = acc == x;
      }
      rep.add(recon ? LawCheck::ok("oracle-sections-reconstruct")
                    : LawCheck::fail("oracle-sections-reconstruct",
                                     "sections are not a Hilbert basis"));
    }
    {
      bool gram = true;
      const int k = static_cast<int>(sections.size());
      for (int i = 0; i < k && gram; ++i)
        for (int j = 0; j < k; ++j) {
          int acc = B.bot();
          for (int u = 0; u < k; ++u)
            acc = B.join(acc, B.meet(ip(sections[i], sections[u]), ip(sections[u], sections[j])));
          if (acc != ip(sections[i], sections[j]) ||
              ip(sections[i], sections[j]) != ip(sections[j], sections[i])) {
            gram = false;
            break;
          }
        }
      rep.add(gram ? LawCheck::ok("oracle-gram-projection")
                   : LawCheck::fail("oracle-gram-projection",
                                    "section Gram matrix is not a projection"));
    }
    {
      InnerProduct ipx = inner_from_support(m);
      ModuleHom dag = adjoint_formula(identity_hom(m), ipx, ipx, m.sections());
      rep.add(tables_equal(dag, identity_hom(m))
                  ? LawCheck::ok("oracle-identity-adjoint")
                  : LawCheck::fail("oracle-identity-adjoint", "identity is not self-adjoint"));
    }
  }
  return rep;
}

}  // namespace finloc
