#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "finloc/bmodule.hpp"
#include "finloc/errors.hpp"
#include "finloc/hilbert.hpp"
#include "finloc/lattice.hpp"
#include "finloc/module_hom.hpp"
#include "finloc/report.hpp"
#include "finloc/rng.hpp"

namespace finloc {

// Exhaustive subset checks switch to seeded sampling above this carrier size.
inline constexpr int kMeetCheckExhaustiveCap = 12;
inline constexpr int kMeetCheckSamples = 10000;

// h'(y) = V_{t in family} <h(t), y> t, the only possible adjoint of h when
// the source family is a Hilbert basis.
inline ModuleHom adjoint_formula(const ModuleHom& h, const InnerProduct& src_ip,
                                 const InnerProduct& tgt_ip, const std::vector<int>& family) {
  std::string w;
  if (!is_hilbert_basis(src_ip, family, &w))
    throw NoBasis("adjoint needs a Hilbert basis on the source: " + w);
  const Lattice& X = h.src.carrier();
  const Lattice& Y = h.tgt.carrier();
  ModuleHom dag{h.tgt, h.src, {}};
  dag.table.resize(Y.size());
  for (int y = 0; y < Y.size(); ++y) {
    int acc = X.bot();
    for (int t : family) acc = X.join(acc, h.src.act(tgt_ip.at(h.at(t), y), t));
    dag.table[y] = acc;
  }
  return dag;
}

struct AdjointResult {
  ModuleHom dagger;
  LawReport laws;  // the defining identity, plus uniqueness by search
};

inline AdjointResult adjoint(const ModuleHom& h, const InnerProduct& src_ip,
                             const InnerProduct& tgt_ip, const std::vector<int>& family) {
  AdjointResult out;
  out.dagger = adjoint_formula(h, src_ip, tgt_ip, family);
  out.laws.subject = "adjoint";
  const Lattice& X = h.src.carrier();
  const Lattice& Y = h.tgt.carrier();
  {
    LawCheck c = LawCheck::ok("adjoint-identity");
    for (int x = 0; x < X.size() && c.pass; ++x)
      for (int y = 0; y < Y.size(); ++y)
        if (tgt_ip.at(h.at(x), y) != src_ip.at(x, out.dagger.at(y))) {
          c = LawCheck::fail("adjoint-identity",
                             "<h(x),y> != <x,h'(y)> at x=" + detail::render(X, x) +
                                 " y=" + detail::render(Y, y),
                             {x, y});
          break;
        }
    out.laws.add(c);
  }
  {
    // Uniqueness, by scanning every possible value rather than citing
    // non-degeneracy: for each y the table value must be the only solution.
    LawCheck c = LawCheck::ok("adjoint-unique");
    for (int y = 0; y < Y.size() && c.pass; ++y)
      for (int cand = 0; cand < X.size(); ++cand) {
        if (cand == out.dagger.at(y)) continue;
        bool solves = true;
        for (int x = 0; x < X.size() && solves; ++x)
          solves = tgt_ip.at(h.at(x), y) == src_ip.at(x, cand);
        if (solves) {
          c = LawCheck::fail("adjoint-unique",
                             "two adjoint values at y=" + detail::render(Y, y) + ": " +
                                 detail::render(X, out.dagger.at(y)) + " and " +
                                 detail::render(X, cand),
                             {y, cand});
          break;
        }
      }
    out.laws.add(c);
  }
  return out;
}

// Decides adjointability by brute search (per target element, scan all
// candidate values) and homomorphism-ness by the law checker, independently;
// the two verdicts must agree for based Hilbert modules.
struct AdjointableVerdict {
  bool is_hom = false;
  bool adjointable = false;
  bool agree = false;
  std::string witness;
};

inline AdjointableVerdict is_adjointable_iff_hom_check(const ModuleHom& h,
                                                       const InnerProduct& src_ip,
                                                       const InnerProduct& tgt_ip) {
  AdjointableVerdict out;
  out.is_hom = is_module_hom(h);
  const Lattice& X = h.src.carrier();
  const Lattice& Y = h.tgt.carrier();
  out.adjointable = true;
  for (int y = 0; y < Y.size() && out.adjointable; ++y) {
    bool found = false;
    for (int cand = 0; cand < X.size() && !found; ++cand) {
      bool solves = true;
      for (int x = 0; x < X.size() && solves; ++x)
        solves = tgt_ip.at(h.at(x), y) == src_ip.at(x, cand);
      found = solves;
    }
    if (!found) {
      out.adjointable = false;
      out.witness = "no adjoint value exists at y=" + detail::render(Y, y);
    }
  }
  out.agree = out.is_hom == out.adjointable;
  return out;
}

// Sheaf homomorphism conditions for a module hom between etale B-locales:
// sections map to sections, supports of sections are preserved, and the
// all-elements form of support preservation; the two forms must agree.
struct SheafHomVerdict {
  bool is_hom = false;
  bool sections_to_sections = false;
  bool supports_on_sections = false;
  bool supports_everywhere = false;
  bool forms_agree = false;
  bool pass = false;
  LawReport laws;
};

inline SheafHomVerdict is_sheaf_hom(const ModuleHom& h) {
  h.src.require_etale();
  h.tgt.require_etale();
  SheafHomVerdict out;
  out.laws.subject = "sheaf homomorphism";
  out.is_hom = is_module_hom(h);
  out.laws.add(out.is_hom ? LawCheck::ok("module-hom")
                          : LawCheck::fail("module-hom",
                                           check_module_hom(h).first_failure()->witness));
  const Lattice& Y = h.tgt.carrier();
  const std::vector<int>& sx = h.src.sections();
  const std::vector<int>& sy = h.tgt.sections();
  {
    LawCheck c = LawCheck::ok("sections-to-sections");
    for (int s : sx) {
      if (!std::binary_search(sy.begin(), sy.end(), h.at(s))) {
        c = LawCheck::fail("sections-to-sections",
                           "h(s) is not a section at s=" + detail::render(h.src.carrier(), s) +
                               " h(s)=" + detail::render(Y, h.at(s)),
                           {s});
        break;
      }
    }
    out.sections_to_sections = c.pass;
    out.laws.add(c);
  }
  {
    LawCheck c = LawCheck::ok("supports-on-sections");
    for (int s : sx)
      if (h.tgt.spp(h.at(s)) != h.src.spp(s)) {
        c = LawCheck::fail("supports-on-sections",
                           "spp(h(s)) != spp(s) at s=" + detail::render(h.src.carrier(), s), {s});
        break;
      }
    out.supports_on_sections = c.pass;
    out.laws.add(c);
  }
  {
    LawCheck c = LawCheck::ok("supports-everywhere");
    for (int x = 0; x < h.src.carrier().size(); ++x)
      if (h.tgt.spp(h.at(x)) != h.src.spp(x)) {
        c = LawCheck::fail("supports-everywhere",
                           "spp(h(x)) != spp(x) at x=" + detail::render(h.src.carrier(), x), {x});
        break;
      }
    out.supports_everywhere = c.pass;
    out.laws.add(c);
  }
  {
    // For a module hom the section form and the all-elements form of the
    // support condition are equivalent; disagreement would be a bug.
    const bool agree = !out.is_hom || (out.supports_on_sections == out.supports_everywhere);
    out.forms_agree = agree;
    out.laws.add(agree ? LawCheck::ok("support-forms-agree")
                       : LawCheck::fail("support-forms-agree",
                                        "section form and element form disagree on a hom"));
  }
  out.pass = out.is_hom && out.sections_to_sections && out.supports_everywhere && out.forms_agree;
  return out;
}

// A map f: X -> Y of B-locales, given by its inverse image f*: Y -> X, which
// must be a frame homomorphism and equivariant.
struct BLocaleMap {
  BModule src;  // X
  BModule tgt;  // Y
  std::vector<int> fstar;  // Y-carrier -> X-carrier
};

inline LawReport check_blocale_map(const BLocaleMap& f) {
  LawReport rep;
  rep.subject = "B-locale map laws";
  const Lattice& X = f.src.carrier();
  const Lattice& Y = f.tgt.carrier();
  if (!f.src.same_base(f.tgt)) {
    rep.add(LawCheck::fail("map-same-base", "source and target have different bases"));
    return rep;
  }
  if (static_cast<int>(f.fstar.size()) != Y.size()) {
    rep.add(LawCheck::fail("map-total", "inverse image table has wrong size"));
    return rep;
  }
  for (int v : f.fstar)
    if (v < 0 || v >= X.size()) {
      rep.add(LawCheck::fail("map-total", "inverse image entry out of range"));
      return rep;
    }
  {
    LawCheck c = LawCheck::ok("inverse-image-frame-hom");
    if (f.fstar[Y.bot()] != X.bot() || f.fstar[Y.top()] != X.top())
      c = LawCheck::fail("inverse-image-frame-hom", "bounds not preserved");
    for (int a = 0; a < Y.size() && c.pass; ++a)
      for (int b = 0; b < Y.size(); ++b)
        if (f.fstar[Y.join(a, b)] != X.join(f.fstar[a], f.fstar[b]) ||
            f.fstar[Y.meet(a, b)] != X.meet(f.fstar[a], f.fstar[b])) {
          c = LawCheck::fail("inverse-image-frame-hom",
                             "fails at y=" + detail::render(Y, a) + " y'=" + detail::render(Y, b),
                             {a, b});
          break;
        }
    rep.add(c);
  }
  {
    LawCheck c = LawCheck::ok("inverse-image-equivariant");
    for (int b = 0; b < f.src.base().size() && c.pass; ++b)
      for (int y = 0; y < Y.size(); ++y)
        if (f.fstar[f.tgt.act(b, y)] != f.src.act(b, f.fstar[y])) {
          c = LawCheck::fail("inverse-image-equivariant",
                             "f*(by) != b f*(y) at b=" + f.src.base().name(b) +
                                 " y=" + detail::render(Y, y),
                             {b, y});
          break;
        }
    rep.add(c);
  }
  return rep;
}

inline BLocaleMap make_blocale_map(const BModule& src, const BModule& tgt,
                                   std::vector<int> fstar) {
  BLocaleMap f{src, tgt, std::move(fstar)};
  LawReport rep = check_blocale_map(f);
  if (!rep.all_pass())
    throw NotAFrameHom(rep.first_failure()->law + ": " + rep.first_failure()->witness);
  return f;
}

// f_!(x) = the meet of {y : x <= f*(y)}, verified to be left adjoint to f*.
struct DirectImageResult {
  ModuleHom image;
  LawReport laws;
};

inline DirectImageResult direct_image(const BLocaleMap& f) {
  const Lattice& X = f.src.carrier();
  const Lattice& Y = f.tgt.carrier();
  DirectImageResult out;
  out.image = ModuleHom{f.src, f.tgt, {}};
  out.image.table.resize(X.size());
  for (int x = 0; x < X.size(); ++x) {
    int acc = Y.top();
    for (int y = 0; y < Y.size(); ++y)
      if (X.leq(x, f.fstar[y])) acc = Y.meet(acc, y);
    out.image.table[x] = acc;
  }
  out.laws.subject = "direct image";
  {
    LawCheck c = LawCheck::ok("adjunction-unit");
    for (int x = 0; x < X.size() && c.pass; ++x)
      if (!X.leq(x, f.fstar[out.image.table[x]]))
        c = LawCheck::fail("adjunction-unit", "x !<= f*(f_!(x)) at x=" + detail::render(X, x),
                           {x});
    out.laws.add(c);
  }
  {
    LawCheck c = LawCheck::ok("adjunction-counit");
    for (int y = 0; y < Y.size() && c.pass; ++y)
      if (!Y.leq(out.image.table[f.fstar[y]], y))
        c = LawCheck::fail("adjunction-counit", "f_!(f*(y)) !<= y at y=" + detail::render(Y, y),
                           {y});
    out.laws.add(c);
  }
  return out;
}

// Frobenius reciprocity f_!(x ^ f*(y)) = f_!(x) ^ y.
inline LawReport check_frobenius(const BLocaleMap& f) {
  const Lattice& X = f.src.carrier();
  const Lattice& Y = f.tgt.carrier();
  DirectImageResult di = direct_image(f);
  LawReport rep;
  rep.subject = "Frobenius reciprocity";
  LawCheck c = LawCheck::ok("frobenius");
  for (int x = 0; x < X.size() && c.pass; ++x)
    for (int y = 0; y < Y.size(); ++y)
      if (di.image.table[X.meet(x, f.fstar[y])] != Y.meet(di.image.table[x], y)) {
        c = LawCheck::fail("frobenius",
                           "f_!(x ^ f*(y)) != f_!(x) ^ y at x=" + detail::render(X, x) +
                               " y=" + detail::render(Y, y),
                           {x, y});
        break;
      }
  rep.add(c);
  return rep;
}

// For etale source and target: the direct image coincides with the adjoint
// of the inverse image, both as exact table equalities.
inline LawReport check_dagger_is_direct_image(const BLocaleMap& f) {
  f.src.require_etale();
  f.tgt.require_etale();
  LawReport rep;
  rep.subject = "direct image vs adjoint";
  InnerProduct ipx = inner_from_support(f.src);
  InnerProduct ipy = inner_from_support(f.tgt);
  DirectImageResult di = direct_image(f);
  {
    ModuleHom fstar_hom{f.tgt, f.src, f.fstar};
    ModuleHom dag = adjoint_formula(fstar_hom, ipy, ipx, f.tgt.sections());
    LawCheck c = LawCheck::ok("direct-image-is-adjoint-of-inverse");
    if (dag.table != di.image.table)
      c = LawCheck::fail("direct-image-is-adjoint-of-inverse", "(f*)' != f_! as tables");
    rep.add(c);
  }
  {
    ModuleHom dag = adjoint_formula(di.image, ipx, ipy, f.src.sections());
    LawCheck c = LawCheck::ok("inverse-is-adjoint-of-direct-image");
    if (dag.table != f.fstar)
      c = LawCheck::fail("inverse-is-adjoint-of-direct-image", "(f_!)' != f* as tables");
    rep.add(c);
  }
  return rep;
}

// h'(/\S) = /\h'(S) for subsets of the target carrier: exhaustive when small,
// seeded samples otherwise. The two supporting facts are checked standalone:
// scalar meets distribute over sections, and supports turn section meets
// into meets.
inline LawReport check_meet_preservation(const ModuleHom& h, uint64_t seed = 1) {
  SheafHomVerdict sv = is_sheaf_hom(h);
  if (!sv.pass) throw NotSheafHom("meet preservation is stated for sheaf homomorphisms");
  InnerProduct ipx = inner_from_support(h.src);
  InnerProduct ipy = inner_from_support(h.tgt);
  ModuleHom dag = adjoint_formula(h, ipx, ipy, h.src.sections());
  const Lattice& X = h.src.carrier();
  const Lattice& Y = h.tgt.carrier();
  LawReport rep;
  rep.subject = "adjoint meet preservation";
  {
    LawCheck c = LawCheck::ok("adjoint-preserves-meets");
    auto check_subset = [&](const std::vector<int>& members) {
      int my = Y.top(), mx = X.top();
      for (int y : members) my = Y.meet(my, y);
      for (int y : members) mx = X.meet(mx, dag.at(y));
      if (dag.at(my) != mx) {
        c = LawCheck::fail("adjoint-preserves-meets",
                           "h'(/\\S) != /\\h'(S) on a subset of size " +
                               std::to_string(members.size()));
        return false;
      }
      return true;
    };
    if (Y.size() <= kMeetCheckExhaustiveCap) {
      std::vector<int> members;
      for (uint32_t bits = 0; bits < (1u << Y.size()) && c.pass; ++bits) {
        members.clear();
        for (int i = 0; i < Y.size(); ++i)
          if ((bits >> i) & 1u) members.push_back(i);
        check_subset(members);
      }
    } else {
      SplitMix64 rng(seed);
      std::vector<int> members;
      for (int trial = 0; trial < kMeetCheckSamples && c.pass; ++trial) {
        members.clear();
        uint64_t word = 0;
        for (int i = 0; i < Y.size(); ++i) {
          if (i % 64 == 0) word = rng.next();
          if ((word >> (i % 64)) & 1u) members.push_back(i);
        }
        check_subset(members);
      }
    }
    rep.add(c);
  }
  return rep;
}

// (/\ b_a)s = /\(b_a s) for non-empty scalar families and sections s. Pairs
// suffice for every finite non-empty family; small scalar frames also get
// the exhaustive subset scan.
inline LawReport check_scalar_meets_on_sections(const BModule& m) {
  m.require_etale();
  const Lattice& B = m.base();
  const Lattice& X = m.carrier();
  LawReport rep;
  rep.subject = "scalar meets on sections";
  LawCheck c = LawCheck::ok("scalar-meets-distribute-over-sections");
  for (int s : m.sections()) {
    for (int a = 0; a < B.size() && c.pass; ++a)
      for (int b = 0; b < B.size(); ++b)
        if (m.act(B.meet(a, b), s) != X.meet(m.act(a, s), m.act(b, s))) {
          c = LawCheck::fail("scalar-meets-distribute-over-sections",
                             "(a ^ b)s != as ^ bs at a=" + B.name(a) + " b=" + B.name(b) +
                                 " s=" + detail::render(X, s),
                             {a, b, s});
          break;
        }
    if (!c.pass) break;
    if (B.size() <= kMeetCheckExhaustiveCap) {
      for (uint32_t bits = 1; bits < (1u << B.size()) && c.pass; ++bits) {
        int mb = B.top(), mx = X.top();
        for (int i = 0; i < B.size(); ++i)
          if ((bits >> i) & 1u) {
            mb = B.meet(mb, i);
            mx = X.meet(mx, m.act(i, s));
          }
        if (m.act(mb, s) != mx)
          c = LawCheck::fail("scalar-meets-distribute-over-sections",
                             "family failure at s=" + detail::render(X, s), {s});
      }
    }
  }
  rep.add(c);
  return rep;
}

// spp(/\S) = /\{spp(t)} for non-empty section families whose join is again a
// section. Exhaustive over section subsets when few, seeded samples beyond.
inline LawReport check_support_of_section_meets(const BModule& m, uint64_t seed = 1) {
  m.require_etale();
  const Lattice& B = m.base();
  const Lattice& X = m.carrier();
  const std::vector<int>& sec = m.sections();
  LawReport rep;
  rep.subject = "support of section meets";
  LawCheck c = LawCheck::ok("support-of-section-meets");
  auto check_family = [&](const std::vector<int>& fam) {
    if (fam.empty()) return true;
    int jn = X.bot();
    for (int s : fam) jn = X.join(jn, s);
    if (!std::binary_search(sec.begin(), sec.end(), jn)) return true;  // hypothesis not met
    int mx = X.top(), mb = B.top();
    for (int s : fam) {
      mx = X.meet(mx, s);
      mb = B.meet(mb, m.spp(s));
    }
    if (m.spp(mx) != mb) {
      c = LawCheck::fail("support-of-section-meets",
                         "spp(/\\S) != /\\spp on a family of size " + std::to_string(fam.size()));
      return false;
    }
    return true;
  };
  const int k = static_cast<int>(sec.size());
  if (k <= kMeetCheckExhaustiveCap) {
    std::vector<int> fam;
    for (uint32_t bits = 1; bits < (1u << k) && c.pass; ++bits) {
      fam.clear();
      for (int i = 0; i < k; ++i)
        if ((bits >> i) & 1u) fam.push_back(sec[i]);
      check_family(fam);
    }
  } else {
    SplitMix64 rng(seed);
    std::vector<int> fam;
    for (int trial = 0; trial < kMeetCheckSamples && c.pass; ++trial) {
      fam.clear();
      uint64_t word = 0;
      for (int i = 0; i < k; ++i) {
        if (i % 64 == 0) word = rng.next();
        if ((word >> (i % 64)) & 1u) fam.push_back(sec[i]);
      }
      check_family(fam);
    }
  }
  rep.add(c);
  return rep;
}

// The sections presheaf: for each scalar b the sections supported exactly at
// b, with restriction s |-> as along a <= b.
struct SectionsPresheaf {
  BModule mod;
  std::vector<std::vector<int>> fibers;  // indexed by base element
  LawReport laws;

  int restrict_section(int a, int s) const { return mod.act(a, s); }
};

inline SectionsPresheaf sections_presheaf(const BModule& m) {
  m.require_etale();
  SectionsPresheaf out;
  out.mod = m;
  const Lattice& B = m.base();
  const Lattice& X = m.carrier();
  out.fibers.assign(B.size(), {});
  for (int s : m.sections()) out.fibers[m.spp(s)].push_back(s);
  out.laws.subject = "sections presheaf";
  {
    LawCheck c = LawCheck::ok("restrictions-land-in-fibers");
    for (int b = 0; b < B.size() && c.pass; ++b)
      for (int a = 0; a < B.size() && c.pass; ++a) {
        if (!B.leq(a, b)) continue;
        for (int s : out.fibers[b]) {
          const int as = m.act(a, s);
          if (m.spp(as) != a ||
              !std::binary_search(m.sections().begin(), m.sections().end(), as)) {
            c = LawCheck::fail("restrictions-land-in-fibers",
                               "a*s is not a section over a at a=" + B.name(a) +
                                   " s=" + detail::render(X, s),
                               {a, s});
            break;
          }
        }
      }
    out.laws.add(c);
  }
  {
    LawCheck c = LawCheck::ok("restriction-identity");
    for (int b = 0; b < B.size() && c.pass; ++b)
      for (int s : out.fibers[b])
        if (m.act(b, s) != s) {
          c = LawCheck::fail("restriction-identity", "b*s != s on its own fiber", {b, s});
          break;
        }
    out.laws.add(c);
  }
  {
    LawCheck c = LawCheck::ok("restrictions-compose");
    for (int b = 0; b < B.size() && c.pass; ++b)
      for (int mid = 0; mid < B.size() && c.pass; ++mid) {
        if (!B.leq(mid, b)) continue;
        for (int a = 0; a < B.size() && c.pass; ++a) {
          if (!B.leq(a, mid)) continue;
          for (int s : out.fibers[b])
            if (m.act(a, m.act(mid, s)) != m.act(a, s)) {
              c = LawCheck::fail("restrictions-compose", "restriction along a <= m <= b differs",
                                 {a, mid, b, s});
              break;
            }
        }
      }
    out.laws.add(c);
  }
  return out;
}

// Join-irreducibles of an etale carrier are scaled sections, hence sections;
// any join-preserving map is determined by its values there. Enumerators
// below walk assignments on irreducibles and filter by the full laws, so
// they are exhaustive whenever the candidate space fits the budget.

inline std::vector<ModuleHom> enumerate_sheaf_homs(const BModule& x, const BModule& y,
                                                   double budget = 2e6,
                                                   bool* complete = nullptr) {
  x.require_etale();
  y.require_etale();
  if (!x.same_base(y)) throw DimensionMismatch("sheaf homs need a common base frame");
  if (complete) *complete = true;
  const Lattice& X = x.carrier();
  const std::vector<int> irr = X.join_irreducibles();
  std::vector<std::vector<int>> candidates(irr.size());
  double total = 1;
  for (size_t i = 0; i < irr.size(); ++i) {
    for (int t : y.sections())
      if (y.spp(t) == x.spp(irr[i])) candidates[i].push_back(t);
    total *= static_cast<double>(candidates[i].size());
    if (candidates[i].empty()) return {};
  }
  if (total > budget) {
    if (complete) *complete = false;
    return {};
  }
  std::vector<ModuleHom> out;
  std::vector<size_t> pick(irr.size(), 0);
  std::vector<std::vector<int>> seen;
  while (true) {
    ModuleHom h{x, y, std::vector<int>(X.size())};
    for (int e = 0; e < X.size(); ++e) {
      int acc = y.carrier().bot();
      for (size_t i = 0; i < irr.size(); ++i)
        if (X.leq(irr[i], e)) acc = y.carrier().join(acc, candidates[i][pick[i]]);
      h.table[e] = acc;
    }
    if (std::find(seen.begin(), seen.end(), h.table) == seen.end()) {
      seen.push_back(h.table);
      if (is_module_hom(h) && is_sheaf_hom(h).pass) out.push_back(std::move(h));
    }
    size_t i = 0;
    for (; i < irr.size(); ++i) {
      if (++pick[i] < candidates[i].size()) break;
      pick[i] = 0;
    }
    if (i == irr.size()) break;
  }
  return out;
}

inline std::vector<BLocaleMap> enumerate_blocale_maps(const BModule& x, const BModule& y,
                                                      double budget = 2e6,
                                                      bool* complete = nullptr) {
  x.require_etale();
  y.require_etale();
  if (!x.same_base(y)) throw DimensionMismatch("B-locale maps need a common base frame");
  if (complete) *complete = true;
  const Lattice& X = x.carrier();
  const Lattice& Y = y.carrier();
  const std::vector<int> irr = Y.join_irreducibles();
  // f*(j) = spp(j) f*(j), so its support is bounded by spp(j).
  std::vector<std::vector<int>> candidates(irr.size());
  double total = 1;
  for (size_t i = 0; i < irr.size(); ++i) {
    for (int e = 0; e < X.size(); ++e)
      if (x.base().leq(x.spp(e), y.spp(irr[i]))) candidates[i].push_back(e);
    total *= static_cast<double>(candidates[i].size());
    if (candidates[i].empty()) return {};
  }
  if (total > budget) {
    if (complete) *complete = false;
    return {};
  }
  std::vector<BLocaleMap> out;
  std::vector<size_t> pick(irr.size(), 0);
  std::vector<std::vector<int>> seen;
  while (true) {
    std::vector<int> fstar(Y.size());
    for (int e = 0; e < Y.size(); ++e) {
      int acc = X.bot();
      for (size_t i = 0; i < irr.size(); ++i)
        if (Y.leq(irr[i], e)) acc = X.join(acc, candidates[i][pick[i]]);
      fstar[e] = acc;
    }
    if (std::find(seen.begin(), seen.end(), fstar) == seen.end()) {
      seen.push_back(fstar);
      BLocaleMap f{x, y, fstar};
      if (check_blocale_map(f).all_pass()) out.push_back(std::move(f));
    }
    size_t i = 0;
    for (; i < irr.size(); ++i) {
      if (++pick[i] < candidates[i].size()) break;
      pick[i] = 0;
    }
    if (i == irr.size()) break;
  }
  return out;
}

// Instance-level isomorphism of the two hom-sets: every map's direct image
// is a sheaf hom, the map is recovered from it by taking the adjoint, every
// sheaf hom arises that way from exactly one map, and (when both sides are
// exhaustively enumerable) the two sets have equal size.
struct FunctorIsoResult {
  bool sheaf_homs_complete = false;
  bool maps_complete = false;
  int sheaf_homs = 0;
  int maps = 0;
  LawReport laws;
  bool pass = false;
};

inline FunctorIsoResult functor_s_iso_check(const BModule& x, const BModule& y,
                                            double budget = 2e6) {
  x.require_etale();
  y.require_etale();
  FunctorIsoResult out;
  out.laws.subject = "maps vs sheaf homs";
  std::vector<ModuleHom> homs = enumerate_sheaf_homs(x, y, budget, &out.sheaf_homs_complete);
  std::vector<BLocaleMap> maps = enumerate_blocale_maps(x, y, budget, &out.maps_complete);
  out.sheaf_homs = static_cast<int>(homs.size());
  out.maps = static_cast<int>(maps.size());
  InnerProduct ipx = inner_from_support(x);
  InnerProduct ipy = inner_from_support(y);

  std::vector<std::vector<int>> image_tables;
  {
    LawCheck c = LawCheck::ok("direct-images-are-sheaf-homs");
    LawCheck r = LawCheck::ok("map-recovered-from-direct-image");
    for (const BLocaleMap& f : maps) {
      DirectImageResult di = direct_image(f);
      if (!di.laws.all_pass() || !is_sheaf_hom(di.image).pass) {
        c = LawCheck::fail("direct-images-are-sheaf-homs", "f_! fails the sheaf hom laws");
        break;
      }
      image_tables.push_back(di.image.table);
      ModuleHom dag = adjoint_formula(di.image, ipx, ipy, x.sections());
      if (dag.table != f.fstar) {
        r = LawCheck::fail("map-recovered-from-direct-image", "(f_!)' != f*");
      }
    }
    out.laws.add(c);
    out.laws.add(r);
  }
  {
    LawCheck c = LawCheck::ok("sheaf-homs-are-direct-images");
    for (const ModuleHom& h : homs) {
      ModuleHom dag = adjoint_formula(h, ipx, ipy, x.sections());
      BLocaleMap f{x, y, dag.table};
      if (!check_blocale_map(f).all_pass()) {
        c = LawCheck::fail("sheaf-homs-are-direct-images",
                           "adjoint of a sheaf hom is not an inverse image");
        break;
      }
      DirectImageResult di = direct_image(f);
      if (di.image.table != h.table) {
        c = LawCheck::fail("sheaf-homs-are-direct-images", "round trip through the map differs");
        break;
      }
    }
    out.laws.add(c);
  }
  if (out.sheaf_homs_complete && out.maps_complete) {
    LawCheck c = LawCheck::ok("correspondence-bijective");
    std::sort(image_tables.begin(), image_tables.end());
    if (std::adjacent_find(image_tables.begin(), image_tables.end()) != image_tables.end())
      c = LawCheck::fail("correspondence-bijective", "two maps share a direct image");
    std::vector<std::vector<int>> hom_tables;
    for (const ModuleHom& h : homs) hom_tables.push_back(h.table);
    std::sort(hom_tables.begin(), hom_tables.end());
    if (c.pass && hom_tables != image_tables)
      c = LawCheck::fail("correspondence-bijective",
                         "direct images and sheaf homs differ as sets (" +
                             std::to_string(image_tables.size()) + " vs " +
                             std::to_string(hom_tables.size()) + ")");
    out.laws.add(c);
  }
  out.pass = out.laws.all_pass();
  return out;
}

// A module hom violating the sheaf conditions whose adjoint therefore fails
// to be a frame homomorphism (otherwise it would define a map whose direct
// image is the hom itself).
struct NegativeWitness {
  bool found = false;
  ModuleHom hom;
  std::string failed_sheaf_condition;
  bool adjoint_fails_finite_meets = false;
  std::string note;
};

inline NegativeWitness find_non_sheaf_hom_witness(const BModule& x, const BModule& y,
                                                  double budget = 2e6) {
  x.require_etale();
  y.require_etale();
  if (!x.same_base(y)) throw DimensionMismatch("witness search needs a common base frame");
  NegativeWitness out;
  const Lattice& X = x.carrier();
  const Lattice& Y = y.carrier();
  const std::vector<int> irr = X.join_irreducibles();
  double total = 1;
  for (size_t i = 0; i < irr.size(); ++i) total *= static_cast<double>(Y.size());
  if (total > budget) return out;
  InnerProduct ipx = inner_from_support(x);
  InnerProduct ipy = inner_from_support(y);
  std::vector<size_t> pick(irr.size(), 0);
  while (true) {
    ModuleHom h{x, y, std::vector<int>(X.size())};
    for (int e = 0; e < X.size(); ++e) {
      int acc = Y.bot();
      for (size_t i = 0; i < irr.size(); ++i)
        if (X.leq(irr[i], e)) acc = Y.join(acc, static_cast<int>(pick[i]));
      h.table[e] = acc;
    }
    if (is_module_hom(h)) {
      SheafHomVerdict sv = is_sheaf_hom(h);
      if (!sv.pass) {
        out.found = true;
        out.hom = h;
        out.failed_sheaf_condition =
            !sv.sections_to_sections ? "sections-to-sections" : "supports-everywhere";
        ModuleHom dag = adjoint_formula(h, ipx, ipy, x.sections());
        bool meets_ok = dag.table[Y.top()] == X.top();
        for (int a = 0; a < Y.size() && meets_ok; ++a)
          for (int b = 0; b < Y.size(); ++b)
            if (dag.table[Y.meet(a, b)] != X.meet(dag.table[a], dag.table[b])) {
              meets_ok = false;
              break;
            }
        out.adjoint_fails_finite_meets = !meets_ok;
        out.note = meets_ok ? "adjoint unexpectedly preserves finite meets"
                            : "adjoint breaks finite meets or the top";
        return out;
      }
    }
    size_t i = 0;
    for (; i < irr.size(); ++i) {
      if (++pick[i] < static_cast<size_t>(Y.size())) break;
      pick[i] = 0;
    }
    if (i == irr.size()) break;
  }
  return out;
}

// Natural transformation induced by a sheaf hom on sections presheaves:
// components s |-> h(s) land in matching fibers and commute with
// restrictions.
inline LawReport presheaf_of_hom(const ModuleHom& h) {
  SheafHomVerdict sv = is_sheaf_hom(h);
  if (!sv.pass) throw NotSheafHom("presheaf morphisms come from sheaf homomorphisms");
  SectionsPresheaf px = sections_presheaf(h.src);
  SectionsPresheaf py = sections_presheaf(h.tgt);
  const Lattice& B = h.src.base();
  LawReport rep;
  rep.subject = "natural transformation of sections";
  {
    LawCheck c = LawCheck::ok("components-land-in-fibers");
    for (int b = 0; b < B.size() && c.pass; ++b)
      for (int s : px.fibers[b]) {
        const auto& fib = py.fibers[b];
        if (std::find(fib.begin(), fib.end(), h.at(s)) == fib.end()) {
          c = LawCheck::fail("components-land-in-fibers",
                             "h(s) not in the fiber over b=" + B.name(b), {b, s});
          break;
        }
      }
    rep.add(c);
  }
  {
    LawCheck c = LawCheck::ok("naturality-squares");
    for (int b = 0; b < B.size() && c.pass; ++b)
      for (int a = 0; a < B.size() && c.pass; ++a) {
        if (!B.leq(a, b)) continue;
        for (int s : px.fibers[b])
          if (h.at(h.src.act(a, s)) != h.tgt.act(a, h.at(s))) {
            c = LawCheck::fail("naturality-squares",
                               "restricting then mapping differs at a=" + B.name(a) +
                                   " s=" + std::to_string(s),
                               {a, b, s});
            break;
          }
      }
    rep.add(c);
  }
  return rep;
}

}  // namespace finloc
