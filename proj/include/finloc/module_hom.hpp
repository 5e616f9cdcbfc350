#pragma once

#include <string>
#include <vector>

#include "finloc/bmodule.hpp"
#include "finloc/errors.hpp"
#include "finloc/lattice.hpp"
#include "finloc/report.hpp"

namespace finloc {

// A function between module carriers, stored as a full table. Whether it is
// actually a homomorphism (join-preserving and equivariant) is a verdict.
struct ModuleHom {
  BModule src;
  BModule tgt;
  std::vector<int> table;  // index into tgt.carrier per src.carrier element

  int at(int x) const { return table.at(x); }
};

inline ModuleHom identity_hom(const BModule& m) {
  ModuleHom h{m, m, {}};
  h.table.resize(m.carrier().size());
  for (int x = 0; x < m.carrier().size(); ++x) h.table[x] = x;
  return h;
}

// g first, then f.
inline ModuleHom compose(const ModuleHom& f, const ModuleHom& g) {
  if (!f.src.same_object(g.tgt) && !f.src.carrier().same_structure(g.tgt.carrier()))
    throw DimensionMismatch("hom composition: inner modules do not match");
  ModuleHom h{g.src, f.tgt, {}};
  h.table.resize(g.table.size());
  for (size_t x = 0; x < g.table.size(); ++x) h.table[x] = f.table.at(g.table[x]);
  return h;
}

inline bool tables_equal(const ModuleHom& a, const ModuleHom& b) { return a.table == b.table; }

inline LawReport check_module_hom(const ModuleHom& h) {
  LawReport rep;
  rep.subject = "module homomorphism laws";
  const Lattice& X = h.src.carrier();
  const Lattice& Y = h.tgt.carrier();
  const Lattice& B = h.src.base();
  if (!h.src.same_base(h.tgt)) {
    rep.add(LawCheck::fail("hom-same-base", "source and target have different base frames"));
    return rep;
  }
  if (static_cast<int>(h.table.size()) != X.size()) {
    rep.add(LawCheck::fail("hom-total", "table size does not match the source carrier"));
    return rep;
  }
  for (int v : h.table)
    if (v < 0 || v >= Y.size()) {
      rep.add(LawCheck::fail("hom-total", "table entry out of range"));
      return rep;
    }
  {
    LawCheck c = LawCheck::ok("hom-preserves-empty-join");
    if (h.table[X.bot()] != Y.bot())
      c = LawCheck::fail("hom-preserves-empty-join", "h(0) != 0", {X.bot()});
    rep.add(c);
  }
  {
    LawCheck c = LawCheck::ok("hom-preserves-joins");
    for (int x = 0; x < X.size() && c.pass; ++x)
      for (int y = 0; y < X.size(); ++y)
        if (h.table[X.join(x, y)] != Y.join(h.table[x], h.table[y])) {
          c = LawCheck::fail("hom-preserves-joins",
                             "h(x v y) != h(x) v h(y) at x=" + detail::render(X, x) +
                                 " y=" + detail::render(X, y),
                             {x, y});
          break;
        }
    rep.add(c);
  }
  {
    LawCheck c = LawCheck::ok("hom-equivariant");
    for (int b = 0; b < B.size() && c.pass; ++b)
      for (int x = 0; x < X.size(); ++x)
        if (h.table[h.src.act(b, x)] != h.tgt.act(b, h.table[x])) {
          c = LawCheck::fail("hom-equivariant",
                             "h(bx) != b h(x) at b=" + B.name(b) + " x=" + detail::render(X, x),
                             {b, x});
          break;
        }
    rep.add(c);
  }
  return rep;
}

inline bool is_module_hom(const ModuleHom& h) { return check_module_hom(h).all_pass(); }

}  // namespace finloc
