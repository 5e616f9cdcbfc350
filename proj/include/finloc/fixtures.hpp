#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "finloc/bmodule.hpp"
#include "finloc/lattice.hpp"
#include "finloc/poset.hpp"
#include "finloc/presheaf.hpp"

namespace finloc {

// The fixed instance library. Frames and modules are addressable by name in
// the CLI; the modules double as the hand-checked corpus of the test suites.
struct Fixtures {
  // Frames.
  Lattice b2;     // two elements, down-sets of a point
  Lattice bd;     // diamond, down-sets of a two-element antichain
  Lattice chain;  // three-element chain, down-sets of a two-chain
  Lattice m3;     // bottom, three incomparable atoms, top: not distributive

  // Modules.
  BModule free2;       // B2 on two generators; etale, the unit vectors cover
  BModule chain3;      // B2 acting on the chain; open, degenerate inner, not etale
  BModule sierp_prod;  // product with the two-point discrete locale; open, not etale
  BModule ident;       // the diamond over itself; etale, every element a section
  BModule merge2;      // two sections glued over the bottom of a two-chain; etale, not free
  BModule non_open;    // a B-locale whose support candidate is not equivariant
};

inline Fixtures fixtures() {
  Fixtures f;
  f.b2 = Lattice::downset_frame(Poset::antichain(1));
  f.bd = Lattice::downset_frame(Poset::antichain(2));
  f.chain = Lattice::downset_frame(Poset::chain(2));
  f.m3 = Lattice::from_tables(
      {"0", "a", "b", "c", "1"},
      {{0, 1, 2, 3, 4}, {1, 1, 4, 4, 4}, {2, 4, 2, 4, 4}, {3, 4, 4, 3, 4}, {4, 4, 4, 4, 4}},
      {{0, 0, 0, 0, 0}, {0, 1, 0, 0, 1}, {0, 0, 2, 0, 2}, {0, 0, 0, 3, 3}, {0, 1, 2, 3, 4}});

  f.free2 = BModule::free(f.b2, {"s", "t"});
  f.chain3 = BModule::from_map(f.b2, f.chain, {0, 2});

  // Two disjoint copies of the two-chain: the carrier of the product of the
  // discrete two-point locale with the chain locale; the structure map picks
  // whole copies. Supports project onto "which copies are inhabited".
  {
    Poset two_chains = Poset::disjoint_union(Poset::chain(2), Poset::chain(2));
    Lattice carrier = Lattice::downset_frame(two_chains);
    std::vector<int> pstar(f.bd.size());
    for (int b = 0; b < f.bd.size(); ++b) {
      const uint32_t bm = f.bd.mask(b);
      uint32_t cm = 0;
      if (bm & 1u) cm |= 0x3u;  // first copy: germs 0,1
      if (bm & 2u) cm |= 0xcu;  // second copy: germs 2,3
      pstar[b] = carrier.index_of_mask(cm);
    }
    f.sierp_prod = BModule::from_map(f.bd, carrier, pstar);
  }

  {
    std::vector<int> id(f.bd.size());
    for (int i = 0; i < f.bd.size(); ++i) id[i] = i;
    f.ident = BModule::from_map(f.bd, f.bd, id);
  }

  {
    Poset germs = Poset::from_pairs({"b", "t1", "t2"}, {{0, 1}, {0, 2}});
    Lattice carrier = Lattice::downset_frame(germs);
    std::vector<int> pstar = {carrier.index_of_mask(0), carrier.index_of_mask(1),
                              carrier.index_of_mask(7)};
    f.merge2 = BModule::from_map(f.chain, carrier, pstar);
  }

  f.non_open = BModule::from_map(f.chain, f.b2, {0, 0, 1});
  return f;
}

// The same library keyed by name, for the CLI.
struct FixtureEntry {
  std::variant<Lattice, BModule> value;
};

inline std::map<std::string, FixtureEntry> fixture_map() {
  Fixtures f = fixtures();
  std::map<std::string, FixtureEntry> out;
  out["B2"] = {f.b2};
  out["BD"] = {f.bd};
  out["CH3"] = {f.chain};
  out["M3"] = {f.m3};
  out["FREE2"] = {f.free2};
  out["CHAIN3"] = {f.chain3};
  out["SIERP-PROD"] = {f.sierp_prod};
  out["IDENT"] = {f.ident};
  out["MERGE2"] = {f.merge2};
  out["NON-OPEN"] = {f.non_open};
  return out;
}

}  // namespace finloc
