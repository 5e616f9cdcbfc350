#include "finloc/lattice.hpp"

#include <gtest/gtest.h>

#include "finloc/poset.hpp"

using namespace finloc;

namespace {

// Independent oracle: counts down-closed subsets straight from the
// definition, using nothing but the order relation.
int count_downsets_brute(const Poset& p) {
  int count = 0;
  for (uint32_t m = 0; m < (1u << p.size()); ++m) {
    bool closed = true;
    for (int i = 0; i < p.size() && closed; ++i) {
      if (!((m >> i) & 1u)) continue;
      for (int j = 0; j < p.size() && closed; ++j)
        if (p.leq(j, i) && !((m >> j) & 1u)) closed = false;
    }
    if (closed) ++count;
  }
  return count;
}

Lattice m3() {
  // bottom, three incomparable atoms, top: modular but not distributive.
  return Lattice::from_tables(
      {"0", "a", "b", "c", "1"},
      {{0, 1, 2, 3, 4}, {1, 1, 4, 4, 4}, {2, 4, 2, 4, 4}, {3, 4, 4, 3, 4}, {4, 4, 4, 4, 4}},
      {{0, 0, 0, 0, 0}, {0, 1, 0, 0, 1}, {0, 0, 2, 0, 2}, {0, 0, 0, 3, 3}, {0, 1, 2, 3, 4}});
}

}  // namespace

TEST(Poset, ClosureAndAntisymmetry) {
  Poset p = Poset::from_pairs({"x", "y", "z"}, {{0, 1}, {1, 2}});
  EXPECT_TRUE(p.leq(0, 2));  // transitive closure
  EXPECT_TRUE(p.leq(1, 1));  // reflexive
  EXPECT_FALSE(p.leq(2, 0));
  EXPECT_THROW(Poset::from_pairs({"x", "y"}, {{0, 1}, {1, 0}}), ParseError);
}

TEST(Poset, SizeGuardrail) {
  std::vector<std::string> names(17, "e");
  for (int i = 0; i < 17; ++i) names[i] += std::to_string(i);
  EXPECT_THROW(Poset::from_pairs(names, {}), SizeExceeded);
}

TEST(Poset, Covers) {
  Poset p = Poset::from_pairs({"x", "y", "z"}, {{0, 1}, {1, 2}});
  auto cov = p.covers();
  ASSERT_EQ(cov.size(), 2u);  // x<y and y<z, but not x<z
  EXPECT_EQ(cov[0], std::make_pair(0, 1));
  EXPECT_EQ(cov[1], std::make_pair(1, 2));
}

TEST(DownsetFrame, EmptyPoset) {
  Lattice f = Lattice::downset_frame(Poset::antichain(0));
  EXPECT_EQ(f.size(), 1);
  EXPECT_EQ(f.bot(), f.top());
}

TEST(DownsetFrame, PointGivesTwoElements) {
  Lattice b2 = Lattice::downset_frame(Poset::antichain(1));
  EXPECT_EQ(b2.size(), 2);
  EXPECT_EQ(b2.join(0, 1), 1);
  EXPECT_EQ(b2.meet(0, 1), 0);
}

TEST(DownsetFrame, TwoAntichainGivesDiamond) {
  Poset p = Poset::antichain(2);
  EXPECT_EQ(count_downsets_brute(p), 4);
  Lattice bd = Lattice::downset_frame(p);
  ASSERT_EQ(bd.size(), 4);
  // 0 < a,b < 1 with a,b incomparable
  EXPECT_FALSE(bd.leq(1, 2));
  EXPECT_FALSE(bd.leq(2, 1));
  EXPECT_EQ(bd.join(1, 2), 3);
  EXPECT_EQ(bd.meet(1, 2), 0);
}

TEST(DownsetFrame, CountsMatchBruteEnumeration) {
  std::vector<Poset> posets = {
      Poset::antichain(3), Poset::chain(4), Poset::from_pairs({"a", "b", "c", "d"}, {{0, 2}, {1, 2}, {1, 3}}),
      Poset::product(Poset::chain(2), Poset::chain(2)),
      Poset::disjoint_union(Poset::chain(2), Poset::chain(2))};
  for (const auto& p : posets) {
    EXPECT_EQ(Lattice::downset_frame(p).size(), count_downsets_brute(p));
  }
}

TEST(VerifyFrame, DownsetFramesPass) {
  for (const Poset& p : {Poset::antichain(2), Poset::chain(3),
                         Poset::from_pairs({"a", "b", "c"}, {{0, 2}, {1, 2}})}) {
    Lattice f = Lattice::downset_frame(p);
    LawReport rep = verify_frame(f);
    EXPECT_TRUE(rep.all_pass()) << rep.to_text();
    EXPECT_TRUE(f.is_frame());
  }
}

TEST(VerifyFrame, M3FailsDistributivityWithWitness) {
  LawReport rep = verify_frame(m3());
  EXPECT_FALSE(rep.all_pass());
  const LawCheck* fail = rep.find("meet-distributes-over-join");
  ASSERT_NE(fail, nullptr);
  EXPECT_FALSE(fail->pass);
  EXPECT_FALSE(fail->witness.empty());
  EXPECT_EQ(fail->elems.size(), 3u);
  // All plain lattice laws still hold on M3.
  for (const char* law : {"join-associative", "meet-associative", "absorption",
                          "join-commutative", "meet-commutative"}) {
    const LawCheck* c = rep.find(law);
    ASSERT_NE(c, nullptr) << law;
    EXPECT_TRUE(c->pass) << law;
  }
  EXPECT_FALSE(m3().is_frame());
}

TEST(VerifyFrame, B2Passes) {
  EXPECT_TRUE(verify_frame(Lattice::downset_frame(Poset::antichain(1))).all_pass());
}

TEST(Heyting, TopAbsorbs) {
  Lattice bd = Lattice::downset_frame(Poset::antichain(2));
  for (int x = 0; x < bd.size(); ++x) EXPECT_EQ(bd.heyting(x, bd.top()), bd.top());
}

TEST(Heyting, ThreeChainNegation) {
  Lattice ch = Lattice::downset_frame(Poset::chain(2));  // 0 < u < 1
  EXPECT_EQ(ch.pseudo_complement(1), 0);                 // ~u = 0
  EXPECT_EQ(ch.pseudo_complement(0), ch.top());          // ~0 = 1
}

TEST(Heyting, DiamondImplication) {
  Lattice bd = Lattice::downset_frame(Poset::antichain(2));
  const int a = 1, b = 2;
  EXPECT_EQ(bd.heyting(a, b), b);  // z ^ a <= b exactly for z in {0, b}
}

TEST(Heyting, ResiduationHoldsOnFrames) {
  std::vector<Lattice> frames = {
      Lattice::downset_frame(Poset::antichain(2)), Lattice::downset_frame(Poset::chain(3)),
      Lattice::downset_frame(Poset::from_pairs({"a", "b", "c"}, {{0, 1}, {0, 2}}))};
  for (const Lattice& f : frames) {
    for (int x = 0; x < f.size(); ++x)
      for (int y = 0; y < f.size(); ++y) {
        const int h = f.heyting(x, y);
        for (int z = 0; z < f.size(); ++z)
          EXPECT_EQ(f.leq(f.meet(z, x), y), f.leq(z, h))
              << "residuation broken at x=" << x << " y=" << y << " z=" << z;
      }
  }
}

TEST(JoinMeetSet, EmptyAndSingleton) {
  Lattice bd = Lattice::downset_frame(Poset::antichain(2));
  EXPECT_EQ(bd.join_set({}), bd.bot());
  EXPECT_EQ(bd.meet_set({}), bd.top());
  for (int x = 0; x < bd.size(); ++x) {
    EXPECT_EQ(bd.join_set({x}), x);
    EXPECT_EQ(bd.meet_set({x}), x);
  }
}

TEST(JoinMeetSet, DiamondAtoms) {
  Lattice bd = Lattice::downset_frame(Poset::antichain(2));
  EXPECT_EQ(bd.join_set({1, 2}), bd.top());
  EXPECT_EQ(bd.meet_set({1, 2}), bd.bot());
}

TEST(Elem, CrossFrameComparisonThrows) {
  Lattice a = Lattice::downset_frame(Poset::antichain(1));
  Lattice b = Lattice::downset_frame(Poset::antichain(1));
  EXPECT_THROW((void)(a.elem(0) == b.elem(0)), CrossFrame);
  EXPECT_TRUE(a.elem(1) == a.elem(1));
  EXPECT_THROW(a.index_of(b.elem(0)), CrossFrame);
}

TEST(FromTables, RejectsWrongBottomConvention) {
  // Two elements with the roles swapped: element 0 acts as top.
  EXPECT_THROW(Lattice::from_tables({"x", "y"}, {{0, 0}, {0, 1}}, {{0, 1}, {1, 1}}), ParseError);
}

TEST(FromTables, RejectsBadShape) {
  EXPECT_THROW(Lattice::from_tables({"x", "y"}, {{0, 1}}, {{0, 0}, {0, 1}}), ParseError);
  EXPECT_THROW(Lattice::from_tables({}, {}, {}), ParseError);
}

TEST(JoinIrreducibles, Diamond) {
  Lattice bd = Lattice::downset_frame(Poset::antichain(2));
  auto irr = bd.join_irreducibles();
  EXPECT_EQ(irr, (std::vector<int>{1, 2}));
}

TEST(Birkhoff, RoundTripOnFrames) {
  for (const Poset& p : {Poset::antichain(2), Poset::chain(3),
                         Poset::from_pairs({"a", "b", "c", "d"}, {{0, 2}, {1, 2}, {1, 3}})}) {
    Lattice f = Lattice::downset_frame(p);
    BirkhoffIso iso = birkhoff_iso(f);
    ASSERT_EQ(iso.downsets.size(), f.size());
    for (int x = 0; x < f.size(); ++x) {
      EXPECT_EQ(iso.from_downset[iso.to_downset[x]], x);
      for (int y = 0; y < f.size(); ++y) {
        EXPECT_EQ(iso.to_downset[f.join(x, y)],
                  iso.downsets.join(iso.to_downset[x], iso.to_downset[y]));
        EXPECT_EQ(iso.to_downset[f.meet(x, y)],
                  iso.downsets.meet(iso.to_downset[x], iso.to_downset[y]));
      }
    }
  }
}

TEST(Birkhoff, RejectsNonFrame) { EXPECT_THROW(birkhoff_iso(m3()), NotAFrame); }
