#include "finloc/hilbert.hpp"

#include <gtest/gtest.h>

#include "finloc/bmodule.hpp"
#include "finloc/lattice.hpp"
#include "finloc/poset.hpp"

using namespace finloc;

namespace {

Lattice b2() { return Lattice::downset_frame(Poset::antichain(1)); }
Lattice ch3() { return Lattice::downset_frame(Poset::chain(2)); }

BModule free2() { return BModule::free(b2(), {"s", "t"}); }
BModule chain3_module() { return BModule::from_map(b2(), ch3(), {0, 2}); }

// Two sections over a chain that merge at the bottom: the étale space is the
// three-element poset b < t1, t2 over the two-chain p < q.
BModule merge_module() {
  Poset e = Poset::from_pairs({"b", "t1", "t2"}, {{0, 1}, {0, 2}});
  Lattice carrier = Lattice::downset_frame(e);
  Lattice base = ch3();
  // inverse image of the projection b|->p, t1,t2|->q
  std::vector<int> pstar = {carrier.index_of_mask(0), carrier.index_of_mask(1),
                            carrier.index_of_mask(7)};
  return BModule::from_map(base, carrier, pstar);
}

}  // namespace

TEST(InnerFromSupport, Free2Values) {
  BModule f = free2();
  InnerProduct ip = inner_from_support(f);
  const int e10 = f.index_of_tuple({1, 0});
  const int e01 = f.index_of_tuple({0, 1});
  const int e11 = f.index_of_tuple({1, 1});
  EXPECT_EQ(ip.at(e10, e01), 0);
  EXPECT_EQ(ip.at(e10, e11), 1);
  for (int x = 0; x < f.carrier().size(); ++x) EXPECT_EQ(ip.at(x, x), f.spp(x));
}

TEST(InnerFromSupport, RequiresOpen) {
  BModule not_open = BModule::from_map(ch3(), b2(), {0, 0, 1});
  EXPECT_THROW(inner_from_support(not_open), NotOpen);
}

TEST(InnerAxioms, PassOnOpenModules) {
  for (BModule m : {free2(), chain3_module(), merge_module()}) {
    HilbertModule h = hilbert_from_support(m);
    EXPECT_TRUE(h.axioms.all_pass()) << h.axioms.to_text();
    EXPECT_TRUE(h.flags.supported);
    EXPECT_TRUE(h.flags.weakly_nondegenerate);
  }
}

TEST(InnerAxioms, DetectBrokenTable) {
  BModule f = free2();
  std::vector<std::vector<int>> t(4, std::vector<int>(4, 0));
  t[1][2] = 1;  // asymmetric entry
  InnerProduct ip = inner_from_table(f, t);
  LawReport rep = check_inner_axioms(ip);
  EXPECT_FALSE(rep.all_pass());
  EXPECT_FALSE(rep.find("inner-symmetric")->pass);
}

TEST(InnerFlags, Chain3IsDegenerateButWeaklyNondegenerate) {
  HilbertModule h = hilbert_from_support(chain3_module());
  EXPECT_EQ(h.inner.at(1, 2), 1);  // <u,1> = 1
  EXPECT_EQ(h.inner.at(2, 2), 1);  // <1,1> = 1, same row as u
  EXPECT_FALSE(h.flags.nondegenerate);
  EXPECT_FALSE(h.flags.nondegenerate_witness.empty());
  EXPECT_TRUE(h.flags.weakly_nondegenerate);  // ~u = ~1 = 0
  EXPECT_TRUE(h.flags.supported);
}

TEST(InnerFlags, FreeModuleIsNondegenerate) {
  HilbertModule h = hilbert_from_support(free2());
  EXPECT_TRUE(h.flags.nondegenerate);
  EXPECT_TRUE(h.flags.strict);
  EXPECT_TRUE(h.flags.supported);
}

TEST(InnerFlags, TrivialModuleVacuouslyFine) {
  BModule m = BModule::free(b2(), {});
  HilbertModule h = hilbert_from_support(m);
  EXPECT_TRUE(h.axioms.all_pass());
  EXPECT_TRUE(h.flags.nondegenerate);
  EXPECT_TRUE(h.flags.strict);
  EXPECT_TRUE(h.flags.supported);
}

TEST(HilbertBasis, UnitVectorsInFreeModule) {
  BModule f = free2();
  InnerProduct ip = inner_from_support(f);
  std::vector<int> units = {f.index_of_tuple({1, 0}), f.index_of_tuple({0, 1})};
  EXPECT_TRUE(is_hilbert_basis(ip, units));
}

TEST(HilbertBasis, EmptyFamilyOnlyForTrivialModule) {
  BModule f = free2();
  InnerProduct ip = inner_from_support(f);
  std::string w;
  EXPECT_FALSE(is_hilbert_basis(ip, {}, &w));
  EXPECT_FALSE(w.empty());

  BModule triv = BModule::free(b2(), {});
  EXPECT_TRUE(is_hilbert_basis(inner_from_support(triv), {}));
}

TEST(HilbertBasis, SectionsOfEtaleModuleAreABasis) {
  for (BModule m : {free2(), merge_module()}) {
    ASSERT_TRUE(m.is_etale());
    InnerProduct ip = inner_from_support(m);
    EXPECT_TRUE(is_hilbert_basis(ip, m.sections()));
  }
}

TEST(BasisProperties, AllEightOnFreeModuleUnits) {
  BModule f = free2();
  InnerProduct ip = inner_from_support(f);
  std::vector<int> units = {f.index_of_tuple({1, 0}), f.index_of_tuple({0, 1})};
  LawReport rep = basis_properties(ip, units);
  EXPECT_TRUE(rep.all_pass()) << rep.to_text();
  // Clause 8 on unit vectors: the Gram matrix is the 2x2 identity.
  EXPECT_EQ(ip.at(units[0], units[0]), 1);
  EXPECT_EQ(ip.at(units[0], units[1]), 0);
  EXPECT_EQ(ip.at(units[1], units[1]), 1);
}

TEST(BasisProperties, AllEightOnSectionBases) {
  for (BModule m : {free2(), merge_module(), BModule::free(b2(), {})}) {
    InnerProduct ip = inner_from_support(m);
    LawReport rep = basis_properties(ip, m.sections());
    EXPECT_TRUE(rep.all_pass()) << rep.to_text();
  }
}

TEST(BasisProperties, RejectsNonBasis) {
  BModule f = free2();
  InnerProduct ip = inner_from_support(f);
  EXPECT_THROW(basis_properties(ip, {f.carrier().top()}), NoBasis);
}

TEST(ProjectivitySplit, FreeModuleIsGenuinelyFree) {
  BModule f = free2();
  InnerProduct ip = inner_from_support(f);
  std::vector<int> units = {f.index_of_tuple({1, 0}), f.index_of_tuple({0, 1})};
  ProjectivitySplit split = projectivity_split(ip, units);
  EXPECT_TRUE(split.laws.all_pass()) << split.laws.to_text();
  EXPECT_TRUE(split.phi_after_psi_identity);
  EXPECT_TRUE(split.psi_after_phi_identity);
  ASSERT_TRUE(split.materialized);
  // Materialized cross-check: psi o phi on every free-module element.
  for (int g = 0; g < split.free_module.carrier().size(); ++g)
    EXPECT_EQ(split.psi[split.phi[g]], split.free_module.tuple(g));
}

TEST(ProjectivitySplit, MergedSectionsRetractButNotFreely) {
  BModule m = merge_module();
  InnerProduct ip = inner_from_support(m);
  ProjectivitySplit split = projectivity_split(ip, m.sections());
  EXPECT_TRUE(split.phi_after_psi_identity);
  EXPECT_FALSE(split.psi_after_phi_identity);  // sections overlap, Gram is not the identity
  EXPECT_TRUE(split.laws.all_pass()) << split.laws.to_text();
}

TEST(ProjectivitySplit, TrivialModule) {
  BModule triv = BModule::free(b2(), {});
  InnerProduct ip = inner_from_support(triv);
  ProjectivitySplit split = projectivity_split(ip, {0});
  EXPECT_TRUE(split.phi_after_psi_identity);
  EXPECT_TRUE(split.laws.all_pass());
}

TEST(SupportFromInner, RecoversSupportTable) {
  for (BModule m : {free2(), chain3_module(), merge_module()}) {
    HilbertModule h = hilbert_from_support(m);
    Projection p = support_from_inner(h);
    EXPECT_TRUE(p.open) << p.laws.to_text();
    EXPECT_EQ(p.direct_image, m.candidate_support());
  }
}

TEST(SupportFromInner, RequiresSupported) {
  // A constant-zero inner product is not supported on a nontrivial module.
  BModule f = free2();
  std::vector<std::vector<int>> zeros(4, std::vector<int>(4, 0));
  HilbertModule h = make_hilbert(f, inner_from_table(f, zeros));
  EXPECT_THROW(support_from_inner(h), NotSupported);
}

TEST(ConverseBasisCriterion, HoldsForUnits) {
  BModule f = free2();
  InnerProduct ip = inner_from_support(f);
  std::vector<int> units = {f.index_of_tuple({1, 0}), f.index_of_tuple({0, 1})};
  EXPECT_TRUE(converse_basis_criterion(ip, units));
  EXPECT_TRUE(is_hilbert_basis(ip, units));
}

TEST(ConverseBasisCriterion, FailsWhenFactoringFails) {
  BModule f = free2();
  InnerProduct ip = inner_from_support(f);
  // The top alone does not factor <(1,0),(0,1)> = 0 through itself.
  EXPECT_FALSE(converse_basis_criterion(ip, {f.carrier().top()}));
  EXPECT_FALSE(is_hilbert_basis(ip, {f.carrier().top()}));
}

TEST(EtaleEquivalence, FreeModuleAllYes) {
  EtaleEquivalence v = etale_equivalence_check(free2());
  EXPECT_TRUE(v.etale);
  EXPECT_TRUE(v.admits_prehilbert_basis);
  EXPECT_TRUE(v.admits_hilbert_basis);
  EXPECT_TRUE(v.verdicts_agree);
}

TEST(EtaleEquivalence, Chain3AllNoCertifiedBySearch) {
  EtaleEquivalence v = etale_equivalence_check(chain3_module());
  EXPECT_FALSE(v.etale);
  EXPECT_FALSE(v.admits_prehilbert_basis);
  EXPECT_FALSE(v.admits_hilbert_basis);
  EXPECT_TRUE(v.verdicts_agree);
  EXPECT_TRUE(v.negative_certified_by_search);
}

TEST(EtaleEquivalence, TrivialModuleAllYes) {
  EtaleEquivalence v = etale_equivalence_check(BModule::free(b2(), {}));
  EXPECT_TRUE(v.etale);
  EXPECT_TRUE(v.verdicts_agree);
}

TEST(EtaleEquivalence, NonOpenAllNo) {
  EtaleEquivalence v = etale_equivalence_check(BModule::from_map(ch3(), b2(), {0, 0, 1}));
  EXPECT_FALSE(v.etale);
  EXPECT_FALSE(v.admits_prehilbert_basis);
  EXPECT_TRUE(v.verdicts_agree);
  EXPECT_EQ(v.note, "not open");
}
