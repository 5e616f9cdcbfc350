#include "finloc/pmatrix.hpp"

#include <gtest/gtest.h>

#include <set>

#include "finloc/bmodule.hpp"
#include "finloc/hilbert.hpp"
#include "finloc/lattice.hpp"
#include "finloc/poset.hpp"

using namespace finloc;

namespace {

Lattice b2() { return Lattice::downset_frame(Poset::antichain(1)); }
Lattice bd() { return Lattice::downset_frame(Poset::antichain(2)); }

BMatrix ones2(const Lattice& B) {
  return square_matrix(B, {"s", "t"}, {{B.top(), B.top()}, {B.top(), B.top()}});
}

// Independent oracle: the carrier of a matrix module by definition, as the
// set of images Mf over every f in B^S.
std::set<std::vector<int>> image_brute(const BMatrix& m) {
  const int nb = m.base.size();
  const int k = m.cols;
  std::set<std::vector<int>> out;
  std::vector<int> f(k, 0);
  while (true) {
    out.insert(matvec(m, f));
    int c = k - 1;
    for (; c >= 0; --c) {
      if (++f[c] < nb) break;
      f[c] = 0;
    }
    if (c < 0) break;
  }
  if (k == 0) out.insert(std::vector<int>{});
  return out;
}

}  // namespace

TEST(Matmul, IdentityIsNeutral) {
  Lattice B = bd();
  BMatrix id = identity_matrix(B, {"s", "t"});
  BMatrix m = square_matrix(B, {"s", "t"}, {{3, 1}, {1, 2}});
  EXPECT_TRUE(matrix_equal(matmul(id, m), m));
  EXPECT_TRUE(matrix_equal(matmul(m, id), m));
}

TEST(Matmul, OnesTimesUnitVector) {
  BMatrix m = ones2(b2());
  EXPECT_EQ(matvec(m, {1, 0}), (std::vector<int>{1, 1}));
}

TEST(Matmul, DimensionMismatch) {
  Lattice B = b2();
  BMatrix a = make_matrix(B, {"r"}, {"c1", "c2"}, {{1, 0}});
  EXPECT_THROW(matmul(a, a), DimensionMismatch);
  EXPECT_THROW(matvec(a, {1}), DimensionMismatch);
}

TEST(IsProjection, IdentityAndSingletons) {
  Lattice B = bd();
  EXPECT_TRUE(is_projection_matrix(identity_matrix(B, {"s", "t"})).pass);
  for (int b = 0; b < B.size(); ++b)
    EXPECT_TRUE(is_projection_matrix(square_matrix(B, {"s"}, {{b}})).pass);
}

TEST(IsProjection, NonSymmetricOverDiamond) {
  Lattice B = bd();
  Verdict v = is_projection_matrix(square_matrix(B, {"s", "t"}, {{3, 1}, {2, 3}}));
  EXPECT_FALSE(v.pass);
  EXPECT_FALSE(v.witness.empty());
}

TEST(IsProjection, IdempotenceCanFail) {
  // Symmetric but not idempotent: zero diagonal with a connecting entry.
  Lattice B = b2();
  Verdict v = is_projection_matrix(square_matrix(B, {"s", "t"}, {{0, 1}, {1, 0}}));
  EXPECT_FALSE(v.pass);
}

TEST(ModuleFromMatrix, IdentityGivesFreeModule) {
  MatrixModule mm = module_from_matrix(identity_matrix(b2(), {"s", "t"}));
  EXPECT_TRUE(mm.laws.all_pass()) << mm.laws.to_text();
  EXPECT_EQ(mm.mod.carrier().size(), 4);
  EXPECT_TRUE(mm.mod.is_etale());
  // Columns are the unit vectors.
  EXPECT_EQ(mm.mod.tuple(mm.columns[0]), (std::vector<int>{1, 0}));
  EXPECT_EQ(mm.mod.tuple(mm.columns[1]), (std::vector<int>{0, 1}));
}

TEST(ModuleFromMatrix, OnesCollapsesToBase) {
  MatrixModule mm = module_from_matrix(ones2(b2()));
  EXPECT_TRUE(mm.laws.all_pass()) << mm.laws.to_text();
  EXPECT_EQ(mm.mod.carrier().size(), 2);  // {(0,0),(1,1)}
  EXPECT_EQ(mm.columns[0], mm.columns[1]);
}

TEST(ModuleFromMatrix, SingleScalarOverDiamond) {
  Lattice B = bd();
  MatrixModule mm = module_from_matrix(square_matrix(B, {"s"}, {{1}}));
  EXPECT_TRUE(mm.laws.all_pass()) << mm.laws.to_text();
  EXPECT_EQ(mm.mod.carrier().size(), 2);  // {0, a}
}

TEST(ModuleFromMatrix, EmptyMatrixGivesTrivialModule) {
  BMatrix empty = square_matrix(b2(), {}, {});
  MatrixModule mm = module_from_matrix(empty);
  EXPECT_EQ(mm.mod.carrier().size(), 1);
  EXPECT_TRUE(mm.laws.all_pass()) << mm.laws.to_text();
}

TEST(ModuleFromMatrix, CarrierMatchesBruteForceImage) {
  std::vector<BMatrix> cases = {identity_matrix(b2(), {"s", "t"}), ones2(b2()),
                                square_matrix(bd(), {"s"}, {{1}}),
                                square_matrix(bd(), {"s", "t"}, {{3, 1}, {1, 3}})};
  for (const BMatrix& m : cases) {
    MatrixModule mm = module_from_matrix(m);
    std::set<std::vector<int>> brute = image_brute(m);
    ASSERT_EQ(static_cast<int>(brute.size()), mm.mod.carrier().size());
    for (int x = 0; x < mm.mod.carrier().size(); ++x)
      EXPECT_TRUE(brute.count(mm.mod.tuple(x)));
  }
}

TEST(ModuleFromMatrix, RejectsNonProjection) {
  EXPECT_THROW(module_from_matrix(square_matrix(b2(), {"s", "t"}, {{0, 1}, {1, 0}})),
               NotProjection);
}

TEST(MatrixFromModule, FreeModuleUnitsGiveIdentity) {
  BModule f = BModule::free(b2(), {"s", "t"});
  InnerProduct ip = inner_from_support(f);
  std::vector<int> units = {f.index_of_tuple({1, 0}), f.index_of_tuple({0, 1})};
  BMatrix m = matrix_from_module(ip, units);
  EXPECT_TRUE(matrix_equal(m, identity_matrix(b2(), m.row_labels)));
}

TEST(MatrixFromModule, ExactRoundTripFromMatrix) {
  std::vector<BMatrix> cases = {identity_matrix(b2(), {"s", "t"}), ones2(b2()),
                                square_matrix(bd(), {"s"}, {{1}}),
                                square_matrix(bd(), {"s", "t"}, {{3, 1}, {1, 3}})};
  for (const BMatrix& m : cases) {
    MatrixModule mm = module_from_matrix(m);
    BMatrix back = matrix_from_module(mm.inner, mm.columns);
    EXPECT_EQ(back.entries, m.entries);
  }
}

TEST(MatrixFromModule, TrivialModuleZeroMatrix) {
  BModule triv = BModule::free(b2(), {});
  InnerProduct ip = inner_from_support(triv);
  BMatrix m = matrix_from_module(ip, {0});
  ASSERT_EQ(m.rows, 1);
  EXPECT_EQ(m.at(0, 0), 0);
}

TEST(CanonicalIso, BasedModulesMatchTheirMatrixModules) {
  BModule f = BModule::free(b2(), {"s", "t"});
  InnerProduct ip = inner_from_support(f);
  std::vector<int> sections = f.sections();
  BMatrix m = matrix_from_module(ip, sections);
  MatrixModule mm = module_from_matrix(m);
  CanonicalIso iso = canonical_iso(mm, ip, sections);
  EXPECT_TRUE(iso.laws.all_pass()) << iso.laws.to_text();
}

TEST(Arrows, IdentityLaws) {
  BMatrix m = identity_matrix(b2(), {"s", "t"});
  BMatrix n = ones2(b2());
  // Both rows equal: a valid arrow M -> N.
  BMatrix f = make_matrix(b2(), n.row_labels, m.col_labels, {{1, 0}, {1, 0}});
  MatArrow F = make_arrow(m, n, f);
  MatArrow idm = arrow_identity(m);
  MatArrow idn = arrow_identity(n);
  EXPECT_TRUE(matrix_equal(arrow_compose(F, idm).f, F.f));
  EXPECT_TRUE(matrix_equal(arrow_compose(idn, F).f, F.f));
}

TEST(Arrows, TransposeInvolutive) {
  BMatrix m = identity_matrix(b2(), {"s", "t"});
  BMatrix n = ones2(b2());
  MatArrow F = make_arrow(m, n, make_matrix(b2(), n.row_labels, m.col_labels, {{1, 0}, {1, 0}}));
  MatArrow Ft = arrow_transpose(F);
  EXPECT_TRUE(matrix_equal(arrow_transpose(Ft).f, F.f));
  EXPECT_TRUE(matrix_equal(Ft.src, n));
  EXPECT_TRUE(matrix_equal(Ft.tgt, m));
}

TEST(Arrows, TransposeContravariant) {
  Lattice B = b2();
  BMatrix m = identity_matrix(B, {"s", "t"});
  MatArrow G = make_arrow(m, m, make_matrix(B, m.row_labels, m.col_labels, {{0, 1}, {1, 0}}));
  MatArrow F = make_arrow(m, m, make_matrix(B, m.row_labels, m.col_labels, {{1, 0}, {0, 0}}));
  MatArrow lhs = arrow_transpose(arrow_compose(F, G));
  MatArrow rhs = arrow_compose(arrow_transpose(G), arrow_transpose(F));
  EXPECT_TRUE(matrix_equal(lhs.f, rhs.f));
}

TEST(Arrows, ViolationThrows) {
  BMatrix m = identity_matrix(b2(), {"s", "t"});
  BMatrix n = ones2(b2());
  // Rows differ: NF != F.
  EXPECT_THROW(make_arrow(m, n, make_matrix(b2(), n.row_labels, m.col_labels, {{1, 0}, {0, 0}})),
               ArrowLawViolation);
}

TEST(FunctorMatrix, IdentityHomGivesObject) {
  BModule f = BModule::free(b2(), {"s", "t"});
  InnerProduct ip = inner_from_support(f);
  std::vector<int> sections = f.sections();
  MatArrow a = matrix_of_hom(identity_hom(f), ip, sections, ip, sections);
  EXPECT_TRUE(matrix_equal(a.f, a.src));
  EXPECT_TRUE(matrix_equal(a.f, matrix_from_module(ip, sections)));
}

TEST(FunctorMatrix, CoordinateSwapGivesPermutation) {
  BModule f = BModule::free(b2(), {"s", "t"});
  InnerProduct ip = inner_from_support(f);
  std::vector<int> units = {f.index_of_tuple({1, 0}), f.index_of_tuple({0, 1})};
  ModuleHom swap{f, f, {}};
  swap.table.resize(4);
  for (int x = 0; x < 4; ++x) {
    auto t = f.tuple(x);
    std::swap(t[0], t[1]);
    swap.table[x] = f.index_of_tuple(t);
  }
  MatArrow a = matrix_of_hom(swap, ip, units, ip, units);
  EXPECT_EQ(a.f.at(0, 0), 0);
  EXPECT_EQ(a.f.at(0, 1), 1);
  EXPECT_EQ(a.f.at(1, 0), 1);
  EXPECT_EQ(a.f.at(1, 1), 0);
  // Functoriality: swap o swap = id maps to the object matrix.
  MatArrow a2 = arrow_compose(a, a);
  EXPECT_TRUE(matrix_equal(a2.f, a.src));
}

TEST(FunctorModule, IdentityArrowGivesIdentityHom) {
  MatrixModule mm = module_from_matrix(ones2(b2()));
  ModuleHom h = hom_of_arrow(arrow_identity(ones2(b2())), mm, mm);
  EXPECT_TRUE(tables_equal(h, identity_hom(mm.mod)));
}

TEST(FunctorModule, RoundTripMatrixOfHomOfArrow) {
  // M(X(F)) = F exactly on a non-identity arrow.
  Lattice B = b2();
  BMatrix m = identity_matrix(B, {"s", "t"});
  BMatrix n = ones2(B);
  MatArrow F = make_arrow(m, n, make_matrix(B, n.row_labels, m.col_labels, {{1, 0}, {1, 0}}));
  MatrixModule src = module_from_matrix(m);
  MatrixModule tgt = module_from_matrix(n);
  ModuleHom h = hom_of_arrow(F, src, tgt);
  EXPECT_TRUE(is_module_hom(h));
  MatArrow back = matrix_of_hom(h, src.inner, src.columns, tgt.inner, tgt.columns);
  EXPECT_TRUE(matrix_equal(back.f, F.f));
}

TEST(FunctorModule, HomRoundTripUpToCanonicalIso) {
  // X(M(h)) = h transported along the canonical isomorphisms.
  BModule f = BModule::free(b2(), {"s", "t"});
  InnerProduct ip = inner_from_support(f);
  std::vector<int> sections = f.sections();
  ModuleHom swap{f, f, {}};
  swap.table.resize(4);
  for (int x = 0; x < 4; ++x) {
    auto t = f.tuple(x);
    std::swap(t[0], t[1]);
    swap.table[x] = f.index_of_tuple(t);
  }
  MatArrow a = matrix_of_hom(swap, ip, sections, ip, sections);
  MatrixModule mm = module_from_matrix(a.src);
  ModuleHom xh = hom_of_arrow(a, mm, mm);
  CanonicalIso iso = canonical_iso(mm, ip, sections);
  ASSERT_TRUE(iso.laws.all_pass());
  ModuleHom lhs = compose(swap, iso.to_module);
  ModuleHom rhs = compose(iso.to_module, xh);
  EXPECT_TRUE(tables_equal(lhs, rhs));
}
