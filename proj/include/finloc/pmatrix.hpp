#pragma once

#include <string>
#include <utility>
#include <vector>

#include "finloc/bmodule.hpp"
#include "finloc/errors.hpp"
#include "finloc/hilbert.hpp"
#include "finloc/lattice.hpp"
#include "finloc/module_hom.hpp"
#include "finloc/report.hpp"

namespace finloc {

// A rectangular matrix over the (v,^) semiring of a frame.
struct BMatrix {
  Lattice base;
  int rows = 0;
  int cols = 0;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<int> entries;  // row-major base-element indices

  int at(int r, int c) const {
    if (r < 0 || r >= rows || c < 0 || c >= cols) throw OutOfRange("matrix index out of range");
    return entries[static_cast<size_t>(r) * cols + c];
  }
};

inline BMatrix make_matrix(const Lattice& base, std::vector<std::string> row_labels,
                           std::vector<std::string> col_labels,
                           const std::vector<std::vector<int>>& rows) {
  BMatrix m;
  m.base = base;
  m.rows = static_cast<int>(row_labels.size());
  m.cols = static_cast<int>(col_labels.size());
  m.row_labels = std::move(row_labels);
  m.col_labels = std::move(col_labels);
  if (static_cast<int>(rows.size()) != m.rows) throw ParseError("matrix has wrong row count");
  m.entries.reserve(static_cast<size_t>(m.rows) * m.cols);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != m.cols) throw ParseError("matrix row has wrong length");
    for (int v : row) {
      if (v < 0 || v >= base.size()) throw ParseError("matrix entry out of range");
      m.entries.push_back(v);
    }
  }
  return m;
}

inline BMatrix square_matrix(const Lattice& base, std::vector<std::string> labels,
                             const std::vector<std::vector<int>>& rows) {
  auto copy = labels;
  return make_matrix(base, std::move(labels), std::move(copy), rows);
}

inline BMatrix identity_matrix(const Lattice& base, std::vector<std::string> labels) {
  const int k = static_cast<int>(labels.size());
  std::vector<std::vector<int>> rows(k, std::vector<int>(k, base.bot()));
  for (int i = 0; i < k; ++i) rows[i][i] = base.top();
  return square_matrix(base, std::move(labels), rows);
}

// (AB)_{su} = V_t a_{st} ^ b_{tu}.
inline BMatrix matmul(const BMatrix& a, const BMatrix& b) {
  if (!a.base.same_structure(b.base)) throw DimensionMismatch("matrices over different frames");
  if (a.cols != b.rows)
    throw DimensionMismatch("matrix product " + std::to_string(a.rows) + "x" +
                            std::to_string(a.cols) + " by " + std::to_string(b.rows) + "x" +
                            std::to_string(b.cols));
  BMatrix out;
  out.base = a.base;
  out.rows = a.rows;
  out.cols = b.cols;
  out.row_labels = a.row_labels;
  out.col_labels = b.col_labels;
  out.entries.resize(static_cast<size_t>(out.rows) * out.cols);
  for (int s = 0; s < a.rows; ++s)
    for (int u = 0; u < b.cols; ++u) {
      int acc = a.base.bot();
      for (int t = 0; t < a.cols; ++t) acc = a.base.join(acc, a.base.meet(a.at(s, t), b.at(t, u)));
      out.entries[static_cast<size_t>(s) * out.cols + u] = acc;
    }
  return out;
}

inline std::vector<int> matvec(const BMatrix& m, const std::vector<int>& f) {
  if (static_cast<int>(f.size()) != m.cols) throw DimensionMismatch("vector has wrong length");
  std::vector<int> out(m.rows);
  for (int s = 0; s < m.rows; ++s) {
    int acc = m.base.bot();
    for (int t = 0; t < m.cols; ++t) acc = m.base.join(acc, m.base.meet(m.at(s, t), f[t]));
    out[s] = acc;
  }
  return out;
}

inline BMatrix transpose_matrix(const BMatrix& m) {
  BMatrix out;
  out.base = m.base;
  out.rows = m.cols;
  out.cols = m.rows;
  out.row_labels = m.col_labels;
  out.col_labels = m.row_labels;
  out.entries.resize(m.entries.size());
  for (int r = 0; r < out.rows; ++r)
    for (int c = 0; c < out.cols; ++c)
      out.entries[static_cast<size_t>(r) * out.cols + c] = m.at(c, r);
  return out;
}

inline bool matrix_equal(const BMatrix& a, const BMatrix& b) {
  return a.rows == b.rows && a.cols == b.cols && a.entries == b.entries &&
         a.base.same_structure(b.base);
}

struct Verdict {
  bool pass = true;
  std::string witness;
};

// Symmetric and idempotent under the (v,^) product.
inline Verdict is_projection_matrix(const BMatrix& m) {
  if (m.rows != m.cols) return {false, "matrix is not square"};
  for (int s = 0; s < m.rows; ++s)
    for (int t = 0; t < m.cols; ++t)
      if (m.at(s, t) != m.at(t, s))
        return {false, "not symmetric at (" + std::to_string(s) + "," + std::to_string(t) + ")"};
  BMatrix sq = matmul(m, m);
  for (int s = 0; s < m.rows; ++s)
    for (int t = 0; t < m.cols; ++t)
      if (sq.at(s, t) != m.at(s, t))
        return {false, "not idempotent at (" + std::to_string(s) + "," + std::to_string(t) + ")"};
  return {};
}

// The module of matrix-fixed vectors {Mf : f in B^S} with its inherited
// inner product <f,g> = V_s f_s ^ g_s and the matrix columns as basis.
struct MatrixModule {
  BModule mod;
  InnerProduct inner;
  std::vector<int> columns;  // carrier index of each column, in S order
  LawReport laws;
};

inline MatrixModule module_from_matrix(const BMatrix& m) {
  Verdict v = is_projection_matrix(m);
  if (!v.pass) throw NotProjection("not a projection matrix: " + v.witness);
  const Lattice& B = m.base;
  const int k = m.rows;

  // The image {Mf} is exactly the set of joins of scaled columns b ^ col_s;
  // close the zero vector under joining with each such generator.
  std::vector<std::vector<int>> family;
  family.push_back(std::vector<int>(k, B.bot()));
  std::map<std::vector<int>, bool> seen;
  seen[family[0]] = true;
  for (int s = 0; s < k; ++s)
    for (int b = 0; b < B.size(); ++b) {
      std::vector<int> gen(k);
      for (int t = 0; t < k; ++t) gen[t] = B.meet(b, m.at(t, s));
      for (size_t i = 0; i < family.size(); ++i) {
        std::vector<int> j(k);
        for (int t = 0; t < k; ++t) j[t] = B.join(family[i][t], gen[t]);
        if (!seen.count(j)) {
          seen[j] = true;
          family.push_back(std::move(j));
          if (static_cast<int>(family.size()) > kMaxFreeModuleElements)
            throw SizeExceeded("matrix module carrier exceeds " +
                               std::to_string(kMaxFreeModuleElements) + " elements");
        }
      }
    }

  MatrixModule out;
  out.mod = BModule::from_tuple_family(B, std::move(family));
  out.laws.subject = "matrix module";

  const Lattice& X = out.mod.carrier();
  const int n = X.size();
  out.inner.mod = out.mod;
  out.inner.table.resize(static_cast<size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int acc = B.bot();
      const auto& tx = out.mod.tuple(x);
      const auto& ty = out.mod.tuple(y);
      for (int s = 0; s < k; ++s) acc = B.join(acc, B.meet(tx[s], ty[s]));
      out.inner.table[static_cast<size_t>(x) * n + y] = static_cast<uint16_t>(acc);
    }

  out.columns.resize(k);
  {
    LawCheck c = LawCheck::ok("columns-in-carrier");
    for (int s = 0; s < k; ++s) {
      std::vector<int> col(k);
      for (int t = 0; t < k; ++t) col[t] = m.at(t, s);
      try {
        out.columns[s] = out.mod.index_of_tuple(col);
      } catch (const OutOfRange&) {
        c = LawCheck::fail("columns-in-carrier", "column " + std::to_string(s) +
                                                     " is not fixed by the matrix");
        break;
      }
    }
    out.laws.add(c);
  }
  {
    LawCheck c = LawCheck::ok("gram-recovers-matrix");
    for (int s = 0; s < k && c.pass; ++s)
      for (int t = 0; t < k; ++t)
        if (out.inner.at(out.columns[s], out.columns[t]) != m.at(s, t)) {
          c = LawCheck::fail("gram-recovers-matrix",
                             "<col_s,col_t> != m_st at (" + std::to_string(s) + "," +
                                 std::to_string(t) + ")",
                             {s, t});
          break;
        }
    out.laws.add(c);
  }
  {
    LawCheck c = LawCheck::ok("carrier-is-frame");
    if (!X.is_frame()) c = LawCheck::fail("carrier-is-frame", "frame laws fail on the image");
    out.laws.add(c);
  }
  {
    LawCheck c = LawCheck::ok("columns-form-basis");
    std::string w;
    if (!is_hilbert_basis(out.inner, out.columns, &w))
      c = LawCheck::fail("columns-form-basis", w);
    out.laws.add(c);
  }
  {
    LawCheck c = LawCheck::ok("inner-axioms");
    LawReport ax = check_inner_axioms(out.inner);
    if (!ax.all_pass()) {
      const LawCheck* ff = ax.first_failure();
      c = LawCheck::fail("inner-axioms", ff->law + ": " + ff->witness);
    }
    out.laws.add(c);
  }
  return out;
}

// The Gram matrix of a Hilbert-basis family. Duplicate family members give
// duplicate rows/columns, which is exactly what round trips need.
inline BMatrix matrix_from_module(const InnerProduct& ip, const std::vector<int>& family) {
  std::string w;
  if (!is_hilbert_basis(ip, family, &w)) throw NoBasis("family is not a Hilbert basis: " + w);
  const int k = static_cast<int>(family.size());
  std::vector<std::string> labels(k);
  for (int i = 0; i < k; ++i) labels[i] = ip.mod.carrier().name(family[i]);
  std::vector<std::vector<int>> rows(k, std::vector<int>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) rows[i][j] = ip.at(family[i], family[j]);
  BMatrix m = square_matrix(ip.mod.base(), std::move(labels), rows);
  Verdict v = is_projection_matrix(m);
  if (!v.pass)
    throw NotProjection("Gram matrix of a basis failed the projection laws: " + v.witness);
  return m;
}

// An arrow M -> N in the matrix category: F with FM = F = NF.
struct MatArrow {
  BMatrix src;  // M : S x S
  BMatrix tgt;  // N : T x T
  BMatrix f;    // F : T x S
};

inline LawReport check_arrow(const MatArrow& a) {
  LawReport rep;
  rep.subject = "matrix arrow laws";
  if (a.f.rows != a.tgt.rows || a.f.cols != a.src.rows) {
    rep.add(LawCheck::fail("arrow-shape", "F must be T x S"));
    return rep;
  }
  {
    LawCheck c = LawCheck::ok("arrow-absorbs-source");
    if (!matrix_equal(matmul(a.f, a.src), a.f))
      c = LawCheck::fail("arrow-absorbs-source", "FM != F");
    rep.add(c);
  }
  {
    LawCheck c = LawCheck::ok("arrow-absorbs-target");
    if (!matrix_equal(matmul(a.tgt, a.f), a.f))
      c = LawCheck::fail("arrow-absorbs-target", "NF != F");
    rep.add(c);
  }
  return rep;
}

inline MatArrow make_arrow(BMatrix src, BMatrix tgt, BMatrix f) {
  MatArrow a{std::move(src), std::move(tgt), std::move(f)};
  LawReport rep = check_arrow(a);
  if (!rep.all_pass())
    throw ArrowLawViolation(rep.first_failure()->law + ": " + rep.first_failure()->witness);
  return a;
}

// The identity arrow on an object is the object itself.
inline MatArrow arrow_identity(const BMatrix& m) { return make_arrow(m, m, m); }

// g first, then f.
inline MatArrow arrow_compose(const MatArrow& f, const MatArrow& g) {
  if (!matrix_equal(f.src, g.tgt)) throw ArrowLawViolation("arrows are not composable");
  return make_arrow(g.src, f.tgt, matmul(f.f, g.f));
}

// Transposition is the involution: F : M -> N gives F^T : N -> M.
inline MatArrow arrow_transpose(const MatArrow& a) {
  return make_arrow(a.tgt, a.src, transpose_matrix(a.f));
}

// Matrix of a homomorphism between based modules: rows indexed by the target
// family, columns by the source family, entry (t,s) = <h(s), t>.
inline MatArrow matrix_of_hom(const ModuleHom& h, const InnerProduct& src_ip,
                              const std::vector<int>& src_family, const InnerProduct& tgt_ip,
                              const std::vector<int>& tgt_family) {
  if (!is_module_hom(h)) throw NotAHom("matrix_of_hom needs a module homomorphism");
  BMatrix m = matrix_from_module(src_ip, src_family);
  BMatrix n = matrix_from_module(tgt_ip, tgt_family);
  const int s_count = static_cast<int>(src_family.size());
  const int t_count = static_cast<int>(tgt_family.size());
  std::vector<std::vector<int>> rows(t_count, std::vector<int>(s_count));
  for (int t = 0; t < t_count; ++t)
    for (int s = 0; s < s_count; ++s) rows[t][s] = tgt_ip.at(h.at(src_family[s]), tgt_family[t]);
  BMatrix f = make_matrix(h.tgt.base(), n.row_labels, m.col_labels, rows);
  return make_arrow(std::move(m), std::move(n), std::move(f));
}

// The specific isomorphism between a based module and the module of its Gram
// matrix: alpha(f) = V_s f_s s with inverse beta(x) = (<x,s>)_s. Round-trip
// statements that hold only up to isomorphism are checked through this map,
// never by searching for some isomorphism.
struct CanonicalIso {
  ModuleHom to_module;         // matrix module -> based module
  ModuleHom to_matrix_module;  // based module -> matrix module
  LawReport laws;
};

inline CanonicalIso canonical_iso(const MatrixModule& xm, const InnerProduct& ip,
                                  const std::vector<int>& family) {
  const BModule& h = ip.mod;
  const Lattice& X = h.carrier();
  const int k = static_cast<int>(family.size());
  CanonicalIso iso;
  iso.laws.subject = "canonical isomorphism";

  iso.to_module = ModuleHom{xm.mod, h, {}};
  iso.to_module.table.resize(xm.mod.carrier().size());
  for (int i = 0; i < xm.mod.carrier().size(); ++i) {
    const auto& f = xm.mod.tuple(i);
    int acc = X.bot();
    for (int s = 0; s < k; ++s) acc = X.join(acc, h.act(f[s], family[s]));
    iso.to_module.table[i] = acc;
  }
  iso.to_matrix_module = ModuleHom{h, xm.mod, {}};
  iso.to_matrix_module.table.resize(X.size());
  for (int x = 0; x < X.size(); ++x) {
    std::vector<int> t(k);
    for (int s = 0; s < k; ++s) t[s] = ip.at(x, family[s]);
    iso.to_matrix_module.table[x] = xm.mod.index_of_tuple(t);
  }
  {
    LawCheck c = LawCheck::ok("iso-round-trip-module");
    for (int x = 0; x < X.size() && c.pass; ++x)
      if (iso.to_module.table[iso.to_matrix_module.table[x]] != x)
        c = LawCheck::fail("iso-round-trip-module", "alpha(beta(x)) != x at x=" + X.name(x), {x});
    iso.laws.add(c);
  }
  {
    LawCheck c = LawCheck::ok("iso-round-trip-matrix-module");
    for (int i = 0; i < xm.mod.carrier().size() && c.pass; ++i)
      if (iso.to_matrix_module.table[iso.to_module.table[i]] != i)
        c = LawCheck::fail("iso-round-trip-matrix-module", "beta(alpha(f)) != f", {i});
    iso.laws.add(c);
  }
  {
    LawCheck c = LawCheck::ok("iso-module-hom-both-ways");
    LawReport a = check_module_hom(iso.to_module);
    LawReport b = check_module_hom(iso.to_matrix_module);
    if (!a.all_pass() || !b.all_pass()) {
      const LawCheck* ff = a.all_pass() ? b.first_failure() : a.first_failure();
      c = LawCheck::fail("iso-module-hom-both-ways", ff->law + ": " + ff->witness);
    }
    iso.laws.add(c);
  }
  {
    LawCheck c = LawCheck::ok("iso-preserves-inner");
    for (int i = 0; i < xm.mod.carrier().size() && c.pass; ++i)
      for (int j = 0; j < xm.mod.carrier().size(); ++j)
        if (xm.inner.at(i, j) != ip.at(iso.to_module.table[i], iso.to_module.table[j])) {
          c = LawCheck::fail("iso-preserves-inner", "inner products differ", {i, j});
          break;
        }
    iso.laws.add(c);
  }
  return iso;
}

// Module homomorphism of an arrow: f |-> Ff between the matrix modules.
inline ModuleHom hom_of_arrow(const MatArrow& a, const MatrixModule& src,
                              const MatrixModule& tgt) {
  LawReport rep = check_arrow(a);
  if (!rep.all_pass())
    throw ArrowLawViolation(rep.first_failure()->law + ": " + rep.first_failure()->witness);
  ModuleHom h{src.mod, tgt.mod, {}};
  h.table.resize(src.mod.carrier().size());
  for (int x = 0; x < src.mod.carrier().size(); ++x)
    h.table[x] = tgt.mod.index_of_tuple(matvec(a.f, src.mod.tuple(x)));
  return h;
}

}  // namespace finloc
