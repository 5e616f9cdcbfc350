#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "finloc/errors.hpp"
#include "finloc/poset.hpp"
#include "finloc/report.hpp"

namespace finloc {

// Caps the size of any constructed lattice; a 16-element poset can have up
// to 2^16 down-sets, far beyond what full join/meet tables can hold.
inline constexpr int kMaxLatticeElements = 4096;

class Lattice;

// An element of a specific lattice: index plus the owning lattice's id.
// Comparing elements of different lattices is a usage error, not "false".
struct Elem {
  uint32_t frame = 0;
  int idx = -1;
};

inline bool operator==(Elem a, Elem b) {
  if (a.frame != b.frame)
    throw CrossFrame("comparing elements of different lattices");
  return a.idx == b.idx;
}
inline bool operator!=(Elem a, Elem b) { return !(a == b); }

// A finite bounded lattice with total join/meet tables. Element 0 is the
// bottom and element n-1 the top. The order is derived: x <= y iff x v y = y.
//
// Frames (finite distributive lattices) are obtained either from
// downset_frame, which guarantees the laws by construction, or from explicit
// tables, which must pass verify_frame before being used as a base.
// Instances are immutable and cheap to copy (shared internal state).
class Lattice {
  struct Data {
    uint32_t uid = 0;
    int n = 0;
    std::vector<std::string> names;
    std::vector<uint16_t> join;  // n*n, row-major
    std::vector<uint16_t> meet;
    bool poset_backed = false;
    Poset poset;
    std::vector<uint32_t> masks;  // down-set mask per element, when poset-backed
    // -1 unknown, else 0/1. Benign to recompute concurrently: pure function.
    mutable std::atomic<int> frame_verdict{-1};
  };

 public:
  Lattice() = default;

  // The lattice of down-closed subsets of p: join = union, meet =
  // intersection, bottom = empty set, top = everything.
  static Lattice downset_frame(const Poset& p) {
    std::vector<uint32_t> ds = p.downsets();
    const int n = static_cast<int>(ds.size());
    if (n > kMaxLatticeElements)
      throw SizeExceeded("down-set lattice has " + std::to_string(n) + " elements; limit is " +
                         std::to_string(kMaxLatticeElements));
    auto d = std::make_shared<Data>();
    d->uid = next_uid();
    d->n = n;
    d->poset_backed = true;
    d->poset = p;
    d->masks = ds;
    std::unordered_map<uint32_t, int> index;
    index.reserve(ds.size() * 2);
    for (int i = 0; i < n; ++i) index[ds[i]] = i;
    d->names.resize(n);
    for (int i = 0; i < n; ++i) d->names[i] = mask_name(p, ds[i]);
    d->join.resize(static_cast<size_t>(n) * n);
    d->meet.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        d->join[static_cast<size_t>(i) * n + j] = static_cast<uint16_t>(index.at(ds[i] | ds[j]));
        d->meet[static_cast<size_t>(i) * n + j] = static_cast<uint16_t>(index.at(ds[i] & ds[j]));
      }
    d->frame_verdict.store(1, std::memory_order_relaxed);
    return Lattice(std::move(d));
  }

  // Explicit tables; checks only shape and the bottom/top convention.
  // Run verify_frame to find out whether this is actually a frame.
  static Lattice from_tables(std::vector<std::string> names,
                             const std::vector<std::vector<int>>& join,
                             const std::vector<std::vector<int>>& meet) {
    const int n = static_cast<int>(names.size());
    if (n == 0) throw ParseError("lattice needs at least one element");
    if (n > kMaxLatticeElements)
      throw SizeExceeded("lattice has " + std::to_string(n) + " elements; limit is " +
                         std::to_string(kMaxLatticeElements));
    auto d = std::make_shared<Data>();
    d->uid = next_uid();
    d->n = n;
    d->names = std::move(names);
    d->join.resize(static_cast<size_t>(n) * n);
    d->meet.resize(static_cast<size_t>(n) * n);
    auto fill = [n](std::vector<uint16_t>& tab, const std::vector<std::vector<int>>& src,
                    const char* what) {
      if (static_cast<int>(src.size()) != n)
        throw ParseError(std::string(what) + " table has wrong number of rows");
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>(src[i].size()) != n)
          throw ParseError(std::string(what) + " table row " + std::to_string(i) +
                           " has wrong length");
        for (int j = 0; j < n; ++j) {
          if (src[i][j] < 0 || src[i][j] >= n)
            throw ParseError(std::string(what) + " table entry out of range");
          tab[static_cast<size_t>(i) * n + j] = static_cast<uint16_t>(src[i][j]);
        }
      }
    };
    fill(d->join, join, "join");
    fill(d->meet, meet, "meet");
    Lattice l(std::move(d));
    for (int i = 0; i < n; ++i) {
      if (l.join(0, i) != i)
        throw ParseError("element 0 is not the bottom (0 v " + std::to_string(i) + " != " +
                         std::to_string(i) + ")");
      if (l.meet(n - 1, i) != i) throw ParseError("last element is not the top");
    }
    return l;
  }

  // Builds a lattice from a family of integer tuples ordered pointwise by
  // `base` in each coordinate. The family must be closed under pointwise
  // join; meets fall back to the greatest lower bound within the family when
  // the pointwise meet is absent. Element order is a linear extension; the
  // tuples in that final order are written to *sorted_out when given.
  static Lattice from_tuples(const Lattice& base, std::vector<std::vector<int>> tuples,
                             std::vector<std::string> names,
                             std::vector<std::vector<int>>* sorted_out = nullptr) {
    const int n = static_cast<int>(tuples.size());
    if (n == 0) throw ParseError("tuple family is empty");
    if (n > kMaxLatticeElements)
      throw SizeExceeded("tuple lattice has " + std::to_string(n) + " elements; limit is " +
                         std::to_string(kMaxLatticeElements));
    const size_t width = tuples[0].size();
    auto tleq = [&](const std::vector<int>& a, const std::vector<int>& b) {
      for (size_t c = 0; c < width; ++c)
        if (!base.leq(a[c], b[c])) return false;
      return true;
    };
    // Linear extension: sort by number of family elements below, ties by key.
    std::vector<int> below(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (tleq(tuples[j], tuples[i])) ++below[i];
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (below[a] != below[b]) return below[a] < below[b];
      return tuples[a] < tuples[b];
    });
    std::vector<std::vector<int>> sorted;
    std::vector<std::string> snames;
    sorted.reserve(n);
    for (int i : order) {
      sorted.push_back(std::move(tuples[i]));
      snames.push_back(std::move(names[i]));
    }

    auto d = std::make_shared<Data>();
    d->uid = next_uid();
    d->n = n;
    d->names = std::move(snames);
    d->join.resize(static_cast<size_t>(n) * n);
    d->meet.resize(static_cast<size_t>(n) * n);
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < n; ++i) index[sorted[i]] = i;
    std::vector<int> tmp(width);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        for (size_t c = 0; c < width; ++c) tmp[c] = base.join(sorted[i][c], sorted[j][c]);
        auto it = index.find(tmp);
        if (it == index.end())
          throw ParseError("tuple family is not closed under pointwise joins");
        d->join[static_cast<size_t>(i) * n + j] = static_cast<uint16_t>(it->second);
        // Meet: pointwise if present, otherwise join of all lower bounds.
        for (size_t c = 0; c < width; ++c) tmp[c] = base.meet(sorted[i][c], sorted[j][c]);
        auto mt = index.find(tmp);
        int m;
        if (mt != index.end()) {
          m = mt->second;
        } else {
          std::vector<int> acc(width, -1);
          bool any = false;
          for (int k = 0; k < n; ++k) {
            if (!tleq(sorted[k], sorted[i]) || !tleq(sorted[k], sorted[j])) continue;
            if (!any) {
              acc = sorted[k];
              any = true;
            } else {
              for (size_t c = 0; c < width; ++c) acc[c] = base.join(acc[c], sorted[k][c]);
            }
          }
          if (!any) throw ParseError("tuple family has no bottom");
          auto at = index.find(acc);
          if (at == index.end())
            throw ParseError("tuple family is not closed under joins of lower bounds");
          m = at->second;
        }
        d->meet[static_cast<size_t>(i) * n + j] = static_cast<uint16_t>(m);
      }
    Lattice l(std::move(d));
    for (int i = 0; i < n; ++i) {
      if (l.join(0, i) != i || l.meet(n - 1, i) != i)
        throw ParseError("tuple family lacks a bottom or top under the linear extension");
    }
    if (sorted_out) *sorted_out = std::move(sorted);
    return l;
  }

  bool valid() const { return d_ != nullptr; }
  int size() const { return d_->n; }
  int bot() const { return 0; }
  int top() const { return d_->n - 1; }
  uint32_t uid() const { return d_->uid; }

  int join(int i, int j) const {
    check(i);
    check(j);
    return d_->join[static_cast<size_t>(i) * d_->n + j];
  }
  int meet(int i, int j) const {
    check(i);
    check(j);
    return d_->meet[static_cast<size_t>(i) * d_->n + j];
  }
  bool leq(int i, int j) const { return join(i, j) == j; }

  const std::string& name(int i) const {
    check(i);
    return d_->names[i];
  }

  Elem elem(int i) const {
    check(i);
    return Elem{d_->uid, i};
  }
  int index_of(Elem e) const {
    if (e.frame != d_->uid)
      throw CrossFrame("element belongs to a different lattice");
    check(e.idx);
    return e.idx;
  }
  Elem join(Elem a, Elem b) const { return elem(join(index_of(a), index_of(b))); }
  Elem meet(Elem a, Elem b) const { return elem(meet(index_of(a), index_of(b))); }
  bool leq(Elem a, Elem b) const { return leq(index_of(a), index_of(b)); }

  // Empty join is the bottom, empty meet the top.
  int join_set(const std::vector<int>& s) const {
    int acc = bot();
    for (int x : s) acc = join(acc, x);
    return acc;
  }
  int meet_set(const std::vector<int>& s) const {
    int acc = top();
    for (int x : s) acc = meet(acc, x);
    return acc;
  }

  // Relative pseudo-complement candidate: join of all z with z ^ x <= y.
  // Satisfies the residuation law exactly when the lattice is a frame.
  int heyting(int x, int y) const {
    int acc = bot();
    for (int z = 0; z < size(); ++z)
      if (leq(meet(z, x), y)) acc = join(acc, z);
    return acc;
  }
  int pseudo_complement(int x) const { return heyting(x, bot()); }

  // x is join-irreducible when x != 0 and x is not the join of the elements
  // strictly below it.
  std::vector<int> join_irreducibles() const {
    std::vector<int> out;
    for (int x = 1; x < size(); ++x) {
      int acc = bot();
      for (int y = 0; y < size(); ++y)
        if (y != x && leq(y, x)) acc = join(acc, y);
      if (acc != x) out.push_back(x);
    }
    return out;
  }

  bool poset_backed() const { return d_->poset_backed; }
  const Poset& poset() const {
    if (!d_->poset_backed) throw Error("lattice is not backed by a poset");
    return d_->poset;
  }
  uint32_t mask(int i) const {
    check(i);
    if (!d_->poset_backed) throw Error("lattice is not backed by a poset");
    return d_->masks[i];
  }
  int index_of_mask(uint32_t m) const {
    const auto& masks = d_->masks;
    auto it = std::lower_bound(masks.begin(), masks.end(), m);
    if (it == masks.end() || *it != m) throw OutOfRange("mask is not a down-set of the poset");
    return static_cast<int>(it - masks.begin());
  }

  bool is_frame() const;  // cached verdict of verify_frame

  // Records a frame verdict that holds by construction (e.g. a finite
  // product of frames is a frame), sparing the cubic scan. Law checkers and
  // oracles always recompute verify_frame from the tables, so a wrong note
  // here cannot hide from them.
  void note_frame_by_construction() const {
    d_->frame_verdict.store(1, std::memory_order_relaxed);
  }

  // Same carrier, tables and names; used to accept structurally identical
  // lattices loaded from separate files as "the same" base.
  bool same_structure(const Lattice& o) const {
    if (d_ == o.d_) return true;
    return d_->n == o.d_->n && d_->join == o.d_->join && d_->meet == o.d_->meet;
  }
  bool same_object(const Lattice& o) const { return d_ == o.d_; }

  // Cover relation of the lattice order (for Hasse diagrams).
  std::vector<std::pair<int, int>> covers() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j) {
        if (i == j || !leq(i, j)) continue;
        bool cover = true;
        for (int k = 0; k < size() && cover; ++k)
          if (k != i && k != j && leq(i, k) && leq(k, j)) cover = false;
        if (cover) out.emplace_back(i, j);
      }
    return out;
  }

 private:
  explicit Lattice(std::shared_ptr<Data> d) : d_(std::move(d)) {}

  static uint32_t next_uid() {
    static std::atomic<uint32_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
  }

  static std::string mask_name(const Poset& p, uint32_t mask) {
    if (mask == 0) return "{}";
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < p.size(); ++i)
      if ((mask >> i) & 1u) {
        if (!first) s += ",";
        s += p.name(i);
        first = false;
      }
    return s + "}";
  }

  void check(int i) const {
    if (!d_) throw Error("empty lattice handle");
    if (i < 0 || i >= d_->n)
      throw OutOfRange("lattice index " + std::to_string(i) + " out of range (size " +
                       std::to_string(d_->n) + ")");
  }

  std::shared_ptr<const Data> d_;

  friend LawReport verify_frame(const Lattice&);
};

namespace detail {

inline std::string render(const Lattice& l, int i) {
  return l.name(i) + "#" + std::to_string(i);
}

}  // namespace detail

// Checks every bounded-lattice law and frame distributivity on the full
// tables. Failures carry a witness. Binary distributivity is checked on all
// triples; since every subset join is a fold of binary joins, that already
// covers x ^ VS = V{x^s} for all finite S. Subset joins are additionally
// checked directly: exhaustively for small lattices, on a fixed pseudo-random
// sample above that.
inline LawReport verify_frame(const Lattice& l) {
  LawReport rep;
  rep.subject = "frame laws (" + std::to_string(l.size()) + " elements)";
  const int n = l.size();
  const uint16_t* J = l.d_->join.data();
  const uint16_t* M = l.d_->meet.data();
  auto jn = [&](int a, int b) -> int { return J[static_cast<size_t>(a) * n + b]; };
  auto mt = [&](int a, int b) -> int { return M[static_cast<size_t>(a) * n + b]; };
  auto wit2 = [&](int x, int y) {
    return "x=" + detail::render(l, x) + " y=" + detail::render(l, y);
  };
  auto wit3 = [&](int x, int y, int z) {
    return wit2(x, y) + " z=" + detail::render(l, z);
  };

  {
    LawCheck c = LawCheck::ok("bottom-is-least");
    for (int x = 0; x < n && c.pass; ++x)
      if (jn(0, x) != x) c = LawCheck::fail("bottom-is-least", "0 v x != x at " + detail::render(l, x), {x});
    rep.add(c);
  }
  {
    LawCheck c = LawCheck::ok("top-is-greatest");
    for (int x = 0; x < n && c.pass; ++x)
      if (mt(n - 1, x) != x)
        c = LawCheck::fail("top-is-greatest", "1 ^ x != x at " + detail::render(l, x), {x});
    rep.add(c);
  }
  {
    LawCheck c = LawCheck::ok("join-commutative");
    LawCheck cm = LawCheck::ok("meet-commutative");
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        if (c.pass && jn(x, y) != jn(y, x))
          c = LawCheck::fail("join-commutative", wit2(x, y), {x, y});
        if (cm.pass && mt(x, y) != mt(y, x))
          cm = LawCheck::fail("meet-commutative", wit2(x, y), {x, y});
      }
    rep.add(c);
    rep.add(cm);
  }
  {
    LawCheck c = LawCheck::ok("join-idempotent");
    LawCheck cm = LawCheck::ok("meet-idempotent");
    for (int x = 0; x < n; ++x) {
      if (c.pass && jn(x, x) != x) c = LawCheck::fail("join-idempotent", detail::render(l, x), {x});
      if (cm.pass && mt(x, x) != x) cm = LawCheck::fail("meet-idempotent", detail::render(l, x), {x});
    }
    rep.add(c);
    rep.add(cm);
  }
  {
    LawCheck c = LawCheck::ok("join-associative");
    for (int x = 0; x < n && c.pass; ++x)
      for (int y = 0; y < n && c.pass; ++y) {
        const int xy = jn(x, y);
        for (int z = 0; z < n; ++z)
          if (jn(xy, z) != jn(x, jn(y, z))) {
            c = LawCheck::fail("join-associative", wit3(x, y, z), {x, y, z});
            break;
          }
      }
    rep.add(c);
  }
  {
    LawCheck c = LawCheck::ok("meet-associative");
    for (int x = 0; x < n && c.pass; ++x)
      for (int y = 0; y < n && c.pass; ++y) {
        const int xy = mt(x, y);
        for (int z = 0; z < n; ++z)
          if (mt(xy, z) != mt(x, mt(y, z))) {
            c = LawCheck::fail("meet-associative", wit3(x, y, z), {x, y, z});
            break;
          }
      }
    rep.add(c);
  }
  {
    LawCheck c = LawCheck::ok("absorption");
    for (int x = 0; x < n && c.pass; ++x)
      for (int y = 0; y < n; ++y)
        if (jn(x, mt(x, y)) != x || mt(x, jn(x, y)) != x) {
          c = LawCheck::fail("absorption", wit2(x, y), {x, y});
          break;
        }
    rep.add(c);
  }
  {
    LawCheck c = LawCheck::ok("meet-distributes-over-join");
    for (int x = 0; x < n && c.pass; ++x)
      for (int y = 0; y < n && c.pass; ++y) {
        const int xy = mt(x, y);
        for (int z = 0; z < n; ++z)
          if (mt(x, jn(y, z)) != jn(xy, mt(x, z))) {
            c = LawCheck::fail("meet-distributes-over-join", wit3(x, y, z), {x, y, z});
            break;
          }
      }
    rep.add(c);
  }
  {
    // Direct check of x ^ VS = V{x ^ s} over explicit subsets. Exhaustive for
    // small lattices; a fixed pseudo-random sample above that (binary
    // distributivity already implies the law for every finite subset).
    LawCheck c = LawCheck::ok("meet-distributes-over-subset-joins");
    auto check_one = [&](int x, const std::vector<int>& members) {
      int js = 0, dist = 0;
      for (int s : members) js = jn(js, s);
      for (int s : members) dist = jn(dist, mt(x, s));
      if (mt(x, js) != dist) {
        c = LawCheck::fail("meet-distributes-over-subset-joins",
                           "x=" + detail::render(l, x) + " over a subset of size " +
                               std::to_string(members.size()),
                           {x});
        return false;
      }
      return true;
    };
    if (n <= 16) {
      std::vector<int> members;
      for (uint32_t bits = 0; bits < (1u << n) && c.pass; ++bits) {
        members.clear();
        for (int i = 0; i < n; ++i)
          if ((bits >> i) & 1u) members.push_back(i);
        for (int x = 0; x < n && c.pass; ++x) check_one(x, members);
      }
    } else {
      uint64_t state = 0x9e3779b97f4a7c15ull;  // fixed seed: reports stay reproducible
      auto next = [&state]() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
      };
      std::vector<int> members;
      for (int trial = 0; trial < 4096 && c.pass; ++trial) {
        members.clear();
        uint64_t word = 0;
        for (int i = 0; i < n; ++i) {
          if (i % 64 == 0) word = next();
          if ((word >> (i % 64)) & 1u) members.push_back(i);
        }
        check_one(static_cast<int>(next() % static_cast<uint64_t>(n)), members);
      }
    }
    rep.add(c);
  }
  return rep;
}

inline bool Lattice::is_frame() const {
  int v = d_->frame_verdict.load(std::memory_order_relaxed);
  if (v < 0) {
    v = verify_frame(*this).all_pass() ? 1 : 0;
    d_->frame_verdict.store(v, std::memory_order_relaxed);
  }
  return v == 1;
}

// Poset of join-irreducibles with the induced order. For a frame this is the
// dual poset in the finite distributive lattice duality: the frame is
// isomorphic to the down-set lattice of this poset.
inline Poset birkhoff_poset(const Lattice& frame) {
  std::vector<int> irr = frame.join_irreducibles();
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> pairs;
  for (int x : irr) names.push_back(frame.name(x));
  for (size_t i = 0; i < irr.size(); ++i)
    for (size_t j = 0; j < irr.size(); ++j)
      if (frame.leq(irr[i], irr[j])) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return Poset::from_pairs(std::move(names), pairs);
}

// Index maps realizing the isomorphism frame <-> downset_frame(birkhoff_poset(frame)).
struct BirkhoffIso {
  Poset irreducibles;
  Lattice downsets;
  std::vector<int> to_downset;    // frame index -> downset index
  std::vector<int> from_downset;  // downset index -> frame index
};

inline BirkhoffIso birkhoff_iso(const Lattice& frame) {
  if (!frame.is_frame()) throw NotAFrame("Birkhoff duality needs a frame");
  BirkhoffIso iso;
  iso.irreducibles = birkhoff_poset(frame);
  iso.downsets = Lattice::downset_frame(iso.irreducibles);
  std::vector<int> irr = frame.join_irreducibles();
  if (iso.downsets.size() != frame.size())
    throw NotAFrame("down-sets of the join-irreducibles do not match the frame size");
  iso.to_downset.assign(frame.size(), -1);
  iso.from_downset.assign(frame.size(), -1);
  for (int x = 0; x < frame.size(); ++x) {
    uint32_t m = 0;
    for (size_t k = 0; k < irr.size(); ++k)
      if (frame.leq(irr[k], x)) m |= 1u << k;
    const int didx = iso.downsets.index_of_mask(m);
    iso.to_downset[x] = didx;
    iso.from_downset[didx] = x;
  }
  for (int x = 0; x < frame.size(); ++x)
    if (iso.from_downset[x] < 0) throw NotAFrame("irreducible masks do not enumerate the frame");
  return iso;
}

}  // namespace finloc
