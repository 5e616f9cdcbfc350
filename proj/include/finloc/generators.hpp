#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "finloc/errors.hpp"
#include "finloc/homs.hpp"
#include "finloc/lattice.hpp"
#include "finloc/pmatrix.hpp"
#include "finloc/poset.hpp"
#include "finloc/presheaf.hpp"
#include "finloc/rng.hpp"

namespace finloc {

inline constexpr int kMaxRandomPoset = 8;
inline constexpr int kGeneratorAttempts = 50;

// Random DAG on an index-ordered vertex set, closed transitively. The index
// order is a topological order, so antisymmetry holds by construction.
inline Poset random_poset(uint64_t seed, int n) {
  if (n < 0 || n > kMaxRandomPoset)
    throw SizeExceeded("random posets have at most " + std::to_string(kMaxRandomPoset) +
                       " elements");
  SplitMix64 rng(seed);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.below(3) == 0) pairs.emplace_back(i, j);
  return Poset::from_pairs(std::move(names), pairs);
}

// Random presheaf on P: fiber sizes are drawn under a global germ budget
// (zero fibers force zero fibers above them), cover restrictions are drawn
// freely, longer restrictions are composites through a fixed intermediate.
// Composites along different paths can disagree, so the draw is rejected
// and retried until functoriality holds; if no attempt lands, the fallback
// is a constant presheaf, which is always functorial.
inline Presheaf random_presheaf(uint64_t seed, const Poset& p, int max_fiber = 3,
                                int max_total = kMaxGermCount) {
  if (p.size() > kMaxPresheafBase)
    throw SizeExceeded("presheaf bases have at most " + std::to_string(kMaxPresheafBase) +
                       " elements");
  SplitMix64 rng(seed);
  const std::vector<int> order = p.linear_extension();

  for (int attempt = 0; attempt < kGeneratorAttempts; ++attempt) {
    Presheaf f;
    f.base = p;
    f.fibers.assign(p.size(), {});
    int budget = max_total;
    // A linear extension processes everything below idx first, so an empty
    // fiber below forces this one empty (no map into an empty set exists).
    for (int idx : order) {
      bool forced_zero = false;
      for (int below = 0; below < p.size(); ++below)
        if (below != idx && p.leq(below, idx) && f.fibers[below].empty()) forced_zero = true;
      const int cap = forced_zero ? 0 : std::min(max_fiber, budget);
      const int size = static_cast<int>(rng.below(static_cast<uint64_t>(cap) + 1));
      budget -= size;
      for (int g = 0; g < size; ++g)
        f.fibers[idx].push_back("g" + std::to_string(idx) + std::to_string(g));
    }
    f.res.assign(p.size(), std::vector<std::vector<int>>(p.size()));
    std::vector<std::vector<char>> defined(p.size(), std::vector<char>(p.size(), 0));
    for (int q = 0; q < p.size(); ++q) {
      f.res[q][q].resize(f.fiber_size(q));
      for (int g = 0; g < f.fiber_size(q); ++g) f.res[q][q][g] = g;
      defined[q][q] = 1;
    }
    for (auto [lo, hi] : p.covers()) {
      f.res[hi][lo].resize(f.fiber_size(hi));
      for (int g = 0; g < f.fiber_size(hi); ++g)
        f.res[hi][lo][g] = static_cast<int>(rng.below(f.fiber_size(lo)));
      defined[hi][lo] = 1;
    }
    // Longer restrictions are composites through any strictly intermediate
    // element; iterate to a fixpoint (every interval decomposes into covers).
    bool changed = true;
    while (changed) {
      changed = false;
      for (int q = 0; q < p.size(); ++q)
        for (int r = 0; r < p.size(); ++r) {
          if (defined[q][r] || r == q || !p.leq(r, q)) continue;
          for (int m = 0; m < p.size(); ++m) {
            if (m == q || m == r || !p.leq(r, m) || !p.leq(m, q)) continue;
            if (!defined[q][m] || !defined[m][r]) continue;
            f.res[q][r].resize(f.fiber_size(q));
            for (int g = 0; g < f.fiber_size(q); ++g)
              f.res[q][r][g] = f.res[m][r][f.res[q][m][g]];
            defined[q][r] = 1;
            changed = true;
            break;
          }
        }
    }
    if (check_presheaf(f).all_pass()) return f;
  }

  // Constant fallback: one shared germ set, identity restrictions.
  Presheaf f;
  f.base = p;
  const int k = p.size() == 0 ? 0 : std::min(max_fiber, max_total / std::max(1, p.size()));
  f.fibers.assign(p.size(), {});
  for (int q = 0; q < p.size(); ++q)
    for (int g = 0; g < k; ++g) f.fibers[q].push_back("c" + std::to_string(g));
  f.res.assign(p.size(), std::vector<std::vector<int>>(p.size()));
  for (int q = 0; q < p.size(); ++q)
    for (int r = 0; r < p.size(); ++r)
      if (p.leq(r, q)) {
        f.res[q][r].resize(k);
        for (int g = 0; g < k; ++g) f.res[q][r][g] = g;
      }
  return f;
}

inline EtaleInstance random_etale_instance(uint64_t seed, int max_base = kMaxPresheafBase,
                                           int max_fiber = 3, int max_total = kMaxGermCount) {
  SplitMix64 rng(seed);
  const int n = static_cast<int>(rng.below(static_cast<uint64_t>(max_base) + 1));
  Poset p = random_poset(rng.next(), n);
  Presheaf f = random_presheaf(rng.next(), p, max_fiber, max_total);
  EtaleInstance inst = etale_from_presheaf(f);
  inst.name = "seed" + std::to_string(seed);
  return inst;
}

// Gram matrix of k sections (repetition allowed) of a random etale instance
// over the given frame, transported along the Birkhoff isomorphism so the
// entries live in B itself. Sub-families of section sets always yield
// projection matrices; the verification and regeneration loop guards the
// contract anyway, falling back to the full section set.
inline BMatrix random_projection_matrix(uint64_t seed, const Lattice& b, int k) {
  BirkhoffIso iso = birkhoff_iso(b);
  SplitMix64 rng(seed);
  for (int attempt = 0; attempt <= kGeneratorAttempts; ++attempt) {
    Presheaf f = random_presheaf(rng.next(), iso.irreducibles);
    EtaleInstance inst = etale_from_presheaf(f, &iso.downsets);
    if (!inst.mod.is_open() || !inst.mod.is_etale()) continue;
    InnerProduct ip = inner_from_support(inst.mod);
    const std::vector<int>& sec = inst.mod.sections();
    std::vector<int> family(k);
    if (attempt == kGeneratorAttempts) {
      family = sec;  // fallback: the full section set
    } else {
      for (int i = 0; i < k; ++i) family[i] = sec[rng.below(sec.size())];
    }
    std::vector<std::vector<int>> rows(family.size(), std::vector<int>(family.size()));
    std::vector<std::string> labels(family.size());
    for (size_t i = 0; i < family.size(); ++i) {
      labels[i] = inst.mod.carrier().name(family[i]);
      for (size_t j = 0; j < family.size(); ++j)
        rows[i][j] = iso.from_downset[ip.at(family[i], family[j])];
    }
    BMatrix m = square_matrix(b, std::move(labels), rows);
    if (is_projection_matrix(m).pass) return m;
  }
  throw Error("projection matrix generation failed to converge");
}

// All natural transformations between the sections presheaves of two
// instances over the same base poset, realized as sheaf homomorphisms of the
// etale modules: germ (p, x) goes to (p, component_p(x)), and a down-set of
// germs to the down-set of its images.
inline std::vector<ModuleHom> natural_transformation_homs(const EtaleInstance& src,
                                                          const EtaleInstance& dst,
                                                          double budget = 1e5,
                                                          bool* complete = nullptr) {
  if (complete) *complete = true;
  const Presheaf& f = src.presheaf;
  const Presheaf& g = dst.presheaf;
  const Poset& p = f.base;
  if (!src.mod.same_base(dst.mod))
    throw DimensionMismatch("natural transformations need a common base");

  double total = 1;
  for (int q = 0; q < p.size(); ++q) {
    if (f.fiber_size(q) > 0 && g.fiber_size(q) == 0) return {};
    for (int i = 0; i < f.fiber_size(q); ++i) total *= std::max(1, g.fiber_size(q));
    if (total > budget) {
      if (complete) *complete = false;
      return {};
    }
  }

  // Odometer over all componentwise germ assignments.
  std::vector<std::pair<int, int>> slots;  // (base elem, fiber elem)
  for (int q = 0; q < p.size(); ++q)
    for (int i = 0; i < f.fiber_size(q); ++i) slots.emplace_back(q, i);
  std::vector<int> pick(slots.size(), 0);
  std::vector<ModuleHom> out;
  const auto covers = p.covers();
  while (true) {
    // components[q][i] = image of germ i of F(q) in G(q)
    std::vector<std::vector<int>> comp(p.size());
    for (int q = 0; q < p.size(); ++q) comp[q].assign(f.fiber_size(q), -1);
    for (size_t s = 0; s < slots.size(); ++s) comp[slots[s].first][slots[s].second] = pick[s];
    bool natural = true;
    for (auto [lo, hi] : covers) {
      for (int i = 0; i < f.fiber_size(hi) && natural; ++i)
        natural = g.res[hi][lo][comp[hi][i]] == comp[lo][f.res[hi][lo][i]];
      if (!natural) break;
    }
    if (natural) {
      // Germ-level map, then the induced map on down-sets.
      std::vector<int> germ_map(src.germ_ids.size());
      for (size_t i = 0; i < src.germ_ids.size(); ++i) {
        auto [q, x] = src.germ_ids[i];
        const int gy = comp[q][x];
        int target = -1;
        for (size_t j = 0; j < dst.germ_ids.size(); ++j)
          if (dst.germ_ids[j] == std::make_pair(q, gy)) target = static_cast<int>(j);
        germ_map[i] = target;
      }
      ModuleHom h{src.mod, dst.mod, std::vector<int>(src.mod.carrier().size())};
      for (int v = 0; v < src.mod.carrier().size(); ++v) {
        const uint32_t vm = src.mod.carrier().mask(v);
        uint32_t im = 0;
        for (size_t i = 0; i < germ_map.size(); ++i)
          if ((vm >> i) & 1u) im |= 1u << germ_map[i];
        h.table[v] = dst.mod.carrier().index_of_mask(im);
      }
      out.push_back(std::move(h));
    }
    size_t s = 0;
    for (; s < slots.size(); ++s) {
      if (++pick[s] < g.fiber_size(slots[s].first)) break;
      pick[s] = 0;
    }
    if (s == slots.size()) break;
  }
  return out;
}

}  // namespace finloc
