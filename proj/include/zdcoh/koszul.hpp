#pragma once

#include <bit>

#include "section.hpp"

namespace zdcoh {

/// Subsets of {1..d} as bitmasks, bit i-1 <-> generator i.
inline std::vector<std::uint32_t> subsets_of_rank(int d, int p) {
  require(d >= 0 && d < 31, "acting rank out of range");
  require(p >= 0, "degree must be nonnegative");
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask)
    if (std::popcount(mask) == p) out.push_back(mask);
  return out;
}

inline std::vector<int> mask_members(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 1; mask; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

/// Degree-p alternating cochain on Z^d: one section per p-subset of generators.
template <class R>
struct Cochain {
  DiscreteSpace space;
  StalkProfile stalk;
  int degree = 0;
  std::map<std::uint32_t, Section<R>> comps;

  friend bool operator==(const Cochain&, const Cochain&) = default;

  const Section<R>& at(std::uint32_t mask) const {
    auto it = comps.find(mask);
    require(it != comps.end(), "missing cochain component");
    return it->second;
  }
};

template <class R>
Cochain<R> zero_cochain(const DiscreteSpace& sp, const StalkProfile& st, int p) {
  require(p >= 0 && p <= sp.d, "cochain degree out of range");
  Cochain<R> c;
  c.space = sp;
  c.stalk = st;
  c.degree = p;
  for (std::uint32_t mask : subsets_of_rank(sp.d, p)) c.comps.emplace(mask, zero_section<R>(sp, st));
  return c;
}

template <class R>
Cochain<R> make_cochain(const DiscreteSpace& sp, const StalkProfile& st, int p,
                        std::map<std::uint32_t, Section<R>> comps) {
  Cochain<R> c = zero_cochain<R>(sp, st, p);
  for (auto& [mask, s] : comps) {
    require(c.comps.count(mask), "component key is not a p-subset of the generators");
    require(s.space == sp && s.stalk == st, "component lives on the wrong space");
    c.comps[mask] = std::move(s);
  }
  return c;
}

template <class R>
bool is_zero(const Cochain<R>& c) {
  for (const auto& [mask, s] : c.comps)
    if (!is_zero(s)) return false;
  return true;
}

template <class R>
Cochain<R> add(const Cochain<R>& a, const Cochain<R>& b) {
  require(a.space == b.space && a.stalk == b.stalk && a.degree == b.degree,
          "cochains are not compatible");
  Cochain<R> out = a;
  for (auto& [mask, s] : out.comps) s = add(s, b.at(mask));
  return out;
}

template <class R>
Cochain<R> negate(const Cochain<R>& a) {
  Cochain<R> out = a;
  for (auto& [mask, s] : out.comps) s = negate(s);
  return out;
}

template <class R>
Cochain<R> sub(const Cochain<R>& a, const Cochain<R>& b) {
  return add(a, negate(b));
}

/// Position of generator i inside subset `mask` (0-based).
inline int mask_pos(std::uint32_t mask, int i) {
  return std::popcount(mask & ((1u << (i - 1)) - 1));
}

/// Koszul differential:
///   (d w)_T = sum over i in T of (-1)^{pos(i,T)} (sigma_i - 1) w_{T minus i}.
template <class R>
Cochain<R> differential(const Cochain<R>& w) {
  require(w.degree < w.space.d, "top-degree cochains have no differential");
  Cochain<R> out = zero_cochain<R>(w.space, w.stalk, w.degree + 1);
  for (auto& [mask, target] : out.comps) {
    for (int i : mask_members(mask)) {
      Section<R> piece = sigma_minus_one(w.at(mask & ~(1u << (i - 1))), i);
      if (mask_pos(mask, i) % 2) piece = negate(piece);
      target = add(target, piece);
    }
  }
  return out;
}

/// Top-degree cochains are cocycles by definition of the complex length.
template <class R>
bool is_cocycle(const Cochain<R>& w) {
  if (w.degree == w.space.d) return true;
  return is_zero(differential(w));
}

}  // namespace zdcoh
