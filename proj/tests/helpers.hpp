#pragma once

// Shared construction helpers for the unit tests.

#include <string>
#include <vector>

#include <zdcoh/zdcoh.hpp>

namespace test_helpers {

inline zdcoh::DiscreteSpace space(int d, int m, int nlabels, const zdcoh::RingDesc& ring) {
  zdcoh::DiscreteSpace sp;
  sp.d = d;
  sp.m = m;
  for (int i = 0; i < nlabels; ++i) sp.labels.push_back("q" + std::to_string(i));
  sp.ring = ring;
  zdcoh::validate_space(sp);
  return sp;
}

inline zdcoh::Point point(int label, std::vector<long long> lattice,
                          std::vector<long long> position) {
  zdcoh::Point p;
  p.label = label;
  p.lattice = std::move(lattice);
  p.position = std::move(position);
  return p;
}

// A single-term section: value at one point, optional backward rays.
template <class R>
zdcoh::Section<R> term(const zdcoh::DiscreteSpace& sp, const zdcoh::StalkProfile& st,
                       const zdcoh::Point& anchor, std::initializer_list<R> value,
                       std::vector<int> rays = {}) {
  zdcoh::ElementaryTerm<R> t;
  t.anchor = anchor;
  for (int i : rays) t.rays |= (1u << (i - 1));
  t.value.assign(value.begin(), value.end());
  return zdcoh::make_section(sp, st, std::vector<zdcoh::ElementaryTerm<R>>{t});
}

// Evaluate a raw term list directly, without canonicalization: the oracle for
// everything the section calculus claims about represented functions.
template <class R>
std::vector<R> raw_evaluate(const zdcoh::DiscreteSpace& sp, const zdcoh::StalkProfile& st,
                            const std::vector<zdcoh::ElementaryTerm<R>>& terms,
                            const zdcoh::Point& p) {
  std::vector<R> out(static_cast<std::size_t>(st.ranks[static_cast<std::size_t>(p.label)]),
                     zdcoh::ring_traits<R>::zero(sp.ring));
  for (const auto& t : terms)
    if (zdcoh::term_covers(sp, t, p))
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = out[k] + t.value[k];
  return out;
}

}  // namespace test_helpers
