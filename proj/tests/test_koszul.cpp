#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <map>
#include <random>

#include "helpers.hpp"

using namespace zdcoh;
using test_helpers::point;
using test_helpers::space;
using test_helpers::term;

namespace {

long long draw(std::mt19937_64& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(rng() % static_cast<unsigned long long>(hi - lo + 1));
}

Section<Zint> random_section(std::mt19937_64& rng, const DiscreteSpace& sp,
                             const StalkProfile& st) {
  std::vector<ElementaryTerm<Zint>> terms;
  int n = static_cast<int>(rng() % 4);
  for (int i = 0; i < n; ++i) {
    ElementaryTerm<Zint> t;
    t.anchor.label = static_cast<int>(rng() % sp.labels.size());
    for (int j = 0; j < sp.m; ++j) t.anchor.lattice.push_back(draw(rng, -1, 1));
    for (int j = 0; j < sp.d; ++j) t.anchor.position.push_back(draw(rng, -2, 2));
    t.value.assign(static_cast<std::size_t>(st.ranks[t.anchor.label]), Zint{0});
    for (auto& v : t.value) v = Zint{draw(rng, -3, 3)};
    terms.push_back(t);
  }
  return make_section(sp, st, std::move(terms));
}

Cochain<Zint> random_cochain(std::mt19937_64& rng, const DiscreteSpace& sp,
                             const StalkProfile& st, int p) {
  std::map<std::uint32_t, Section<Zint>> comps;
  for (std::uint32_t mask : subsets_of_rank(sp.d, p)) comps[mask] = random_section(rng, sp, st);
  return make_cochain(sp, st, p, std::move(comps));
}

std::vector<Point> probe_points(std::mt19937_64& rng, const DiscreteSpace& sp, int count) {
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) {
    Point p;
    p.label = static_cast<int>(rng() % sp.labels.size());
    for (int j = 0; j < sp.m; ++j) p.lattice.push_back(draw(rng, -2, 2));
    for (int j = 0; j < sp.d; ++j) p.position.push_back(draw(rng, -4, 4));
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("index subsets enumerate in sorted order with the right rank") {
  std::vector<std::uint32_t> s42 = subsets_of_rank(4, 2);
  CHECK(s42 == std::vector<std::uint32_t>{0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100});
  CHECK(subsets_of_rank(3, 0) == std::vector<std::uint32_t>{0});
  CHECK(subsets_of_rank(3, 3) == std::vector<std::uint32_t>{0b111});
  CHECK(subsets_of_rank(2, 3).empty());

  CHECK(mask_members(0b1010) == std::vector<int>{2, 4});
  CHECK(mask_pos(0b1011, 1) == 0);
  CHECK(mask_pos(0b1011, 2) == 1);
  CHECK(mask_pos(0b1011, 4) == 2);
}

TEST_CASE("cochain assembly validates degree, keys, and spaces") {
  DiscreteSpace sp = space(2, 0, 1, ring_Z());
  StalkProfile st = uniform_stalk(sp, 1);
  CHECK(zero_cochain<Zint>(sp, st, 1).comps.size() == 2);
  CHECK_THROWS_AS(zero_cochain<Zint>(sp, st, 3), parse_error);

  std::map<std::uint32_t, Section<Zint>> bad;
  bad[0b11] = zero_section<Zint>(sp, st);
  CHECK_THROWS_AS(make_cochain(sp, st, 1, bad), parse_error);

  DiscreteSpace other = space(2, 1, 1, ring_Z());
  std::map<std::uint32_t, Section<Zint>> wrong;
  wrong[0b01] = zero_section<Zint>(other, uniform_stalk(other, 1));
  CHECK_THROWS_AS(make_cochain(sp, st, 1, wrong), parse_error);
}

TEST_CASE("the differential matches its pointwise formula") {
  std::mt19937_64 rng(505);
  DiscreteSpace sp = space(3, 1, 2, ring_Z());
  StalkProfile st = uniform_stalk(sp, 1);
  for (int trial = 0; trial < 12; ++trial) {
    for (int p = 0; p < sp.d; ++p) {
      Cochain<Zint> w = random_cochain(rng, sp, st, p);
      Cochain<Zint> dw = differential(w);
      REQUIRE(dw.degree == p + 1);
      for (const Point& x : probe_points(rng, sp, 12)) {
        for (std::uint32_t mask : subsets_of_rank(sp.d, p + 1)) {
          Zint expect{0};
          for (int i : mask_members(mask)) {
            Point back = act(sp, x, -unit_vector(sp, i));
            Zint delta = evaluate(w.at(mask & ~(1u << (i - 1))), back)[0] -
                         evaluate(w.at(mask & ~(1u << (i - 1))), x)[0];
            if (mask_pos(mask, i) % 2) delta = -delta;
            expect = expect + delta;
          }
          CHECK(evaluate(dw.at(mask), x) == std::vector<Zint>{expect});
        }
      }
    }
  }
}

TEST_CASE("the differential squares to zero") {
  std::mt19937_64 rng(606);
  DiscreteSpace sp = space(3, 0, 1, ring_Z());
  StalkProfile st = uniform_stalk(sp, 1);
  for (int trial = 0; trial < 20; ++trial)
    for (int p = 0; p + 2 <= sp.d; ++p)
      CHECK(is_zero(differential(differential(random_cochain(rng, sp, st, p)))));
}

TEST_CASE("cocycle detection") {
  std::mt19937_64 rng(707);
  DiscreteSpace sp = space(2, 0, 1, ring_Z());
  StalkProfile st = uniform_stalk(sp, 1);

  SECTION("coboundaries are cocycles") {
    for (int trial = 0; trial < 20; ++trial)
      CHECK(is_cocycle(differential(random_cochain(rng, sp, st, 0))));
  }

  SECTION("top-degree cochains are cocycles and have no differential") {
    Cochain<Zint> top = random_cochain(rng, sp, st, sp.d);
    CHECK(is_cocycle(top));
    CHECK_THROWS_AS(differential(top), parse_error);
  }

  SECTION("a genuinely non-closed cochain is rejected") {
    // One-cochain (delta_0, 0): its curl at the pair {1,2} is nonzero.
    Section<Zint> delta = term(sp, st, point(0, {}, {0, 0}), {Zint{1}});
    Cochain<Zint> w = make_cochain(sp, st, 1,
                                   std::map<std::uint32_t, Section<Zint>>{
                                       {0b01u, delta}, {0b10u, zero_section<Zint>(sp, st)}});
    CHECK_FALSE(is_cocycle(w));
    Cochain<Zint> dw = differential(w);
    // Generator 2 sits at odd position inside {1,2}, so its term enters negated.
    CHECK(dw.at(0b11u) == negate(sigma_minus_one(delta, 2)));
  }

  SECTION("addition and negation respect the complex structure") {
    Cochain<Zint> a = random_cochain(rng, sp, st, 1);
    Cochain<Zint> b = random_cochain(rng, sp, st, 1);
    CHECK(differential(add(a, b)) == add(differential(a), differential(b)));
    CHECK(differential(negate(a)) == negate(differential(a)));
    CHECK(is_zero(sub(a, a)));
  }
}
