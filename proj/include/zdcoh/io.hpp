#pragma once

// JSON input/output for all workbench objects.  Serialization is
// deterministic (object keys are stored sorted), values are carried as exact
// strings, and every parser validates against the ambient space so malformed
// input surfaces as parse_error with a message instead of an assertion later.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cohomology.hpp"
#include "common.hpp"
#include "flows.hpp"
#include "koszul.hpp"
#include "ring.hpp"
#include "section.hpp"
#include "space.hpp"
#include "supports.hpp"

namespace zdcoh {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  require(j.is_object(), std::string("expected an object with field '") + key + "'");
  auto it = j.find(key);
  require(it != j.end(), std::string("missing field '") + key + "'");
  return *it;
}

inline const json* field_opt(const json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

inline long long as_int(const json& j, const char* what) {
  require(j.is_number_integer(), std::string(what) + " must be an integer");
  return j.get<long long>();
}

inline std::string as_str(const json& j, const char* what) {
  require(j.is_string(), std::string(what) + " must be a string");
  return j.get<std::string>();
}

inline const json& as_array(const json& j, const char* what) {
  require(j.is_array(), std::string(what) + " must be an array");
  return j;
}

inline std::vector<long long> int_vector(const json& j, const char* what) {
  as_array(j, what);
  std::vector<long long> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(as_int(e, what));
  return out;
}

// Scalar entries may arrive as JSON integers or as exact strings ("-1/2").
inline std::string scalar_text(const json& j) {
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  return as_str(j, "scalar value");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Rings and spaces
// ---------------------------------------------------------------------------

inline json ring_to_json(const RingDesc& r) {
  switch (r.kind) {
    case RingKind::integers: return json("Z");
    case RingKind::rationals: return json("Q");
    case RingKind::modular: return json{{"Zmod", r.modulus}};
  }
  throw parse_error("unknown ring kind");
}

inline RingDesc ring_from_json(const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "Z") return ring_Z();
    if (s == "Q") return ring_Q();
    throw parse_error("unknown ring '" + s + "' (expected \"Z\", \"Q\" or {\"Zmod\": n})");
  }
  const json& n = detail::field(j, "Zmod");
  return ring_Zmod(detail::as_int(n, "modulus"));
}

// Parse a ring name as used on the command line: Z, Q, or Z/n.
inline RingDesc ring_from_name(const std::string& name) {
  if (name == "Z") return ring_Z();
  if (name == "Q") return ring_Q();
  if (name.rfind("Z/", 0) == 0) return ring_Zmod(detail::parse_ll(name.substr(2)));
  throw parse_error("unknown ring '" + name + "' (expected Z, Q or Z/n)");
}

inline json space_to_json(const DiscreteSpace& sp) {
  return json{{"d", sp.d}, {"m", sp.m}, {"labels", sp.labels}, {"ring", ring_to_json(sp.ring)}};
}

inline DiscreteSpace space_from_json(const json& j) {
  DiscreteSpace sp;
  sp.d = static_cast<int>(detail::as_int(detail::field(j, "d"), "d"));
  sp.m = static_cast<int>(detail::as_int(detail::field(j, "m"), "m"));
  for (const auto& l : detail::as_array(detail::field(j, "labels"), "labels"))
    sp.labels.push_back(detail::as_str(l, "label"));
  sp.ring = ring_from_json(detail::field(j, "ring"));
  validate_space(sp);
  return sp;
}

inline json stalk_to_json(const StalkProfile& st) { return json(st.ranks); }

inline StalkProfile stalk_from_json(const json* j, const DiscreteSpace& sp) {
  if (j == nullptr) return uniform_stalk(sp, 1);
  StalkProfile st;
  for (const auto& e : detail::as_array(*j, "stalk"))
    st.ranks.push_back(static_cast<int>(detail::as_int(e, "stalk rank")));
  validate_stalk(sp, st);
  return st;
}

// ---------------------------------------------------------------------------
// Points, windows, shapes, families
// ---------------------------------------------------------------------------

inline json point_to_json(const Point& p, const DiscreteSpace& sp) {
  return json{{"label", sp.labels[static_cast<std::size_t>(p.label)]},
              {"lattice", p.lattice},
              {"position", p.position}};
}

inline Point point_from_json(const json& j, const DiscreteSpace& sp) {
  Point p;
  p.label = sp.label_index(detail::as_str(detail::field(j, "label"), "label"));
  p.lattice = detail::int_vector(detail::field(j, "lattice"), "lattice coordinate");
  p.position = detail::int_vector(detail::field(j, "position"), "position coordinate");
  validate_point(sp, p);
  return p;
}

inline json window_to_json(const FiniteWindow& w, const DiscreteSpace& sp) {
  json labels = json::array();
  for (int l : w.labels) labels.push_back(sp.labels[static_cast<std::size_t>(l)]);
  json intervals = json::array();
  for (const auto& [lo, hi] : w.intervals) intervals.push_back(json::array({lo, hi}));
  return json{{"labels", labels}, {"intervals", intervals}};
}

inline FiniteWindow window_from_json(const json& j, const DiscreteSpace& sp) {
  FiniteWindow w;
  for (const auto& l : detail::as_array(detail::field(j, "labels"), "window labels"))
    w.labels.push_back(sp.label_index(detail::as_str(l, "label")));
  std::sort(w.labels.begin(), w.labels.end());
  w.labels.erase(std::unique(w.labels.begin(), w.labels.end()), w.labels.end());
  const json& iv = detail::as_array(detail::field(j, "intervals"), "intervals");
  require(static_cast<int>(iv.size()) == sp.m + sp.d,
          "a window needs one interval per coordinate");
  for (const auto& e : iv) {
    detail::as_array(e, "interval");
    require(e.size() == 2, "an interval is a [lo, hi] pair");
    long long lo = detail::as_int(e[0], "interval bound");
    long long hi = detail::as_int(e[1], "interval bound");
    require(lo <= hi, "interval bounds must satisfy lo <= hi");
    w.intervals.emplace_back(lo, hi);
  }
  return w;
}

inline json shape_to_json(const ShapeDescriptor& s, const DiscreteSpace& sp) {
  json labels = json::array();
  for (int l : s.labels) labels.push_back(sp.labels[static_cast<std::size_t>(l)]);
  json coords = json::array();
  for (const auto& c : s.coords) {
    if (c.all)
      coords.push_back(json("all"));
    else
      coords.push_back(json(c.values));
  }
  return json{{"labels", labels}, {"coords", coords}};
}

inline ShapeDescriptor shape_from_json(const json& j, const DiscreteSpace& sp) {
  ShapeDescriptor s;
  for (const auto& l : detail::as_array(detail::field(j, "labels"), "shape labels"))
    s.labels.push_back(sp.label_index(detail::as_str(l, "label")));
  std::sort(s.labels.begin(), s.labels.end());
  s.labels.erase(std::unique(s.labels.begin(), s.labels.end()), s.labels.end());
  const json& coords = detail::as_array(detail::field(j, "coords"), "shape coords");
  require(static_cast<int>(coords.size()) == sp.m + sp.d,
          "a shape needs one constraint per coordinate");
  for (const auto& c : coords) {
    if (c.is_string()) {
      require(c.get<std::string>() == "all", "coordinate constraint must be \"all\" or a list");
      s.coords.push_back(coord_all());
    } else {
      s.coords.push_back(coord_finite(detail::int_vector(c, "coordinate constraint")));
    }
  }
  validate_shape(sp, s);
  return s;
}

inline json family_to_json(const SupportFamily& f, const DiscreteSpace& sp) {
  switch (f.kind) {
    case FamilyKind::finite_sets: return json("finite");
    case FamilyKind::all_sets: return json("all");
    case FamilyKind::orbit_finite: return json{{"orbit_finite", true}};
    case FamilyKind::generated: {
      json gens = json::array();
      for (const auto& g : f.generators) gens.push_back(shape_to_json(g, sp));
      return json{{"generators", gens}};
    }
  }
  throw parse_error("unknown family kind");
}

inline SupportFamily family_from_json(const json& j, const DiscreteSpace& sp) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "finite") return family_finite();
    if (s == "all") return family_all();
    throw parse_error("unknown support family '" + s + "'");
  }
  if (const json* of = detail::field_opt(j, "orbit_finite")) {
    require(of->is_boolean() && of->get<bool>(), "orbit_finite must be true when present");
    return family_orbit_finite();
  }
  std::vector<ShapeDescriptor> gens;
  for (const auto& g : detail::as_array(detail::field(j, "generators"), "generators"))
    gens.push_back(shape_from_json(g, sp));
  return family_generated(std::move(gens));
}

// ---------------------------------------------------------------------------
// Sections and cochains
// ---------------------------------------------------------------------------

template <class R>
json section_to_json(const Section<R>& s) {
  json terms = json::array();
  for (const auto& t : s.terms) {
    json rays = json::array();
    for (int i = 1; i <= s.space.d; ++i)
      if (t.rays & (1u << (i - 1))) rays.push_back(i);
    json values = json::array();
    for (const auto& v : t.value) values.push_back(ring_traits<R>::str(v));
    terms.push_back(json{{"anchor", point_to_json(t.anchor, s.space)},
                         {"rays", rays},
                         {"value", values}});
  }
  return terms;
}

template <class R>
Section<R> section_from_json(const json& j, const DiscreteSpace& sp, const StalkProfile& st) {
  std::vector<ElementaryTerm<R>> terms;
  for (const auto& tj : detail::as_array(j, "section")) {
    ElementaryTerm<R> t;
    t.anchor = point_from_json(detail::field(tj, "anchor"), sp);
    if (const json* rays = detail::field_opt(tj, "rays")) {
      for (const auto& r : detail::as_array(*rays, "rays")) {
        long long i = detail::as_int(r, "ray generator index");
        require(1 <= i && i <= sp.d, "ray generator index out of range");
        t.rays |= (1u << (i - 1));
      }
    }
    const json& vals = detail::as_array(detail::field(tj, "value"), "value");
    for (const auto& v : vals)
      t.value.push_back(ring_traits<R>::parse(detail::scalar_text(v), sp.ring));
    require(static_cast<int>(t.value.size()) == st.ranks[static_cast<std::size_t>(t.anchor.label)],
            "value length must equal the stalk rank of the anchor label");
    terms.push_back(std::move(t));
  }
  return make_section(sp, st, std::move(terms));
}

inline std::string mask_to_key(std::uint32_t mask) {
  std::string out;
  for (int i = 1; i <= 31; ++i) {
    if (mask & (1u << (i - 1))) {
      if (!out.empty()) out += ',';
      out += std::to_string(i);
    }
  }
  return out;
}

inline std::uint32_t key_to_mask(const std::string& key, int d) {
  std::uint32_t mask = 0;
  std::stringstream ss(key);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    if (piece.empty()) continue;
    long long i = detail::parse_ll(piece);
    require(1 <= i && i <= d, "component key mentions a generator out of range");
    std::uint32_t bit = 1u << (i - 1);
    require(!(mask & bit), "component key repeats a generator");
    mask |= bit;
  }
  return mask;
}

template <class R>
json cochain_to_json(const Cochain<R>& w) {
  json comps = json::object();
  for (const auto& [mask, sec] : w.comps) {
    if (sec.terms.empty()) continue;
    comps[mask_to_key(mask)] = section_to_json(sec);
  }
  return json{{"degree", w.degree}, {"components", comps}};
}

template <class R>
Cochain<R> cochain_from_json(const json& j, const DiscreteSpace& sp, const StalkProfile& st) {
  int degree = static_cast<int>(detail::as_int(detail::field(j, "degree"), "degree"));
  require(0 <= degree && degree <= sp.d, "degree out of range");
  Cochain<R> w = zero_cochain<R>(sp, st, degree);
  if (const json* comps = detail::field_opt(j, "components")) {
    require(comps->is_object(), "components must be an object keyed by generator subsets");
    for (const auto& [key, val] : comps->items()) {
      std::uint32_t mask = key_to_mask(key, sp.d);
      require(std::popcount(mask) == degree, "component key size must equal the degree");
      w.comps[mask] = section_from_json<R>(val, sp, st);
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Piecewise-linear data
// ---------------------------------------------------------------------------

namespace detail {

inline json points_to_json(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  json pts = json::array();
  for (std::size_t i = 0; i < xs.size(); ++i)
    pts.push_back(json::array({rat_str(xs[i]), rat_str(ys[i])}));
  return pts;
}

inline void points_from_json(const json& j, std::vector<Rational>& xs, std::vector<Rational>& ys) {
  for (const auto& p : as_array(j, "points")) {
    as_array(p, "point");
    require(p.size() == 2, "a breakpoint is an [x, y] pair");
    xs.push_back(rat_parse(scalar_text(p[0])));
    ys.push_back(rat_parse(scalar_text(p[1])));
  }
}

}  // namespace detail

inline json pl_to_json(const PiecewiseLinear& f) {
  return json{{"points", detail::points_to_json(f.xs, f.ys)}};
}

inline PiecewiseLinear pl_from_json(const json& j) {
  std::vector<Rational> xs, ys;
  detail::points_from_json(detail::field(j, "points"), xs, ys);
  return pl_from_points(std::move(xs), std::move(ys));
}

inline json ep_to_json(const EventuallyPeriodic& f) {
  return json{{"period", rat_str(f.period)}, {"points", detail::points_to_json(f.xs, f.ys)}};
}

inline EventuallyPeriodic ep_from_json(const json& j) {
  EventuallyPeriodic f;
  f.period = rat_parse(detail::scalar_text(detail::field(j, "period")));
  require(Rational{} < f.period, "period must be positive");
  detail::points_from_json(detail::field(j, "points"), f.xs, f.ys);
  for (std::size_t i = 0; i + 1 < f.xs.size(); ++i)
    require(f.xs[i] < f.xs[i + 1], "breakpoints must be strictly increasing");
  if (!f.xs.empty()) require(is_zero(f.ys.front()), "the core must start at value zero");
  return f;
}

inline json profile_to_json(const PeriodicProfile& p) {
  return json{{"period", rat_str(p.period)}, {"points", detail::points_to_json(p.xs, p.ys)}};
}

inline PeriodicProfile profile_from_json(const json& j) {
  PeriodicProfile p;
  p.period = rat_parse(detail::scalar_text(detail::field(j, "period")));
  require(Rational{} < p.period, "period must be positive");
  detail::points_from_json(detail::field(j, "points"), p.xs, p.ys);
  for (std::size_t i = 0; i + 1 < p.xs.size(); ++i)
    require(p.xs[i] < p.xs[i + 1], "breakpoints must be strictly increasing");
  return p;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

template <class R>
json probe_to_json(const ProbeOutcome<R>& p, const Cochain<R>& input) {
  json out{{"degree", p.degree}, {"kind", p.kind}, {"input", cochain_to_json(input)}};
  if (p.primitive) out["primitive"] = cochain_to_json(*p.primitive);
  if (p.class_section) out["class"] = section_to_json(*p.class_section);
  return out;
}

template <class R>
json report_to_json(const CohomologyReport<R>& rep, const std::vector<Cochain<R>>& inputs,
                    const StalkProfile& st) {
  require(rep.probes.size() == inputs.size(), "probe outcomes and inputs must align");
  json probes = json::array();
  for (std::size_t i = 0; i < rep.probes.size(); ++i)
    probes.push_back(probe_to_json(rep.probes[i], inputs[i]));
  return json{{"mode", rep.mode == ReportMode::concentrated ? "concentrated" : "acyclic"},
              {"reason", rep.reason},
              {"space", space_to_json(rep.space)},
              {"stalk", stalk_to_json(st)},
              {"family", family_to_json(rep.family, rep.space)},
              {"quotient_space", space_to_json(rep.quotient)},
              {"pushforward_family", family_to_json(rep.pushed, rep.quotient)},
              {"probes", probes}};
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open file: " + path);
  json j = json::parse(in, nullptr, false);
  require(!j.is_discarded(), "invalid JSON in file: " + path);
  return j;
}

inline void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  require(out.good(), "cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
}

inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace zdcoh
