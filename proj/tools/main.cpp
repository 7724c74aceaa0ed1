// Command-line workbench for equivariant section modules over Z^d actions.
//
// Subcommands:
//   cohomology   solve probe cocycles and report the degree profile
//   coboundary   apply the cochain differential
//   properness   properness decisions and transporter certificates
//   pushforward  support families along quotient maps
//   flow         the continuum shift equation for piecewise-linear data
//   verify       recheck an emitted witness file by direct evaluation
//   suite        randomized self-checks
//
// Exit codes: 0 success, 1 malformed input, 2 failed hypothesis,
//             3 non-cocycle input, 4 witness verification mismatch.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <zdcoh/zdcoh.hpp>

namespace {

using zdcoh::json;

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << zdcoh::dump_json(j);
  else
    zdcoh::save_json_file(out_path, j);
}

// ---------------------------------------------------------------------------
// cohomology
// ---------------------------------------------------------------------------

struct CohomologyArgs {
  std::string in, out;
  int probes = 2;
  std::uint64_t seed = 1;
};

template <class R>
json run_cohomology_typed(const zdcoh::DiscreteSpace& sp, const zdcoh::StalkProfile& st,
                          const zdcoh::SupportFamily& fam, const json& file,
                          const CohomologyArgs& args) {
  using namespace zdcoh;
  std::vector<Cochain<R>> probes;
  if (const json* jp = detail::field_opt(file, "probes")) {
    for (const auto& pj : detail::as_array(*jp, "probes"))
      probes.push_back(cochain_from_json<R>(pj, sp, st));
  }
  Rng rng(args.seed);
  for (int k = 0; k < args.probes; ++k) {
    // Degree 0: the zero section, the only finitely supported invariant one.
    probes.push_back(zero_cochain<R>(sp, st, 0));
    // Intermediate degrees: random coboundaries.
    for (int p = 1; p < sp.d; ++p)
      probes.push_back(differential(suite_detail::random_cochain<R>(rng, sp, st, p - 1, 3, 3)));
    // Top degree: alternate between a coboundary and a lifted quotient class.
    if (sp.d >= 1) {
      if (k % 2 == 0) {
        probes.push_back(differential(suite_detail::random_cochain<R>(rng, sp, st, sp.d - 1, 3, 3)));
      } else {
        Section<R> t =
            suite_detail::random_section<R>(rng, full_quotient_space(sp), st, 3, 3);
        probes.push_back(lift_class(t, sp));
      }
    }
  }
  CohomologyReport<R> rep = cohomology_report<R>(sp, st, fam, probes);
  return report_to_json(rep, probes, st);
}

int run_cohomology(const CohomologyArgs& args) {
  using namespace zdcoh;
  json file = load_json_file(args.in);
  DiscreteSpace sp = space_from_json(detail::field(file, "space"));
  StalkProfile st = stalk_from_json(detail::field_opt(file, "stalk"), sp);
  SupportFamily fam = family_from_json(detail::field(file, "family"), sp);
  validate_family(sp, fam);
  json out = with_ring(sp.ring, [&](auto tag) {
    using R = std::decay_t<decltype(tag)>;
    return run_cohomology_typed<R>(sp, st, fam, file, args);
  });
  emit(out, args.out);
  return 0;
}

// ---------------------------------------------------------------------------
// coboundary
// ---------------------------------------------------------------------------

int run_coboundary(const std::string& in, const std::string& out) {
  using namespace zdcoh;
  json file = load_json_file(in);
  DiscreteSpace sp = space_from_json(detail::field(file, "space"));
  StalkProfile st = stalk_from_json(detail::field_opt(file, "stalk"), sp);
  json result = with_ring(sp.ring, [&](auto tag) {
    using R = std::decay_t<decltype(tag)>;
    Cochain<R> w = cochain_from_json<R>(detail::field(file, "cochain"), sp, st);
    Cochain<R> dw = differential(w);
    return json{{"space", space_to_json(sp)},
                {"stalk", stalk_to_json(st)},
                {"input", cochain_to_json(w)},
                {"differential", cochain_to_json(dw)},
                {"is_cocycle", is_cocycle(w)}};
  });
  emit(result, out);
  return 0;
}

// ---------------------------------------------------------------------------
// properness
// ---------------------------------------------------------------------------

int run_properness(const std::string& in, const std::string& out,
                   const std::string& window_inline) {
  using namespace zdcoh;
  json file = load_json_file(in);
  DiscreteSpace sp = space_from_json(detail::field(file, "space"));
  json result{{"space", space_to_json(sp)}};
  if (const json* jf = detail::field_opt(file, "family")) {
    SupportFamily fam = family_from_json(*jf, sp);
    validate_family(sp, fam);
    PhiProperness pp = check_phi_proper(sp, fam);
    result["family"] = family_to_json(fam, sp);
    result["family_proper"] = pp.proper;
    result["reason"] = pp.reason;
  }
  json windows = json::array();
  auto add_window = [&](const json& wj) {
    FiniteWindow w = window_from_json(wj, sp);
    validate_window(sp, w);
    PropernessCertificate cert = check_bourbaki_proper(sp, w);
    json tr = json::array();
    for (const auto& g : cert.transporter) tr.push_back(json(g.e));
    windows.push_back(json{{"window", window_to_json(w, sp)},
                           {"proper", cert.proper},
                           {"transporter", tr}});
  };
  if (const json* jw = detail::field_opt(file, "window")) add_window(*jw);
  if (const json* jws = detail::field_opt(file, "windows"))
    for (const auto& wj : detail::as_array(*jws, "windows")) add_window(wj);
  if (!window_inline.empty()) {
    json wj = json::parse(window_inline, nullptr, false);
    require(!wj.is_discarded(), "the --window argument is not valid JSON");
    add_window(wj);
  }
  if (!windows.empty()) result["windows"] = windows;
  emit(result, out);
  return 0;
}

// ---------------------------------------------------------------------------
// pushforward
// ---------------------------------------------------------------------------

int run_pushforward(const std::string& in, const std::string& out,
                    std::vector<int> generators, bool full) {
  using namespace zdcoh;
  json file = load_json_file(in);
  DiscreteSpace sp = space_from_json(detail::field(file, "space"));
  SupportFamily fam = family_from_json(detail::field(file, "family"), sp);
  validate_family(sp, fam);
  if (const json* jr = detail::field_opt(file, "remove"))
    for (long long g : detail::int_vector(*jr, "remove")) generators.push_back(static_cast<int>(g));
  if (full)
    for (int g = 1; g <= sp.d; ++g) generators.push_back(g);
  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
  for (int g : generators) require(1 <= g && g <= sp.d, "generator index out of range");
  QuotientMap q{sp, generators};
  DiscreteSpace target = q.target();
  SupportFamily pushed = pushforward(fam, q);
  json result{{"space", space_to_json(sp)},
              {"family", family_to_json(fam, sp)},
              {"removed", generators},
              {"quotient_space", space_to_json(target)},
              {"pushforward_family", family_to_json(pushed, target)},
              {"saturated_family", family_to_json(saturate(sp, fam), sp)}};
  emit(result, out);
  return 0;
}

// ---------------------------------------------------------------------------
// flow
// ---------------------------------------------------------------------------

int run_flow(const std::string& in, const std::string& out, std::string mode,
             const std::string& shift_inline) {
  using namespace zdcoh;
  json file = load_json_file(in);
  if (mode.empty()) {
    if (const json* jm = detail::field_opt(file, "mode")) mode = detail::as_str(*jm, "mode");
  }
  if (mode.empty()) mode = "compact";
  require(mode == "primitive" || mode == "compact", "mode must be 'primitive' or 'compact'");
  std::string shift_text = shift_inline;
  if (shift_text.empty()) shift_text = detail::scalar_text(detail::field(file, "shift"));
  Rational s = rat_parse(shift_text);
  PiecewiseLinear f = pl_from_json(detail::field(file, "f"));
  json result{{"shift", rat_str(s)}, {"f", pl_to_json(f)}};
  if (mode == "primitive") {
    EventuallyPeriodic F = flow_primitive(f, s);
    result["kind"] = "flow-primitive";
    result["primitive"] = ep_to_json(F);
  } else {
    CompactPrimitive cp = compact_primitive(f, s);
    result["exists"] = cp.exists;
    if (cp.exists) {
      result["kind"] = "flow-compact";
      result["primitive"] = pl_to_json(cp.primitive);
    } else {
      result["kind"] = "flow-obstruction";
      result["obstruction"] = profile_to_json(cp.obstruction);
    }
  }
  emit(result, out);
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int fail_verify(const std::string& what) {
  std::cerr << "verification mismatch: " << what << "\n";
  return 4;
}

// Recheck a report: every claim is validated by direct evaluation only --
// differentials for primitives, iterated orbit sums for classes.
template <class R>
int verify_report_typed(const zdcoh::DiscreteSpace& sp, const zdcoh::StalkProfile& st,
                        const json& file) {
  using namespace zdcoh;
  int checked = 0;
  for (const auto& pj : detail::as_array(detail::field(file, "probes"), "probes")) {
    Cochain<R> input = cochain_from_json<R>(detail::field(pj, "input"), sp, st);
    std::string kind = detail::as_str(detail::field(pj, "kind"), "kind");
    if (!is_cocycle(input)) return fail_verify("a probe input is not a cocycle");
    if (kind == "zero-section") {
      if (input.degree != 0 || !is_zero(input)) return fail_verify("claimed zero section is not zero");
    } else if (kind == "primitive") {
      Cochain<R> prim = cochain_from_json<R>(detail::field(pj, "primitive"), sp, st);
      if (prim.degree + 1 != input.degree) return fail_verify("primitive has the wrong degree");
      if (!is_zero(sub(differential(prim), input)))
        return fail_verify("primitive does not differentiate to the input");
    } else if (kind == "class") {
      DiscreteSpace q = full_quotient_space(sp);
      Section<R> claimed = section_from_json<R>(detail::field(pj, "class"), q, st);
      if (input.degree != sp.d) return fail_verify("class claimed for a non-top probe");
      const std::uint32_t full_mask = sp.d ? (1u << sp.d) - 1 : 0;
      Section<R> s = input.at(full_mask);
      for (int k = sp.d; k >= 1; --k) s = orbit_sum(s, k);
      if (!(s == claimed)) return fail_verify("iterated orbit sums differ from the claimed class");
      if (is_zero(claimed)) return fail_verify("claimed class is zero but was reported essential");
    } else {
      throw parse_error("unknown probe kind '" + kind + "'");
    }
    ++checked;
  }
  std::cout << "verified " << checked << " probe(s)\n";
  return 0;
}

int run_verify(const std::string& in) {
  using namespace zdcoh;
  json file = load_json_file(in);
  if (const json* kind = detail::field_opt(file, "kind")) {
    std::string k = detail::as_str(*kind, "kind");
    Rational s = rat_parse(detail::scalar_text(detail::field(file, "shift")));
    PiecewiseLinear f = pl_from_json(detail::field(file, "f"));
    if (k == "flow-primitive") {
      EventuallyPeriodic F = ep_from_json(detail::field(file, "primitive"));
      if (!verify_flow_identity(f, s, F))
        return fail_verify("one-sided primitive fails the shift identity");
      std::cout << "verified flow primitive\n";
      return 0;
    }
    if (k == "flow-compact") {
      PiecewiseLinear g = pl_from_json(detail::field(file, "primitive"));
      if (!(flow_coboundary(g, s) == f))
        return fail_verify("compact primitive fails the shift identity");
      std::cout << "verified compact flow primitive\n";
      return 0;
    }
    if (k == "flow-obstruction") {
      PeriodicProfile p = profile_from_json(detail::field(file, "obstruction"));
      if (!(p.period == s)) return fail_verify("obstruction has the wrong period");
      if (profile_is_zero(p)) return fail_verify("claimed obstruction is zero");
      // Compare the profile against direct summation of translates on the
      // union of its breakpoints and the folded breakpoints of f.
      std::vector<Rational> pts = p.xs;
      if (!pl_is_zero(f)) {
        long long jlo = rat_ceil(f.xs.front() / s) - 1;
        long long jhi = rat_floor(f.xs.back() / s);
        for (long long j = jlo; j <= jhi; ++j)
          for (const auto& x : f.xs) {
            Rational y = x - Rational(j) * s;
            if (Rational(0) <= y && y <= s) pts.push_back(y);
          }
      }
      pts.push_back(Rational(0));
      pts.push_back(s);
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      for (const auto& x : pts) {
        Rational direct;
        if (!pl_is_zero(f)) {
          long long jlo = rat_ceil((f.xs.front() - x) / s);
          long long jhi = rat_floor((f.xs.back() - x) / s);
          for (long long j = jlo; j <= jhi; ++j) direct = direct + pl_eval(f, x + Rational(j) * s);
        }
        if (!(profile_eval(p, x) == direct))
          return fail_verify("obstruction differs from direct summation of translates");
      }
      std::cout << "verified flow obstruction\n";
      return 0;
    }
    throw parse_error("unknown witness kind '" + k + "'");
  }
  DiscreteSpace sp = space_from_json(detail::field(file, "space"));
  StalkProfile st = stalk_from_json(detail::field_opt(file, "stalk"), sp);
  return with_ring(sp.ring, [&](auto tag) {
    using R = std::decay_t<decltype(tag)>;
    return verify_report_typed<R>(sp, st, file);
  });
}

// ---------------------------------------------------------------------------
// suite
// ---------------------------------------------------------------------------

int run_suite(std::uint64_t seed, int cases, const std::string& ring_name, int max_d,
              const std::string& out) {
  using namespace zdcoh;
  std::vector<RingDesc> rings = suite_detail::ring_cycle();
  if (!ring_name.empty()) rings = {ring_from_name(ring_name)};
  std::vector<SuiteResult> results = run_all(seed, cases, rings, max_d);
  json jr = json::array();
  bool ok = true;
  int index = 1;
  for (const auto& r : results) {
    std::cout << format_result(index++, r) << "\n";
    ok = ok && r.passed();
    jr.push_back(json{{"name", r.name},
                      {"cases", r.cases},
                      {"failures", r.failures},
                      {"seconds", r.seconds},
                      {"passed", r.passed()},
                      {"notes", r.notes}});
  }
  if (!out.empty()) save_json_file(out, json{{"seed", seed}, {"results", jr}});
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for Z^d-equivariant section modules and their cohomology"};
  app.require_subcommand(1);

  CohomologyArgs cargs;
  CLI::App* c_coh = app.add_subcommand("cohomology", "solve probes and report the degree profile");
  c_coh->add_option("--in", cargs.in, "input JSON (space, family, optional stalk/probes)")
      ->required();
  c_coh->add_option("--out", cargs.out, "write the report to this file (default: stdout)");
  c_coh->add_option("--probes", cargs.probes, "random probe rounds to generate (default 2)");
  c_coh->add_option("--seed", cargs.seed, "seed for generated probes");

  std::string cb_in, cb_out;
  CLI::App* c_cb = app.add_subcommand("coboundary", "apply the cochain differential");
  c_cb->add_option("--in", cb_in, "input JSON (space, optional stalk, cochain)")->required();
  c_cb->add_option("--out", cb_out, "output file (default: stdout)");

  std::string pr_in, pr_out, pr_window;
  CLI::App* c_pr = app.add_subcommand("properness", "properness decisions and transporters");
  c_pr->add_option("--in", pr_in, "input JSON (space, optional family/window/windows)")->required();
  c_pr->add_option("--out", pr_out, "output file (default: stdout)");
  c_pr->add_option("--window", pr_window, "extra window as inline JSON");

  std::string pf_in, pf_out;
  std::vector<int> pf_gens;
  bool pf_full = false;
  CLI::App* c_pf = app.add_subcommand("pushforward", "support families along quotient maps");
  c_pf->add_option("--in", pf_in, "input JSON (space, family, optional remove)")->required();
  c_pf->add_option("--out", pf_out, "output file (default: stdout)");
  c_pf->add_option("--generator", pf_gens, "generator to remove (repeatable)");
  c_pf->add_flag("--full", pf_full, "remove every generator");

  std::string fl_in, fl_out, fl_mode, fl_shift;
  CLI::App* c_fl = app.add_subcommand("flow", "continuum shift equation for piecewise-linear data");
  c_fl->add_option("--in", fl_in, "input JSON (shift, f, optional mode)")->required();
  c_fl->add_option("--out", fl_out, "output file (default: stdout)");
  c_fl->add_option("--mode", fl_mode, "primitive | compact (default compact)");
  c_fl->add_option("--shift", fl_shift, "shift as an exact rational, overrides the file");

  std::string v_in;
  CLI::App* c_v = app.add_subcommand("verify", "recheck an emitted witness file");
  c_v->add_option("--in", v_in, "report or flow witness JSON")->required();

  std::uint64_t s_seed = 20260814ULL;
  int s_cases = 100;
  int s_maxd = 3;
  std::string s_ring, s_out;
  CLI::App* c_s = app.add_subcommand("suite", "randomized self-checks");
  c_s->add_option("--seed", s_seed, "random seed");
  c_s->add_option("--cases", s_cases, "base case count per criterion");
  c_s->add_option("--ring", s_ring, "restrict to one coefficient ring: Z, Q or Z/n");
  c_s->add_option("--max-d", s_maxd, "largest acting rank exercised (1..4)");
  c_s->add_option("--out", s_out, "write results as JSON to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_coh->parsed()) return run_cohomology(cargs);
    if (c_cb->parsed()) return run_coboundary(cb_in, cb_out);
    if (c_pr->parsed()) return run_properness(pr_in, pr_out, pr_window);
    if (c_pf->parsed()) return run_pushforward(pf_in, pf_out, pf_gens, pf_full);
    if (c_fl->parsed()) return run_flow(fl_in, fl_out, fl_mode, fl_shift);
    if (c_v->parsed()) return run_verify(v_in);
    if (c_s->parsed()) return run_suite(s_seed, s_cases, s_ring, s_maxd, s_out);
  } catch (const zdcoh::cocycle_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const zdcoh::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const zdcoh::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
