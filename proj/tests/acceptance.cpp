// Acceptance suite: one verdict line per criterion, non-zero exit on failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "vanilla/rewriting.hpp"
#include "vanilla/structeq.hpp"
#include "vanilla/syntax.hpp"
#include "vanilla/testkit.hpp"
#include "vanilla/translate.hpp"
#include "vanilla/typing.hpp"

using namespace vanilla;

namespace {

Term nat(const std::string& s) { return parse_term(s, Calculus::natural); }

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& msg) {
    if (ok) detail = msg;
    ok = false;
  }
  void expect(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- criterion 1: the stuck-term golden trace --------------------------------

void criterion_stuck_term_trace(Check& c) {
  auto start = std::chrono::steady_clock::now();
  Term omega_stuck = nat("(\\x. \\w. w w) (y z) (\\w. w w)");
  Trace tr = normalize(omega_stuck, kVscRules, Strategy::leftmost_outermost, 20);
  c.expect(tr.status == Trace::Status::fuel_exhausted, "expected fuel exhaustion");
  c.expect(tr.steps.size() == 20, "expected exactly fuel-many steps");
  const RuleId want[4] = {RuleId::db_at_distance, RuleId::db_at_distance, RuleId::vs_sub,
                          RuleId::db_at_distance};
  for (int i = 0; i < 4; ++i) {
    c.expect(tr.steps[i].redex.rule == want[i], "rule prefix mismatch at step " + std::to_string(i));
  }
  c.expect(alpha_eq(tr.steps[0].result, nat("(let x = y z in \\w. w w) (\\u. u u)")),
           "step 1 term mismatch");
  c.expect(alpha_eq(tr.steps[1].result, nat("let x = y z in let w = \\u. u u in w w")),
           "step 2 term mismatch");
  c.expect(alpha_eq(tr.steps[2].result, nat("let x = y z in (\\u. u u) (\\u. u u)")),
           "step 3 term mismatch");
  c.expect(alpha_eq(tr.steps[3].result, nat("let x = y z in let u = \\v. v v in u u")),
           "step 4 term mismatch");

  Trace plotkin = normalize(omega_stuck, kPlotkinStrong, Strategy::leftmost_outermost, 20);
  c.expect(plotkin.status == Trace::Status::normal && plotkin.steps.empty(),
           "expected a premature normal form under Plotkin strong");
  c.expect(seconds_since(start) < 1.0, "runtime exceeded 1 s");
}

// --- criterion 2: cut-free translations are VSC-normal -----------------------

void criterion_cut_free_images(Check& c) {
  auto start = std::chrono::steady_clock::now();
  CutFreeGen gen(GenConfig{2024, 12, {"X"}, 3});
  bool some_not_sc_normal = false;
  for (int i = 0; i < 1000; ++i) {
    Term t = gen.next();
    if (!is_cut_free(t)) {
      c.fail("generator emitted a cut");
      return;
    }
    Term img = sc_to_nd(t);
    if (!is_normal(img, kVscRules)) {
      c.fail("image not VSC-normal: " + print_term(t));
      return;
    }
    some_not_sc_normal = some_not_sc_normal || !is_normal(img, kScRules);
  }
  c.expect(some_not_sc_normal, "no witness of a non-SC-normal image");
  c.expect(seconds_since(start) < 10.0, "runtime exceeded 10 s");
}

// --- criterion 3: the VSC simulates vanilla ----------------------------------

void criterion_vsc_simulates_vanilla(Check& c) {
  TypedGen gen(Calculus::vanilla, GenConfig{31, 9, {"X", "Y"}, 3});
  std::size_t redex_count = 0;
  for (int i = 0; i < 1000; ++i) {
    TypedTriple t = gen.next();
    for (const Redex& r : redexes(t.term, kVanillaRules)) {
      ++redex_count;
      SimReport rep = simulate_cut_in_vsc(t.term, r);
      if (!rep.matched || rep.shape.rfind("vs;dB*", 0) != 0 ||
          rep.target.steps.empty() || rep.target.steps[0].redex.rule != RuleId::vs_sub) {
        c.fail("simulation failed on " + print_term(t.term) + " at " + r.at.str());
        return;
      }
      for (std::size_t s = 1; s < rep.target.steps.size(); ++s) {
        if (rep.target.steps[s].redex.rule != RuleId::db_at_distance) {
          c.fail("non-dB compensation step");
          return;
        }
      }
    }
  }
  c.expect(redex_count > 500, "too few cut redexes exercised");
}

// --- criterion 4: vanilla simulates the VSC ----------------------------------

void criterion_vanilla_simulates_vsc(Check& c) {
  TypedGen gen(Calculus::natural, GenConfig{41, 9, {"X", "Y"}, 3});
  std::size_t db_count = 0, vs_count = 0;
  for (int i = 0; i < 1000; ++i) {
    TypedTriple t = gen.next();
    for (const Redex& r : redexes(t.term, kVscRules)) {
      SimReport rep = simulate_vsc_in_vanilla(t.term, r);
      std::size_t want = r.rule == RuleId::db_at_distance ? 2 : 1;
      (r.rule == RuleId::db_at_distance ? db_count : vs_count) += 1;
      if (!rep.matched || rep.target.steps.size() != want) {
        c.fail("simulation failed on " + print_term(t.term) + " at " + r.at.str());
        return;
      }
      for (const TraceStep& s : rep.target.steps) {
        if (s.redex.rule != RuleId::cut_elim) {
          c.fail("non-cut step in the vanilla simulation");
          return;
        }
      }
    }
  }
  c.expect(db_count > 100 && vs_count > 100, "too few redexes exercised");
}

// --- criterion 5: translations of VSC normal forms are almost cut-free -------

void criterion_almost_cut_free(Check& c) {
  TypedGen gen(Calculus::natural, GenConfig{51, 9, {"X", "Y"}, 3});
  int collected = 0;
  int guard = 0;
  while (collected < 500 && ++guard < 5000) {
    TypedTriple t = gen.next();
    Trace tr = normalize(t.term, kVscRules, Strategy::leftmost_outermost, 600);
    if (tr.status != Trace::Status::normal) {
      c.fail("typed natural term did not normalize");
      return;
    }
    Term nf = tr.final_term();
    ++collected;
    try {
      auto [cutfree, k] = strip_renaming_cuts(nd_to_sc(nf));
      if (!is_cut_free(cutfree)) {
        c.fail("residual cut after stripping");
        return;
      }
      if (k > term_size(nf)) {
        c.fail("renaming count " + std::to_string(k) + " exceeds size " +
               std::to_string(term_size(nf)));
        return;
      }
    } catch (const Error& e) {
      c.fail(std::string("strip failed: ") + e.what());
      return;
    }
  }
  c.expect(collected == 500, "could not collect 500 VSC-normal terms");
}

// --- criterion 6: subject reduction -------------------------------------------

void criterion_subject_reduction(Check& c) {
  TypedGen gen(Calculus::vanilla, GenConfig{61, 9, {"X", "Y"}, 3});
  std::size_t reducts = 0;
  for (int i = 0; i < 1000; ++i) {
    TypedTriple t = gen.next();
    ProbeReport rep = subject_reduction_probe(t.ctx, t.term, t.type);
    reducts += rep.items.size();
    if (!rep.all_ok) {
      c.fail("reduct failed to retype for " + print_term(t.term));
      return;
    }
  }
  c.expect(reducts > 500, "too few reducts exercised");
}

// --- criterion 7: typable terms are strongly normalizing ----------------------

void criterion_typed_sn(Check& c) {
  TypedGen gen(Calculus::vanilla, GenConfig{71, 10, {"X", "Y"}, 3});
  for (int i = 0; i < 500; ++i) {
    TypedTriple t = gen.next();
    GraphReport g = reduction_graph(t.term, kVanillaRules, 10000);
    if (g.kind != GraphReport::Kind::all_paths_terminate) {
      c.fail("graph did not terminate for " + print_term(t.term));
      return;
    }
  }
  GraphReport omega = reduction_graph(nat("(\\x. x x) (\\x. x x)"), kVscRules, 50);
  c.expect(omega.kind == GraphReport::Kind::cycle_found ||
               omega.kind == GraphReport::Kind::cap_exceeded,
           "untyped omega unexpectedly terminated");
}

// --- criterion 8: substitution lemmas -----------------------------------------

void criterion_substitution_lemmas(Check& c) {
  {
    RawGen terms(Calculus::natural, GenConfig{81, 12, {"X"}, 3});
    RawGen values(Calculus::natural, GenConfig{82, 5, {"X"}, 3});
    for (int i = 0; i < 10000; ++i) {
      Term t = terms.next();
      Term v = values.next_value();
      Var x{"x" + std::to_string(1 + (i % 3)), 0};
      if (!alpha_eq(nd_to_sc(subst_nd(t, x, v)), subst_value(nd_to_sc(v), x, nd_to_sc(t)))) {
        c.fail("natural-to-vanilla commutation failed on " + print_term(t));
        return;
      }
    }
  }
  {
    RawGen terms(Calculus::vanilla, GenConfig{83, 12, {"X"}, 3});
    RawGen values(Calculus::vanilla, GenConfig{84, 5, {"X"}, 3});
    for (int i = 0; i < 10000; ++i) {
      Term t = terms.next();
      Term v = values.next_value();
      Var x{"x" + std::to_string(1 + (i % 3)), 0};
      Term cur = subst_nd(sc_to_nd(t), x, sc_to_nd(v));
      try {
        for (const Position& p : commute_subst_steps(v, x, t)) {
          cur = step_at(cur, Redex{RuleId::db_at_distance, p});
        }
      } catch (const Error& e) {
        c.fail(std::string("dB compensation step failed: ") + e.what());
        return;
      }
      if (!alpha_eq(cur, sc_to_nd(subst_value(v, x, t)))) {
        c.fail("vanilla-to-natural commutation failed on " + print_term(t));
        return;
      }
    }
  }
  {
    RawGen terms(Calculus::vanilla, GenConfig{85, 12, {"X"}, 3});
    RawGen values(Calculus::vanilla, GenConfig{86, 5, {"X"}, 3});
    for (int i = 0; i < 10000; ++i) {
      Term t = terms.next();
      Term v = values.next_value();
      Var x{"x" + std::to_string(1 + (i % 3)), 0};
      if (!alpha_eq(subst_value(v, x, t), oracle_subst(Calculus::vanilla, t, x, v))) {
        c.fail("oracle disagreement on " + print_term(t));
        return;
      }
    }
  }
}

// --- criterion 9: strong bisimulation, SN stability, postponement -------------

void criterion_strong_bisimulation(Check& c) {
  RawGen gen(Calculus::vanilla, GenConfig{91, 10, {"X"}, 3});
  int pairs = 0;
  int guard = 0;
  while (pairs < 500 && ++guard < 20000) {
    Term t = gen.next();
    std::vector<Term> moves = root_moves(t);
    if (moves.empty()) continue;
    Term u = moves[static_cast<std::size_t>(pairs) % moves.size()];
    ++pairs;

    BisimReport rep = bisim_probe(t, u, 4);
    if (!rep.ok) {
      c.fail("diagram failed to close for " + print_term(t) + "  ~  " + print_term(u));
      return;
    }

    GraphReport gt = reduction_graph(t, kVanillaRules, 2000);
    GraphReport gu = reduction_graph(u, kVanillaRules, 2000);
    bool t_fin = gt.kind == GraphReport::Kind::all_paths_terminate;
    bool u_fin = gu.kind == GraphReport::Kind::all_paths_terminate;
    if (t_fin != u_fin) {
      c.fail("termination not stable under one move: " + print_term(t));
      return;
    }
    if (t_fin && gt.max_path_len != gu.max_path_len) {
      c.fail("maximal path lengths differ: " + print_term(t));
      return;
    }
  }
  c.expect(pairs == 500, "could not collect 500 move pairs");

  // postponement: a mixed sequence of k cut steps and moves is matched by a
  // pure cut sequence of length k ending equivalent to the mixed endpoint
  RawGen gen2(Calculus::vanilla, GenConfig{92, 9, {"X"}, 3});
  Rng rng(93);
  int sequences = 0;
  int guard2 = 0;
  while (sequences < 200 && ++guard2 < 20000) {
    Term start = gen2.next();
    Term cur = start;
    std::size_t cuts = 0;
    bool mixed = false;
    for (int step = 0; step < 5; ++step) {
      std::vector<Redex> rs = redexes(cur, kVanillaRules);
      std::vector<Term> moves = root_moves(cur);
      bool do_cut = !rs.empty() && (moves.empty() || rng.chance(1, 2));
      if (do_cut) {
        cur = step_at(cur, rs[rng.below(rs.size())]);
        ++cuts;
      } else if (!moves.empty()) {
        cur = moves[rng.below(moves.size())];
        mixed = true;
      } else {
        break;
      }
    }
    if (cuts == 0 || !mixed) continue;
    ++sequences;

    // breadth-first over pure cut sequences of length exactly `cuts`
    std::vector<Term> layer{start};
    for (std::size_t d = 0; d < cuts; ++d) {
      std::vector<Term> next;
      std::set<std::string> seen;
      for (const Term& node : layer) {
        for (const Redex& r : redexes(node, kVanillaRules)) {
          Term stepped = step_at(node, r);
          if (seen.insert(alpha_key(stepped)).second) next.push_back(stepped);
        }
      }
      layer = std::move(next);
    }
    bool found = false;
    for (const Term& endpoint : layer) {
      if (equiv_bounded(endpoint, cur, 8).equivalent) {
        found = true;
        break;
      }
    }
    if (!found) {
      c.fail("no pure cut sequence of length " + std::to_string(cuts) + " matches for " +
             print_term(start));
      return;
    }
  }
  c.expect(sequences == 200, "could not collect 200 mixed sequences");
}

// --- criterion 10: splitting totality and uniqueness --------------------------

void enumerate_vanilla(std::size_t size, const std::vector<Var>& vars, std::vector<Term>& out) {
  if (size == 0) return;
  if (size == 1) {
    for (const Var& x : vars) out.push_back(Term::var(x));
    return;
  }
  std::vector<Term> smaller;
  enumerate_vanilla(size - 1, vars, smaller);
  for (const Var& x : vars) {
    for (const Term& b : smaller) out.push_back(Term::lam(x, b));
  }
  for (std::size_t cs = 1; cs + 1 < size; ++cs) {
    std::vector<Term> contents, bodies;
    enumerate_vanilla(cs, vars, contents);
    enumerate_vanilla(size - 1 - cs, vars, bodies);
    for (const Term& cont : contents) {
      for (const Term& b : bodies) {
        for (const Var& x : vars) {
          out.push_back(Term::cut(cont, x, b));
          for (const Var& h : vars) out.push_back(Term::subtr(h, cont, x, b));
        }
      }
    }
  }
}

void criterion_splitting(Check& c) {
  std::vector<Var> vars{Var{"x", 0}, Var{"y", 0}};
  std::vector<Term> all;
  for (std::size_t s = 1; s <= 6; ++s) enumerate_vanilla(s, vars, all);
  c.expect(all.size() > 5000, "enumeration unexpectedly small");
  for (const Term& t : all) {
    auto [L, v] = split(t);
    if (!is_value(v) || plug(L, v) != t) {
      c.fail("split/plug round-trip failed on " + print_term(t));
      return;
    }
    int decompositions = 0;
    Term cur = t;
    for (;;) {
      if (is_value(cur)) ++decompositions;
      if (cur.kind() == Kind::cut || cur.kind() == Kind::subtr) {
        cur = cur.body();
      } else {
        break;
      }
    }
    if (decompositions != 1) {
      c.fail("non-unique decomposition on " + print_term(t));
      return;
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* label;
    std::function<void(Check&)> fn;
  };
  std::vector<Criterion> criteria{
      {1, "stuck-term golden trace (VSC diverges, Plotkin strong is normal)",
       criterion_stuck_term_trace},
      {2, "cut-free translations are VSC-normal, some not SC-normal", criterion_cut_free_images},
      {3, "VSC simulates vanilla: one vs then dB-only, endpoints match",
       criterion_vsc_simulates_vanilla},
      {4, "vanilla simulates VSC: dB maps to 2 cuts, vs to 1, endpoints match",
       criterion_vanilla_simulates_vsc},
      {5, "translations of VSC normal forms strip to cut-free with k <= |t|",
       criterion_almost_cut_free},
      {6, "subject reduction: every cut reduct retypes", criterion_subject_reduction},
      {7, "typable vanilla terms are strongly normalizing", criterion_typed_sn},
      {8, "substitution lemmas and oracle agreement (10k instances each)",
       criterion_substitution_lemmas},
      {9, "strong bisimulation, SN stability, postponement", criterion_strong_bisimulation},
      {10, "splitting totality and uniqueness over all small terms", criterion_splitting},
  };

  bool all_ok = true;
  for (const Criterion& crit : criteria) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
      crit.fn(check);
    } catch (const std::exception& e) {
      check.fail(std::string("exception: ") + e.what());
    }
    double elapsed = seconds_since(start);
    std::printf("%s criterion %2d: %s (%.2fs)%s%s\n", check.ok ? "PASS" : "FAIL", crit.id,
                crit.label, elapsed, check.ok ? "" : " -- ", check.ok ? "" : check.detail.c_str());
    all_ok = all_ok && check.ok;
  }
  return all_ok ? 0 : 1;
}
