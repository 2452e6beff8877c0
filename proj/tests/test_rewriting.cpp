#include <doctest.h>

#include "vanilla/rewriting.hpp"
#include "vanilla/syntax.hpp"
#include "vanilla/testkit.hpp"

using namespace vanilla;

namespace {

Term nat(const std::string& s) { return parse_term(s, Calculus::natural); }
Term van(const std::string& s) { return parse_term(s, Calculus::vanilla); }

std::vector<RuleId> rule_sequence(const Trace& tr) {
  std::vector<RuleId> out;
  for (const TraceStep& s : tr.steps) out.push_back(s.redex.rule);
  return out;
}

}  // namespace

TEST_CASE("redex enumeration") {
  SUBCASE("distance tolerates intervening substitutions") {
    Term t = nat("(let z = u in let y = s in \\x. t) r");
    auto rs = redexes(t, RuleSet{RuleId::db_at_distance});
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].at.path.empty());
  }

  SUBCASE("stuck beta redexes are not value redexes") {
    Term t = nat("(\\x. \\w. w w) (y z)");
    CHECK(redexes(t, RuleSet{RuleId::betav_strong}).empty());
    CHECK(redexes(t, RuleSet{RuleId::db_at_distance}).size() == 1);
  }

  SUBCASE("applications do not split") {
    Term t = nat("let x = y z in t");
    CHECK(redexes(t, RuleSet{RuleId::vs_sub}).empty());
    CHECK(redexes(t, RuleSet{RuleId::s_sub}).size() == 1);
  }

  SUBCASE("weak positions exclude abstraction bodies") {
    Term t = nat("\\y. (\\x. x) z");
    CHECK(redexes(t, kPlotkinWeak).empty());
    CHECK(redexes(t, kPlotkinStrong).size() == 1);
  }

  SUBCASE("calculus mismatch") {
    CHECK_THROWS_AS(redexes(van("let x = y in x"), kVscRules), CalculusMismatch);
    CHECK_THROWS_AS(redexes(nat("x y"), kVanillaRules), CalculusMismatch);
  }

  SUBCASE("weak redexes are a subset of strong ones, both of plain beta") {
    RawGen g(Calculus::natural, GenConfig{99, 12, {"X"}, 3});
    for (int i = 0; i < 200; ++i) {
      Term t = g.next();
      auto weak = redexes(t, kPlotkinWeak);
      auto strong = redexes(t, kPlotkinStrong);
      for (const Redex& w : weak) {
        bool found = false;
        for (const Redex& s : strong) found = found || s.at == w.at;
        CHECK(found);
      }
      for (const Redex& s : strong) {
        Term sub = *subterm_at(t, s.at);
        CHECK(sub.kind() == Kind::app);
        CHECK(sub.fun().kind() == Kind::lam);
      }
    }
  }
}

TEST_CASE("single steps") {
  SUBCASE("beta at a distance") {
    Term t = nat("(let z = u in let y = s in \\x. t) r");
    Term expect = nat("let z = u in let y = s in let x = r in t");
    CHECK(alpha_eq(step_at(t, redexes(t, kScRules)[0]), expect));
  }

  SUBCASE("value substitution at a distance") {
    Term t = nat("let x = (let y = u in v) in z x x");
    // the root redex plus the inner one on [u/y]v
    auto rs = redexes(t, RuleSet{RuleId::vs_sub});
    REQUIRE(rs.size() == 2);
    REQUIRE(rs[0].at.path.empty());
    CHECK(alpha_eq(step_at(t, rs[0]), nat("let y = u in z v v")));
  }

  SUBCASE("root cut elimination with the abstraction clause") {
    Term t = van("let x = \\y. y in let w = x @ u in w");
    auto rs = redexes(t, kVanillaRules);
    REQUIRE(rs.size() == 1);
    CHECK(alpha_eq(step_at(t, rs[0]), van("let w = (let y = u in y) in w")));
  }

  SUBCASE("cut elimination does not capture the body's variables") {
    // content splits through a frame binding y; the body's free y must survive
    Term t = van("let x = (let y = z in \\w. y) in let q = x @ y in q");
    Term r = step_at(t, Redex{RuleId::cut_elim, Position{}});
    CHECK(free_vars(r) == free_vars(t));
    CHECK(alpha_eq(r, van("let y1 = z in let q = (let w = y in y1) in q")));
  }

  SUBCASE("frame heads follow the freshening of earlier binders") {
    // the content splits through a cut binding y and a subtraction headed by
    // that same y; the body's free y forces a rename that must reach the head
    Term t = van("let x = (let y = z in let q = y @ u in q) in y");
    Term r = step_at(t, Redex{RuleId::cut_elim, Position{}});
    CHECK(free_vars(r) == VarSet{Var{"z", 0}, Var{"u", 0}, Var{"y", 0}});
    CHECK(alpha_eq(r, van("let y1 = z in let q = y1 @ u in y")));
  }

  SUBCASE("stale redexes are rejected") {
    Term t = nat("(\\x. x) y");
    Redex bogus{RuleId::db_at_distance, Position{{Selector::app_arg}}};
    CHECK_THROWS_AS(step_at(t, bogus), StaleRedex);
  }
}

TEST_CASE("normalization traces") {
  SUBCASE("the stuck term diverges in the VSC") {
    Term omega_stuck = nat("(\\x. \\w. w w) (y z) (\\w. w w)");
    Trace tr = normalize(omega_stuck, kVscRules, Strategy::leftmost_outermost, 20);
    CHECK(tr.status == Trace::Status::fuel_exhausted);
    auto rules = rule_sequence(tr);
    REQUIRE(rules.size() >= 4);
    CHECK(rules[0] == RuleId::db_at_distance);
    CHECK(rules[1] == RuleId::db_at_distance);
    CHECK(rules[2] == RuleId::vs_sub);
    CHECK(rules[3] == RuleId::db_at_distance);
    CHECK(alpha_eq(tr.steps[0].result, nat("(let x = y z in \\w. w w) (\\u. u u)")));
    CHECK(alpha_eq(tr.steps[1].result, nat("let x = y z in let w = \\u. u u in w w")));
    CHECK(alpha_eq(tr.steps[2].result, nat("let x = y z in (\\u. u u) (\\u. u u)")));
    CHECK(alpha_eq(tr.steps[3].result, nat("let x = y z in let u = \\v. v v in u u")));
  }

  SUBCASE("the stuck term is a premature normal form for Plotkin") {
    Term omega_stuck = nat("(\\x. \\w. w w) (y z) (\\w. w w)");
    Trace tr = normalize(omega_stuck, kPlotkinStrong, Strategy::leftmost_outermost, 20);
    CHECK(tr.status == Trace::Status::normal);
    CHECK(tr.steps.empty());
  }

  SUBCASE("a single renaming cut") {
    Trace tr = normalize(van("let x = y in x"), kVanillaRules, Strategy::leftmost_outermost, 5);
    CHECK(tr.status == Trace::Status::normal);
    REQUIRE(tr.steps.size() == 1);
    CHECK(tr.final_term() == van("y"));
  }

  SUBCASE("strategies are deterministic and may differ") {
    Term t = nat("let a = (\\x. x) y in let b = (\\x. x) z in a b");
    Trace lo = normalize(t, kScRules, Strategy::leftmost_outermost, 50);
    Trace ri = normalize(t, kScRules, Strategy::rightmost_innermost, 50);
    CHECK(lo.status == Trace::Status::normal);
    CHECK(ri.status == Trace::Status::normal);
    CHECK(alpha_eq(lo.final_term(), ri.final_term()));
    CHECK(lo.steps[0].redex.at != ri.steps[0].redex.at);
  }
}

TEST_CASE("normal forms and cut-freeness") {
  CHECK(is_cut_free(van("let x = y @ z in let w = v @ x in w")));
  CHECK(is_normal(van("let x = y @ z in let w = v @ x in w"), kVanillaRules));
  CHECK_FALSE(is_cut_free(van("let x = y in x")));

  // image shape of a subtraction: VSC-normal but not SC-normal
  Term t = nat("let x = y z in w x x");
  CHECK(is_normal(t, kVscRules));
  CHECK_FALSE(is_normal(t, kScRules));

  SUBCASE("every term with a cut has a cut redex") {
    RawGen g(Calculus::vanilla, GenConfig{17, 12, {"X"}, 3});
    for (int i = 0; i < 300; ++i) {
      Term u = g.next();
      CHECK(is_normal(u, kVanillaRules) == is_cut_free(u));
    }
  }

  SUBCASE("SC-normal terms have no explicit substitutions") {
    RawGen g(Calculus::natural, GenConfig{18, 10, {"X"}, 3});
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
      Term u = g.next();
      Trace tr = normalize(u, kScRules, Strategy::leftmost_outermost, 60);
      if (tr.status != Trace::Status::normal) continue;
      ++checked;
      CHECK_FALSE(contains_kind(tr.final_term(), Kind::esub));
    }
    CHECK(checked > 100);
  }

  SUBCASE("renaming steps strictly decrease size") {
    RawGen g(Calculus::vanilla, GenConfig{19, 12, {"X"}, 3});
    for (int i = 0; i < 300; ++i) {
      Term u = g.next();
      for (const Redex& r : redexes(u, RuleSet{RuleId::ren_cut})) {
        CHECK(term_size(step_at(u, r)) < term_size(u));
      }
    }
  }
}

TEST_CASE("reduction graphs") {
  SUBCASE("single renaming cut") {
    GraphReport g = reduction_graph(van("let x = y in x"), kVanillaRules, 100);
    CHECK(g.kind == GraphReport::Kind::all_paths_terminate);
    CHECK(g.max_path_len == 1);
    CHECK(g.node_count == 2);
  }

  SUBCASE("omega loops") {
    Term omega = nat("(\\x. x x) (\\x. x x)");
    GraphReport g = reduction_graph(omega, kVscRules, 50);
    CHECK((g.kind == GraphReport::Kind::cycle_found ||
           g.kind == GraphReport::Kind::cap_exceeded));
  }

  SUBCASE("node cap") {
    Term omega = nat("(\\x. x x) (\\x. x x)");
    GraphReport g = reduction_graph(omega, kVscRules, 1);
    CHECK(g.kind == GraphReport::Kind::cap_exceeded);
  }

  SUBCASE("root cut expansion") {
    RawGen contents(Calculus::vanilla, GenConfig{20, 6, {"X"}, 2});
    RawGen bodies(Calculus::vanilla, GenConfig{21, 6, {"X"}, 2});
    int verified = 0;
    for (int i = 0; i < 150; ++i) {
      Term s = contents.next();
      Term b = bodies.next();
      Term cut = Term::cut(s, Var{"x1", 0}, b);
      Term reduct = step_at(cut, Redex{RuleId::cut_elim, Position{}});
      GraphReport gs = reduction_graph(s, kVanillaRules, 300);
      GraphReport gr = reduction_graph(reduct, kVanillaRules, 300);
      if (gs.kind != GraphReport::Kind::all_paths_terminate) continue;
      if (gr.kind != GraphReport::Kind::all_paths_terminate) continue;
      ++verified;
      GraphReport gc = reduction_graph(cut, kVanillaRules, 2000);
      CHECK(gc.kind == GraphReport::Kind::all_paths_terminate);
    }
    CHECK(verified > 50);
  }

  SUBCASE("termination extends to abstractions and subtractions") {
    RawGen g(Calculus::vanilla, GenConfig{24, 8, {"X"}, 2});
    int verified = 0;
    for (int i = 0; i < 100; ++i) {
      Term t = g.next();
      Term s = g.next();
      if (reduction_graph(t, kVanillaRules, 400).kind != GraphReport::Kind::all_paths_terminate)
        continue;
      if (reduction_graph(s, kVanillaRules, 400).kind != GraphReport::Kind::all_paths_terminate)
        continue;
      ++verified;
      CHECK(reduction_graph(Term::lam(Var{"q", 0}, t), kVanillaRules, 2000).kind ==
            GraphReport::Kind::all_paths_terminate);
      CHECK(reduction_graph(Term::subtr(Var{"x1", 0}, s, Var{"q", 0}, t), kVanillaRules,
                            2000).kind == GraphReport::Kind::all_paths_terminate);
    }
    CHECK(verified > 40);
  }

  SUBCASE("termination extends under a disjoint left context") {
    RawGen bodies(Calculus::vanilla, GenConfig{25, 7, {"X"}, 2});
    RawGen ctxs(Calculus::vanilla, GenConfig{26, 8, {"X"}, 2});
    int verified = 0;
    for (int i = 0; i < 100; ++i) {
      Term t = bodies.next();
      auto [L, val] = split(ctxs.next());
      if (L.empty()) continue;
      // rename the frame binders away from everything in t
      auto [L2, probe] = freshen_frames(L, Term::var(Var{"hole", 0}), all_vars(t));
      if (reduction_graph(t, kVanillaRules, 400).kind != GraphReport::Kind::all_paths_terminate)
        continue;
      if (reduction_graph(plug(L2, probe), kVanillaRules, 400).kind !=
          GraphReport::Kind::all_paths_terminate)
        continue;
      ++verified;
      CHECK(reduction_graph(plug(L2, t), kVanillaRules, 4000).kind ==
            GraphReport::Kind::all_paths_terminate);
    }
    CHECK(verified > 30);
  }

  SUBCASE("termination is stable under renaming free variables") {
    RawGen g(Calculus::vanilla, GenConfig{22, 9, {"X"}, 3});
    int verified = 0;
    for (int i = 0; i < 100; ++i) {
      Term t = g.next();
      GraphReport before = reduction_graph(t, kVanillaRules, 500);
      if (before.kind != GraphReport::Kind::all_paths_terminate) continue;
      ++verified;
      Term renamed = subst_value(Term::var(Var{"x2", 0}), Var{"x1", 0}, t);
      GraphReport after = reduction_graph(renamed, kVanillaRules, 500);
      CHECK(after.kind == GraphReport::Kind::all_paths_terminate);
    }
    CHECK(verified > 30);
  }
}
