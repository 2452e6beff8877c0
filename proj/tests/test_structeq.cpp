#include <doctest.h>

#include "vanilla/structeq.hpp"
#include "vanilla/syntax.hpp"
#include "vanilla/testkit.hpp"
#include "vanilla/typing.hpp"

using namespace vanilla;

namespace {

Term van(const std::string& s) { return parse_term(s, Calculus::vanilla); }

bool moves_contain(const std::vector<Term>& moves, const Term& t) {
  for (const Term& m : moves) {
    if (alpha_eq(m, t)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("root moves") {
  SUBCASE("independent cuts commute") {
    Term t = van("let x = s in let y = u in t");
    CHECK(moves_contain(root_moves(t), van("let y = u in let x = s in t")));
  }

  SUBCASE("moves never cross abstractions") {
    Term t = van("let x = s in \\z. t");
    CHECK_FALSE(moves_contain(root_moves(t), van("\\z. let x = s in t")));
  }

  SUBCASE("variables have no moves") {
    CHECK(root_moves(van("x")).empty());
  }

  SUBCASE("capture side conditions block dependent frames") {
    // y is free in the outer content: the outer cut cannot move under y's frame
    Term t = van("let x = y in let y = u in t");
    CHECK_FALSE(moves_contain(root_moves(t), van("let y = u in let x = y in t")));
    // the binder occurs in the would-be context: blocked as well
    Term t2 = van("let x = s in let y = x in x");
    CHECK_FALSE(moves_contain(root_moves(t2), van("let y = x in let x = s in x")));
  }

  SUBCASE("subtraction heads respect the context domain") {
    Term t = van("let x = y @ s in let y1 = u in t");
    // moving under a frame that binds the head would capture it
    Term blocked = van("let y1 = u in let x = y1 @ s in t");
    for (const Term& m : root_moves(van("let x = y1 @ s in let y1 = u in t"))) {
      CHECK_FALSE(alpha_eq(m, blocked));
    }
    // with an unrelated head the move goes through
    CHECK(moves_contain(root_moves(t), van("let y1 = u in let x = y @ s in t")));
  }

  SUBCASE("moves preserve the observables") {
    RawGen g(Calculus::vanilla, GenConfig{101, 10, {"X"}, 3});
    for (int i = 0; i < 150; ++i) {
      Term t = g.next();
      for (const Term& m : root_moves(t)) {
        CHECK(free_vars(m) == free_vars(t));
        CHECK(term_size(m) == term_size(t));
        CHECK(count_kind(m, Kind::cut) == count_kind(t, Kind::cut));
        CHECK(count_kind(m, Kind::subtr) == count_kind(t, Kind::subtr));
      }
    }
  }

  SUBCASE("moves preserve typability") {
    TypedGen g(Calculus::vanilla, GenConfig{102, 9, {"X", "Y"}, 3});
    for (int i = 0; i < 50; ++i) {
      TypedTriple t = g.next();
      for (const Term& m : root_moves(t.term)) {
        CHECK_NOTHROW(check_sc(t.ctx, m, t.type));
      }
    }
  }
}

TEST_CASE("bounded equivalence oracle") {
  SUBCASE("reflexivity") {
    Term t = van("let x = s in x");
    EquivResult r = equiv_bounded(t, t, 0);
    CHECK(r.equivalent);
    CHECK(r.path.size() == 1);
  }

  SUBCASE("one move") {
    EquivResult r = equiv_bounded(van("let x = s in let y = u in t"),
                                  van("let y = u in let x = s in t"), 1);
    CHECK(r.equivalent);
    CHECK(r.path.size() == 2);
  }

  SUBCASE("abstraction bodies stay out of reach") {
    EquivResult r = equiv_bounded(van("let x = s in \\z. t"), van("\\z. let x = s in t"), 6);
    CHECK_FALSE(r.equivalent);
  }

  SUBCASE("symmetry on random one-move pairs") {
    RawGen g(Calculus::vanilla, GenConfig{103, 9, {"X"}, 3});
    int pairs = 0;
    for (int i = 0; i < 200 && pairs < 60; ++i) {
      Term t = g.next();
      auto moves = root_moves(t);
      if (moves.empty()) continue;
      ++pairs;
      const Term& u = moves[i % moves.size()];
      CHECK(equiv_bounded(t, u, 1).equivalent);
      CHECK(equiv_bounded(u, t, 1).equivalent);
    }
    CHECK(pairs >= 40);
  }
}

TEST_CASE("strong bisimulation probe") {
  SUBCASE("a term closes against itself") {
    Term t = van("let x = y in x");
    BisimReport r = bisim_probe(t, t, 2);
    CHECK(r.ok);
  }

  SUBCASE("independent cuts close move by move") {
    Term t = van("let x = \\q. q in let y = \\w. w in let z = x @ y in z");
    auto moves = root_moves(t);
    REQUIRE(!moves.empty());
    for (const Term& u : moves) {
      BisimReport r = bisim_probe(t, u, 3);
      CHECK(r.ok);
      for (const BisimDiagram& d : r.diagrams) CHECK(d.closed);
    }
  }

  SUBCASE("random one-move pairs close") {
    RawGen g(Calculus::vanilla, GenConfig{104, 10, {"X"}, 3});
    int pairs = 0;
    for (int i = 0; i < 150 && pairs < 40; ++i) {
      Term t = g.next();
      auto moves = root_moves(t);
      if (moves.empty()) continue;
      ++pairs;
      BisimReport r = bisim_probe(t, moves[i % moves.size()], 4);
      CHECK(r.ok);
    }
    CHECK(pairs >= 25);
  }
}
