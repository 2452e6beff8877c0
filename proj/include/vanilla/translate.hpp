#pragma once

// The two translations between natural terms with explicit substitutions and
// vanilla terms, their action on contexts and positions, and executable
// verifiers for the simulation theorems relating cut elimination to the VSC.
//
//   natural -> vanilla:  t s  becomes  let a = t' in let b = a @ s' in b
//   vanilla -> natural:  let x = y @ s in t  becomes  let x = y s' in t'
//
// Verifiers locate target redexes by translating the source position, never by
// searching.

#include <string>
#include <vector>

#include "vanilla/rewriting.hpp"
#include "vanilla/syntax.hpp"
#include "vanilla/term.hpp"

namespace vanilla {

struct ResidualCut : Error {
  using Error::Error;
};

namespace detail {

// Deterministic supply of translation variables: a, b, ..., z, a1, b1, ...,
// skipping every name already present in the source term.
class FreshNames {
 public:
  explicit FreshNames(const Term& t) {
    for (const Var& v : all_vars(t)) used_.insert(v.name);
  }

  Var next() {
    for (;;) {
      std::string name;
      name += static_cast<char>('a' + counter_ % 26);
      if (counter_ >= 26) name += std::to_string(counter_ / 26);
      ++counter_;
      if (!used_.count(name)) {
        used_.insert(name);
        return Var{name, 0};
      }
    }
  }

 private:
  std::set<std::string> used_;
  std::size_t counter_ = 0;
};

inline Term nd_to_sc_rec(const Term& t, FreshNames& fresh) {
  switch (t.kind()) {
    case Kind::var:
      return t;
    case Kind::lam:
      return Term::lam(t.binder(), nd_to_sc_rec(t.body(), fresh));
    case Kind::esub: {
      Term c = nd_to_sc_rec(t.content(), fresh);
      return Term::cut(c, t.binder(), nd_to_sc_rec(t.body(), fresh));
    }
    case Kind::app: {
      Var a = fresh.next();
      Var b = fresh.next();
      Term f = nd_to_sc_rec(t.fun(), fresh);
      Term s = nd_to_sc_rec(t.arg(), fresh);
      return Term::cut(f, a, Term::subtr(a, s, b, Term::var(b)));
    }
    default:
      throw CalculusMismatch("nd_to_sc applies to natural terms");
  }
}

}  // namespace detail

inline Term nd_to_sc(const Term& t) {
  detail::FreshNames fresh(t);
  return detail::nd_to_sc_rec(t, fresh);
}

inline Term sc_to_nd(const Term& t) {
  switch (t.kind()) {
    case Kind::var:
      return t;
    case Kind::lam:
      return Term::lam(t.binder(), sc_to_nd(t.body()));
    case Kind::cut:
      return Term::esub(sc_to_nd(t.content()), t.binder(), sc_to_nd(t.body()));
    case Kind::subtr:
      return Term::esub(Term::app(Term::var(t.head()), sc_to_nd(t.content())), t.binder(),
                        sc_to_nd(t.body()));
    default:
      throw CalculusMismatch("sc_to_nd applies to vanilla terms");
  }
}

// ---------------------------------------------------------------------------
// Context and position translation

inline LeftCtx translate_ctx_sc_to_nd(const LeftCtx& L) {
  LeftCtx out;
  for (const Frame& f : L.frames) {
    Term c = sc_to_nd(f.content);
    if (f.head) c = Term::app(Term::var(*f.head), c);
    out.frames.push_back(Frame{std::nullopt, c, f.binder});
  }
  return out;
}

inline LeftCtx translate_ctx_nd_to_sc(const LeftCtx& L) {
  LeftCtx out;
  for (const Frame& f : L.frames) {
    if (f.head) throw CalculusMismatch("natural substitution contexts have no subtraction frames");
    out.frames.push_back(Frame{std::nullopt, nd_to_sc(f.content), f.binder});
  }
  return out;
}

// Maps a position through sc_to_nd, selector by selector along the source term.
inline Position translate_pos_sc_to_nd(const Term& t, const Position& pos) {
  Position out;
  Term cur = t;
  for (Selector s : pos.path) {
    switch (s) {
      case Selector::lam_body:
        out.path.push_back(Selector::lam_body);
        break;
      case Selector::cut_content:
        out.path.push_back(Selector::cut_content);
        break;
      case Selector::cut_body:
        out.path.push_back(Selector::cut_body);
        break;
      case Selector::subtr_content:
        out.path.push_back(Selector::cut_content);
        out.path.push_back(Selector::app_arg);
        break;
      case Selector::subtr_body:
        out.path.push_back(Selector::cut_body);
        break;
      default:
        throw CalculusMismatch("position does not address a vanilla term");
    }
    cur = *child_at(cur, s);
  }
  return out;
}

// Maps a position through nd_to_sc.
inline Position translate_pos_nd_to_sc(const Term& t, const Position& pos) {
  Position out;
  Term cur = t;
  for (Selector s : pos.path) {
    switch (s) {
      case Selector::lam_body:
        out.path.push_back(Selector::lam_body);
        break;
      case Selector::cut_content:
        out.path.push_back(Selector::cut_content);
        break;
      case Selector::cut_body:
        out.path.push_back(Selector::cut_body);
        break;
      case Selector::app_fun:
        out.path.push_back(Selector::cut_content);
        break;
      case Selector::app_arg:
        out.path.push_back(Selector::cut_body);
        out.path.push_back(Selector::subtr_content);
        break;
      default:
        throw CalculusMismatch("position does not address a natural term");
    }
    cur = *child_at(cur, s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Substitution commutation: dB positions realizing
//   subst_nd(sc_to_nd(u), x, sc_to_nd(v))  ->dB*  sc_to_nd(subst_value(v, x, u))
// Positions are relative to the root of the left-hand side and are emitted in
// application order. Each subtraction whose head is substituted by an
// abstraction contributes exactly one dB step.

namespace detail {

inline void commute_steps_rec(const Term& v, const Var& x, const Term& u, Position prefix,
                              std::vector<Position>& out) {
  if (!is_free_in(x, u)) return;
  switch (u.kind()) {
    case Kind::var:
      return;  // right occurrence: plain replacement, no compensation
    case Kind::lam:
      commute_steps_rec(v, x, u.body(), prefix.child(Selector::lam_body), out);
      return;
    case Kind::cut:
      commute_steps_rec(v, x, u.content(), prefix.child(Selector::cut_content), out);
      if (u.binder() != x)
        commute_steps_rec(v, x, u.body(), prefix.child(Selector::cut_body), out);
      return;
    case Kind::subtr: {
      Position content_pos = prefix.child(Selector::cut_content).child(Selector::app_arg);
      if (u.head() == x && v.kind() == Kind::lam) {
        // the substituted abstraction lands in head position: a beta redex
        out.push_back(prefix.child(Selector::cut_content));
        content_pos = prefix.child(Selector::cut_content).child(Selector::cut_content);
      }
      commute_steps_rec(v, x, u.content(), content_pos, out);
      if (u.binder() != x)
        commute_steps_rec(v, x, u.body(), prefix.child(Selector::cut_body), out);
      return;
    }
    default:
      throw CalculusMismatch("commutation trace applies to vanilla terms");
  }
}

}  // namespace detail

inline std::vector<Position> commute_subst_steps(const Term& v, const Var& x, const Term& u,
                                                 const Position& base = Position{}) {
  std::vector<Position> out;
  detail::commute_steps_rec(v, x, u, base, out);
  return out;
}

// ---------------------------------------------------------------------------
// Simulation verifiers

struct SimReport {
  Calculus source_calculus;
  Redex source;
  Trace target;
  bool matched = false;
  std::string shape;
  Term expected_endpoint;
};

// One vanilla cut step is simulated in the VSC by one vs step at the
// translated position followed by the commutation dB steps.
inline SimReport simulate_cut_in_vsc(const Term& t, const Redex& r) {
  if (r.rule != RuleId::cut_elim && r.rule != RuleId::ren_cut)
    throw Error("simulate_cut_in_vsc expects a cut redex");
  auto sub = subterm_at(t, r.at);
  if (!sub || sub->kind() != Kind::cut) throw StaleRedex("redex does not match term");
  auto [L, v] = split(sub->content());

  Term expected = sc_to_nd(step_at(t, r));
  Term n0 = sc_to_nd(t);
  Position p = translate_pos_sc_to_nd(t, r.at);

  Trace trace{n0, {}, Trace::Status::normal};
  Term cur = step_at(n0, Redex{RuleId::vs_sub, p});
  trace.steps.push_back(TraceStep{Redex{RuleId::vs_sub, p}, cur});

  Position base = p;
  for (std::size_t i = 0; i < L.depth(); ++i) base.path.push_back(Selector::cut_body);
  std::vector<Position> dbs = commute_subst_steps(v, sub->binder(), sub->body(), base);
  for (const Position& q : dbs) {
    Redex dr{RuleId::db_at_distance, q};
    cur = step_at(cur, dr);
    trace.steps.push_back(TraceStep{dr, cur});
  }

  SimReport rep{Calculus::vanilla, r, std::move(trace), false,
                "vs;dB*" + std::to_string(dbs.size()), expected};
  rep.matched = alpha_eq(cur, expected);
  return rep;
}

// One VSC vs step maps to one cut step; one dB step maps to two cut steps (the
// principal one plus the elimination of the correction cut on the fresh axiom).
inline SimReport simulate_vsc_in_vanilla(const Term& t, const Redex& r) {
  if (r.rule != RuleId::db_at_distance && r.rule != RuleId::vs_sub)
    throw Error("simulate_vsc_in_vanilla expects a dB or vs redex");
  auto sub = subterm_at(t, r.at);
  if (!sub || !detail::matches_root(*sub, r.rule)) throw StaleRedex("redex does not match term");

  Term expected = nd_to_sc(step_at(t, r));
  Term v0 = nd_to_sc(t);
  Position p = translate_pos_nd_to_sc(t, r.at);

  Trace trace{v0, {}, Trace::Status::normal};
  std::string shape;
  Term cur = v0;
  if (r.rule == RuleId::vs_sub) {
    Redex c1{RuleId::cut_elim, p};
    cur = step_at(cur, c1);
    trace.steps.push_back(TraceStep{c1, cur});
    shape = "cut";
  } else {
    auto [L, lamT] = split_subst_ctx(sub->fun());
    Redex c1{RuleId::cut_elim, p};
    cur = step_at(cur, c1);
    trace.steps.push_back(TraceStep{c1, cur});
    Position q = p;
    for (std::size_t i = 0; i < L.depth(); ++i) q.path.push_back(Selector::cut_body);
    Redex c2{RuleId::cut_elim, q};
    cur = step_at(cur, c2);
    trace.steps.push_back(TraceStep{c2, cur});
    shape = "cut;cut";
  }

  SimReport rep{Calculus::natural, r, std::move(trace), false, shape, expected};
  rep.matched = alpha_eq(cur, expected);
  return rep;
}

// ---------------------------------------------------------------------------
// Renaming-cut elimination

// Applies renaming steps until none remain; the result must be cut-free, which
// holds whenever the input is the translation of a VSC-normal term.
inline std::pair<Term, std::size_t> strip_renaming_cuts(const Term& t) {
  Term cur = t;
  std::size_t k = 0;
  for (;;) {
    std::vector<Redex> rs = redexes(cur, RuleSet{RuleId::ren_cut});
    if (rs.empty()) break;
    cur = step_at(cur, rs.front());
    ++k;
  }
  if (!is_cut_free(cur))
    throw ResidualCut("non-renaming cuts remain after " + std::to_string(k) + " renaming steps");
  return {cur, k};
}

}  // namespace vanilla
