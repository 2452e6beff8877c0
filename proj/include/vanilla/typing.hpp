#pragma once

// Simple-type formulas, the natural-deduction system (with cut) and the
// vanilla sequent system, plus unification-based inference.
//
// Subtractions are checked with the primed left rule: the head variable's
// implication type is read from the context, the content is checked at its
// domain, and the body is checked with the binder at its codomain. With
// weakening built into the axiom rule this is equivalent to the additive rule
// with on-the-fly contraction.

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vanilla/rewriting.hpp"
#include "vanilla/syntax.hpp"
#include "vanilla/term.hpp"

namespace vanilla {

struct TypeError : Error {
  enum class Code {
    unbound_variable,
    type_mismatch,
    not_a_function,
    head_not_implication,
    contraction_conflict,
    occurs_check,
    unification_clash,
  };
  Code code;
  Position where;
  TypeError(Code c, Position w, const std::string& msg) : Error(msg), code(c), where(std::move(w)) {}
};

class Formula {
 public:
  enum class Kind : unsigned char { atom, imp, meta };

 private:
  struct Node;
  using Ptr = std::shared_ptr<const Node>;
  struct Node {
    Kind kind;
    std::string name;  // atom
    int id;            // meta
    Ptr l, r;          // imp
  };
  Ptr p_;
  explicit Formula(Ptr p) : p_(std::move(p)) {}

 public:
  static Formula atom(std::string name) {
    return Formula(std::make_shared<Node>(Node{Kind::atom, std::move(name), 0, nullptr, nullptr}));
  }
  static Formula imp(const Formula& l, const Formula& r) {
    return Formula(std::make_shared<Node>(Node{Kind::imp, "", 0, l.p_, r.p_}));
  }
  // Unification placeholder; never part of a finished check or inference result.
  static Formula meta(int id) {
    return Formula(std::make_shared<Node>(Node{Kind::meta, "", id, nullptr, nullptr}));
  }

  Kind kind() const { return p_->kind; }
  const std::string& atom_name() const { return p_->name; }
  int meta_id() const { return p_->id; }
  Formula left() const { return Formula(p_->l); }
  Formula right() const { return Formula(p_->r); }

  bool operator==(const Formula& o) const {
    if (p_ == o.p_) return true;
    if (kind() != o.kind()) return false;
    switch (kind()) {
      case Kind::atom: return atom_name() == o.atom_name();
      case Kind::meta: return meta_id() == o.meta_id();
      case Kind::imp: return left() == o.left() && right() == o.right();
    }
    return false;
  }
  bool operator!=(const Formula& o) const { return !(*this == o); }

  std::string str() const {
    switch (kind()) {
      case Kind::atom:
        return atom_name();
      case Kind::meta:
        return "?" + std::to_string(meta_id());
      case Kind::imp: {
        std::string l = left().kind() == Kind::imp ? "(" + left().str() + ")" : left().str();
        return l + " -> " + right().str();
      }
    }
    return "?";
  }
};

inline bool contains_meta(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::meta: return true;
    case Formula::Kind::atom: return false;
    case Formula::Kind::imp: return contains_meta(f.left()) || contains_meta(f.right());
  }
  return false;
}

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::atom: out.insert(f.atom_name()); return;
    case Formula::Kind::meta: return;
    case Formula::Kind::imp:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
      return;
  }
}

// Exchange-invariant typing context; rebinding a variable at a different
// formula is rejected.
class TypeCtx {
 public:
  TypeCtx() = default;

  static TypeCtx of(std::initializer_list<std::pair<Var, Formula>> items) {
    TypeCtx c;
    for (const auto& [v, f] : items) c = c.extended(v, f);
    return c;
  }

  std::optional<Formula> lookup(const Var& v) const {
    auto it = m_.find(v);
    if (it == m_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const Var& v) const { return m_.count(v) > 0; }

  TypeCtx extended(const Var& v, const Formula& f) const {
    auto it = m_.find(v);
    if (it != m_.end() && it->second != f) {
      throw TypeError(TypeError::Code::contraction_conflict, Position{},
                      "variable " + v.str() + " already bound at " + it->second.str() +
                          ", conflicting with " + f.str());
    }
    TypeCtx c = *this;
    c.m_.insert_or_assign(v, f);
    return c;
  }

  VarSet domain() const {
    VarSet out;
    for (const auto& [v, f] : m_) out.insert(v);
    return out;
  }

  auto begin() const { return m_.begin(); }
  auto end() const { return m_.end(); }
  std::size_t size() const { return m_.size(); }

  bool operator==(const TypeCtx& o) const { return m_ == o.m_; }

  std::string str() const {
    std::string out;
    bool first = true;
    for (const auto& [v, f] : m_) {
      if (!first) out += ", ";
      first = false;
      out += v.str() + ":" + f.str();
    }
    return out;
  }

 private:
  std::map<Var, Formula> m_;
};

// ---------------------------------------------------------------------------
// Formula and context parsing (atoms are capitalized identifiers; '?' is an
// inference placeholder)

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(Lexer& lx) : lx_(lx) {}

  Formula parse_formula(bool allow_placeholder) {
    Formula l = parse_atom(allow_placeholder);
    if (lx_.peek().kind == Token::Kind::arrow) {
      lx_.next();
      return Formula::imp(l, parse_formula(allow_placeholder));
    }
    return l;
  }

 private:
  Formula parse_atom(bool allow_placeholder) {
    const Token& t = lx_.peek();
    if (t.kind == Token::Kind::question) {
      if (!allow_placeholder) lx_.fail("'?' placeholder not allowed here");
      lx_.next();
      return Formula::meta(-1);
    }
    if (t.kind == Token::Kind::ident) {
      if (t.text.empty() || !std::isupper(static_cast<unsigned char>(t.text[0])))
        lx_.fail("atoms are capitalized identifiers");
      Token v = lx_.next();
      return Formula::atom(v.text);
    }
    if (t.kind == Token::Kind::lparen) {
      lx_.next();
      Formula f = parse_formula(allow_placeholder);
      if (lx_.peek().kind != Token::Kind::rparen) lx_.fail("expected ')'");
      lx_.next();
      return f;
    }
    lx_.fail("expected a formula");
  }

  Lexer& lx_;
};

}  // namespace detail

inline Formula parse_formula(const std::string& src, bool allow_placeholder = false) {
  detail::Lexer lx(src);
  detail::FormulaParser p(lx);
  Formula f = p.parse_formula(allow_placeholder);
  if (lx.peek().kind != detail::Token::Kind::end) lx.fail("trailing input after formula");
  return f;
}

inline TypeCtx parse_type_ctx(const std::string& src, bool allow_placeholder = false) {
  detail::Lexer lx(src);
  TypeCtx ctx;
  if (lx.peek().kind == detail::Token::Kind::end) return ctx;
  for (;;) {
    if (lx.peek().kind != detail::Token::Kind::ident) lx.fail("expected a variable");
    detail::Token v = lx.next();
    if (lx.peek().kind != detail::Token::Kind::colon) lx.fail("expected ':'");
    lx.next();
    detail::FormulaParser p(lx);
    Formula f = p.parse_formula(allow_placeholder);
    ctx = ctx.extended(Var{v.text, v.tag}, f);
    if (lx.peek().kind != detail::Token::Kind::comma) break;
    lx.next();
  }
  if (lx.peek().kind != detail::Token::Kind::end) lx.fail("trailing input after context");
  return ctx;
}

// ---------------------------------------------------------------------------
// Derivations

struct Derivation {
  std::string rule;  // ax | imp_r | app | cut | imp_l
  TypeCtx ctx;
  Term term;
  Formula formula;
  std::vector<Derivation> children;
};

inline void derivation_text(const Derivation& d, std::string& out, int indent = 0) {
  out += std::string(static_cast<std::size_t>(indent) * 2, ' ');
  out += "[" + d.rule + "] " + d.ctx.str() + (d.ctx.size() ? " " : "") + "|- " +
         print_term(d.term) + " : " + d.formula.str() + "\n";
  for (const Derivation& c : d.children) derivation_text(c, out, indent + 1);
}

inline std::string derivation_to_text(const Derivation& d) {
  std::string out;
  derivation_text(d, out);
  return out;
}

// ---------------------------------------------------------------------------
// Unification

namespace detail {

class Unifier {
 public:
  Formula fresh() { return Formula::meta(next_++); }

  Formula walk(Formula f) const {
    while (f.kind() == Formula::Kind::meta) {
      auto it = sol_.find(f.meta_id());
      if (it == sol_.end()) return f;
      f = it->second;
    }
    return f;
  }

  Formula resolve(const Formula& f) const {
    Formula w = walk(f);
    if (w.kind() == Formula::Kind::imp) return Formula::imp(resolve(w.left()), resolve(w.right()));
    return w;
  }

  bool occurs(int id, const Formula& f) const {
    Formula w = walk(f);
    switch (w.kind()) {
      case Formula::Kind::meta: return w.meta_id() == id;
      case Formula::Kind::atom: return false;
      case Formula::Kind::imp: return occurs(id, w.left()) || occurs(id, w.right());
    }
    return false;
  }

  void unify(const Formula& a, const Formula& b, const Position& where,
             TypeError::Code clash_code) {
    Formula wa = walk(a);
    Formula wb = walk(b);
    if (wa.kind() == Formula::Kind::meta) {
      if (wb.kind() == Formula::Kind::meta && wb.meta_id() == wa.meta_id()) return;
      if (occurs(wa.meta_id(), wb))
        throw TypeError(TypeError::Code::occurs_check, where,
                        "occurs check: " + resolve(wa).str() + " in " + resolve(wb).str());
      sol_.emplace(wa.meta_id(), wb);
      return;
    }
    if (wb.kind() == Formula::Kind::meta) {
      unify(wb, wa, where, clash_code);
      return;
    }
    if (wa.kind() == Formula::Kind::atom && wb.kind() == Formula::Kind::atom) {
      if (wa.atom_name() != wb.atom_name())
        throw TypeError(clash_code, where,
                        "cannot unify " + wa.str() + " with " + wb.str() + " at " + where.str());
      return;
    }
    if (wa.kind() == Formula::Kind::imp && wb.kind() == Formula::Kind::imp) {
      unify(wa.left(), wb.left(), where, clash_code);
      unify(wa.right(), wb.right(), where, clash_code);
      return;
    }
    throw TypeError(clash_code, where,
                    "cannot unify " + resolve(wa).str() + " with " + resolve(wb).str() + " at " +
                        where.str());
  }

 private:
  std::map<int, Formula> sol_;
  int next_ = 0;
};

struct InferState {
  Unifier uni;
  Calculus cal;
};

// Builds the derivation skeleton while collecting constraints. Binders that
// shadow a context variable are alpha-renamed on the way down, so checking is
// total on alpha-classes.
inline Derivation infer_rec(const Term& t, const TypeCtx& env, InferState& st, Position pos) {
  switch (t.kind()) {
    case Kind::var: {
      auto f = env.lookup(t.name());
      if (!f)
        throw TypeError(TypeError::Code::unbound_variable, pos,
                        "unbound variable " + t.name().str() + " at " + pos.str());
      return Derivation{"ax", env, t, *f, {}};
    }
    case Kind::lam: {
      Var b = t.binder();
      Term body = t.body();
      if (env.contains(b)) {
        VarSet avoid = env.domain();
        detail::all_vars_rec(body, avoid);
        Var nb = fresh_like(b, avoid);
        body = rename_free(body, b, nb);
        b = nb;
      }
      Formula dom = st.uni.fresh();
      Derivation sub = infer_rec(body, env.extended(b, dom), st, pos.child(Selector::lam_body));
      Formula f = Formula::imp(dom, sub.formula);
      return Derivation{"imp_r", env, Term::lam(b, sub.term), f, {std::move(sub)}};
    }
    case Kind::app: {
      if (st.cal != Calculus::natural)
        throw CalculusMismatch("application checked against the vanilla system");
      Derivation df = infer_rec(t.fun(), env, st, pos.child(Selector::app_fun));
      Formula wf = st.uni.walk(df.formula);
      if (wf.kind() == Formula::Kind::atom)
        throw TypeError(TypeError::Code::not_a_function, pos.child(Selector::app_fun),
                        "not a function: " + print_term(t.fun()) + " : " + wf.str() + " at " +
                            pos.child(Selector::app_fun).str());
      Derivation da = infer_rec(t.arg(), env, st, pos.child(Selector::app_arg));
      Formula cod = st.uni.fresh();
      st.uni.unify(df.formula, Formula::imp(da.formula, cod), pos,
                   TypeError::Code::type_mismatch);
      return Derivation{"app", env, Term::app(df.term, da.term), cod,
                        {std::move(df), std::move(da)}};
    }
    case Kind::esub:
    case Kind::cut: {
      if ((t.kind() == Kind::esub) != (st.cal == Calculus::natural))
        throw CalculusMismatch("cut/explicit substitution in the wrong calculus");
      Derivation dc = infer_rec(t.content(), env, st, pos.child(Selector::cut_content));
      Var b = t.binder();
      Term body = t.body();
      if (env.contains(b)) {
        VarSet avoid = env.domain();
        detail::all_vars_rec(body, avoid);
        Var nb = fresh_like(b, avoid);
        body = rename_free(body, b, nb);
        b = nb;
      }
      Derivation db =
          infer_rec(body, env.extended(b, dc.formula), st, pos.child(Selector::cut_body));
      Formula f = db.formula;
      Term nt = t.kind() == Kind::esub ? Term::esub(dc.term, b, db.term)
                                       : Term::cut(dc.term, b, db.term);
      return Derivation{"cut", env, nt, f, {std::move(dc), std::move(db)}};
    }
    case Kind::subtr: {
      if (st.cal != Calculus::vanilla)
        throw CalculusMismatch("subtraction checked against the natural system");
      auto hf = env.lookup(t.head());
      if (!hf)
        throw TypeError(TypeError::Code::unbound_variable, pos,
                        "unbound head variable " + t.head().str() + " at " + pos.str());
      Formula wh = st.uni.walk(*hf);
      Formula dom = Formula::meta(0), cod = Formula::meta(0);
      if (wh.kind() == Formula::Kind::atom) {
        throw TypeError(TypeError::Code::head_not_implication, pos,
                        "head " + t.head().str() + " has type " + wh.str() +
                            ", not an implication, at " + pos.str());
      } else if (wh.kind() == Formula::Kind::imp) {
        dom = wh.left();
        cod = wh.right();
      } else {
        dom = st.uni.fresh();
        cod = st.uni.fresh();
        st.uni.unify(wh, Formula::imp(dom, cod), pos, TypeError::Code::type_mismatch);
      }
      Derivation dc = infer_rec(t.content(), env, st, pos.child(Selector::subtr_content));
      st.uni.unify(dc.formula, dom, pos.child(Selector::subtr_content),
                   TypeError::Code::type_mismatch);
      Var b = t.binder();
      Term body = t.body();
      if (env.contains(b)) {
        VarSet avoid = env.domain();
        detail::all_vars_rec(body, avoid);
        Var nb = fresh_like(b, avoid);
        body = rename_free(body, b, nb);
        b = nb;
      }
      Derivation db = infer_rec(body, env.extended(b, cod), st, pos.child(Selector::subtr_body));
      Formula f = db.formula;
      Term nt = Term::subtr(t.head(), dc.term, b, db.term);
      return Derivation{"imp_l", env, nt, f, {std::move(dc), std::move(db)}};
    }
  }
  throw Error("unreachable term kind");
}

// Instantiates residual placeholders with fresh atoms not used anywhere else.
class Finalizer {
 public:
  Finalizer(const Unifier& u, std::set<std::string> used) : u_(u), used_(std::move(used)) {}

  Formula operator()(const Formula& f) {
    Formula w = u_.walk(f);
    switch (w.kind()) {
      case Formula::Kind::atom:
        return w;
      case Formula::Kind::imp:
        return Formula::imp((*this)(w.left()), (*this)(w.right()));
      case Formula::Kind::meta: {
        auto it = named_.find(w.meta_id());
        if (it != named_.end()) return it->second;
        Formula a = Formula::atom(next_name());
        named_.emplace(w.meta_id(), a);
        return a;
      }
    }
    return w;
  }

  void finalize_derivation(Derivation& d) {
    d.formula = (*this)(d.formula);
    TypeCtx resolved;
    for (const auto& [v, f] : d.ctx) resolved = resolved.extended(v, (*this)(f));
    d.ctx = resolved;
    for (Derivation& c : d.children) finalize_derivation(c);
  }

 private:
  std::string next_name() {
    for (;;) {
      std::string name;
      name += static_cast<char>('A' + counter_ % 26);
      if (counter_ >= 26) name += std::to_string(counter_ / 26);
      ++counter_;
      if (!used_.count(name)) {
        used_.insert(name);
        return name;
      }
    }
  }

  const Unifier& u_;
  std::set<std::string> used_;
  std::map<int, Formula> named_;
  std::size_t counter_ = 0;
};

inline std::set<std::string> atoms_of_ctx(const TypeCtx& ctx) {
  std::set<std::string> out;
  for (const auto& [v, f] : ctx) collect_atoms(f, out);
  return out;
}

inline Derivation check_impl(const TypeCtx& ctx, const Term& t, const Formula& a, Calculus cal) {
  if (!in_calculus(t, cal))
    throw CalculusMismatch(std::string("term is not a ") + calculus_name(cal) + " term");
  InferState st{{}, cal};
  Derivation d = infer_rec(t, ctx, st, Position{});
  st.uni.unify(d.formula, a, Position{}, TypeError::Code::type_mismatch);
  std::set<std::string> used = atoms_of_ctx(ctx);
  collect_atoms(a, used);
  Finalizer fin(st.uni, std::move(used));
  fin.finalize_derivation(d);
  return d;
}

}  // namespace detail

// Checks ctx |- t : a against natural deduction with cut; returns the
// derivation or throws a TypeError.
inline Derivation check_nd(const TypeCtx& ctx, const Term& t, const Formula& a) {
  return detail::check_impl(ctx, t, a, Calculus::natural);
}

// Checks ctx |- t : a against the vanilla sequent system.
inline Derivation check_sc(const TypeCtx& ctx, const Term& t, const Formula& a) {
  return detail::check_impl(ctx, t, a, Calculus::vanilla);
}

// ---------------------------------------------------------------------------
// Inference

struct InferResult {
  Formula type;
  // resolved formulas for '?' context entries and auto-added free variables
  std::vector<std::pair<Var, Formula>> placeholder_assignments;
};

inline InferResult infer(Calculus cal, const TypeCtx& ctx, const Term& t) {
  if (!in_calculus(t, cal))
    throw CalculusMismatch(std::string("term is not a ") + calculus_name(cal) + " term");
  detail::InferState st{{}, cal};
  TypeCtx env;
  std::vector<std::pair<Var, Formula>> placeholders;
  for (const auto& [v, f] : ctx) {
    if (contains_meta(f)) {
      Formula m = st.uni.fresh();
      env = env.extended(v, m);
      placeholders.emplace_back(v, m);
    } else {
      env = env.extended(v, f);
    }
  }
  for (const Var& v : free_vars(t)) {
    if (!env.contains(v)) {
      Formula m = st.uni.fresh();
      env = env.extended(v, m);
      placeholders.emplace_back(v, m);
    }
  }
  Derivation d = detail::infer_rec(t, env, st, Position{});
  std::set<std::string> used = detail::atoms_of_ctx(ctx);
  detail::Finalizer fin(st.uni, std::move(used));
  InferResult res{fin(d.formula), {}};
  for (auto& [v, m] : placeholders) res.placeholder_assignments.emplace_back(v, fin(m));
  return res;
}

// Inference variant keeping unconstrained placeholders as metas; used to test
// principality.
inline Formula infer_open(Calculus cal, const TypeCtx& ctx, const Term& t) {
  detail::InferState st{{}, cal};
  TypeCtx env;
  for (const auto& [v, f] : ctx) {
    env = env.extended(v, contains_meta(f) ? st.uni.fresh() : f);
  }
  for (const Var& v : free_vars(t)) {
    if (!env.contains(v)) env = env.extended(v, st.uni.fresh());
  }
  Derivation d = detail::infer_rec(t, env, st, Position{});
  return st.uni.resolve(d.formula);
}

// Whether ground formula g is a substitution instance of p (metas in p only).
inline bool is_instance_of(const Formula& p, const Formula& g,
                           std::map<int, Formula>& assignment) {
  switch (p.kind()) {
    case Formula::Kind::meta: {
      auto it = assignment.find(p.meta_id());
      if (it == assignment.end()) {
        assignment.emplace(p.meta_id(), g);
        return true;
      }
      return it->second == g;
    }
    case Formula::Kind::atom:
      return g == p;
    case Formula::Kind::imp:
      return g.kind() == Formula::Kind::imp && is_instance_of(p.left(), g.left(), assignment) &&
             is_instance_of(p.right(), g.right(), assignment);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Derivation re-validation against the rule schemas

inline bool validate_derivation(const Derivation& d, Calculus cal) {
  const Term& t = d.term;
  if (d.rule == "ax") {
    return t.kind() == Kind::var && d.children.empty() &&
           d.ctx.lookup(t.name()).has_value() && *d.ctx.lookup(t.name()) == d.formula;
  }
  if (d.rule == "imp_r") {
    if (t.kind() != Kind::lam || d.children.size() != 1) return false;
    if (d.formula.kind() != Formula::Kind::imp) return false;
    const Derivation& c = d.children[0];
    return c.term == t.body() && c.formula == d.formula.right() &&
           c.ctx == d.ctx.extended(t.binder(), d.formula.left()) && validate_derivation(c, cal);
  }
  if (d.rule == "app") {
    if (cal != Calculus::natural || t.kind() != Kind::app || d.children.size() != 2) return false;
    const Derivation& f = d.children[0];
    const Derivation& a = d.children[1];
    return f.term == t.fun() && a.term == t.arg() && f.ctx == d.ctx && a.ctx == d.ctx &&
           f.formula == Formula::imp(a.formula, d.formula) && validate_derivation(f, cal) &&
           validate_derivation(a, cal);
  }
  if (d.rule == "cut") {
    if (t.kind() != (cal == Calculus::natural ? Kind::esub : Kind::cut)) return false;
    if (d.children.size() != 2) return false;
    const Derivation& c = d.children[0];
    const Derivation& b = d.children[1];
    return c.term == t.content() && b.term == t.body() && c.ctx == d.ctx &&
           b.ctx == d.ctx.extended(t.binder(), c.formula) && b.formula == d.formula &&
           validate_derivation(c, cal) && validate_derivation(b, cal);
  }
  if (d.rule == "imp_l") {
    if (cal != Calculus::vanilla || t.kind() != Kind::subtr || d.children.size() != 2) return false;
    auto hf = d.ctx.lookup(t.head());
    if (!hf || hf->kind() != Formula::Kind::imp) return false;
    const Derivation& c = d.children[0];
    const Derivation& b = d.children[1];
    return c.term == t.content() && b.term == t.body() && c.ctx == d.ctx &&
           c.formula == hf->left() && b.ctx == d.ctx.extended(t.binder(), hf->right()) &&
           b.formula == d.formula && validate_derivation(c, cal) && validate_derivation(b, cal);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Subject reduction probe: every one-step cut reduct of a well-typed vanilla
// term must retype at the same context and formula.

struct ProbeItem {
  Redex redex;
  bool ok;
  std::string error;
};

struct ProbeReport {
  bool all_ok = true;
  std::vector<ProbeItem> items;
};

inline ProbeReport subject_reduction_probe(const TypeCtx& ctx, const Term& t, const Formula& a) {
  check_sc(ctx, t, a);  // precondition
  ProbeReport report;
  for (const Redex& r : redexes(t, kVanillaRules)) {
    Term reduct = step_at(t, r);
    ProbeItem item{r, true, ""};
    try {
      check_sc(ctx, reduct, a);
    } catch (const Error& e) {
      item.ok = false;
      item.error = e.what();
      report.all_ok = false;
    }
    report.items.push_back(std::move(item));
    if (!report.all_ok) break;  // first failure is reported
  }
  return report;
}

}  // namespace vanilla
