#pragma once

// Immutable term trees shared by the natural lambda-calculus with explicit
// substitutions and the vanilla (sequent-calculus) lambda-calculus, plus the
// binding toolkit: free variables, alpha-equivalence, capture-avoiding
// substitutions, and the left-context splitting of vanilla terms.

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vanilla {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CalculusMismatch : Error {
  using Error::Error;
};

struct NotAValue : Error {
  using Error::Error;
};

struct StaleRedex : Error {
  using Error::Error;
};

// Variables are a name plus a numeric disambiguator; user-written names carry
// tag 0 and render without it.
struct Var {
  std::string name;
  std::uint32_t tag = 0;

  auto operator<=>(const Var&) const = default;

  std::string str() const {
    return tag == 0 ? name : name + "#" + std::to_string(tag);
  }
};

using VarSet = std::set<Var>;

enum class Calculus { natural, vanilla };

inline const char* calculus_name(Calculus c) {
  return c == Calculus::natural ? "natural" : "vanilla";
}

class Term {
 public:
  enum class Kind : unsigned char { var, lam, app, esub, cut, subtr };

 private:
  struct Node;
  using Ptr = std::shared_ptr<const Node>;
  struct Node {
    Kind kind;
    Var a;   // variable name, or binder for lam/esub/cut/subtr
    Var b;   // subtraction head
    Ptr c1;  // lam body, app fun, or content
    Ptr c2;  // app arg, or body
  };

  Ptr p_;
  explicit Term(Ptr p) : p_(std::move(p)) {}

 public:
  static Term var(Var v) {
    return Term(std::make_shared<Node>(Node{Kind::var, std::move(v), {}, nullptr, nullptr}));
  }
  static Term var(std::string name, std::uint32_t tag = 0) {
    return var(Var{std::move(name), tag});
  }
  static Term lam(Var binder, const Term& body) {
    return Term(std::make_shared<Node>(Node{Kind::lam, std::move(binder), {}, body.p_, nullptr}));
  }
  static Term app(const Term& fun, const Term& arg) {
    return Term(std::make_shared<Node>(Node{Kind::app, {}, {}, fun.p_, arg.p_}));
  }
  static Term esub(const Term& content, Var binder, const Term& body) {
    return Term(std::make_shared<Node>(Node{Kind::esub, std::move(binder), {}, content.p_, body.p_}));
  }
  static Term cut(const Term& content, Var binder, const Term& body) {
    return Term(std::make_shared<Node>(Node{Kind::cut, std::move(binder), {}, content.p_, body.p_}));
  }
  static Term subtr(Var head, const Term& content, Var binder, const Term& body) {
    return Term(std::make_shared<Node>(
        Node{Kind::subtr, std::move(binder), std::move(head), content.p_, body.p_}));
  }

  Kind kind() const { return p_->kind; }

  const Var& name() const {
    assert(kind() == Kind::var);
    return p_->a;
  }
  const Var& binder() const {
    assert(kind() == Kind::lam || kind() == Kind::esub || kind() == Kind::cut ||
           kind() == Kind::subtr);
    return p_->a;
  }
  const Var& head() const {
    assert(kind() == Kind::subtr);
    return p_->b;
  }
  Term fun() const {
    assert(kind() == Kind::app);
    return Term(p_->c1);
  }
  Term arg() const {
    assert(kind() == Kind::app);
    return Term(p_->c2);
  }
  Term content() const {
    assert(kind() == Kind::esub || kind() == Kind::cut || kind() == Kind::subtr);
    return Term(p_->c1);
  }
  Term body() const {
    assert(kind() != Kind::var && kind() != Kind::app);
    return Term(kind() == Kind::lam ? p_->c1 : p_->c2);
  }

  bool same_node(const Term& o) const { return p_ == o.p_; }
};

using Kind = Term::Kind;

// ---------------------------------------------------------------------------
// Structural equality (names and tags included)

inline bool operator==(const Term& t, const Term& u) {
  if (t.same_node(u)) return true;
  if (t.kind() != u.kind()) return false;
  switch (t.kind()) {
    case Kind::var:
      return t.name() == u.name();
    case Kind::lam:
      return t.binder() == u.binder() && t.body() == u.body();
    case Kind::app:
      return t.fun() == u.fun() && t.arg() == u.arg();
    case Kind::esub:
    case Kind::cut:
      return t.binder() == u.binder() && t.content() == u.content() && t.body() == u.body();
    case Kind::subtr:
      return t.head() == u.head() && t.binder() == u.binder() && t.content() == u.content() &&
             t.body() == u.body();
  }
  return false;
}

inline bool operator!=(const Term& t, const Term& u) { return !(t == u); }

// ---------------------------------------------------------------------------
// Calculus membership

inline bool contains_kind(const Term& t, Kind k) {
  if (t.kind() == k) return true;
  switch (t.kind()) {
    case Kind::var:
      return false;
    case Kind::lam:
      return contains_kind(t.body(), k);
    case Kind::app:
      return contains_kind(t.fun(), k) || contains_kind(t.arg(), k);
    default:
      return contains_kind(t.content(), k) || contains_kind(t.body(), k);
  }
}

inline bool is_natural_term(const Term& t) {
  return !contains_kind(t, Kind::cut) && !contains_kind(t, Kind::subtr);
}

inline bool is_vanilla_term(const Term& t) {
  return !contains_kind(t, Kind::app) && !contains_kind(t, Kind::esub);
}

inline bool in_calculus(const Term& t, Calculus c) {
  return c == Calculus::natural ? is_natural_term(t) : is_vanilla_term(t);
}

// Values are variables and abstractions, in both calculi.
inline bool is_value(const Term& t) {
  return t.kind() == Kind::var || t.kind() == Kind::lam;
}

inline std::size_t count_kind(const Term& t, Kind k) {
  std::size_t self = t.kind() == k ? 1 : 0;
  switch (t.kind()) {
    case Kind::var:
      return self;
    case Kind::lam:
      return self + count_kind(t.body(), k);
    case Kind::app:
      return self + count_kind(t.fun(), k) + count_kind(t.arg(), k);
    default:
      return self + count_kind(t.content(), k) + count_kind(t.body(), k);
  }
}

// ---------------------------------------------------------------------------
// Size, free variables

inline std::size_t term_size(const Term& t) {
  switch (t.kind()) {
    case Kind::var:
      return 1;
    case Kind::lam:
      return 1 + term_size(t.body());
    case Kind::app:
      return 1 + term_size(t.fun()) + term_size(t.arg());
    default:
      // a subtraction head is not a separate node
      return 1 + term_size(t.content()) + term_size(t.body());
  }
}

namespace detail {

inline void fv_rec(const Term& t, std::map<Var, int>& bound, VarSet& out) {
  auto occurs = [&](const Var& v) {
    auto it = bound.find(v);
    if (it == bound.end() || it->second == 0) out.insert(v);
  };
  switch (t.kind()) {
    case Kind::var:
      occurs(t.name());
      return;
    case Kind::lam:
      ++bound[t.binder()];
      fv_rec(t.body(), bound, out);
      --bound[t.binder()];
      return;
    case Kind::app:
      fv_rec(t.fun(), bound, out);
      fv_rec(t.arg(), bound, out);
      return;
    case Kind::subtr:
      occurs(t.head());
      [[fallthrough]];
    case Kind::esub:
    case Kind::cut:
      fv_rec(t.content(), bound, out);
      ++bound[t.binder()];
      fv_rec(t.body(), bound, out);
      --bound[t.binder()];
      return;
  }
}

inline void all_vars_rec(const Term& t, VarSet& out) {
  switch (t.kind()) {
    case Kind::var:
      out.insert(t.name());
      return;
    case Kind::lam:
      out.insert(t.binder());
      all_vars_rec(t.body(), out);
      return;
    case Kind::app:
      all_vars_rec(t.fun(), out);
      all_vars_rec(t.arg(), out);
      return;
    case Kind::subtr:
      out.insert(t.head());
      [[fallthrough]];
    case Kind::esub:
    case Kind::cut:
      out.insert(t.binder());
      all_vars_rec(t.content(), out);
      all_vars_rec(t.body(), out);
      return;
  }
}

}  // namespace detail

inline VarSet free_vars(const Term& t) {
  VarSet out;
  std::map<Var, int> bound;
  detail::fv_rec(t, bound, out);
  return out;
}

// Every variable mentioned anywhere: free occurrences, binders, heads.
inline VarSet all_vars(const Term& t) {
  VarSet out;
  detail::all_vars_rec(t, out);
  return out;
}

inline bool is_free_in(const Var& x, const Term& t) { return free_vars(t).count(x) > 0; }

// Deterministic freshening: same name, tag one past the largest tag of that
// name in the avoid set.
inline Var fresh_like(const Var& base, const VarSet& avoid) {
  std::uint32_t tag = base.tag;
  for (auto it = avoid.lower_bound(Var{base.name, 0});
       it != avoid.end() && it->name == base.name; ++it) {
    tag = std::max(tag, it->tag);
  }
  return Var{base.name, tag + 1};
}

// ---------------------------------------------------------------------------
// Alpha-equivalence and canonical forms

namespace detail {

struct ScopeMap {
  std::map<Var, std::vector<int>> levels;
  void push(const Var& v, int level) { levels[v].push_back(level); }
  void pop(const Var& v) { levels[v].pop_back(); }
  int lookup(const Var& v) const {
    auto it = levels.find(v);
    if (it == levels.end() || it->second.empty()) return -1;
    return it->second.back();
  }
};

inline bool alpha_rec(const Term& t, const Term& u, ScopeMap& mt, ScopeMap& mu, int depth) {
  if (t.kind() != u.kind()) return false;
  auto occ_eq = [&](const Var& a, const Var& b) {
    int la = mt.lookup(a);
    int lb = mu.lookup(b);
    if (la >= 0 || lb >= 0) return la == lb;
    return a == b;
  };
  switch (t.kind()) {
    case Kind::var:
      return occ_eq(t.name(), u.name());
    case Kind::lam: {
      mt.push(t.binder(), depth);
      mu.push(u.binder(), depth);
      bool ok = alpha_rec(t.body(), u.body(), mt, mu, depth + 1);
      mt.pop(t.binder());
      mu.pop(u.binder());
      return ok;
    }
    case Kind::app:
      return alpha_rec(t.fun(), u.fun(), mt, mu, depth) &&
             alpha_rec(t.arg(), u.arg(), mt, mu, depth);
    case Kind::subtr:
      if (!occ_eq(t.head(), u.head())) return false;
      [[fallthrough]];
    case Kind::esub:
    case Kind::cut: {
      if (!alpha_rec(t.content(), u.content(), mt, mu, depth)) return false;
      mt.push(t.binder(), depth);
      mu.push(u.binder(), depth);
      bool ok = alpha_rec(t.body(), u.body(), mt, mu, depth + 1);
      mt.pop(t.binder());
      mu.pop(u.binder());
      return ok;
    }
  }
  return false;
}

inline Term canon_rec(const Term& t, std::map<Var, std::vector<Var>>& env, std::uint32_t& next) {
  auto occ = [&](const Var& v) {
    auto it = env.find(v);
    if (it == env.end() || it->second.empty()) return v;
    return it->second.back();
  };
  switch (t.kind()) {
    case Kind::var:
      return Term::var(occ(t.name()));
    case Kind::lam: {
      Var nb{"", next++};
      env[t.binder()].push_back(nb);
      Term body = canon_rec(t.body(), env, next);
      env[t.binder()].pop_back();
      return Term::lam(nb, body);
    }
    case Kind::app: {
      Term f = canon_rec(t.fun(), env, next);
      Term a = canon_rec(t.arg(), env, next);
      return Term::app(f, a);
    }
    case Kind::esub:
    case Kind::cut: {
      Term c = canon_rec(t.content(), env, next);
      Var nb{"", next++};
      env[t.binder()].push_back(nb);
      Term body = canon_rec(t.body(), env, next);
      env[t.binder()].pop_back();
      return t.kind() == Kind::esub ? Term::esub(c, nb, body) : Term::cut(c, nb, body);
    }
    case Kind::subtr: {
      Var h = occ(t.head());
      Term c = canon_rec(t.content(), env, next);
      Var nb{"", next++};
      env[t.binder()].push_back(nb);
      Term body = canon_rec(t.body(), env, next);
      env[t.binder()].pop_back();
      return Term::subtr(h, c, nb, body);
    }
  }
  throw Error("unreachable term kind");
}

}  // namespace detail

inline bool alpha_eq(const Term& t, const Term& u) {
  detail::ScopeMap mt, mu;
  return detail::alpha_rec(t, u, mt, mu, 0);
}

// Canonical renaming: binders become anonymous variables numbered in pre-order,
// free variables keep their identity. Alpha-equal terms map to equal terms.
inline Term alpha_canonical(const Term& t) {
  std::map<Var, std::vector<Var>> env;
  std::uint32_t next = 0;
  return detail::canon_rec(t, env, next);
}

namespace detail {
inline void key_rec(const Term& t, std::string& out) {
  auto var_key = [&](const Var& v) {
    out += v.name;
    out += '#';
    out += std::to_string(v.tag);
  };
  switch (t.kind()) {
    case Kind::var:
      out += 'v';
      var_key(t.name());
      return;
    case Kind::lam:
      out += "l(";
      var_key(t.binder());
      out += ')';
      key_rec(t.body(), out);
      return;
    case Kind::app:
      out += "a(";
      key_rec(t.fun(), out);
      out += ',';
      key_rec(t.arg(), out);
      out += ')';
      return;
    case Kind::esub:
    case Kind::cut:
      out += t.kind() == Kind::esub ? "e(" : "c(";
      var_key(t.binder());
      out += ';';
      key_rec(t.content(), out);
      out += ',';
      key_rec(t.body(), out);
      out += ')';
      return;
    case Kind::subtr:
      out += "s(";
      var_key(t.head());
      out += ';';
      var_key(t.binder());
      out += ';';
      key_rec(t.content(), out);
      out += ',';
      key_rec(t.body(), out);
      out += ')';
      return;
  }
}
}  // namespace detail

// String key identifying the alpha-class of a term; used for deduplication.
inline std::string alpha_key(const Term& t) {
  std::string out;
  detail::key_rec(alpha_canonical(t), out);
  return out;
}

// ---------------------------------------------------------------------------
// Renaming and substitution

// Replaces free occurrences of `from` by `to`; the caller guarantees that `to`
// cannot be captured (it is fresh for t).
inline Term rename_free(const Term& t, const Var& from, const Var& to) {
  switch (t.kind()) {
    case Kind::var:
      return t.name() == from ? Term::var(to) : t;
    case Kind::lam:
      if (t.binder() == from) return t;
      return Term::lam(t.binder(), rename_free(t.body(), from, to));
    case Kind::app:
      return Term::app(rename_free(t.fun(), from, to), rename_free(t.arg(), from, to));
    case Kind::esub:
    case Kind::cut: {
      Term c = rename_free(t.content(), from, to);
      Term b = t.binder() == from ? t.body() : rename_free(t.body(), from, to);
      return t.kind() == Kind::esub ? Term::esub(c, t.binder(), b)
                                    : Term::cut(c, t.binder(), b);
    }
    case Kind::subtr: {
      Var h = t.head() == from ? to : t.head();
      Term c = rename_free(t.content(), from, to);
      Term b = t.binder() == from ? t.body() : rename_free(t.body(), from, to);
      return Term::subtr(h, c, t.binder(), b);
    }
  }
  throw Error("unreachable term kind");
}

namespace detail {

// Rename the binder of a scoped subterm when it would capture a free variable
// of the substituted term.
inline std::pair<Var, Term> avoid_capture(const Var& binder, const Term& body, const VarSet& fvs,
                                          const Var& x) {
  if (!fvs.count(binder)) return {binder, body};
  VarSet avoid = all_vars(body);
  avoid.insert(fvs.begin(), fvs.end());
  avoid.insert(x);
  Var nb = fresh_like(binder, avoid);
  return {nb, rename_free(body, binder, nb)};
}

inline Term subst_nd_rec(const Term& t, const Var& x, const Term& s, const VarSet& fvs) {
  if (!is_free_in(x, t)) return t;
  switch (t.kind()) {
    case Kind::var:
      return s;  // necessarily x
    case Kind::lam: {
      auto [b, body] = avoid_capture(t.binder(), t.body(), fvs, x);
      return Term::lam(b, subst_nd_rec(body, x, s, fvs));
    }
    case Kind::app:
      return Term::app(subst_nd_rec(t.fun(), x, s, fvs), subst_nd_rec(t.arg(), x, s, fvs));
    case Kind::esub: {
      Term c = subst_nd_rec(t.content(), x, s, fvs);
      if (t.binder() == x || !is_free_in(x, t.body())) return Term::esub(c, t.binder(), t.body());
      auto [b, body] = avoid_capture(t.binder(), t.body(), fvs, x);
      return Term::esub(c, b, subst_nd_rec(body, x, s, fvs));
    }
    default:
      throw CalculusMismatch("subst_nd applies to natural terms only");
  }
}

inline Term subst_value_rec(const Term& t, const Var& x, const Term& v, const VarSet& fvs) {
  if (!is_free_in(x, t)) return t;
  switch (t.kind()) {
    case Kind::var:
      return v;  // necessarily x
    case Kind::lam: {
      auto [b, body] = avoid_capture(t.binder(), t.body(), fvs, x);
      return Term::lam(b, subst_value_rec(body, x, v, fvs));
    }
    case Kind::cut: {
      Term c = subst_value_rec(t.content(), x, v, fvs);
      if (t.binder() == x || !is_free_in(x, t.body())) return Term::cut(c, t.binder(), t.body());
      auto [b, body] = avoid_capture(t.binder(), t.body(), fvs, x);
      return Term::cut(c, b, subst_value_rec(body, x, v, fvs));
    }
    case Kind::subtr: {
      Term c = subst_value_rec(t.content(), x, v, fvs);
      Var binder = t.binder();
      Term body = t.body();
      bool enter_body = binder != x && is_free_in(x, body);
      if (enter_body) {
        auto [b2, body2] = avoid_capture(binder, body, fvs, x);
        binder = b2;
        body = enter_body ? subst_value_rec(body2, x, v, fvs) : body2;
      }
      if (t.head() != x) return Term::subtr(t.head(), c, binder, body);
      if (v.kind() == Kind::var) return Term::subtr(v.name(), c, binder, body);
      // Substituting an abstraction for a left occurrence eliminates the
      // principal cut on the spot: the subtraction becomes two nested cuts.
      Var w = v.binder();
      Term wb = v.body();
      if (is_free_in(w, c)) {
        VarSet avoid = all_vars(wb);
        for (const Var& fc : free_vars(c)) avoid.insert(fc);
        avoid.insert(x);
        Var nw = fresh_like(w, avoid);
        wb = rename_free(wb, w, nw);
        w = nw;
      }
      return Term::cut(Term::cut(c, w, wb), binder, body);
    }
    default:
      throw CalculusMismatch("subst_value applies to vanilla terms only");
  }
}

}  // namespace detail

// Capture-avoiding meta-level substitution t{s/x} for natural terms.
inline Term subst_nd(const Term& t, const Var& x, const Term& s) {
  return detail::subst_nd_rec(t, x, s, free_vars(s));
}

// Meta-level substitution {v/x}t of a value into a vanilla term.
inline Term subst_value(const Term& v, const Var& x, const Term& t) {
  if (!is_value(v)) throw NotAValue("substituted term must be a value");
  return detail::subst_value_rec(t, x, v, free_vars(v));
}

// ---------------------------------------------------------------------------
// Positions

enum class Selector : unsigned char {
  lam_body,
  app_fun,
  app_arg,
  cut_content,  // also the content of a natural explicit substitution
  cut_body,
  subtr_content,
  subtr_body,
};

inline const char* selector_name(Selector s) {
  switch (s) {
    case Selector::lam_body: return "lam_body";
    case Selector::app_fun: return "app_fun";
    case Selector::app_arg: return "app_arg";
    case Selector::cut_content: return "cut_content";
    case Selector::cut_body: return "cut_body";
    case Selector::subtr_content: return "subtr_content";
    case Selector::subtr_body: return "subtr_body";
  }
  return "?";
}

struct Position {
  std::vector<Selector> path;

  auto operator<=>(const Position&) const = default;

  Position child(Selector s) const {
    Position p = *this;
    p.path.push_back(s);
    return p;
  }
  std::string str() const {
    if (path.empty()) return "root";
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) out += '/';
      out += selector_name(path[i]);
    }
    return out;
  }
};

inline std::optional<Term> child_at(const Term& t, Selector s) {
  switch (s) {
    case Selector::lam_body:
      if (t.kind() != Kind::lam) return std::nullopt;
      return t.body();
    case Selector::app_fun:
      if (t.kind() != Kind::app) return std::nullopt;
      return t.fun();
    case Selector::app_arg:
      if (t.kind() != Kind::app) return std::nullopt;
      return t.arg();
    case Selector::cut_content:
      if (t.kind() != Kind::esub && t.kind() != Kind::cut) return std::nullopt;
      return t.content();
    case Selector::cut_body:
      if (t.kind() != Kind::esub && t.kind() != Kind::cut) return std::nullopt;
      return t.body();
    case Selector::subtr_content:
      if (t.kind() != Kind::subtr) return std::nullopt;
      return t.content();
    case Selector::subtr_body:
      if (t.kind() != Kind::subtr) return std::nullopt;
      return t.body();
  }
  return std::nullopt;
}

inline std::optional<Term> subterm_at(const Term& t, const Position& pos) {
  Term cur = t;
  for (Selector s : pos.path) {
    auto next = child_at(cur, s);
    if (!next) return std::nullopt;
    cur = *next;
  }
  return cur;
}

namespace detail {
inline Term replace_rec(const Term& t, const std::vector<Selector>& path, std::size_t i,
                        const Term& repl) {
  if (i == path.size()) return repl;
  Selector s = path[i];
  if (!child_at(t, s)) throw Error("invalid position for term");
  switch (s) {
    case Selector::lam_body:
      return Term::lam(t.binder(), replace_rec(t.body(), path, i + 1, repl));
    case Selector::app_fun:
      return Term::app(replace_rec(t.fun(), path, i + 1, repl), t.arg());
    case Selector::app_arg:
      return Term::app(t.fun(), replace_rec(t.arg(), path, i + 1, repl));
    case Selector::cut_content: {
      Term c = replace_rec(t.content(), path, i + 1, repl);
      return t.kind() == Kind::esub ? Term::esub(c, t.binder(), t.body())
                                    : Term::cut(c, t.binder(), t.body());
    }
    case Selector::cut_body: {
      Term b = replace_rec(t.body(), path, i + 1, repl);
      return t.kind() == Kind::esub ? Term::esub(t.content(), t.binder(), b)
                                    : Term::cut(t.content(), t.binder(), b);
    }
    case Selector::subtr_content:
      return Term::subtr(t.head(), replace_rec(t.content(), path, i + 1, repl), t.binder(),
                         t.body());
    case Selector::subtr_body:
      return Term::subtr(t.head(), t.content(), t.binder(),
                         replace_rec(t.body(), path, i + 1, repl));
  }
  throw Error("unreachable selector");
}

inline void positions_rec(const Term& t, Position& cur, std::vector<Position>& out) {
  out.push_back(cur);
  auto descend = [&](Selector s, const Term& sub) {
    cur.path.push_back(s);
    positions_rec(sub, cur, out);
    cur.path.pop_back();
  };
  switch (t.kind()) {
    case Kind::var:
      return;
    case Kind::lam:
      descend(Selector::lam_body, t.body());
      return;
    case Kind::app:
      descend(Selector::app_fun, t.fun());
      descend(Selector::app_arg, t.arg());
      return;
    case Kind::esub:
    case Kind::cut:
      descend(Selector::cut_content, t.content());
      descend(Selector::cut_body, t.body());
      return;
    case Kind::subtr:
      descend(Selector::subtr_content, t.content());
      descend(Selector::subtr_body, t.body());
      return;
  }
}
}  // namespace detail

inline Term replace_at(const Term& t, const Position& pos, const Term& repl) {
  return detail::replace_rec(t, pos.path, 0, repl);
}

// All positions of a term in leftmost-outermost (pre-order) order.
inline std::vector<Position> all_positions(const Term& t) {
  std::vector<Position> out;
  Position cur;
  detail::positions_rec(t, cur, out);
  return out;
}

// ---------------------------------------------------------------------------
// Left contexts: stacks of cut/subtraction frames around a hole

struct Frame {
  std::optional<Var> head;  // engaged for subtraction frames
  Term content;
  Var binder;
};

struct LeftCtx {
  std::vector<Frame> frames;

  bool empty() const { return frames.empty(); }
  std::size_t depth() const { return frames.size(); }
};

// Splits a vanilla term into its maximal stack of left frames around a value.
// Total: every vanilla term ends in a variable or an abstraction.
inline std::pair<LeftCtx, Term> split(const Term& t) {
  LeftCtx L;
  Term cur = t;
  while (cur.kind() == Kind::cut || cur.kind() == Kind::subtr) {
    if (cur.kind() == Kind::cut) {
      L.frames.push_back(Frame{std::nullopt, cur.content(), cur.binder()});
    } else {
      L.frames.push_back(Frame{cur.head(), cur.content(), cur.binder()});
    }
    cur = cur.body();
  }
  if (!is_value(cur)) throw CalculusMismatch("split applies to vanilla terms only");
  return {L, cur};
}

// Capturing plug: binders of L take scope over t.
inline Term plug(const LeftCtx& L, Term t) {
  for (auto it = L.frames.rbegin(); it != L.frames.rend(); ++it) {
    t = it->head ? Term::subtr(*it->head, it->content, it->binder, t)
                 : Term::cut(it->content, it->binder, t);
  }
  return t;
}

// Natural-side analogue: peels explicit substitution frames; the tail is an
// arbitrary term (applications do not split).
inline std::pair<LeftCtx, Term> split_subst_ctx(const Term& t) {
  LeftCtx L;
  Term cur = t;
  while (cur.kind() == Kind::esub) {
    L.frames.push_back(Frame{std::nullopt, cur.content(), cur.binder()});
    cur = cur.body();
  }
  return {L, cur};
}

inline Term plug_subst_ctx(const LeftCtx& L, Term t) {
  for (auto it = L.frames.rbegin(); it != L.frames.rend(); ++it) {
    if (it->head) throw CalculusMismatch("natural substitution contexts have no subtraction frames");
    t = Term::esub(it->content, it->binder, t);
  }
  return t;
}

// Renames frame binders clashing with `avoid`, rewriting later frames and the
// tail term consistently. Used before commuting a left context over a term
// whose free variables must not be captured.
inline std::pair<LeftCtx, Term> freshen_frames(LeftCtx L, Term tail, const VarSet& avoid) {
  VarSet big = avoid;
  for (const Frame& f : L.frames) {
    detail::all_vars_rec(f.content, big);
    big.insert(f.binder);
    if (f.head) big.insert(*f.head);
  }
  detail::all_vars_rec(tail, big);
  for (std::size_t i = 0; i < L.frames.size(); ++i) {
    Var b = L.frames[i].binder;
    if (!avoid.count(b)) continue;
    Var nb = fresh_like(b, big);
    big.insert(nb);
    L.frames[i].binder = nb;
    bool shadowed = false;
    for (std::size_t j = i + 1; j < L.frames.size() && !shadowed; ++j) {
      Frame& f = L.frames[j];
      if (f.head && *f.head == b) f.head = nb;
      f.content = rename_free(f.content, b, nb);
      if (f.binder == b) shadowed = true;
    }
    if (!shadowed) tail = rename_free(tail, b, nb);
  }
  return {std::move(L), std::move(tail)};
}

}  // namespace vanilla
