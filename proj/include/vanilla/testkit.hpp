#pragma once

// Deterministic generators for well-typed and cut-free terms, a raw term
// generator, and independent oracles: a substitution computed by upfront
// global renaming plus literal clause application, and a de Bruijn rendering
// for cross-checking alpha-equivalence.

#include <optional>
#include <string>
#include <vector>

#include "vanilla/syntax.hpp"
#include "vanilla/term.hpp"
#include "vanilla/typing.hpp"

namespace vanilla {

struct GenerationExhausted : Error {
  using Error::Error;
};

struct GenConfig {
  std::uint64_t seed = 1;
  std::size_t max_size = 8;
  std::vector<std::string> atom_universe = {"X", "Y"};
  std::size_t variable_pool = 3;
};

// splitmix64: tiny, portable, identical output everywhere
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }

  bool chance(std::size_t num, std::size_t den) { return below(den) < num; }

 private:
  std::uint64_t state_;
};

namespace detail {

inline Formula random_formula(Rng& rng, const std::vector<std::string>& atoms, std::size_t depth) {
  if (depth == 0 || rng.chance(1, 2)) return Formula::atom(atoms[rng.below(atoms.size())]);
  Formula l = random_formula(rng, atoms, depth - 1);
  Formula r = random_formula(rng, atoms, depth - 1);
  return Formula::imp(l, r);
}

// 50/50 split of the remaining budget between two premises
inline std::pair<std::size_t, std::size_t> split_budget(std::size_t total) {
  std::size_t first = (total + 1) / 2;
  return {first, total - first};
}

}  // namespace detail

struct TypedTriple {
  TypeCtx ctx;
  Term term;
  Formula type;
};

// Top-down generation by rule schema with a size budget and backtracking over
// randomized production orders. Every emitted triple is re-validated by the
// typechecker.
class TypedGen {
 public:
  TypedGen(Calculus cal, const GenConfig& cfg) : cal_(cal), cfg_(cfg), rng_(cfg.seed) {
    if (cfg_.max_size < 1) throw GenerationExhausted("max_size must be at least 1");
    if (cfg_.atom_universe.empty()) throw GenerationExhausted("empty atom universe");
  }

  TypedTriple next() {
    for (int attempt = 0; attempt < 200; ++attempt) {
      binder_counter_ = 0;
      TypeCtx ctx = random_ctx();
      std::vector<std::pair<Var, Formula>> pool(ctx.begin(), ctx.end());
      Formula goal = pool.empty() || rng_.chance(3, 10)
                         ? detail::random_formula(rng_, cfg_.atom_universe, 2)
                         : pool[rng_.below(pool.size())].second;
      auto term = gen(ctx, goal, cfg_.max_size, 0);
      if (!term) continue;
      if (cal_ == Calculus::natural) {
        check_nd(ctx, *term, goal);
      } else {
        check_sc(ctx, *term, goal);
      }
      return TypedTriple{ctx, *term, goal};
    }
    throw GenerationExhausted("no typed term fits the configuration");
  }

 private:
  TypeCtx random_ctx() {
    TypeCtx ctx;
    for (std::size_t i = 0; i < cfg_.variable_pool; ++i) {
      Var v{"x" + std::to_string(i + 1), 0};
      ctx = ctx.extended(v, detail::random_formula(rng_, cfg_.atom_universe, 2));
    }
    return ctx;
  }

  Var fresh_binder() { return Var{"b" + std::to_string(++binder_counter_), 0}; }

  std::optional<Term> gen(const TypeCtx& env, const Formula& goal, std::size_t budget, int depth) {
    if (budget == 0 || depth > 64) return std::nullopt;
    std::vector<int> options;
    std::vector<Var> var_hits;
    std::vector<Var> imp_heads;
    for (const auto& [v, f] : env) {
      if (f == goal) var_hits.push_back(v);
      if (f.kind() == Formula::Kind::imp) imp_heads.push_back(v);
    }
    if (!var_hits.empty()) options.push_back(0);
    if (goal.kind() == Formula::Kind::imp && budget >= 2) options.push_back(1);
    if (budget >= 3) {
      if (cal_ == Calculus::natural) {
        options.push_back(2);  // app
        options.push_back(3);  // explicit substitution
      } else {
        options.push_back(3);  // cut
        if (!imp_heads.empty()) options.push_back(4);  // subtraction
      }
    }
    if (options.empty()) return std::nullopt;
    // random order, larger productions favored when budget allows
    for (std::size_t i = options.size(); i > 1; --i) {
      std::size_t j = rng_.below(i);
      std::swap(options[i - 1], options[j]);
    }
    if (budget >= 3 && options.size() > 1 && rng_.chance(17, 20)) {
      // move the bare-variable option to the back
      for (std::size_t i = 0; i + 1 < options.size(); ++i) {
        if (options[i] == 0) std::swap(options[i], options[i + 1]);
      }
    }
    for (int op : options) {
      switch (op) {
        case 0:
          return Term::var(var_hits[rng_.below(var_hits.size())]);
        case 1: {
          Var b = fresh_binder();
          auto body = gen(env.extended(b, goal.left()), goal.right(), budget - 1, depth + 1);
          if (body) return Term::lam(b, *body);
          break;
        }
        case 2: {
          auto [s1, s2] = detail::split_budget(budget - 1);
          if (s2 == 0) break;
          Formula arg_ty = detail::random_formula(rng_, cfg_.atom_universe, 1);
          auto fun = gen(env, Formula::imp(arg_ty, goal), s1, depth + 1);
          if (!fun) break;
          auto arg = gen(env, arg_ty, s2, depth + 1);
          if (arg) return Term::app(*fun, *arg);
          break;
        }
        case 3: {
          auto [s1, s2] = detail::split_budget(budget - 1);
          if (s2 == 0) break;
          Formula content_ty = detail::random_formula(rng_, cfg_.atom_universe, 1);
          auto content = gen(env, content_ty, s1, depth + 1);
          if (!content) break;
          Var b = fresh_binder();
          auto body = gen(env.extended(b, content_ty), goal, s2, depth + 1);
          if (!body) break;
          return cal_ == Calculus::natural ? Term::esub(*content, b, *body)
                                           : Term::cut(*content, b, *body);
        }
        case 4: {
          auto [s1, s2] = detail::split_budget(budget - 1);
          if (s2 == 0) break;
          Var head = imp_heads[rng_.below(imp_heads.size())];
          Formula hf = *env.lookup(head);
          auto content = gen(env, hf.left(), s1, depth + 1);
          if (!content) break;
          Var b = fresh_binder();
          auto body = gen(env.extended(b, hf.right()), goal, s2, depth + 1);
          if (!body) break;
          return Term::subtr(head, *content, b, *body);
        }
      }
    }
    return std::nullopt;
  }

  Calculus cal_;
  GenConfig cfg_;
  Rng rng_;
  std::size_t binder_counter_ = 0;
};

// Cut-free vanilla terms (variables, abstractions, subtractions only), not
// necessarily typed.
class CutFreeGen {
 public:
  explicit CutFreeGen(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (cfg_.max_size < 1) throw GenerationExhausted("max_size must be at least 1");
  }

  Term next() {
    binder_counter_ = 0;
    std::vector<Var> scope;
    for (std::size_t i = 0; i < std::max<std::size_t>(cfg_.variable_pool, 1); ++i) {
      scope.push_back(Var{"x" + std::to_string(i + 1), 0});
    }
    return gen(scope, cfg_.max_size);
  }

 private:
  Term gen(std::vector<Var> scope, std::size_t budget) {
    if (budget >= 3 && rng_.chance(5, 10)) {
      // subtraction
      Var head = scope[rng_.below(scope.size())];
      auto [s1, s2] = detail::split_budget(budget - 1);
      Term content = gen(scope, s1);
      Var b{"b" + std::to_string(++binder_counter_), 0};
      std::vector<Var> inner = scope;
      inner.push_back(b);
      return Term::subtr(head, content, b, gen(std::move(inner), s2));
    }
    if (budget >= 2 && rng_.chance(4, 10)) {
      Var b{"b" + std::to_string(++binder_counter_), 0};
      std::vector<Var> inner = scope;
      inner.push_back(b);
      return Term::lam(b, gen(std::move(inner), budget - 1));
    }
    return Term::var(scope[rng_.below(scope.size())]);
  }

  GenConfig cfg_;
  Rng rng_;
  std::size_t binder_counter_ = 0;
};

// Arbitrary well-formed terms of a calculus (untyped). Binder names are
// distinct by default; with `shadowing` they are drawn from the same pool as
// the free variables, exercising capture and shadowing paths.
class RawGen {
 public:
  RawGen(Calculus cal, const GenConfig& cfg, bool shadowing = false)
      : cal_(cal), cfg_(cfg), rng_(cfg.seed), shadowing_(shadowing) {}

  Term next() {
    binder_counter_ = 0;
    std::vector<Var> scope;
    for (std::size_t i = 0; i < std::max<std::size_t>(cfg_.variable_pool, 1); ++i) {
      scope.push_back(Var{"x" + std::to_string(i + 1), 0});
    }
    return gen(scope, cfg_.max_size);
  }

  // A value: a variable or a small abstraction.
  Term next_value() {
    std::vector<Var> scope;
    for (std::size_t i = 0; i < std::max<std::size_t>(cfg_.variable_pool, 1); ++i) {
      scope.push_back(Var{"x" + std::to_string(i + 1), 0});
    }
    if (rng_.chance(1, 2)) return Term::var(scope[rng_.below(scope.size())]);
    Var b = shadowing_ ? fresh_binder() : Var{"w" + std::to_string(++binder_counter_), 0};
    std::vector<Var> inner = scope;
    inner.push_back(b);
    return Term::lam(b, gen(std::move(inner), std::max<std::size_t>(cfg_.max_size / 3, 1)));
  }

 private:
  Var fresh_binder() {
    if (shadowing_) {
      std::size_t pool = std::max<std::size_t>(cfg_.variable_pool, 1);
      return Var{"x" + std::to_string(1 + rng_.below(pool)), 0};
    }
    return Var{"b" + std::to_string(++binder_counter_), 0};
  }

  Term gen(std::vector<Var> scope, std::size_t budget) {
    std::size_t roll = rng_.below(10);
    if (budget >= 3 && roll < 5) {
      auto [s1, s2] = detail::split_budget(budget - 1);
      if (cal_ == Calculus::natural) {
        if (roll < 3) return Term::app(gen(scope, s1), gen(scope, s2));
        Term content = gen(scope, s1);
        Var b = fresh_binder();
        std::vector<Var> inner = scope;
        inner.push_back(b);
        return Term::esub(content, b, gen(std::move(inner), s2));
      }
      if (roll < 3) {
        Term content = gen(scope, s1);
        Var b = fresh_binder();
        std::vector<Var> inner = scope;
        inner.push_back(b);
        return Term::cut(content, b, gen(std::move(inner), s2));
      }
      Var head = scope[rng_.below(scope.size())];
      Term content = gen(scope, s1);
      Var b = fresh_binder();
      std::vector<Var> inner = scope;
      inner.push_back(b);
      return Term::subtr(head, content, b, gen(std::move(inner), s2));
    }
    if (budget >= 2 && roll < 8) {
      Var b = fresh_binder();
      std::vector<Var> inner = scope;
      inner.push_back(b);
      return Term::lam(b, gen(std::move(inner), budget - 1));
    }
    return Term::var(scope[rng_.below(scope.size())]);
  }

  Calculus cal_;
  GenConfig cfg_;
  Rng rng_;
  std::size_t binder_counter_ = 0;
  bool shadowing_ = false;
};

// ---------------------------------------------------------------------------
// Oracles

namespace detail {

inline Term uniquify_binders(const Term& t, std::uint32_t& next,
                             std::map<Var, std::vector<Var>>& env) {
  auto occ = [&](const Var& v) {
    auto it = env.find(v);
    if (it == env.end() || it->second.empty()) return v;
    return it->second.back();
  };
  switch (t.kind()) {
    case Kind::var:
      return Term::var(occ(t.name()));
    case Kind::lam: {
      Var nb{t.binder().name, next++};
      env[t.binder()].push_back(nb);
      Term body = uniquify_binders(t.body(), next, env);
      env[t.binder()].pop_back();
      return Term::lam(nb, body);
    }
    case Kind::app: {
      Term f = uniquify_binders(t.fun(), next, env);
      Term a = uniquify_binders(t.arg(), next, env);
      return Term::app(f, a);
    }
    case Kind::esub:
    case Kind::cut: {
      Term c = uniquify_binders(t.content(), next, env);
      Var nb{t.binder().name, next++};
      env[t.binder()].push_back(nb);
      Term body = uniquify_binders(t.body(), next, env);
      env[t.binder()].pop_back();
      return t.kind() == Kind::esub ? Term::esub(c, nb, body) : Term::cut(c, nb, body);
    }
    case Kind::subtr: {
      Var h = occ(t.head());
      Term c = uniquify_binders(t.content(), next, env);
      Var nb{t.binder().name, next++};
      env[t.binder()].push_back(nb);
      Term body = uniquify_binders(t.body(), next, env);
      env[t.binder()].pop_back();
      return Term::subtr(h, c, nb, body);
    }
  }
  throw Error("unreachable term kind");
}

// Literal clause application; sound because every binder is globally unique
// and disjoint from the free variables of s.
inline Term naive_subst(const Term& t, const Var& x, const Term& s, Calculus cal) {
  switch (t.kind()) {
    case Kind::var:
      return t.name() == x ? s : t;
    case Kind::lam:
      return Term::lam(t.binder(), naive_subst(t.body(), x, s, cal));
    case Kind::app:
      return Term::app(naive_subst(t.fun(), x, s, cal), naive_subst(t.arg(), x, s, cal));
    case Kind::esub:
      return Term::esub(naive_subst(t.content(), x, s, cal), t.binder(),
                        naive_subst(t.body(), x, s, cal));
    case Kind::cut:
      return Term::cut(naive_subst(t.content(), x, s, cal), t.binder(),
                       naive_subst(t.body(), x, s, cal));
    case Kind::subtr: {
      Term c = naive_subst(t.content(), x, s, cal);
      Term b = naive_subst(t.body(), x, s, cal);
      if (t.head() != x) return Term::subtr(t.head(), c, t.binder(), b);
      if (s.kind() == Kind::var) return Term::subtr(s.name(), c, t.binder(), b);
      return Term::cut(Term::cut(c, s.binder(), s.body()), t.binder(), b);
    }
  }
  throw Error("unreachable term kind");
}

}  // namespace detail

// Substitution computed by a structurally different algorithm: full upfront
// alpha-renaming to globally fresh binders, then literal clause application.
inline Term oracle_subst(Calculus cal, const Term& t, const Var& x, const Term& s) {
  if (cal == Calculus::vanilla && !is_value(s))
    throw NotAValue("substituted term must be a value");
  std::uint32_t next = x.tag;
  for (const Var& v : all_vars(t)) {
    if (v.tag > next) next = v.tag;
  }
  for (const Var& v : all_vars(s)) {
    if (v.tag > next) next = v.tag;
  }
  ++next;
  std::map<Var, std::vector<Var>> env;
  Term tu = detail::uniquify_binders(t, next, env);
  env.clear();
  Term su = detail::uniquify_binders(s, next, env);
  return detail::naive_subst(tu, x, su, cal);
}

// de Bruijn rendering: bound occurrences as indices, free ones by name.
inline std::string debruijn_string(const Term& t) {
  std::vector<Var> stack;
  std::string out;
  auto occ = [&](const Var& v) -> std::string {
    for (std::size_t i = stack.size(); i > 0; --i) {
      if (stack[i - 1] == v) return std::to_string(stack.size() - i);
    }
    return "`" + v.str();
  };
  auto rec = [&](auto&& self, const Term& u) -> void {
    switch (u.kind()) {
      case Kind::var:
        out += occ(u.name());
        return;
      case Kind::lam:
        out += "\\.";
        stack.push_back(u.binder());
        self(self, u.body());
        stack.pop_back();
        return;
      case Kind::app:
        out += "(";
        self(self, u.fun());
        out += " ";
        self(self, u.arg());
        out += ")";
        return;
      case Kind::esub:
      case Kind::cut:
        out += u.kind() == Kind::esub ? "[e " : "[c ";
        self(self, u.content());
        out += "].";
        stack.push_back(u.binder());
        self(self, u.body());
        stack.pop_back();
        return;
      case Kind::subtr:
        out += "[s ";
        out += occ(u.head());
        out += " ";
        self(self, u.content());
        out += "].";
        stack.push_back(u.binder());
        self(self, u.body());
        stack.pop_back();
        return;
    }
  };
  rec(rec, t);
  return out;
}

// Line-delimited stream serialization with the configuration echoed up front.
inline std::string gen_header(const GenConfig& cfg, const std::string& mode) {
  std::string atoms;
  for (std::size_t i = 0; i < cfg.atom_universe.size(); ++i) {
    if (i) atoms += ",";
    atoms += cfg.atom_universe[i];
  }
  return "# mode=" + mode + " seed=" + std::to_string(cfg.seed) +
         " max-size=" + std::to_string(cfg.max_size) + " atoms=" + atoms +
         " pool=" + std::to_string(cfg.variable_pool) + "\n";
}

}  // namespace vanilla
