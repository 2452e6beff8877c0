#pragma once

// Redex enumeration, single steps, normalization strategies, and bounded
// exhaustive reduction graphs for the five rule families:
//
//   dB   L<\x.t> s   -> L<[s/x]t>          (SC and VSC, natural terms)
//   s    [s/x]t      -> t{s/x}             (SC)
//   vs   [L<v>/x]t   -> L<t{v/x}>          (VSC)
//   betav (\x.t) v   -> t{v/x}             (Plotkin, weak or strong closure)
//   cut  [L<v>/x]t   -> L<{v/x}t>          (vanilla cut elimination)
//
// Renaming steps are the cut steps whose split value is a variable.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "vanilla/syntax.hpp"
#include "vanilla/term.hpp"

namespace vanilla {

enum class RuleId : unsigned char {
  db_at_distance,
  s_sub,
  vs_sub,
  betav_weak,
  betav_strong,
  cut_elim,
  ren_cut,
};

inline const char* rule_name(RuleId r) {
  switch (r) {
    case RuleId::db_at_distance: return "dB";
    case RuleId::s_sub: return "s";
    case RuleId::vs_sub: return "vs";
    case RuleId::betav_weak: return "betav-weak";
    case RuleId::betav_strong: return "betav-strong";
    case RuleId::cut_elim: return "cut";
    case RuleId::ren_cut: return "ren-cut";
  }
  return "?";
}

using RuleSet = std::set<RuleId>;

inline const RuleSet kScRules{RuleId::db_at_distance, RuleId::s_sub};
inline const RuleSet kVscRules{RuleId::db_at_distance, RuleId::vs_sub};
inline const RuleSet kPlotkinWeak{RuleId::betav_weak};
inline const RuleSet kPlotkinStrong{RuleId::betav_strong};
inline const RuleSet kVanillaRules{RuleId::cut_elim};

inline Calculus rule_calculus(RuleId r) {
  return (r == RuleId::cut_elim || r == RuleId::ren_cut) ? Calculus::vanilla : Calculus::natural;
}

struct Redex {
  RuleId rule;
  Position at;
};

namespace detail {

// Root pattern match, ignoring the closure restriction.
inline bool matches_root(const Term& t, RuleId r) {
  switch (r) {
    case RuleId::db_at_distance: {
      if (t.kind() != Kind::app) return false;
      auto [L, tail] = split_subst_ctx(t.fun());
      return tail.kind() == Kind::lam;
    }
    case RuleId::s_sub:
      return t.kind() == Kind::esub;
    case RuleId::vs_sub: {
      if (t.kind() != Kind::esub) return false;
      auto [L, tail] = split_subst_ctx(t.content());
      return is_value(tail);
    }
    case RuleId::betav_weak:
    case RuleId::betav_strong:
      return t.kind() == Kind::app && t.fun().kind() == Kind::lam && is_value(t.arg());
    case RuleId::cut_elim:
      return t.kind() == Kind::cut;
    case RuleId::ren_cut:
      return t.kind() == Kind::cut && split(t.content()).second.kind() == Kind::var;
  }
  return false;
}

// Plotkin's weak contexts close only over application nodes.
inline bool weak_position(const Position& p) {
  for (Selector s : p.path) {
    if (s != Selector::app_fun && s != Selector::app_arg) return false;
  }
  return true;
}

inline void check_calculus(const Term& t, const RuleSet& rules) {
  for (RuleId r : rules) {
    if (!in_calculus(t, rule_calculus(r))) {
      throw CalculusMismatch(std::string("rule ") + rule_name(r) + " does not apply to a " +
                             (rule_calculus(r) == Calculus::natural ? "vanilla" : "natural") +
                             " term");
    }
  }
}

}  // namespace detail

// Complete, duplicate-free redex list in leftmost-outermost position order.
inline std::vector<Redex> redexes(const Term& t, const RuleSet& rules) {
  detail::check_calculus(t, rules);
  std::vector<Redex> out;
  for (const Position& p : all_positions(t)) {
    Term sub = *subterm_at(t, p);
    for (RuleId r : rules) {
      if (r == RuleId::betav_weak && !detail::weak_position(p)) continue;
      if (detail::matches_root(sub, r)) out.push_back(Redex{r, p});
    }
  }
  return out;
}

// Rewrites the subterm at the redex position by the root rule. Left-context
// binders are freshened against the incoming subterm so the commutation does
// not capture its free variables.
inline Term step_at(const Term& t, const Redex& r) {
  auto sub = subterm_at(t, r.at);
  if (!sub || !detail::matches_root(*sub, r.rule)) throw StaleRedex("redex does not match term");
  if (r.rule == RuleId::betav_weak && !detail::weak_position(r.at))
    throw StaleRedex("betav-weak redex outside a weak context");
  Term result = [&]() -> Term {
    switch (r.rule) {
      case RuleId::db_at_distance: {
        auto [L, lamT] = split_subst_ctx(sub->fun());
        Term a = sub->arg();
        auto [L2, lam2] = freshen_frames(L, lamT, free_vars(a));
        return plug_subst_ctx(L2, Term::esub(a, lam2.binder(), lam2.body()));
      }
      case RuleId::s_sub:
        return subst_nd(sub->body(), sub->binder(), sub->content());
      case RuleId::vs_sub: {
        auto [L, v] = split_subst_ctx(sub->content());
        VarSet avoid = free_vars(sub->body());
        avoid.erase(sub->binder());
        auto [L2, v2] = freshen_frames(L, v, avoid);
        return plug_subst_ctx(L2, subst_nd(sub->body(), sub->binder(), v2));
      }
      case RuleId::betav_weak:
      case RuleId::betav_strong:
        return subst_nd(sub->fun().body(), sub->fun().binder(), sub->arg());
      case RuleId::cut_elim:
      case RuleId::ren_cut: {
        auto [L, v] = split(sub->content());
        VarSet avoid = free_vars(sub->body());
        avoid.erase(sub->binder());
        auto [L2, v2] = freshen_frames(L, v, avoid);
        return plug(L2, subst_value(v2, sub->binder(), sub->body()));
      }
    }
    throw Error("unreachable rule");
  }();
  return replace_at(t, r.at, result);
}

enum class Strategy { leftmost_outermost, rightmost_innermost };

struct TraceStep {
  Redex redex;
  Term result;
};

struct Trace {
  enum class Status { normal, fuel_exhausted };
  Term initial;
  std::vector<TraceStep> steps;
  Status status = Status::normal;

  Term final_term() const { return steps.empty() ? initial : steps.back().result; }
};

inline Trace normalize(const Term& t, const RuleSet& rules, Strategy strategy, std::size_t fuel) {
  Trace trace{t, {}, Trace::Status::normal};
  Term cur = t;
  for (;;) {
    std::vector<Redex> rs = redexes(cur, rules);
    if (rs.empty()) {
      trace.status = Trace::Status::normal;
      return trace;
    }
    if (trace.steps.size() >= fuel) {
      trace.status = Trace::Status::fuel_exhausted;
      return trace;
    }
    Redex pick = rs.front();
    if (strategy == Strategy::rightmost_innermost) {
      // last position in pre-order; among rules at that position keep the first
      const Position& last = rs.back().at;
      for (const Redex& r : rs) {
        if (r.at == last) {
          pick = r;
          break;
        }
      }
    }
    cur = step_at(cur, pick);
    trace.steps.push_back(TraceStep{pick, cur});
  }
}

struct GraphReport {
  enum class Kind { all_paths_terminate, cycle_found, cap_exceeded };
  Kind kind = Kind::all_paths_terminate;
  std::size_t max_path_len = 0;
  std::size_t node_count = 0;
};

// Exhaustive exploration of all reducts modulo alpha. Nodes are deduplicated
// by canonical form; result is independent of exploration order.
inline GraphReport reduction_graph(const Term& t, const RuleSet& rules, std::size_t node_cap) {
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<Term> nodes;
  std::vector<std::vector<std::size_t>> edges;

  auto intern = [&](const Term& u) -> std::size_t {
    std::string key = alpha_key(u);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    std::size_t id = nodes.size();
    ids.emplace(std::move(key), id);
    nodes.push_back(u);
    edges.emplace_back();
    return id;
  };

  intern(t);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Term cur = nodes[i];
    for (const Redex& r : redexes(cur, rules)) {
      std::size_t j = intern(step_at(cur, r));
      if (nodes.size() > node_cap) {
        return GraphReport{GraphReport::Kind::cap_exceeded, 0, nodes.size()};
      }
      edges[i].push_back(j);
    }
  }

  // cycle detection: iterative three-color depth-first search
  std::vector<int> color(nodes.size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  stack.emplace_back(0, 0);
  color[0] = 1;
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < edges[n].size()) {
      std::size_t m = edges[n][next++];
      if (color[m] == 1) return GraphReport{GraphReport::Kind::cycle_found, 0, nodes.size()};
      if (color[m] == 0) {
        color[m] = 1;
        stack.emplace_back(m, 0);
      }
    } else {
      color[n] = 2;
      stack.pop_back();
    }
  }

  // longest path from the root of the acyclic graph
  std::vector<std::size_t> longest(nodes.size(), SIZE_MAX);
  std::vector<std::pair<std::size_t, std::size_t>> st2;
  st2.emplace_back(0, 0);
  while (!st2.empty()) {
    auto& [n, next] = st2.back();
    if (next < edges[n].size()) {
      std::size_t m = edges[n][next++];
      if (longest[m] == SIZE_MAX) st2.emplace_back(m, 0);
    } else {
      std::size_t best = 0;
      for (std::size_t m : edges[n]) best = std::max(best, longest[m] + 1);
      longest[n] = best;
      st2.pop_back();
    }
  }
  return GraphReport{GraphReport::Kind::all_paths_terminate, longest[0], nodes.size()};
}

inline bool is_normal(const Term& t, const RuleSet& rules) { return redexes(t, rules).empty(); }

inline bool is_cut_free(const Term& t) { return !contains_kind(t, Kind::cut); }

// ---------------------------------------------------------------------------
// Trace serialization

inline std::string trace_to_text(const Trace& tr) {
  std::string out = "initial " + print_term(tr.initial) + "\n";
  for (const TraceStep& s : tr.steps) {
    out += std::string(rule_name(s.redex.rule)) + " @ " + s.redex.at.str() + " -> " +
           print_term(s.result) + "\n";
  }
  out += std::string("status: ") +
         (tr.status == Trace::Status::normal ? "Normal" : "FuelExhausted") + "\n";
  return out;
}

}  // namespace vanilla
