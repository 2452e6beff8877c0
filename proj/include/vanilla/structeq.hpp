#pragma once

// Structural equivalence for vanilla terms: cuts and subtractions may move
// across weak contexts (holes anywhere but under abstractions) subject to the
// capture side conditions. The equivalence itself is approximated by a bounded
// breadth-first oracle over root moves; it is a strong bisimulation for cut
// elimination, which bisim_probe checks diagram by diagram.

#include <deque>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vanilla/rewriting.hpp"
#include "vanilla/term.hpp"

namespace vanilla {

namespace detail {

inline bool weak_path(const std::vector<Selector>& path) {
  for (Selector s : path) {
    if (s == Selector::lam_body) return false;
  }
  return true;
}

// Free variables of the context obtained by punching a hole at `hole`.
inline void ctx_fv_rec(const Term& t, const std::vector<Selector>& hole, std::size_t i,
                       std::map<Var, int>& bound, VarSet& out) {
  if (i == hole.size()) return;  // the hole contributes nothing
  auto occurs = [&](const Var& v) {
    auto it = bound.find(v);
    if (it == bound.end() || it->second == 0) out.insert(v);
  };
  auto full = [&](const Term& sub) { fv_rec(sub, bound, out); };
  Selector s = hole[i];
  switch (t.kind()) {
    case Kind::var:
      return;
    case Kind::lam:
      ++bound[t.binder()];
      ctx_fv_rec(t.body(), hole, i + 1, bound, out);
      --bound[t.binder()];
      return;
    case Kind::app:
      if (s == Selector::app_fun) {
        ctx_fv_rec(t.fun(), hole, i + 1, bound, out);
        full(t.arg());
      } else {
        full(t.fun());
        ctx_fv_rec(t.arg(), hole, i + 1, bound, out);
      }
      return;
    case Kind::esub:
    case Kind::cut:
      if (s == Selector::cut_content) {
        ctx_fv_rec(t.content(), hole, i + 1, bound, out);
        ++bound[t.binder()];
        full(t.body());
        --bound[t.binder()];
      } else {
        full(t.content());
        ++bound[t.binder()];
        ctx_fv_rec(t.body(), hole, i + 1, bound, out);
        --bound[t.binder()];
      }
      return;
    case Kind::subtr:
      occurs(t.head());
      if (s == Selector::subtr_content) {
        ctx_fv_rec(t.content(), hole, i + 1, bound, out);
        ++bound[t.binder()];
        full(t.body());
        --bound[t.binder()];
      } else {
        full(t.content());
        ++bound[t.binder()];
        ctx_fv_rec(t.body(), hole, i + 1, bound, out);
        --bound[t.binder()];
      }
      return;
  }
}

inline VarSet ctx_free_vars(const Term& t, const Position& hole) {
  VarSet out;
  std::map<Var, int> bound;
  ctx_fv_rec(t, hole.path, 0, bound, out);
  return out;
}

// Binders whose scope covers the hole: collected along body edges only, since
// cut and subtraction binders do not scope over their own content.
inline VarSet ctx_dom(const Term& t, const Position& hole) {
  VarSet out;
  Term cur = t;
  for (Selector s : hole.path) {
    if (s == Selector::lam_body || s == Selector::cut_body || s == Selector::subtr_body)
      out.insert(cur.binder());
    cur = *child_at(cur, s);
  }
  return out;
}

inline bool disjoint(const VarSet& a, const VarSet& b) {
  for (const Var& v : a) {
    if (b.count(v)) return false;
  }
  return true;
}

// Side conditions of the root rules for moving a frame across a weak context.
// Besides the stated capture conditions, the frame's binder must not coincide
// with a context binder over the hole: the rules presume distinct bound names,
// and a clash would reroute the occurrences under the hole.
inline bool move_allowed(const Term& frame_owner, const Term& weak_body, const Position& hole) {
  VarSet wfv = ctx_free_vars(weak_body, hole);
  if (wfv.count(frame_owner.binder())) return false;
  VarSet dom = ctx_dom(weak_body, hole);
  if (dom.count(frame_owner.binder())) return false;
  VarSet moved = free_vars(frame_owner.content());
  if (frame_owner.kind() == Kind::subtr) moved.insert(frame_owner.head());
  return disjoint(moved, dom);
}

inline Term rebuild_frame(const Term& frame_owner, const Term& new_body) {
  if (frame_owner.kind() == Kind::cut)
    return Term::cut(frame_owner.content(), frame_owner.binder(), new_body);
  return Term::subtr(frame_owner.head(), frame_owner.content(), frame_owner.binder(), new_body);
}

}  // namespace detail

// All terms one root move away from t, in either direction, at every position;
// results are deduplicated up to alpha and exclude t itself.
inline std::vector<Term> root_moves(const Term& t) {
  if (!is_vanilla_term(t)) throw CalculusMismatch("structural equivalence is for vanilla terms");
  std::vector<Term> out;
  std::unordered_set<std::string> seen;
  seen.insert(alpha_key(t));
  auto emit = [&](const Term& u) {
    if (seen.insert(alpha_key(u)).second) out.push_back(u);
  };

  for (const Position& q : all_positions(t)) {
    Term sub = *subterm_at(t, q);

    // push the frame at q into a weak position of its body
    if (sub.kind() == Kind::cut || sub.kind() == Kind::subtr) {
      Term body = sub.body();
      for (const Position& w : all_positions(body)) {
        if (w.path.empty() || !detail::weak_path(w.path)) continue;
        if (!detail::move_allowed(sub, body, w)) continue;
        Term inner = *subterm_at(body, w);
        Term moved = replace_at(body, w, detail::rebuild_frame(sub, inner));
        emit(replace_at(t, q, moved));
      }
    }

    // pull a frame at a weak position of sub out to q
    for (const Position& w : all_positions(sub)) {
      if (w.path.empty() || !detail::weak_path(w.path)) continue;
      Term inner = *subterm_at(sub, w);
      if (inner.kind() != Kind::cut && inner.kind() != Kind::subtr) continue;
      if (!detail::move_allowed(inner, sub, w)) continue;
      Term without = replace_at(sub, w, inner.body());
      emit(replace_at(t, q, detail::rebuild_frame(inner, without)));
    }
  }
  return out;
}

struct EquivResult {
  bool equivalent = false;
  std::vector<Term> path;  // witnessing move sequence from t to u, inclusive
};

// Replaces the anonymous binders of canonical forms with readable fresh names;
// used when displaying search results.
inline Term with_readable_binders(const Term& t) {
  std::set<std::string> used;
  for (const Var& v : all_vars(t)) {
    if (!v.name.empty()) used.insert(v.name);
  }
  std::size_t counter = 0;
  auto next_name = [&]() {
    for (;;) {
      std::string name;
      name += static_cast<char>('a' + counter % 26);
      if (counter >= 26) name += std::to_string(counter / 26);
      ++counter;
      if (!used.count(name)) {
        used.insert(name);
        return name;
      }
    }
  };
  auto rec = [&](auto&& self, const Term& u,
                 std::map<Var, std::vector<Var>>& env) -> Term {
    auto occ = [&](const Var& v) {
      auto it = env.find(v);
      if (it == env.end() || it->second.empty()) return v;
      return it->second.back();
    };
    auto rebind = [&](const Var& b) {
      return b.name.empty() ? Var{next_name(), 0} : b;
    };
    switch (u.kind()) {
      case Kind::var:
        return Term::var(occ(u.name()));
      case Kind::lam: {
        Var nb = rebind(u.binder());
        env[u.binder()].push_back(nb);
        Term body = self(self, u.body(), env);
        env[u.binder()].pop_back();
        return Term::lam(nb, body);
      }
      case Kind::app:
        return Term::app(self(self, u.fun(), env), self(self, u.arg(), env));
      case Kind::esub:
      case Kind::cut: {
        Term c = self(self, u.content(), env);
        Var nb = rebind(u.binder());
        env[u.binder()].push_back(nb);
        Term body = self(self, u.body(), env);
        env[u.binder()].pop_back();
        return u.kind() == Kind::esub ? Term::esub(c, nb, body) : Term::cut(c, nb, body);
      }
      case Kind::subtr: {
        Var h = occ(u.head());
        Term c = self(self, u.content(), env);
        Var nb = rebind(u.binder());
        env[u.binder()].push_back(nb);
        Term body = self(self, u.body(), env);
        env[u.binder()].pop_back();
        return Term::subtr(h, c, nb, body);
      }
    }
    throw Error("unreachable term kind");
  };
  std::map<Var, std::vector<Var>> env;
  return rec(rec, t, env);
}

// Bounded breadth-first search over root moves; NotFound is inconclusive.
inline EquivResult equiv_bounded(const Term& t, const Term& u, std::size_t move_budget) {
  Term start = alpha_canonical(t);
  std::string target = alpha_key(u);
  if (alpha_key(start) == target) return EquivResult{true, {t}};

  struct NodeInfo {
    Term term;
    std::size_t parent;
    std::size_t depth;
  };
  std::vector<NodeInfo> nodes{{start, 0, 0}};
  std::unordered_map<std::string, std::size_t> seen{{alpha_key(start), 0}};
  std::deque<std::size_t> frontier{0};

  while (!frontier.empty()) {
    std::size_t cur = frontier.front();
    frontier.pop_front();
    if (nodes[cur].depth >= move_budget) continue;
    for (const Term& next : root_moves(nodes[cur].term)) {
      std::string key = alpha_key(next);
      if (seen.count(key)) continue;
      std::size_t id = nodes.size();
      seen.emplace(key, id);
      nodes.push_back(NodeInfo{next, cur, nodes[cur].depth + 1});
      if (key == target) {
        std::vector<Term> path;
        for (std::size_t n = id;; n = nodes[n].parent) {
          path.push_back(nodes[n].term);
          if (n == 0) break;
        }
        std::reverse(path.begin(), path.end());
        return EquivResult{true, std::move(path)};
      }
      frontier.push_back(id);
    }
  }
  return EquivResult{false, {}};
}

// ---------------------------------------------------------------------------
// Strong bisimulation probe

struct BisimDiagram {
  int side;  // 0: step from t matched on u; 1: step from u matched on t
  Redex source_redex;
  bool closed = false;
  std::optional<Redex> matched_redex;
};

struct BisimReport {
  bool ok = true;
  std::vector<BisimDiagram> diagrams;
};

// For equivalent t and u, every cut step on one side must be matched by a cut
// step on the other with equivalent results.
inline BisimReport bisim_probe(const Term& t, const Term& u, std::size_t move_budget) {
  BisimReport report;
  auto half = [&](const Term& a, const Term& b, int side) {
    for (const Redex& r : redexes(a, kVanillaRules)) {
      Term a2 = step_at(a, r);
      BisimDiagram diag{side, r, false, std::nullopt};
      for (const Redex& rb : redexes(b, kVanillaRules)) {
        Term b2 = step_at(b, rb);
        if (equiv_bounded(a2, b2, move_budget).equivalent) {
          diag.closed = true;
          diag.matched_redex = rb;
          break;
        }
      }
      if (!diag.closed) report.ok = false;
      report.diagrams.push_back(std::move(diag));
    }
  };
  half(t, u, 0);
  half(u, t, 1);
  return report;
}

}  // namespace vanilla
