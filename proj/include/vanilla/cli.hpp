#pragma once

// Command-line front end. Every command reads terms from arguments (or stdin
// via '-') in the shared textual syntax and exits 0 on success, 1 on a
// negative verdict, 2 on usage or parse errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "vanilla/rewriting.hpp"
#include "vanilla/structeq.hpp"
#include "vanilla/syntax.hpp"
#include "vanilla/term.hpp"
#include "vanilla/testkit.hpp"
#include "vanilla/translate.hpp"
#include "vanilla/typing.hpp"

namespace vanilla::cli {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

namespace detail {

using nlohmann::json;

inline json position_json(const Position& p) {
  json arr = json::array();
  for (Selector s : p.path) arr.push_back(selector_name(s));
  return arr;
}

inline json trace_json(const Trace& tr) {
  json steps = json::array();
  for (const TraceStep& s : tr.steps) {
    steps.push_back(json{{"rule", rule_name(s.redex.rule)},
                         {"path", position_json(s.redex.at)},
                         {"result", print_term(s.result)}});
  }
  return json{{"initial", print_term(tr.initial)},
              {"steps", steps},
              {"status", tr.status == Trace::Status::normal ? "Normal" : "FuelExhausted"}};
}

inline json derivation_json(const Derivation& d) {
  json children = json::array();
  for (const Derivation& c : d.children) children.push_back(derivation_json(c));
  return json{{"rule", d.rule},
              {"conclusion",
               json{{"ctx", d.ctx.str()}, {"term", print_term(d.term)}, {"formula", d.formula.str()}}},
              {"children", children}};
}

inline json sim_report_json(const SimReport& r) {
  return json{{"source", json{{"calculus", calculus_name(r.source_calculus)},
                              {"rule", rule_name(r.source.rule)},
                              {"path", position_json(r.source.at)}}},
              {"target", trace_json(r.target)},
              {"shape", r.shape},
              {"matched", r.matched}};
}

inline std::string term_input(const std::string& arg, const std::string& stdin_text) {
  if (arg == "-") return stdin_text;
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw Error("cannot read file " + arg.substr(1));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return arg;
}

struct Options {
  std::string term;
  std::string term2;
  std::string calculus = "natural";
  std::string ctx;
  std::string type;
  std::string strategy = "lo";
  std::string trace_format = "text";
  std::string direction;
  std::string mode = "typed";
  std::string atoms = "X,Y";
  std::uint64_t seed = 1;
  std::size_t fuel = 1000;
  std::size_t cap = 10000;
  std::size_t budget = 4;
  std::size_t count = 10;
  std::size_t max_size = 8;
  std::size_t pool = 3;
  bool json_out = false;
  bool show_derivation = false;
};

inline Calculus parse_calculus_name(const std::string& name) {
  if (name == "natural" || name == "sc" || name == "vsc" || name == "plotkin-weak" ||
      name == "plotkin-strong")
    return Calculus::natural;
  if (name == "vanilla") return Calculus::vanilla;
  throw CLI::ValidationError("--calculus", "unknown calculus " + name);
}

inline const RuleSet& rules_for(const std::string& name) {
  if (name == "sc") return kScRules;
  if (name == "vsc") return kVscRules;
  if (name == "plotkin-weak") return kPlotkinWeak;
  if (name == "plotkin-strong") return kPlotkinStrong;
  if (name == "vanilla") return kVanillaRules;
  throw CLI::ValidationError("--calculus", "unknown rule set " + name);
}

inline GenConfig gen_config(const Options& o) {
  GenConfig cfg;
  cfg.seed = o.seed;
  cfg.max_size = o.max_size;
  cfg.variable_pool = o.pool;
  cfg.atom_universe.clear();
  std::stringstream ss(o.atoms);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) cfg.atom_universe.push_back(item);
  }
  if (cfg.atom_universe.empty()) cfg.atom_universe.push_back("X");
  return cfg;
}

}  // namespace detail

inline RunResult run(const std::vector<std::string>& argv, const std::string& stdin_text = "") {
  using detail::Options;
  using nlohmann::json;

  std::ostringstream out;
  std::ostringstream err;
  Options o;

  CLI::App app{"workbench for the vanilla lambda-calculus and its call-by-value relatives"};
  app.require_subcommand(1);

  auto add_term_arg = [&](CLI::App* cmd) {
    cmd->add_option("term", o.term, "term literal, '@file', or '-' for stdin")->required();
  };

  CLI::App* parse_cmd = app.add_subcommand("parse", "parse and pretty-print a term");
  add_term_arg(parse_cmd);
  parse_cmd->add_option("--calculus", o.calculus, "natural|vanilla");

  CLI::App* typecheck = app.add_subcommand("typecheck", "check a term against a formula");
  add_term_arg(typecheck);
  typecheck->add_option("--calculus", o.calculus, "natural|vanilla");
  typecheck->add_option("--ctx", o.ctx, "typing context, e.g. 'x:X, y:X->X'");
  typecheck->add_option("--type", o.type, "expected formula")->required();
  typecheck->add_flag("--derivation", o.show_derivation, "print the derivation tree");
  typecheck->add_flag("--json", o.json_out, "JSON output");

  CLI::App* infer_cmd = app.add_subcommand("infer", "infer a principal simple type");
  add_term_arg(infer_cmd);
  infer_cmd->add_option("--calculus", o.calculus, "natural|vanilla");
  infer_cmd->add_option("--ctx", o.ctx, "typing context; '?' entries are placeholders");
  infer_cmd->add_flag("--json", o.json_out, "JSON output");

  CLI::App* reduce = app.add_subcommand("reduce", "normalize a term, printing the trace");
  add_term_arg(reduce);
  reduce->add_option("--calculus", o.calculus, "sc|vsc|plotkin-weak|plotkin-strong|vanilla")
      ->required();
  reduce->add_option("--strategy", o.strategy, "lo|ri");
  reduce->add_option("--fuel", o.fuel, "maximum number of steps");
  reduce->add_option("--trace", o.trace_format, "text|json");

  CLI::App* translate = app.add_subcommand("translate", "translate between the calculi");
  add_term_arg(translate);
  translate->add_option("--direction", o.direction, "nd-to-sc|sc-to-nd")->required();

  CLI::App* simulate = app.add_subcommand("simulate", "verify the simulation of every redex");
  add_term_arg(simulate);
  simulate->add_option("--direction", o.direction, "vanilla-to-vsc|vsc-to-vanilla")->required();
  simulate->add_flag("--json", o.json_out, "JSON output");

  CLI::App* equiv = app.add_subcommand("equiv", "bounded structural-equivalence check");
  equiv->add_option("term", o.term, "first vanilla term")->required();
  equiv->add_option("term2", o.term2, "second vanilla term")->required();
  equiv->add_option("--budget", o.budget, "move budget");
  bool probe_flag = false;
  equiv->add_flag("--probe", probe_flag, "also run the strong-bisimulation probe");

  CLI::App* sn_probe = app.add_subcommand("sn-probe", "exhaustive reduction-graph exploration");
  add_term_arg(sn_probe);
  sn_probe->add_option("--calculus", o.calculus, "sc|vsc|plotkin-weak|plotkin-strong|vanilla")
      ->required();
  sn_probe->add_option("--cap", o.cap, "node cap");

  CLI::App* gen = app.add_subcommand("gen", "emit generated terms");
  gen->add_option("--calculus", o.calculus, "natural|vanilla");
  gen->add_option("--mode", o.mode, "typed|cut-free");
  gen->add_option("--seed", o.seed, "generator seed");
  gen->add_option("--count", o.count, "number of terms");
  gen->add_option("--max-size", o.max_size, "size budget per term");
  gen->add_option("--atoms", o.atoms, "comma-separated atom universe");
  gen->add_option("--pool", o.pool, "number of context variables");

  std::vector<const char*> cargs;
  cargs.push_back("vanilla");
  for (const std::string& a : argv) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return {0, out.str(), err.str()};
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return {2, out.str(), err.str()};
  }

  try {
    if (parse_cmd->parsed()) {
      Calculus cal = detail::parse_calculus_name(o.calculus);
      Term t = parse_term(detail::term_input(o.term, stdin_text), cal);
      out << print_term(t) << "\n";
      return {0, out.str(), err.str()};
    }

    if (typecheck->parsed()) {
      Calculus cal = detail::parse_calculus_name(o.calculus);
      Term t = parse_term(detail::term_input(o.term, stdin_text), cal);
      TypeCtx ctx = parse_type_ctx(o.ctx);
      Formula a = parse_formula(o.type);
      try {
        Derivation d = cal == Calculus::natural ? check_nd(ctx, t, a) : check_sc(ctx, t, a);
        if (o.json_out) {
          out << detail::derivation_json(d).dump(2) << "\n";
        } else {
          out << "ok: " << (ctx.size() ? ctx.str() + " " : "") << "|- " << print_term(t) << " : "
              << a.str() << "\n";
          if (o.show_derivation) out << derivation_to_text(d);
        }
        return {0, out.str(), err.str()};
      } catch (const TypeError& e) {
        err << e.what() << "\n";
        return {1, out.str(), err.str()};
      }
    }

    if (infer_cmd->parsed()) {
      Calculus cal = detail::parse_calculus_name(o.calculus);
      Term t = parse_term(detail::term_input(o.term, stdin_text), cal);
      TypeCtx ctx = parse_type_ctx(o.ctx, /*allow_placeholder=*/true);
      try {
        InferResult r = infer(cal, ctx, t);
        if (o.json_out) {
          json assigns = json::object();
          for (const auto& [v, f] : r.placeholder_assignments) assigns[v.str()] = f.str();
          out << json{{"type", r.type.str()}, {"placeholders", assigns}}.dump(2) << "\n";
        } else {
          out << r.type.str() << "\n";
          for (const auto& [v, f] : r.placeholder_assignments)
            out << v.str() << " : " << f.str() << "\n";
        }
        return {0, out.str(), err.str()};
      } catch (const TypeError& e) {
        err << e.what() << "\n";
        return {1, out.str(), err.str()};
      }
    }

    if (reduce->parsed()) {
      Calculus cal = detail::parse_calculus_name(o.calculus);
      const RuleSet& rules = detail::rules_for(o.calculus);
      Term t = parse_term(detail::term_input(o.term, stdin_text), cal);
      Strategy strat = o.strategy == "ri" ? Strategy::rightmost_innermost
                                          : Strategy::leftmost_outermost;
      Trace tr = normalize(t, rules, strat, o.fuel);
      if (o.trace_format == "json") {
        out << detail::trace_json(tr).dump(2) << "\n";
      } else {
        out << trace_to_text(tr);
      }
      return {0, out.str(), err.str()};
    }

    if (translate->parsed()) {
      if (o.direction == "nd-to-sc") {
        Term t = parse_term(detail::term_input(o.term, stdin_text), Calculus::natural);
        out << print_term(nd_to_sc(t)) << "\n";
      } else if (o.direction == "sc-to-nd") {
        Term t = parse_term(detail::term_input(o.term, stdin_text), Calculus::vanilla);
        out << print_term(sc_to_nd(t)) << "\n";
      } else {
        err << "unknown direction " << o.direction << "\n";
        return {2, out.str(), err.str()};
      }
      return {0, out.str(), err.str()};
    }

    if (simulate->parsed()) {
      bool all_matched = true;
      json reports = json::array();
      if (o.direction == "vanilla-to-vsc") {
        Term t = parse_term(detail::term_input(o.term, stdin_text), Calculus::vanilla);
        for (const Redex& r : redexes(t, kVanillaRules)) {
          SimReport rep = simulate_cut_in_vsc(t, r);
          all_matched = all_matched && rep.matched;
          if (o.json_out) {
            reports.push_back(detail::sim_report_json(rep));
          } else {
            out << rule_name(r.rule) << " @ " << r.at.str() << ": shape=" << rep.shape
                << " matched=" << (rep.matched ? "true" : "false") << "\n";
          }
        }
      } else if (o.direction == "vsc-to-vanilla") {
        Term t = parse_term(detail::term_input(o.term, stdin_text), Calculus::natural);
        for (const Redex& r : redexes(t, kVscRules)) {
          SimReport rep = simulate_vsc_in_vanilla(t, r);
          all_matched = all_matched && rep.matched;
          if (o.json_out) {
            reports.push_back(detail::sim_report_json(rep));
          } else {
            out << rule_name(r.rule) << " @ " << r.at.str() << ": shape=" << rep.shape
                << " matched=" << (rep.matched ? "true" : "false") << "\n";
          }
        }
      } else {
        err << "unknown direction " << o.direction << "\n";
        return {2, out.str(), err.str()};
      }
      if (o.json_out) out << reports.dump(2) << "\n";
      return {all_matched ? 0 : 1, out.str(), err.str()};
    }

    if (equiv->parsed()) {
      Term t = parse_term(detail::term_input(o.term, stdin_text), Calculus::vanilla);
      Term u = parse_term(o.term2, Calculus::vanilla);
      EquivResult r = equiv_bounded(t, u, o.budget);
      if (!r.equivalent) {
        out << "not-found within budget " << o.budget << "\n";
        return {1, out.str(), err.str()};
      }
      out << "equivalent (" << (r.path.size() - 1) << " moves)\n";
      for (const Term& step : r.path) out << "  " << print_term(with_readable_binders(step)) << "\n";
      if (probe_flag) {
        BisimReport rep = bisim_probe(t, u, o.budget);
        for (const BisimDiagram& d : rep.diagrams) {
          out << "diagram " << (d.side == 0 ? "left " : "right") << " " << rule_name(d.source_redex.rule)
              << " @ " << d.source_redex.at.str() << ": "
              << (d.closed ? "closed via " + std::string(rule_name(d.matched_redex->rule)) + " @ " +
                                 d.matched_redex->at.str()
                           : "OPEN")
              << "\n";
        }
        if (!rep.ok) return {1, out.str(), err.str()};
      }
      return {0, out.str(), err.str()};
    }

    if (sn_probe->parsed()) {
      Calculus cal = detail::parse_calculus_name(o.calculus);
      const RuleSet& rules = detail::rules_for(o.calculus);
      Term t = parse_term(detail::term_input(o.term, stdin_text), cal);
      GraphReport g = reduction_graph(t, rules, o.cap);
      switch (g.kind) {
        case GraphReport::Kind::all_paths_terminate:
          out << "AllPathsTerminate(max_path=" << g.max_path_len << ", nodes=" << g.node_count
              << ")\n";
          return {0, out.str(), err.str()};
        case GraphReport::Kind::cycle_found:
          out << "CycleFound(nodes=" << g.node_count << ")\n";
          return {1, out.str(), err.str()};
        case GraphReport::Kind::cap_exceeded:
          out << "CapExceeded(nodes=" << g.node_count << ")\n";
          return {1, out.str(), err.str()};
      }
    }

    if (gen->parsed()) {
      Calculus cal = detail::parse_calculus_name(o.calculus);
      GenConfig cfg = detail::gen_config(o);
      out << gen_header(cfg, o.mode);
      if (o.mode == "cut-free") {
        CutFreeGen g(cfg);
        for (std::size_t i = 0; i < o.count; ++i) out << print_term(g.next()) << "\n";
      } else if (o.mode == "typed") {
        TypedGen g(cal, cfg);
        for (std::size_t i = 0; i < o.count; ++i) {
          TypedTriple triple = g.next();
          out << (triple.ctx.size() ? triple.ctx.str() + " " : "") << "|- "
              << print_term(triple.term) << " : " << triple.type.str() << "\n";
        }
      } else {
        err << "unknown mode " << o.mode << "\n";
        return {2, out.str(), err.str()};
      }
      return {0, out.str(), err.str()};
    }

    err << "no command\n";
    return {2, out.str(), err.str()};
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return {2, out.str(), err.str()};
  } catch (const TypeError& e) {
    err << e.what() << "\n";
    return {1, out.str(), err.str()};
  } catch (const Error& e) {
    err << e.what() << "\n";
    return {1, out.str(), err.str()};
  }
}

}  // namespace vanilla::cli
