#pragma once

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gadgets.hpp"
#include "pipeline.hpp"

namespace tspk::cli {

enum Exit : int { ok = 0, negative = 1, usage = 2, scale = 3 };

struct Config {
  std::string command;
  std::string input;
  std::string second;
  std::string output;
  std::string report_path;
  std::string format = "text";
  std::string regime = "fes";
  int r = 2;
  int k_max = 8;
  std::optional<Weight> threshold;
  std::string engine = "auto";
  bool cross_check = false;

  // generate
  std::string generator;
  int l = 3;
  int k = 2;
  int n = 10;
  int t = 2;
  double density = 0.5;
  std::string kind = "tsp";
  Weight wmin = 1;
  Weight wmax = 9;
  std::uint64_t seed = 1;
};

inline Instance load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PreconditionError("cannot open " + path);
  return parse_instance(f);
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw PreconditionError("cannot write " + path);
  f << text;
}

inline std::string report_string(const KernelReport& r, const std::string& format) {
  return format == "json" ? to_json(r).dump(2) + "\n" : to_text(r);
}

inline int cmd_kernelize(const Config& c, std::ostream& out) {
  auto p = pipeline_from_name(c.regime);
  if (!p) throw PreconditionError("unknown regime " + c.regime);
  const auto in = load(c.input);
  auto res = run_pipeline(in, {*p, c.r, c.k_max, c.threshold});
  std::vector<std::string> notes = {"kernel by tspkern, regime " + c.regime};
  if (res.report.decided) {
    notes.push_back(std::string("DECIDED ") + (*res.report.decided ? "yes" : "no"));
    res.instance = decided_instance(res.instance.kind, *res.report.decided);
  }
  if (!c.output.empty()) write_text(c.output, render_instance(res.instance, notes), out);
  const auto rep = report_string(res.report, c.format);
  if (c.report_path.empty()) out << rep;
  else write_text(c.report_path, rep, out);
  return ok;
}

inline int cmd_solve(const Config& c, std::ostream& out) {
  auto engine = engine_from_name(c.engine);
  if (!engine) throw PreconditionError("unknown engine " + c.engine);
  const auto in = load(c.input);
  const auto limits = OracleLimits::from_env();
  auto res = solve(in, limits, *engine);
  nlohmann::json checks = nlohmann::json::array();
  bool agree = true;
  if (c.cross_check) {
    for (auto e : {Engine::multiplicity, Engine::held_karp, Engine::frontier}) {
      if (e == Engine::held_karp && in.kind == ProblemKind::wrp) continue;
      try {
        auto other = solve(in, limits, e);
        agree &= other.opt_weight == res.opt_weight;
        checks.push_back({{"engine", other.engine},
                          {"opt", other.opt_weight ? nlohmann::json(*other.opt_weight) : nlohmann::json(nullptr)}});
      } catch (const ScaleError&) {
        // engines beyond their caps are skipped
      }
    }
  }
  if (c.format == "json") {
    nlohmann::json j;
    j["feasible"] = res.feasible;
    j["opt"] = res.opt_weight ? nlohmann::json(*res.opt_weight) : nlohmann::json(nullptr);
    j["engine"] = res.engine;
    j["witness"] = res.witness ? nlohmann::json(res.witness->multiplicity) : nlohmann::json(nullptr);
    if (c.cross_check) j["cross_check"] = checks;
    out << j.dump(2) << '\n';
  } else {
    out << (res.feasible ? "yes" : "no");
    if (res.opt_weight) out << ' ' << *res.opt_weight;
    out << '\n';
    if (res.witness && res.feasible) {
      out << "witness";
      for (int x : res.witness->multiplicity) out << ' ' << x;
      out << '\n';
    }
    for (const auto& e : checks) {
      out << "engine " << e["engine"].get<std::string>() << ' ';
      if (e["opt"].is_null()) out << "none\n";
      else out << e["opt"].get<Weight>() << '\n';
    }
  }
  if (!agree) throw Error("engines disagree on the optimum");
  return res.feasible ? ok : negative;
}

inline int cmd_verify(const Config& c, std::ostream& out) {
  const auto a = load(c.input);
  const auto b = load(c.second);
  const auto limits = OracleLimits::from_env();
  const bool va = decide(a, limits), vb = decide(b, limits);
  out << "first " << (va ? "yes" : "no") << '\n';
  out << "second " << (vb ? "yes" : "no") << '\n';
  out << (va == vb ? "equivalent" : "not equivalent") << '\n';
  return va == vb ? ok : negative;
}

inline HpGraph random_graph(std::mt19937_64& rng, int n, double density) {
  HpGraph g{n, {}};
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < density) g.edges.emplace_back(a, b);
  return g;
}

inline int cmd_generate(const Config& c, std::ostream& out) {
  std::vector<std::string> notes = {"generated by tspkern: " + c.generator};
  Instance in;
  if (c.generator == "selection") {
    in = selection_gadget(c.l);
    notes.push_back("l " + std::to_string(c.l));
  } else if (c.generator == "cycle") {
    in = cycle_gadget(c.l);
    notes.push_back("l " + std::to_string(c.l));
  } else if (c.generator == "mcc") {
    auto m = random_mcc(c.k, c.n, c.density, c.seed);
    in = mcc_to_subtsp(m);
    notes.push_back("k " + std::to_string(c.k) + " n " + std::to_string(c.n) + " density " + std::to_string(c.density) +
                    " seed " + std::to_string(c.seed));
    notes.push_back(std::string("multicolored clique ") + (has_multicolored_clique(m) ? "yes" : "no"));
  } else if (c.generator == "compose-fn" || c.generator == "compose-degtw") {
    if (c.t < 1 || c.k < 1) throw PreconditionError("t and k must be positive");
    std::mt19937_64 rng(c.seed);
    std::vector<HpGraph> gs;
    bool all = true;
    for (int i = 0; i < c.t; ++i) {
      gs.push_back(random_graph(rng, c.k, c.density));
      if (c.k <= 10) all &= has_hamiltonian_path(gs.back());
    }
    in = c.generator == "compose-fn" ? compose_fn(gs) : compose_degtw(gs);
    notes.push_back("t " + std::to_string(c.t) + " k " + std::to_string(c.k) + " density " +
                    std::to_string(c.density) + " seed " + std::to_string(c.seed));
    if (c.k <= 10) notes.push_back(std::string("all inputs hamiltonian ") + (all ? "yes" : "no"));
  } else if (c.generator == "planted") {
    PlantedParams p;
    auto kind = kind_from_token(c.kind);
    auto regime = planted_regime_from_name(c.regime);
    if (!kind) throw PreconditionError("unknown kind " + c.kind);
    if (!regime) throw PreconditionError("unknown planted regime " + c.regime);
    p.kind = *kind;
    p.regime = *regime;
    p.k = c.k;
    p.r = c.r;
    p.n = c.n;
    p.wmin = c.wmin;
    p.wmax = c.wmax;
    p.seed = c.seed;
    in = gen_planted(p, OracleLimits::from_env());
    notes.push_back("kind " + c.kind + " regime " + c.regime + " k " + std::to_string(c.k) + " r " +
                    std::to_string(c.r) + " n " + std::to_string(c.n) + " weights " + std::to_string(c.wmin) + ".." +
                    std::to_string(c.wmax) + " seed " + std::to_string(c.seed));
  } else {
    throw PreconditionError("unknown generator " + c.generator);
  }
  write_text(c.output, render_instance(in, notes), out);
  return ok;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Kernelization and exact solving for TSP, Subset TSP and waypoint routing"};
  app.require_subcommand(1);
  Config c;

  auto* kern = app.add_subcommand("kernelize", "reduce an instance under a structural parameter");
  kern->add_option("input", c.input, "instance file")->required();
  kern->add_option("output", c.output, "kernel instance file");
  kern->add_option("--regime", c.regime, "fes | vc-tsp | vc-wrp | components | paths")->capture_default_str();
  kern->add_option("--r", c.r, "component size bound")->capture_default_str();
  kern->add_option("--k-max", c.k_max, "largest modulator searched")->capture_default_str();
  kern->add_option("--threshold", c.threshold, "yellow threshold override for paths");
  kern->add_option("--report", c.report_path, "write the report here instead of stdout");
  kern->add_option("--format", c.format, "text | json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  auto* sol = app.add_subcommand("solve", "exact optimum and witness");
  sol->add_option("input", c.input, "instance file")->required();
  sol->add_option("--engine", c.engine, "auto | multiplicity | heldkarp | frontier")->capture_default_str();
  sol->add_flag("--cross-check", c.cross_check, "run every engine within caps and compare");
  sol->add_option("--format", c.format, "text | json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  auto* ver = app.add_subcommand("verify", "compare the verdicts of two instances");
  ver->add_option("first", c.input, "instance file")->required();
  ver->add_option("second", c.second, "instance file")->required();

  auto* gen = app.add_subcommand("generate", "write a generated instance");
  gen->require_subcommand(1);
  gen->add_option("-o,--output", c.output, "output file, stdout by default");
  auto add_common = [&](CLI::App* s) { s->add_option("-o,--output", c.output, "output file, stdout by default"); };
  auto* g_sel = gen->add_subcommand("selection", "selection gadget");
  g_sel->add_option("--l", c.l, "number of cherries")->capture_default_str();
  add_common(g_sel);
  auto* g_cyc = gen->add_subcommand("cycle", "cycle gadget");
  g_cyc->add_option("--l", c.l, "number of triplets")->capture_default_str();
  add_common(g_cyc);
  auto* g_mcc = gen->add_subcommand("mcc", "random multicolored clique instance, reduced to subset TSP");
  g_mcc->add_option("--k", c.k, "colors")->capture_default_str();
  g_mcc->add_option("--n", c.n, "vertices per color")->capture_default_str();
  g_mcc->add_option("--density", c.density, "edge probability")->capture_default_str();
  g_mcc->add_option("--seed", c.seed)->capture_default_str();
  add_common(g_mcc);
  for (const char* name : {"compose-fn", "compose-degtw"}) {
    auto* g = gen->add_subcommand(name, "composition of random graphs");
    g->add_option("--t", c.t, "number of graphs")->capture_default_str();
    g->add_option("--k", c.k, "vertices per graph")->capture_default_str();
    g->add_option("--density", c.density, "edge probability")->capture_default_str();
    g->add_option("--seed", c.seed)->capture_default_str();
    add_common(g);
  }
  auto* g_pl = gen->add_subcommand("planted", "random instance with a planted structure");
  g_pl->add_option("--regime", c.regime, "fes | vc | components | paths")->capture_default_str();
  g_pl->add_option("--kind", c.kind, "tsp | stsp | wrp")->capture_default_str();
  g_pl->add_option("--k", c.k, "modulator size or feedback edges")->capture_default_str();
  g_pl->add_option("--r", c.r, "component size bound")->capture_default_str();
  g_pl->add_option("--n", c.n, "vertices")->capture_default_str();
  g_pl->add_option("--wmin", c.wmin)->capture_default_str();
  g_pl->add_option("--wmax", c.wmax)->capture_default_str();
  g_pl->add_option("--seed", c.seed)->capture_default_str();
  add_common(g_pl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  }
  // regime defaults differ between kernelize and generate planted
  if (g_pl->parsed() && g_pl->count("--regime") == 0) c.regime = "vc";

  try {
    if (kern->parsed()) return cmd_kernelize(c, out);
    if (sol->parsed()) return cmd_solve(c, out);
    if (ver->parsed()) return cmd_verify(c, out);
    for (auto* s : gen->get_subcommands())
      if (s->parsed()) c.generator = s->get_name();
    return cmd_generate(c, out);
  } catch (const ScaleError& e) {
    err << "scale exceeded: " << e.what() << '\n';
    return scale;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return usage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const OverflowError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return negative;
  }
}

}  // namespace tspk::cli
