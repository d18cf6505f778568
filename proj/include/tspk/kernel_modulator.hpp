#pragma once

#include <functional>
#include <queue>
#include <stdexcept>

#include "kernel_fes.hpp"
#include "kernel_vc.hpp"

namespace tspk {

struct ComponentBehavior {
  int component = -1;
  EdgeMultiset edges;
  Weight weight = 0;
};

// rep_edges holds (m_i, m_j, multiplicity) with m_i the least vertex of its part.
struct ComponentImpact {
  std::vector<int> touched;
  std::vector<std::tuple<int, int, int>> rep_edges;

  auto operator<=>(const ComponentImpact&) const = default;
  bool operator==(const ComponentImpact&) const = default;
};

struct Piece {
  std::vector<int> path_vertices;
  EdgeMultiset legs;
};

// G_C: edges inside C and edges between C and M, never edges inside M.
struct ComponentGraph {
  std::vector<int> vertices;
  std::vector<int> internal_edges;
  std::vector<int> modulator_edges;

  int edge_count() const { return static_cast<int>(internal_edges.size() + modulator_edges.size()); }
};

inline ComponentGraph component_graph(const Instance& in, const std::vector<int>& M, const std::vector<int>& C) {
  std::vector<char> role(static_cast<std::size_t>(in.vertex_count), 0);
  for (int m : M) role[m] = 1;
  for (int c : C) {
    if (role[c] == 1) throw PreconditionError("component meets the modulator");
    role[c] = 2;
  }
  ComponentGraph g;
  g.vertices = C;
  for (int i = 0; i < in.edge_count(); ++i) {
    const auto& e = in.edges[i];
    const int a = role[e.u], b = role[e.v];
    if (a == 2 && b == 2) g.internal_edges.push_back(i);
    else if ((a == 2 && b == 1) || (a == 1 && b == 2)) g.modulator_edges.push_back(i);
    else if (a == 2 || b == 2) throw PreconditionError("component is not a component of G - M");
  }
  return g;
}

namespace detail {

inline std::vector<bool> membership(const Instance& in, const std::vector<int>& vs) {
  std::vector<bool> out(static_cast<std::size_t>(in.vertex_count), false);
  for (int v : vs) out[v] = true;
  return out;
}

// Behavior predicate on a multiset already known to lie in G_C.
inline bool behavior_ok(const Instance& in, const std::vector<bool>& in_m, const std::vector<int>& C,
                        const EdgeMultiset& F, int r) {
  std::map<int, int> deg;
  int to_m = 0;
  UnionFind uf(in.vertex_count);
  for (const auto& [e, c] : F.items) {
    if (c > 2) return false;
    const auto& ed = in.edges[e];
    deg[ed.u] += c;
    deg[ed.v] += c;
    if (in_m[ed.u] || in_m[ed.v]) to_m += c;
    uf.unite(ed.u, ed.v);
  }
  if (to_m > 2 * r) return false;
  std::set<int> anchored;
  for (const auto& [v, d] : deg)
    if (in_m[v]) anchored.insert(uf.find(v));
  for (int c : C) {
    auto it = deg.find(c);
    if (it == deg.end() || it->second % 2) return false;
    if (!anchored.count(uf.find(c))) return false;
  }
  return true;
}

inline bool better_natural(const EdgeMultiset& a, Weight wa, const EdgeMultiset& b, Weight wb) {
  if (wa != wb) return wa < wb;
  if (a.size() != b.size()) return a.size() < b.size();
  return lex_less(a, b);
}

}  // namespace detail

inline bool is_component_behavior(const Instance& in, const std::vector<int>& M, const std::vector<int>& C,
                                  const EdgeMultiset& F, int r) {
  auto g = component_graph(in, M, C);
  for (const auto& [e, c] : F.items)
    if (std::find(g.internal_edges.begin(), g.internal_edges.end(), e) == g.internal_edges.end() &&
        std::find(g.modulator_edges.begin(), g.modulator_edges.end(), e) == g.modulator_edges.end())
      return false;
  return detail::behavior_ok(in, detail::membership(in, M), C, F, r);
}

// Every multiset over G_C with multiplicities <= 2 and at most 2r modulator
// occurrences that passes the behavior predicate.
inline std::vector<ComponentBehavior> enumerate_component_behaviors(const Instance& in, const std::vector<int>& M,
                                                                    const std::vector<int>& C, int r,
                                                                    long long max_states = 5'000'000) {
  if (static_cast<int>(C.size()) > r) throw PreconditionError("component has more than r vertices");
  const auto g = component_graph(in, M, C);
  const auto in_m = detail::membership(in, M);
  std::vector<int> edges = g.internal_edges;
  edges.insert(edges.end(), g.modulator_edges.begin(), g.modulator_edges.end());
  std::sort(edges.begin(), edges.end());

  std::vector<ComponentBehavior> out;
  EdgeMultiset cur;
  Weight w = 0;
  long long states = 0;
  std::function<void(std::size_t, int)> go = [&](std::size_t i, int to_m) {
    if (i == edges.size()) {
      if (++states > max_states) throw ScaleError("behavior enumeration exceeds " + std::to_string(max_states) + " states");
      if (detail::behavior_ok(in, in_m, C, cur, r)) out.push_back({-1, cur, w});
      return;
    }
    const auto& e = in.edges[edges[i]];
    const bool leg = in_m[e.u] || in_m[e.v];
    go(i + 1, to_m);
    for (int c = 1; c <= 2; ++c) {
      if (leg && to_m + c > 2 * r) break;
      cur.add(edges[i], c);
      w += c * e.weight;
      go(i + 1, to_m + (leg ? c : 0));
      cur.add(edges[i], -c);
      w -= c * e.weight;
    }
  };
  go(0, 0);
  return out;
}

inline ComponentImpact component_impact(const Instance& in, const std::vector<int>& M, const EdgeMultiset& F) {
  const auto in_m = detail::membership(in, M);
  UnionFind uf(in.vertex_count);
  std::map<int, int> mdeg;
  for (const auto& [e, c] : F.items) {
    const auto& ed = in.edges[e];
    uf.unite(ed.u, ed.v);
    if (in_m[ed.u]) mdeg[ed.u] += c;
    if (in_m[ed.v]) mdeg[ed.v] += c;
  }
  ComponentImpact imp;
  std::map<int, std::vector<int>> parts;  // root -> touched modulator vertices, ascending
  for (const auto& [m, d] : mdeg) {
    imp.touched.push_back(m);
    parts[uf.find(m)].push_back(m);
  }
  for (const auto& [root, ms] : parts)
    for (std::size_t j = 1; j < ms.size(); ++j) imp.rep_edges.emplace_back(ms[0], ms[j], mdeg[ms[j]] % 2 ? 1 : 2);
  std::sort(imp.rep_edges.begin(), imp.rep_edges.end());
  return imp;
}

// Minimum weight; ties go to fewer edge occurrences, then the lexicographically
// least multiset. The size step keeps every piece of a natural behavior two-legged
// even when some edges weigh nothing.
inline ComponentBehavior natural_behavior_component(const Instance& in, const std::vector<int>& M,
                                                    const std::vector<int>& C, int r) {
  auto all = enumerate_component_behaviors(in, M, C, r);
  if (all.empty()) throw PreconditionError("component has no behavior");
  const ComponentBehavior* best = &all.front();
  for (const auto& b : all)
    if (detail::better_natural(b.edges, b.weight, best->edges, best->weight)) best = &b;
  return *best;
}

struct ComponentProfile {
  std::optional<ComponentBehavior> natural;
  ComponentImpact natural_impact;
  std::map<ComponentImpact, Weight> cheapest;
};

inline ComponentProfile profile_component(const Instance& in, const std::vector<int>& M, const std::vector<int>& C,
                                          int r, long long max_states = 5'000'000) {
  ComponentProfile p;
  for (auto& b : enumerate_component_behaviors(in, M, C, r, max_states)) {
    auto imp = component_impact(in, M, b.edges);
    auto it = p.cheapest.find(imp);
    if (it == p.cheapest.end() || b.weight < it->second) p.cheapest[imp] = b.weight;
    if (!p.natural || detail::better_natural(b.edges, b.weight, p.natural->edges, p.natural->weight)) {
      p.natural = std::move(b);
      p.natural_impact = imp;
    }
  }
  return p;
}

inline Weight price_component(const Instance& in, const std::vector<int>& M, const std::vector<int>& C, int r,
                              const ComponentImpact& I, const ComponentImpact& I2) {
  auto p = profile_component(in, M, C, r);
  if (!p.natural || p.natural_impact != I) return kInfinity;
  auto it = p.cheapest.find(I2);
  return it == p.cheapest.end() ? kInfinity : it->second - p.natural->weight;
}

// Pieces in the order of C; path vertices keep the order of C.
inline std::vector<Piece> pieces(const Instance& in, const std::vector<int>& M, const std::vector<int>& C,
                                 const EdgeMultiset& F) {
  const auto in_m = detail::membership(in, M);
  const auto in_c = detail::membership(in, C);
  UnionFind uf(in.vertex_count);
  for (const auto& [e, c] : F.items) {
    const auto& ed = in.edges[e];
    if (in_c[ed.u] && in_c[ed.v]) uf.unite(ed.u, ed.v);
  }
  std::map<int, std::size_t> slot;
  std::vector<Piece> out;
  std::vector<bool> used(static_cast<std::size_t>(in.vertex_count), false);
  for (const auto& [e, c] : F.items) {
    used[in.edges[e].u] = true;
    used[in.edges[e].v] = true;
  }
  for (int v : C) {
    if (!used[v]) continue;
    auto [it, fresh] = slot.emplace(uf.find(v), out.size());
    if (fresh) out.emplace_back();
    out[it->second].path_vertices.push_back(v);
  }
  for (const auto& [e, c] : F.items) {
    const auto& ed = in.edges[e];
    if (in_m[ed.u] == in_m[ed.v]) continue;
    int inner = in_m[ed.u] ? ed.v : ed.u;
    out[slot.at(uf.find(inner))].legs.add(e, c);
  }
  return out;
}

// A behavior touching v that stays anchored in M' and costs at most w(A). Found
// by search over all behaviors; failing to find one is a broken invariant.
inline ComponentBehavior blend_behavior(const Instance& in, const std::vector<int>& M, const std::vector<int>& C,
                                        int r, const ComponentBehavior& A, const std::vector<int>& M_prime, int v) {
  auto has = [](const std::vector<int>& s, int x) { return std::find(s.begin(), s.end(), x) != s.end(); };
  if (!is_component_behavior(in, M, C, A.edges, r)) throw PreconditionError("A is not a behavior of C");
  for (int m : M_prime)
    if (!has(M, m)) throw PreconditionError("M' must be inside the modulator");
  const auto nat = natural_behavior_component(in, M, C, r);
  const auto t_nat = component_impact(in, M, nat.edges).touched;
  const auto t_a = component_impact(in, M, A.edges).touched;
  if (!has(t_nat, v) || has(M_prime, v)) throw PreconditionError("v must be touched by the natural behavior and lie outside M'");
  for (int m : t_a)
    if (!has(M_prime, m)) throw PreconditionError("A touches a vertex outside M'");
  for (const auto& p : pieces(in, M, C, A.edges))
    if (p.legs.size() != 2) throw PreconditionError("every piece of A needs two legs");

  Weight wa = 0;
  for (const auto& [e, c] : A.edges.items) wa += c * in.edges[e].weight;
  const auto in_mp = detail::membership(in, M_prime);
  std::optional<ComponentBehavior> best;
  for (auto& F : enumerate_component_behaviors(in, M, C, r)) {
    if (F.weight > wa) continue;
    auto t = component_impact(in, M, F.edges).touched;
    if (!has(t, v)) continue;
    if (!std::all_of(t.begin(), t.end(), [&](int m) { return has(t_a, m) || has(t_nat, m); })) continue;
    UnionFind uf(in.vertex_count);
    for (const auto& [e, c] : F.edges.items) uf.unite(in.edges[e].u, in.edges[e].v);
    std::set<int> anchored;
    for (int m : M_prime) anchored.insert(uf.find(m));
    bool ok = true;
    for (const auto& [e, c] : F.edges.items) ok &= anchored.count(uf.find(in.edges[e].u)) > 0;
    if (!ok) continue;
    if (!best || detail::better_natural(F.edges, F.weight, best->edges, best->weight)) best = std::move(F);
  }
  if (!best) throw std::logic_error("blending found no behavior");
  best->component = A.component;
  return *best;
}

// Short-circuits every non-waypoint outside the modulator. The returned
// instance carries the updated modulator as its hint.
inline Instance saturate_path_nonterminals(const Instance& in, const std::vector<int>& M,
                                           std::vector<LogEntry>* log = nullptr) {
  if (in.kind != ProblemKind::subset_tsp) throw PreconditionError("saturation needs a subset TSP instance");
  Instance work = in;
  work.modulator_hint = M;
  for (;;) {
    const auto in_m = detail::membership(work, *work.modulator_hint);
    int pick = -1;
    for (int v = 0; v < work.vertex_count && pick < 0; ++v)
      if (!in_m[v] && !work.is_waypoint(v)) pick = v;
    if (pick < 0) return work;
    auto out = rr_short_circuit(work, pick);
    if (log) log->push_back(out.log);
    work = std::move(*out.instance);
  }
}

namespace detail {

inline Weight saturating_pow(Weight b, int e) {
  Weight out = 1;
  for (int i = 0; i < e; ++i) out = saturating_mul(out, b);
  return out;
}

// Yellow threshold per natural impact for the paths rule.
inline Weight paths_threshold(int r, long long k, long long impacts) {
  Weight base = saturating_mul(saturating_pow(r + 1, 4 * r), saturating_pow(2, 4 * r + 1));
  return saturating_mul(saturating_add(base, k), impacts);
}

inline std::vector<Weight> dijkstra(const Instance& in, const ComponentGraph& g, int source) {
  std::vector<Weight> dist(static_cast<std::size_t>(in.vertex_count), kInfinity);
  std::vector<std::vector<std::pair<int, Weight>>> adj(static_cast<std::size_t>(in.vertex_count));
  for (auto list : {&g.internal_edges, &g.modulator_edges})
    for (int e : *list) {
      adj[in.edges[e].u].emplace_back(in.edges[e].v, in.edges[e].weight);
      adj[in.edges[e].v].emplace_back(in.edges[e].u, in.edges[e].weight);
    }
  using Item = std::pair<Weight, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0;
  pq.emplace(0, source);
  while (!pq.empty()) {
    auto [d, x] = pq.top();
    pq.pop();
    if (d != dist[x]) continue;
    for (auto [y, w] : adj[x])
      if (d + w < dist[y]) {
        dist[y] = d + w;
        pq.emplace(dist[y], y);
      }
  }
  return dist;
}

struct ComponentRuleSpec {
  std::string name;
  Regime regime;
  bool subset = false;
  std::optional<Weight> threshold;  // overrides the paths formula
  long long max_states = 5'000'000;
};

inline KernelResult run_component_rule(const Instance& in, const std::vector<int>& M, const ComponentRuleSpec& spec) {
  KernelResult res{in, {}};
  auto& rep = res.report;
  rep.begin(spec.name, in);
  const auto d = decompose(in, M, spec.regime);
  const auto& comps = d.components;
  const long long k = static_cast<long long>(d.modulator.size());
  const int r = spec.regime.r;
  if (spec.subset)
    for (const auto& C : comps)
      for (int c : C)
        if (!in.is_waypoint(c)) throw PreconditionError("saturate non-waypoints outside the modulator first");

  std::vector<ComponentProfile> prof;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    prof.push_back(profile_component(in, d.modulator, comps[i], r, spec.max_states));
    if (prof.back().natural) continue;
    // C has no edge to M, so it is a whole component of G
    const auto& C = comps[i];
    bool outside = false;
    for (int w : in.waypoints()) outside |= std::find(C.begin(), C.end(), w) == C.end();
    if (outside) {
      rep.record({spec.name, ids_of(C), 0, "component cut off from the modulator"});
      rep.decided = false;
    }
    rep.finish(in);
    return res;
  }

  std::set<ComponentImpact> impacts;
  for (const auto& p : prof)
    for (const auto& [imp, w] : p.cheapest) impacts.insert(imp);
  const long long ni = static_cast<long long>(impacts.size());
  const std::size_t nc = comps.size();

  enum Color : std::uint8_t { none, red, blue, green, yellow };
  std::vector<Color> color(nc, none);

  std::map<ComponentImpact, std::vector<int>> natural_group;
  for (std::size_t i = 0; i < nc; ++i) natural_group[prof[i].natural_impact].push_back(static_cast<int>(i));

  const Weight red_quota = saturating_add(saturating_mul(2, saturating_mul(ni, ni)), 2 * k);
  for (const auto& [I, members] : natural_group) {
    std::map<ComponentImpact, std::vector<std::pair<Weight, int>>> by_target;
    for (int i : members)
      for (const auto& [imp, w] : prof[i].cheapest) by_target[imp].emplace_back(w - prof[i].natural->weight, i);
    std::vector<bool> hit(nc, false);
    for (auto& [target, cand] : by_target) mark_cheapest(std::move(cand), red_quota, hit);
    for (std::size_t i = 0; i < nc; ++i)
      if (hit[i]) color[i] = red;
  }

  // blue: per modulator pair, the component with the shortest connecting path
  std::map<std::pair<int, int>, std::pair<Weight, int>> shortest;
  for (std::size_t i = 0; i < nc; ++i) {
    const auto g = component_graph(in, d.modulator, comps[i]);
    for (std::size_t a = 0; a < d.modulator.size(); ++a) {
      const auto dist = dijkstra(in, g, d.modulator[a]);
      for (std::size_t b = a + 1; b < d.modulator.size(); ++b) {
        const Weight len = dist[d.modulator[b]];
        if (len == kInfinity) continue;
        auto key = std::make_pair(d.modulator[a], d.modulator[b]);
        auto it = shortest.find(key);
        if (it == shortest.end() || len < it->second.first) shortest[key] = {len, static_cast<int>(i)};
      }
    }
  }
  for (const auto& [pair, best] : shortest)
    if (color[best.second] == none) color[best.second] = blue;

  const Weight threshold = spec.threshold ? *spec.threshold : paths_threshold(r, k, ni);
  std::vector<int> promote;
  for (const auto& [I, members] : natural_group) {
    std::vector<int> open;
    for (int i : members)
      if (color[i] == none) open.push_back(i);
    if (open.empty()) continue;
    const bool inside = !spec.subset || std::all_of(I.touched.begin(), I.touched.end(),
                                                    [&](int m) { return in.is_waypoint(m); });
    if (inside) {
      std::size_t take = open.size() % 2 ? 1 : 2;
      for (std::size_t j = 0; j < take; ++j) color[open[j]] = green;
    } else if (static_cast<Weight>(open.size()) <= threshold) {
      for (int i : open) color[i] = yellow;
    } else {
      for (int m : I.touched)
        if (!in.is_waypoint(m)) promote.push_back(m);
    }
  }
  std::sort(promote.begin(), promote.end());
  promote.erase(std::unique(promote.begin(), promote.end()), promote.end());

  long long count[5] = {0, 0, 0, 0, 0};
  for (auto c : color) ++count[c];
  rep.measures["k"] = k;
  rep.measures["r"] = r;
  rep.measures["impacts"] = ni;
  rep.measures["components"] = static_cast<long long>(nc);
  rep.measures["red"] = count[red];
  rep.measures["blue"] = count[blue];
  rep.measures["green"] = count[green];
  if (spec.subset) {
    rep.measures["yellow"] = count[yellow];
    rep.measures["threshold"] = threshold;
  }

  if (!promote.empty()) {
    for (int m : promote) res.instance.waypoint[m] = true;
    rep.promoted = ids_of(promote);
    rep.record({spec.name, rep.promoted, 0, "promoted"});
    rep.finish(res.instance);
    return res;
  }

  std::vector<bool> removed(static_cast<std::size_t>(in.vertex_count), false);
  std::vector<int> gone;
  Weight delta = 0;
  for (std::size_t i = 0; i < nc; ++i) {
    if (color[i] != none) continue;
    for (int c : comps[i]) {
      removed[c] = true;
      gone.push_back(c + 1);
    }
    delta = checked_add(delta, prof[i].natural->weight);
  }
  std::sort(gone.begin(), gone.end());
  const long long survivors = static_cast<long long>(nc) - count[none];
  rep.measures["survivors"] = survivors;
  Weight bound = saturating_add(
      saturating_add(saturating_mul(2, saturating_mul(saturating_add(ni * ni, 2 * k), ni * ni)), k * (k - 1) / 2),
      2 * ni);
  std::string name = "components<=2(|I|^2+2|M|)|I|^2+C(|M|,2)+2|I|";
  if (spec.subset) {
    bound = saturating_add(bound, saturating_mul(threshold, ni));
    name += "+threshold*|I|";
  }
  rep.bounds.push_back({name, bound, survivors});
  if (!gone.empty()) {
    res.instance = remove_vertices(in, removed);
    res.instance.budget = in.budget - delta;
    rep.record({spec.name, gone, -delta, ""});
  }
  rep.finish(res.instance);
  return res;
}

}  // namespace detail

inline KernelResult rule_components_tsp(const Instance& in, const std::vector<int>& M, int r,
                                        long long max_states = 5'000'000) {
  if (in.kind != ProblemKind::tsp) throw PreconditionError("the components rule needs a TSP instance");
  return detail::run_component_rule(in, M, {"components", Regime::components(r), false, std::nullopt, max_states});
}

inline KernelResult rule_paths_subtsp(const Instance& in, const std::vector<int>& M, int r,
                                      std::optional<Weight> threshold = std::nullopt,
                                      long long max_states = 5'000'000) {
  if (in.kind != ProblemKind::subset_tsp) throw PreconditionError("the paths rule needs a subset TSP instance");
  return detail::run_component_rule(in, M, {"paths", Regime::paths(r), true, threshold, max_states});
}

inline KernelResult kernelize_components(const Instance& input, int r, int k_max = 8) {
  if (input.kind != ProblemKind::tsp) throw PreconditionError("the components pipeline needs a TSP instance");
  KernelResult res{input, {}};
  auto& rep = res.report;
  auto& work = res.instance;
  rep.begin("components", input);
  auto finish = [&]() {
    rep.finish(work);
    return res;
  };
  if (rep.apply(rr_stop(work), work)) return finish();
  if (rep.apply(ensure_connected(work), work)) return finish();
  auto d = find_modulator(work, Regime::components(r), k_max);
  if (!d) throw ScaleError("no modulator with at most " + std::to_string(k_max) + " vertices");
  work.modulator_hint = d->modulator;
  rep.measures["k_input"] = static_cast<long long>(d->modulator.size());
  auto rule = [r](const Instance& in, const std::vector<int>& M) { return rule_components_tsp(in, M, r); };
  if (detail::marking_fixpoint(work, rep, rule)) return finish();
  rep.apply(compress_weights(work), work);
  return finish();
}

inline KernelResult kernelize_paths(const Instance& input, int r, int k_max = 8,
                                    std::optional<Weight> threshold = std::nullopt) {
  if (input.kind == ProblemKind::wrp)
    throw PreconditionError("the paths pipeline does not handle capacities; WRP under this modulator is an open problem");
  KernelResult res{input, {}};
  auto& rep = res.report;
  auto& work = res.instance;
  rep.begin("paths", input);
  if (work.kind == ProblemKind::tsp) {
    work.kind = ProblemKind::subset_tsp;
    rep.notes.push_back("converted to subset tsp");
  }
  auto finish = [&]() {
    rep.finish(work);
    return res;
  };
  if (rep.apply(rr_stop(work), work)) return finish();
  if (rep.apply(ensure_connected(work), work)) return finish();
  auto d = find_modulator(work, Regime::paths(r), k_max);
  if (!d) throw ScaleError("no modulator with at most " + std::to_string(k_max) + " vertices");
  rep.measures["k_input"] = static_cast<long long>(d->modulator.size());
  std::vector<LogEntry> cuts;
  work = saturate_path_nonterminals(work, d->modulator, &cuts);
  for (const auto& e : cuts) rep.record(e);
  if (rep.apply(rr_stop(work), work)) return finish();
  auto rule = [r, threshold](const Instance& in, const std::vector<int>& M) {
    return rule_paths_subtsp(in, M, r, threshold);
  };
  if (detail::marking_fixpoint(work, rep, rule)) return finish();
  rep.apply(compress_weights(work), work);
  return finish();
}

}  // namespace tspk
