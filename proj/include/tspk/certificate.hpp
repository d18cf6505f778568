#pragma once

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "instance.hpp"

namespace tspk {

struct SolutionMultigraph {
  std::vector<int> multiplicity;
  Weight total_weight = 0;

  int traversals() const {
    int s = 0;
    for (int x : multiplicity) s += x;
    return s;
  }
  bool operator==(const SolutionMultigraph&) const = default;
};

inline SolutionMultigraph make_solution(const Instance& in, std::vector<int> multiplicity) {
  if (static_cast<int>(multiplicity.size()) != in.edge_count())
    throw PreconditionError("multiplicity vector length differs from edge count");
  SolutionMultigraph s{std::move(multiplicity), 0};
  for (int i = 0; i < in.edge_count(); ++i)
    s.total_weight = checked_add(s.total_weight, checked_mul(s.multiplicity[i], in.edges[i].weight));
  return s;
}

struct OptResult {
  bool feasible = false;
  std::optional<Weight> opt_weight;
  std::optional<SolutionMultigraph> witness;
  std::string engine;
};

// Caps for the exact engines; overridable through the environment.
struct OracleLimits {
  int max_edges = 14;
  int max_waypoints = 18;
  int max_width = 16;

  static OracleLimits from_env() {
    OracleLimits l;
    auto read = [](const char* name, int& slot) {
      if (const char* s = std::getenv(name)) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v > 0 && v < 1000) slot = static_cast<int>(v);
      }
    };
    read("TSPK_MAX_EDGES", l.max_edges);
    read("TSPK_MAX_WAYPOINTS", l.max_waypoints);
    read("TSPK_MAX_WIDTH", l.max_width);
    return l;
  }
};

namespace detail {

inline OptResult trivial_result(const Instance& in, const char* engine) {
  OptResult r;
  r.engine = engine;
  r.opt_weight = 0;
  r.witness = make_solution(in, std::vector<int>(static_cast<std::size_t>(in.edge_count()), 0));
  r.feasible = in.budget >= 0;
  return r;
}

}  // namespace detail

// Certificate predicate without the budget: capacities, even degrees, connected
// support that covers every waypoint (or the empty walk when |W| <= 1).
inline bool structurally_valid(const Instance& in, const std::vector<int>& mult) {
  if (static_cast<int>(mult.size()) != in.edge_count())
    throw PreconditionError("multiplicity vector length differs from edge count");
  std::vector<int> deg(static_cast<std::size_t>(in.vertex_count), 0);
  UnionFind uf(in.vertex_count);
  bool empty = true;
  for (int i = 0; i < in.edge_count(); ++i) {
    if (mult[i] < 0 || !admits(in.edges[i].capacity, mult[i])) return false;
    if (mult[i] == 0) continue;
    empty = false;
    deg[in.edges[i].u] += mult[i];
    deg[in.edges[i].v] += mult[i];
    uf.unite(in.edges[i].u, in.edges[i].v);
  }
  if (empty) return in.waypoint_count() <= 1;
  int root = -1;
  for (int v = 0; v < in.vertex_count; ++v) {
    if (deg[v] % 2 != 0) return false;
    if (deg[v] == 0) {
      if (in.is_waypoint(v)) return false;
      continue;
    }
    if (root < 0) root = uf.find(v);
    else if (uf.find(v) != root) return false;
  }
  return true;
}

inline bool check_certificate(const Instance& in, const SolutionMultigraph& sol) {
  if (!structurally_valid(in, sol.multiplicity)) return false;
  return make_solution(in, sol.multiplicity).total_weight <= in.budget;
}

// Plain multigraph used for cycle extraction.
struct Multigraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> ends;
  std::vector<int> multiplicity;

  static Multigraph of(const Instance& in, const std::vector<int>& mult) {
    Multigraph g;
    g.vertex_count = in.vertex_count;
    for (const auto& e : in.edges) g.ends.emplace_back(e.u, e.v);
    g.multiplicity = mult;
    return g;
  }
};

inline std::vector<int> multigraph_components(const Multigraph& g) {
  UnionFind uf(g.vertex_count);
  for (std::size_t i = 0; i < g.ends.size(); ++i)
    if (g.multiplicity[i] > 0) uf.unite(g.ends[i].first, g.ends[i].second);
  std::vector<int> out(static_cast<std::size_t>(g.vertex_count));
  for (int v = 0; v < g.vertex_count; ++v) out[v] = uf.find(v);
  return out;
}

// A cycle whose removal keeps the component partition. Needs more than
// 2|V| - 2 edge occurrences: a spanning forest takes at most |V| - 1 of them and
// the remainder still has more edges than a forest can hold.
inline EdgeMultiset find_component_preserving_cycle(const Multigraph& g) {
  int total = 0;
  for (int x : g.multiplicity) total += x;
  if (total <= 2 * g.vertex_count - 2)
    throw PreconditionError("multigraph needs more than 2|V|-2 edge occurrences");

  UnionFind forest(g.vertex_count);
  std::vector<std::pair<int, int>> rest;  // (edge, copy) left after the forest
  for (std::size_t i = 0; i < g.ends.size(); ++i) {
    for (int c = 0; c < g.multiplicity[i]; ++c) {
      if (c == 0 && forest.unite(g.ends[i].first, g.ends[i].second)) continue;
      rest.emplace_back(static_cast<int>(i), c);
    }
  }
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.vertex_count));
  for (std::size_t k = 0; k < rest.size(); ++k) {
    adj[g.ends[rest[k].first].first].push_back(static_cast<int>(k));
    adj[g.ends[rest[k].first].second].push_back(static_cast<int>(k));
  }
  std::vector<int> state(static_cast<std::size_t>(g.vertex_count), 0);  // 0 new, 1 open, 2 closed
  std::vector<int> parent_copy(static_cast<std::size_t>(g.vertex_count), -1);
  std::vector<int> parent(static_cast<std::size_t>(g.vertex_count), -1);
  std::vector<std::size_t> next(static_cast<std::size_t>(g.vertex_count), 0);

  for (int s = 0; s < g.vertex_count; ++s) {
    if (state[s] != 0) continue;
    std::vector<int> stack{s};
    state[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      if (next[v] == adj[v].size()) {
        state[v] = 2;
        stack.pop_back();
        continue;
      }
      int k = adj[v][next[v]++];
      if (k == parent_copy[v]) continue;
      const auto [a, b] = g.ends[rest[k].first];
      int w = a == v ? b : a;
      if (state[w] == 0) {
        state[w] = 1;
        parent[w] = v;
        parent_copy[w] = k;
        stack.push_back(w);
      } else if (state[w] == 1) {
        EdgeMultiset cycle;
        cycle.add(rest[k].first);
        for (int x = v; x != w; x = parent[x]) cycle.add(rest[parent_copy[x]].first);
        return cycle;
      }
    }
  }
  throw Error("no cycle found in the non-forest remainder");
}

// Normalizes a valid certificate to multiplicities <= 2 and at most 2n traversals.
inline SolutionMultigraph make_nice(const Instance& in, const SolutionMultigraph& sol) {
  if (!structurally_valid(in, sol.multiplicity)) throw PreconditionError("invalid certificate");
  auto mult = sol.multiplicity;
  for (auto& x : mult)
    while (x >= 3) x -= 2;
  auto g = Multigraph::of(in, mult);
  int total = 0;
  for (int x : mult) total += x;
  while (total > 2 * in.vertex_count) {
    auto cycle = find_component_preserving_cycle(g);
    for (const auto& [e, c] : cycle.items) {
      g.multiplicity[e] -= c;
      total -= c;
    }
  }
  return make_solution(in, g.multiplicity);
}

struct Walk {
  std::vector<int> vertices;  // closed walks repeat the start at the end
  std::vector<int> edges;
};

inline Walk eulerian_walk(const Instance& in, const std::vector<int>& mult, int start) {
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(in.vertex_count));
  std::vector<int> left;
  std::vector<int> copy_edge;
  for (int i = 0; i < in.edge_count(); ++i) {
    for (int c = 0; c < mult[i]; ++c) {
      int id = static_cast<int>(copy_edge.size());
      copy_edge.push_back(i);
      left.push_back(1);
      adj[in.edges[i].u].emplace_back(in.edges[i].v, id);
      adj[in.edges[i].v].emplace_back(in.edges[i].u, id);
    }
  }
  Walk w;
  if (copy_edge.empty()) {
    w.vertices.push_back(start);
    return w;
  }
  std::vector<std::size_t> ptr(static_cast<std::size_t>(in.vertex_count), 0);
  std::vector<std::pair<int, int>> stack{{start, -1}};
  std::vector<std::pair<int, int>> circuit;
  while (!stack.empty()) {
    int v = stack.back().first;
    while (ptr[v] < adj[v].size() && !left[adj[v][ptr[v]].second]) ++ptr[v];
    if (ptr[v] == adj[v].size()) {
      circuit.push_back(stack.back());
      stack.pop_back();
    } else {
      auto [to, id] = adj[v][ptr[v]];
      left[id] = 0;
      stack.emplace_back(to, id);
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  for (std::size_t i = 0; i < circuit.size(); ++i) {
    w.vertices.push_back(circuit[i].first);
    if (i > 0) w.edges.push_back(copy_edge[circuit[i].second]);
  }
  if (w.edges.size() != copy_edge.size()) throw PreconditionError("multigraph is not connected");
  return w;
}

// Cuts a closed walk at every visit of the modulator.
inline std::vector<Walk> split_into_segments(const Instance& in, const Walk& walk,
                                             const std::vector<int>& modulator) {
  std::vector<bool> in_mod(static_cast<std::size_t>(in.vertex_count), false);
  for (int v : modulator) in_mod[v] = true;
  if (walk.vertices.empty() || !in_mod[walk.vertices.front()])
    throw PreconditionError("walk must start at a modulator vertex");
  std::vector<Walk> out;
  Walk cur{{walk.vertices.front()}, {}};
  for (std::size_t i = 0; i < walk.edges.size(); ++i) {
    cur.edges.push_back(walk.edges[i]);
    cur.vertices.push_back(walk.vertices[i + 1]);
    if (in_mod[walk.vertices[i + 1]]) {
      out.push_back(cur);
      cur = Walk{{walk.vertices[i + 1]}, {}};
    }
  }
  if (!cur.edges.empty()) out.push_back(cur);
  return out;
}

// Edges of the segments that are first to reach some vertex of the component.
inline EdgeMultiset solution_component_behavior(const Instance& in, const Walk& walk,
                                                const std::vector<int>& modulator,
                                                const std::vector<int>& component) {
  std::vector<bool> in_comp(static_cast<std::size_t>(in.vertex_count), false);
  for (int v : component) in_comp[v] = true;
  std::vector<bool> seen(static_cast<std::size_t>(in.vertex_count), false);
  EdgeMultiset out;
  for (const auto& seg : split_into_segments(in, walk, modulator)) {
    bool fresh = false;
    for (int v : seg.vertices)
      if (in_comp[v] && !seen[v]) fresh = true;
    for (int v : seg.vertices) seen[v] = true;
    if (!fresh) continue;
    for (int e : seg.edges) out.add(e);
  }
  return out;
}

}  // namespace tspk
