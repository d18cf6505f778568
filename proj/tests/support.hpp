#pragma once

#include <algorithm>
#include <random>

#include "tspk/certificate.hpp"
#include "tspk/instance.hpp"

namespace tspk::fixtures {

// Naive optimum over every vector in {0,1,2}^m; independent of the library engines.
inline std::optional<Weight> brute_force_opt(const Instance& in) {
  if (in.waypoint_count() <= 1) return 0;
  const int m = in.edge_count();
  std::vector<int> mult(static_cast<std::size_t>(m), 0);
  std::optional<Weight> best;
  while (true) {
    bool ok = true;
    std::vector<int> deg(static_cast<std::size_t>(in.vertex_count), 0);
    Weight w = 0;
    for (int i = 0; i < m && ok; ++i) {
      if (in.edges[i].capacity == Capacity::one && mult[i] > 1) ok = false;
      deg[in.edges[i].u] += mult[i];
      deg[in.edges[i].v] += mult[i];
      w += mult[i] * in.edges[i].weight;
    }
    if (ok) {
      // connectivity by repeated relaxation
      std::vector<int> comp(static_cast<std::size_t>(in.vertex_count));
      for (int v = 0; v < in.vertex_count; ++v) comp[v] = v;
      for (bool changed = true; changed;) {
        changed = false;
        for (int i = 0; i < m; ++i) {
          if (!mult[i]) continue;
          int a = in.edges[i].u, b = in.edges[i].v;
          int lo = std::min(comp[a], comp[b]);
          if (comp[a] != lo || comp[b] != lo) comp[a] = comp[b] = lo, changed = true;
        }
      }
      int root = -1;
      for (int v = 0; v < in.vertex_count && ok; ++v) {
        if (deg[v] % 2) ok = false;
        else if (deg[v] == 0) ok = !in.is_waypoint(v);
        else if (root < 0) root = comp[v];
        else if (comp[v] != root) ok = false;
      }
      if (ok && root >= 0 && (!best || w < *best)) best = w;
    }
    int i = 0;
    while (i < m && mult[i] == 2) mult[i++] = 0;
    if (i == m) break;
    ++mult[i];
  }
  return best;
}

inline bool brute_force_feasible(const Instance& in) {
  if (in.budget < 0) return false;
  auto o = brute_force_opt(in);
  return o && *o <= in.budget;
}

// Connected random multigraph instance.
inline Instance random_instance(std::mt19937_64& rng, ProblemKind kind, int n, int m, Weight wmax,
                                bool allow_parallel = true) {
  auto pick = [&](int lo, int hi) { return static_cast<int>(lo + rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v) edges.push_back({pick(0, v - 1), v, pick(0, static_cast<int>(wmax)), Capacity::two});
  int guard = 0;
  while (static_cast<int>(edges.size()) < m && guard++ < 1000) {
    int a = pick(0, n - 1), b = pick(0, n - 1);
    if (a == b) continue;
    bool dup = false;
    for (const auto& e : edges) dup |= (e.u == a && e.v == b) || (e.u == b && e.v == a);
    if (dup && !allow_parallel) continue;
    edges.push_back({a, b, pick(0, static_cast<int>(wmax)), Capacity::two});
  }
  if (kind == ProblemKind::wrp)
    for (auto& e : edges) e.capacity = rng() % 3 == 0 ? Capacity::one : Capacity::two;
  std::vector<int> w;
  for (int v = 0; v < n; ++v)
    if (rng() % 2) w.push_back(v);
  if (w.size() < 2) w = {0, n - 1};
  return make_instance(kind, n, edges, w, 0);
}

// Instance whose first k vertices (after a shuffle) cover every edge. Vertices
// outside the cover mostly hang off one cover vertex, so marking rules fire.
struct CoverInstance {
  Instance instance;
  std::vector<int> cover;
};

inline CoverInstance random_cover_instance(std::mt19937_64& rng, ProblemKind kind, int k, int rest, int m_max,
                                           Weight wmax) {
  auto pick = [&](int lo, int hi) { return static_cast<int>(lo + rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  const int n = k + rest;
  std::vector<int> id(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) id[i] = i;
  std::shuffle(id.begin(), id.end(), rng);
  std::vector<Edge> edges;
  auto cap = [&]() {
    if (kind != ProblemKind::wrp) return Capacity::unbounded;
    return rng() % 3 == 0 ? Capacity::one : Capacity::two;
  };
  for (int i = 1; i < k; ++i)
    if (rng() % 2) edges.push_back({id[pick(0, i - 1)], id[i], pick(0, static_cast<int>(wmax)), cap()});
  for (int j = k; j < n && static_cast<int>(edges.size()) < m_max; ++j) {
    int deg = rng() % 4 == 0 ? 2 : 1;
    if (kind == ProblemKind::wrp && rng() % 5 == 0) deg = 3;
    for (int d = 0; d < deg && static_cast<int>(edges.size()) < m_max; ++d)
      edges.push_back({id[pick(0, k - 1)], id[j], pick(0, static_cast<int>(wmax)), deg == 1 ? Capacity::two : cap()});
  }
  std::vector<int> w;
  for (int v = 0; v < n; ++v)
    if (kind == ProblemKind::tsp || rng() % 3 != 0) w.push_back(v);
  if (w.size() < 2) w = {id[0], id[n - 1]};
  CoverInstance out{make_instance(kind, n, edges, w, 0), {}};
  for (int i = 0; i < k; ++i) out.cover.push_back(id[i]);
  std::sort(out.cover.begin(), out.cover.end());
  return out;
}

struct ModInstance {
  Instance instance;
  std::vector<int> modulator;
};

// k modulator vertices and components of at most r vertices hanging off them.
// Paths keep each component a simple path.
inline ModInstance modulator_instance(std::mt19937_64& rng, ProblemKind kind, int k, int r, bool paths, int comps,
                               Weight wmax) {
  auto pick = [&](int lo, int hi) { return static_cast<int>(lo + rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  std::vector<std::vector<int>> parts;
  int n = k;
  for (int i = 0; i < comps; ++i) {
    int size = pick(1, r);
    parts.emplace_back();
    for (int j = 0; j < size; ++j) parts.back().push_back(n++);
  }
  std::vector<int> id(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) id[i] = i;
  std::shuffle(id.begin(), id.end(), rng);
  std::vector<Edge> edges;
  auto add = [&](int a, int b) { edges.push_back({id[a], id[b], pick(0, static_cast<int>(wmax)), Capacity::unbounded}); };
  for (int i = 1; i < k; ++i)
    if (rng() % 2) add(pick(0, i - 1), i);
  for (const auto& p : parts) {
    for (std::size_t j = 1; j < p.size(); ++j) add(paths ? p[j - 1] : p[pick(0, static_cast<int>(j) - 1)], p[j]);
    if (!paths && p.size() >= 3 && rng() % 3 == 0) add(p[0], p[p.size() - 1]);
    int legs = pick(1, 2);
    for (int j = 0; j < legs; ++j) add(p[pick(0, static_cast<int>(p.size()) - 1)], pick(0, k - 1));
  }
  std::vector<int> w;
  for (int v = 0; v < n; ++v)
    if (v >= k || rng() % 2) w.push_back(id[v]);
  ModInstance out{make_instance(kind, n, edges, w, 0), {}};
  for (int i = 0; i < k; ++i) out.modulator.push_back(id[i]);
  std::sort(out.modulator.begin(), out.modulator.end());
  return out;
}

}  // namespace tspk::fixtures
