#pragma once

#include <array>
#include <random>

#include "oracle.hpp"
#include "structure.hpp"

namespace tspk {

// Plain simple graph, input side of the Hamiltonian path compositions.
struct HpGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

inline bool has_hamiltonian_path(const HpGraph& g) {
  if (g.n > 10) throw ScaleError("hamiltonian path check is exhaustive; at most 10 vertices");
  if (g.n <= 1) return true;
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(g.n), std::vector<bool>(static_cast<std::size_t>(g.n)));
  for (auto [a, b] : g.edges) adj[a][b] = adj[b][a] = true;
  std::vector<int> perm(static_cast<std::size_t>(g.n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 1; i < g.n && ok; ++i) ok = adj[perm[i - 1]][perm[i]];
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

namespace detail {

inline int common_size(const std::vector<HpGraph>& graphs) {
  if (graphs.empty()) throw PreconditionError("composition needs at least one graph");
  for (const auto& g : graphs)
    if (g.n != graphs.front().n) throw PreconditionError("composed graphs must share the vertex count");
  if (graphs.front().n < 1) throw PreconditionError("composed graphs need vertices");
  return graphs.front().n;
}

inline void add_copies(std::vector<Edge>& edges, const std::vector<HpGraph>& graphs, int k) {
  for (std::size_t i = 0; i < graphs.size(); ++i)
    for (auto [a, b] : graphs[i].edges) {
      if (a == b || a < 0 || b < 0 || a >= k || b >= k) throw PreconditionError("bad edge in composed graph");
      edges.push_back({static_cast<int>(i) * k + a, static_cast<int>(i) * k + b, 1, Capacity::unbounded});
    }
}

}  // namespace detail

// Disjoint union plus one apex joined to everything.
inline Instance compose_fn(const std::vector<HpGraph>& graphs) {
  const int k = detail::common_size(graphs);
  const int t = static_cast<int>(graphs.size());
  std::vector<Edge> edges;
  detail::add_copies(edges, graphs, k);
  const int apex = t * k;
  for (int v = 0; v < apex; ++v) edges.push_back({apex, v, 1, Capacity::unbounded});
  return make_instance(ProblemKind::tsp, apex + 1, std::move(edges), {}, static_cast<Weight>(t) * (k + 1));
}

// Disjoint union plus connectors v_i joined to copies i and i+1 (cyclically).
inline Instance compose_degtw(const std::vector<HpGraph>& graphs) {
  const int k = detail::common_size(graphs);
  const int t = static_cast<int>(graphs.size());
  std::vector<Edge> edges;
  detail::add_copies(edges, graphs, k);
  for (int i = 0; i < t; ++i) {
    const int v = t * k + i;
    std::set<int> copies = {i, (i + 1) % t};
    for (int c : copies)
      for (int u = 0; u < k; ++u) edges.push_back({v, c * k + u, 1, Capacity::unbounded});
  }
  return make_instance(ProblemKind::tsp, t * k + t, std::move(edges), {}, static_cast<Weight>(t) * (k + 1));
}

// Incremental subset TSP construction with unit weights.
struct GadgetBuilder {
  int vertex_count = 0;
  std::vector<Edge> edges;
  std::vector<int> terminals;

  int add_vertex(bool terminal) {
    if (terminal) terminals.push_back(vertex_count);
    return vertex_count++;
  }
  void add_edge(int a, int b) { edges.push_back({a, b, 1, Capacity::unbounded}); }

  Instance build(Weight budget) const {
    return make_instance(ProblemKind::subset_tsp, vertex_count, edges, terminals, budget);
  }
};

struct SelectionGadget {
  std::vector<std::array<int, 2>> ports;  // ports[i][b] = x_i^b
  std::vector<int> apex;
};

struct CycleGadget {
  std::vector<std::array<int, 3>> triplets;
};

inline SelectionGadget add_selection_gadget(GadgetBuilder& b, int length) {
  if (length < 3) throw PreconditionError("selection gadget needs length at least 3");
  SelectionGadget s;
  for (int i = 0; i < length; ++i) {
    int x0 = b.add_vertex(false), x1 = b.add_vertex(false), star = b.add_vertex(true);
    b.add_edge(x0, star);
    b.add_edge(x1, star);
    s.ports.push_back({x0, x1});
    s.apex.push_back(star);
  }
  for (int i = 0; i < length; ++i) {
    const int next = (i + 1) % length;
    b.add_edge(s.apex[i], s.ports[next][0]);
    b.add_edge(s.apex[i], s.ports[next][1]);
  }
  return s;
}

inline CycleGadget add_cycle_gadget(GadgetBuilder& b, int size) {
  if (size < 1) throw PreconditionError("cycle gadget needs size at least 1");
  CycleGadget c;
  std::vector<int> ring;
  for (int i = 0; i < size; ++i) {
    std::array<int, 3> t{};
    for (int& x : t) {
      x = b.add_vertex(true);
      ring.push_back(x);
    }
    c.triplets.push_back(t);
  }
  for (std::size_t i = 0; i < ring.size(); ++i) b.add_edge(ring[i], ring[(i + 1) % ring.size()]);
  return c;
}

inline void connect_triplet(GadgetBuilder& b, const CycleGadget& c, int i, int v) {
  b.add_edge(v, c.triplets.at(static_cast<std::size_t>(i))[0]);
  b.add_edge(v, c.triplets.at(static_cast<std::size_t>(i))[1]);
}

inline Instance selection_gadget(int length) {
  GadgetBuilder b;
  add_selection_gadget(b, length);
  return b.build(2 * static_cast<Weight>(length));
}

inline Instance cycle_gadget(int size) {
  GadgetBuilder b;
  add_cycle_gadget(b, size);
  return b.build(3 * static_cast<Weight>(size));
}

// Colors 0..k-1, each with N vertices; edges as (i, a, i', a').
struct MccInstance {
  int k = 0;
  int N = 0;
  std::vector<std::array<int, 4>> edges;

  bool adjacent(int i, int a, int j, int b) const {
    for (const auto& e : edges)
      if ((e[0] == i && e[1] == a && e[2] == j && e[3] == b) || (e[0] == j && e[1] == b && e[2] == i && e[3] == a))
        return true;
    return false;
  }
};

// Pads every color class to a power of two; the padding vertices stay isolated.
inline MccInstance make_mcc(int k, int n, std::vector<std::array<int, 4>> edges) {
  if (k < 1 || n < 1) throw PreconditionError("mcc needs k >= 1 and n >= 1");
  MccInstance m{k, static_cast<int>(std::bit_ceil(static_cast<unsigned>(n))), {}};
  std::set<std::array<int, 4>> seen;
  for (auto e : edges) {
    if (e[0] == e[2]) throw PreconditionError("mcc edges must join different colors");
    for (int c : {e[0], e[2]})
      if (c < 0 || c >= k) throw PreconditionError("color out of range");
    for (int a : {e[1], e[3]})
      if (a < 0 || a >= n) throw PreconditionError("vertex out of range");
    if (e[0] > e[2]) e = {e[2], e[3], e[0], e[1]};
    if (seen.insert(e).second) m.edges.push_back(e);
  }
  return m;
}

inline MccInstance random_mcc(int k, int n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::array<int, 4>> edges;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < density) edges.push_back({i, a, j, b});
  return make_mcc(k, n, std::move(edges));
}

inline bool has_multicolored_clique(const MccInstance& m) {
  std::vector<int> pick(static_cast<std::size_t>(m.k), 0);
  for (;;) {
    bool ok = true;
    for (int i = 0; i < m.k && ok; ++i)
      for (int j = i + 1; j < m.k && ok; ++j) ok = m.adjacent(i, pick[i], j, pick[j]);
    if (ok) return true;
    int i = 0;
    while (i < m.k && pick[i] == m.N - 1) pick[i++] = 0;
    if (i == m.k) return false;
    ++pick[i];
  }
}

// bit j of y, j counted from 1 at the least significant end
inline int bit(int y, int j) { return (y >> (j - 1)) & 1; }

inline Instance mcc_to_subtsp(const MccInstance& m) {
  const int logn = std::countr_zero(static_cast<unsigned>(m.N));
  if (m.N < 1 || (1 << logn) != m.N) throw PreconditionError("class size must be a power of two");
  if (m.k * logn < 3) throw PreconditionError("selection gadget needs k log N >= 3");
  GadgetBuilder b;
  const auto sel = add_selection_gadget(b, m.k * logn);
  auto port = [&](int color, int j, int value) { return sel.ports[color * logn + (j - 1)][value]; };
  Weight nonedges = 0;
  for (int i = 0; i < m.k; ++i)
    for (int i2 = i + 1; i2 < m.k; ++i2)
      for (int a = 0; a < m.N; ++a)
        for (int a2 = 0; a2 < m.N; ++a2) {
          if (m.adjacent(i, a, i2, a2)) continue;
          ++nonedges;
          const auto c = add_cycle_gadget(b, 2 * logn);
          for (int j = 1; j <= logn; ++j) {
            connect_triplet(b, c, j - 1, port(i, j, 1 - bit(a, j)));
            connect_triplet(b, c, logn + j - 1, port(i2, j, 1 - bit(a2, j)));
          }
        }
  const Weight budget = 2 * static_cast<Weight>(m.k) * logn + (6 * static_cast<Weight>(logn) + 1) * nonedges;
  auto out = b.build(budget);
  // the third vertex of every triplet keeps degree two
  const auto deg = degrees(out);
  for (int v = 0; v < out.vertex_count; ++v)
    if (out.is_waypoint(v) && deg[v] < 2) throw Error("gadget wiring left a terminal of degree below two");
  return out;
}

enum class PlantedRegime { fes, vertex_cover, components, paths };

inline std::optional<PlantedRegime> planted_regime_from_name(std::string_view s) {
  if (s == "fes") return PlantedRegime::fes;
  if (s == "vc") return PlantedRegime::vertex_cover;
  if (s == "components") return PlantedRegime::components;
  if (s == "paths") return PlantedRegime::paths;
  return std::nullopt;
}

struct PlantedParams {
  ProblemKind kind = ProblemKind::tsp;
  PlantedRegime regime = PlantedRegime::vertex_cover;
  int k = 2;  // modulator size, or feedback edge count for fes
  int r = 1;
  int n = 10;
  Weight wmin = 1;
  Weight wmax = 9;
  std::uint64_t seed = 1;
};

// Random instance with a planted structure. Vertex modulators are stored as the
// hint. The budget is the optimum when an oracle engine covers the instance,
// otherwise twice a spanning tree.
inline Instance gen_planted(const PlantedParams& p, const OracleLimits& limits = {}) {
  if (p.n < 2 || p.k < 0 || p.r < 1 || p.wmin < 0 || p.wmax < p.wmin)
    throw PreconditionError("inconsistent generator parameters");
  if (p.regime != PlantedRegime::fes && (p.k < 1 || p.k >= p.n))
    throw PreconditionError("modulator size must be between 1 and n-1");
  std::mt19937_64 rng(p.seed);
  auto pick = [&](int lo, int hi) { return static_cast<int>(lo + rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  auto weight = [&]() { return p.wmin + static_cast<Weight>(rng() % static_cast<std::uint64_t>(p.wmax - p.wmin + 1)); };
  auto cap = [&]() {
    if (p.kind != ProblemKind::wrp) return Capacity::unbounded;
    return rng() % 4 == 0 ? Capacity::one : Capacity::two;
  };
  std::vector<int> id(static_cast<std::size_t>(p.n));
  std::iota(id.begin(), id.end(), 0);
  std::shuffle(id.begin(), id.end(), rng);
  std::vector<Edge> edges;
  auto add = [&](int a, int b) { edges.push_back({id[a], id[b], weight(), cap()}); };
  std::optional<std::vector<int>> hint;

  if (p.regime == PlantedRegime::fes) {
    // long-path tree: each new vertex usually extends the previous one
    for (int v = 1; v < p.n; ++v) add(rng() % 4 ? v - 1 : pick(0, v - 1), v);
    std::set<std::pair<int, int>> used;
    for (const auto& e : edges) used.insert(std::minmax(e.u, e.v));
    int extra = 0;
    for (int guard = 0; extra < p.k && guard < 100 * (p.k + 1); ++guard) {
      int a = pick(0, p.n - 1), b = pick(0, p.n - 1);
      if (a == b || used.count(std::minmax(id[a], id[b]))) continue;
      used.insert(std::minmax(id[a], id[b]));
      add(a, b);
      ++extra;
    }
    if (extra < p.k) throw PreconditionError("too many feedback edges for n");
  } else {
    const int k = p.k;
    for (int i = 1; i < k; ++i) add(pick(0, i - 1), i);  // keeps M connected
    const int cap_size = p.regime == PlantedRegime::vertex_cover ? 1 : p.r;
    for (int v = k; v < p.n;) {
      const int size = std::min(pick(1, cap_size), p.n - v);
      for (int j = 1; j < size; ++j)
        add(p.regime == PlantedRegime::paths ? v + j - 1 : v + pick(0, j - 1), v + j);
      if (p.regime == PlantedRegime::components && size >= 3 && rng() % 3 == 0) add(v, v + size - 1);
      const int legs = pick(1, std::min(3, k + 1));
      for (int j = 0; j < legs; ++j) add(v + pick(0, size - 1), pick(0, k - 1));
      v += size;
    }
    std::vector<int> m;
    for (int i = 0; i < k; ++i) m.push_back(id[i]);
    std::sort(m.begin(), m.end());
    hint = m;
  }

  // capacity one only on cycle edges; a capacity-one bridge usually makes the instance infeasible
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].capacity != Capacity::one) continue;
    UnionFind uf(p.n);
    for (std::size_t j = 0; j < edges.size(); ++j)
      if (j != i) uf.unite(edges[j].u, edges[j].v);
    if (uf.find(edges[i].u) != uf.find(edges[i].v)) edges[i].capacity = Capacity::two;
  }

  std::vector<int> w;
  for (int v = 0; v < p.n; ++v)
    if (rng() % 3) w.push_back(v);
  if (w.size() < 2) w = {id[0], id[p.n - 1]};
  Instance in = make_instance(p.kind, p.n, std::move(edges), w, 0);
  in.modulator_hint = hint;

  try {
    auto res = solve(in, limits);
    in.budget = res.opt_weight ? *res.opt_weight : 0;
  } catch (const ScaleError&) {
    // twice a minimum spanning tree
    std::vector<int> order(static_cast<std::size_t>(in.edge_count()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return in.edges[a].weight < in.edges[b].weight; });
    UnionFind uf(in.vertex_count);
    Weight tree = 0;
    for (int e : order)
      if (uf.unite(in.edges[e].u, in.edges[e].v)) tree = checked_add(tree, in.edges[e].weight);
    in.budget = checked_mul(2, tree);
  }
  return in;
}

}  // namespace tspk
