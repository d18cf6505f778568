#pragma once

#include <functional>
#include <queue>

#include "certificate.hpp"

namespace tspk {

namespace detail {

// Edge order in which every vertex gets closed as early as possible, so the
// parity of a vertex can be forced on its last incident edge.
struct ClosingOrder {
  std::vector<int> order;
  std::vector<int> last;  // per vertex, position of its last edge, -1 if isolated
};

inline ClosingOrder closing_order(const Instance& in) {
  const auto inc = incidence(in);
  std::vector<int> pos(static_cast<std::size_t>(in.vertex_count), -1);
  int next = 0;
  for (int s = 0; s < in.vertex_count; ++s) {
    if (pos[s] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    pos[s] = next++;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int e : inc[v]) {
        int w = in.edges[e].other(v);
        if (pos[w] < 0) {
          pos[w] = next++;
          q.push(w);
        }
      }
    }
  }
  ClosingOrder co;
  co.order.resize(static_cast<std::size_t>(in.edge_count()));
  std::iota(co.order.begin(), co.order.end(), 0);
  std::sort(co.order.begin(), co.order.end(), [&](int a, int b) {
    const auto& x = in.edges[a];
    const auto& y = in.edges[b];
    auto kx = std::make_tuple(std::max(pos[x.u], pos[x.v]), std::min(pos[x.u], pos[x.v]), a);
    auto ky = std::make_tuple(std::max(pos[y.u], pos[y.v]), std::min(pos[y.u], pos[y.v]), b);
    return kx < ky;
  });
  co.last.assign(static_cast<std::size_t>(in.vertex_count), -1);
  for (int p = 0; p < in.edge_count(); ++p) {
    co.last[in.edges[co.order[p]].u] = p;
    co.last[in.edges[co.order[p]].v] = p;
  }
  return co;
}

// Depth-first search over multiplicity vectors in {0,1,2}^m (capacity-clipped).
// Calls visit(mult, weight) on every structurally valid vector whose weight does
// not exceed the current bound; visit returns the bound to continue with.
class MultiplicitySearch {
 public:
  explicit MultiplicitySearch(const Instance& in) : in_(in), co_(closing_order(in)) {}

  void run(Weight bound, const std::function<Weight(const std::vector<int>&, Weight)>& visit) {
    bound_ = bound;
    visit_ = &visit;
    mult_.assign(static_cast<std::size_t>(in_.edge_count()), 0);
    deg_.assign(static_cast<std::size_t>(in_.vertex_count), 0);
    for (int v = 0; v < in_.vertex_count; ++v)
      if (co_.last[v] < 0 && in_.is_waypoint(v)) return;  // isolated waypoint, |W| >= 2 assumed
    dfs(0, 0);
  }

 private:
  bool closes_ok(int v, int p) const {
    if (co_.last[v] != p) return true;
    if (deg_[v] % 2 != 0) return false;
    return deg_[v] > 0 || !in_.is_waypoint(v);
  }

  void dfs(int p, Weight cost) {
    if (cost > bound_) return;
    if (p == in_.edge_count()) {
      if (connected()) bound_ = (*visit_)(mult_, cost);
      return;
    }
    const int e = co_.order[p];
    const auto& edge = in_.edges[e];
    const int top = nice_limit(edge.capacity);
    for (int x = 0; x <= top; ++x) {
      mult_[e] = x;
      deg_[edge.u] += x;
      deg_[edge.v] += x;
      if (closes_ok(edge.u, p) && closes_ok(edge.v, p)) dfs(p + 1, cost + x * edge.weight);
      deg_[edge.u] -= x;
      deg_[edge.v] -= x;
      if (cost + (x + 1) * edge.weight > bound_) break;
    }
    mult_[e] = 0;
  }

  bool connected() const {
    UnionFind uf(in_.vertex_count);
    bool any = false;
    for (int i = 0; i < in_.edge_count(); ++i) {
      if (mult_[i] == 0) continue;
      any = true;
      uf.unite(in_.edges[i].u, in_.edges[i].v);
    }
    if (!any) return false;
    int root = -1;
    for (int v = 0; v < in_.vertex_count; ++v) {
      if (deg_[v] == 0) continue;
      if (root < 0) root = uf.find(v);
      else if (uf.find(v) != root) return false;
    }
    return true;
  }

  const Instance& in_;
  ClosingOrder co_;
  std::vector<int> mult_;
  std::vector<int> deg_;
  Weight bound_ = 0;
  const std::function<Weight(const std::vector<int>&, Weight)>* visit_ = nullptr;
};

}  // namespace detail

inline OptResult solve_exact_multiplicity(const Instance& in, const OracleLimits& limits = {}) {
  if (in.waypoint_count() <= 1) return detail::trivial_result(in, "multiplicity");
  if (in.edge_count() > limits.max_edges)
    throw ScaleError("oracle scale exceeded: " + std::to_string(in.edge_count()) + " edges, cap " +
                     std::to_string(limits.max_edges));
  OptResult r;
  r.engine = "multiplicity";
  std::vector<int> best;
  Weight best_weight = kInfinity;
  detail::MultiplicitySearch search(in);
  search.run(kInfinity - 1, [&](const std::vector<int>& mult, Weight w) {
    best = mult;
    best_weight = w;
    return w - 1;
  });
  if (best_weight == kInfinity) return r;
  r.opt_weight = best_weight;
  r.witness = make_solution(in, best);
  r.feasible = best_weight <= in.budget;
  return r;
}

// Every valid multiplicity vector (entries at most 2) of weight <= max_weight.
inline std::vector<SolutionMultigraph> enumerate_solutions(const Instance& in, Weight max_weight,
                                                           const OracleLimits& limits = {}) {
  if (in.edge_count() > limits.max_edges)
    throw ScaleError("oracle scale exceeded: " + std::to_string(in.edge_count()) + " edges");
  std::vector<SolutionMultigraph> out;
  if (in.waypoint_count() <= 1 && max_weight >= 0)
    out.push_back(make_solution(in, std::vector<int>(static_cast<std::size_t>(in.edge_count()), 0)));
  detail::MultiplicitySearch search(in);
  search.run(max_weight, [&](const std::vector<int>& mult, Weight) {
    out.push_back(make_solution(in, mult));
    return max_weight;
  });
  return out;
}

inline OptResult solve_heldkarp(const Instance& in, const OracleLimits& limits = {}) {
  if (in.kind == ProblemKind::wrp) throw Error("capacities unsupported by this engine");
  if (in.waypoint_count() <= 1) return detail::trivial_result(in, "held-karp");
  const auto W = in.waypoints();
  const int t = static_cast<int>(W.size());
  if (t > limits.max_waypoints)
    throw ScaleError("oracle scale exceeded: " + std::to_string(t) + " waypoints, cap " +
                     std::to_string(limits.max_waypoints));

  // Shortest paths from each waypoint, with the tree edge used to reach each vertex.
  const auto inc = incidence(in);
  std::vector<std::vector<Weight>> dist(static_cast<std::size_t>(t));
  std::vector<std::vector<int>> via(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) {
    auto& d = dist[i];
    auto& p = via[i];
    d.assign(static_cast<std::size_t>(in.vertex_count), kInfinity);
    p.assign(static_cast<std::size_t>(in.vertex_count), -1);
    using Item = std::pair<Weight, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[W[i]] = 0;
    pq.emplace(0, W[i]);
    while (!pq.empty()) {
      auto [dv, v] = pq.top();
      pq.pop();
      if (dv != d[v]) continue;
      for (int e : inc[v]) {
        int w = in.edges[e].other(v);
        Weight nd = checked_add(dv, in.edges[e].weight);
        if (nd < d[w]) {
          d[w] = nd;
          p[w] = e;
          pq.emplace(nd, w);
        }
      }
    }
  }
  OptResult r;
  r.engine = "held-karp";
  for (int i = 1; i < t; ++i)
    if (dist[0][W[i]] == kInfinity) return r;

  // dp[mask][j]: cheapest walk from W[0] through the set mask of W[1..t-1], ending at W[j+1].
  const int k = t - 1;
  const std::size_t full = (std::size_t{1} << k);
  std::vector<Weight> dp(full * static_cast<std::size_t>(k), kInfinity);
  auto at = [&](std::size_t mask, int j) -> Weight& { return dp[mask * k + j]; };
  for (int j = 0; j < k; ++j) at(std::size_t{1} << j, j) = dist[0][W[j + 1]];
  for (std::size_t mask = 1; mask < full; ++mask) {
    for (int j = 0; j < k; ++j) {
      if (!(mask >> j & 1)) continue;
      Weight cur = at(mask, j);
      if (cur == kInfinity) continue;
      for (int nx = 0; nx < k; ++nx) {
        if (mask >> nx & 1) continue;
        Weight nd = cur + dist[j + 1][W[nx + 1]];
        auto& slot = at(mask | (std::size_t{1} << nx), nx);
        if (nd < slot) slot = nd;
      }
    }
  }
  Weight best = kInfinity;
  int last = -1;
  for (int j = 0; j < k; ++j) {
    Weight v = at(full - 1, j) + dist[j + 1][W[0]];
    if (v < best) {
      best = v;
      last = j;
    }
  }

  // Recover the tour order, then expand each leg into edges.
  std::vector<int> tour;  // indices into W, excluding the start
  std::size_t mask = full - 1;
  int j = last;
  while (j >= 0) {
    tour.push_back(j + 1);
    std::size_t prev_mask = mask & ~(std::size_t{1} << j);
    int prev = -1;
    if (prev_mask != 0) {
      for (int i = 0; i < k; ++i) {
        if (!(prev_mask >> i & 1)) continue;
        if (at(prev_mask, i) != kInfinity && at(prev_mask, i) + dist[i + 1][W[j + 1]] == at(mask, j)) {
          prev = i;
          break;
        }
      }
    }
    mask = prev_mask;
    j = prev;
  }
  std::reverse(tour.begin(), tour.end());
  std::vector<int> mult(static_cast<std::size_t>(in.edge_count()), 0);
  auto add_leg = [&](int from, int to) {
    for (int v = W[to]; v != W[from];) {
      int e = via[from][v];
      ++mult[e];
      v = in.edges[e].other(v);
    }
  };
  int prev = 0;
  for (int x : tour) {
    add_leg(prev, x);
    prev = x;
  }
  add_leg(prev, 0);
  r.witness = make_nice(in, make_solution(in, mult));
  r.opt_weight = best;
  if (r.witness->total_weight != best) throw Error("held-karp witness weight mismatch");
  r.feasible = best <= in.budget;
  return r;
}

}  // namespace tspk
