#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "instance.hpp"

namespace tspk {

// Complement of a spanning forest, chosen greedily in edge order.
inline std::vector<int> compute_fes(const Instance& in) {
  UnionFind uf(in.vertex_count);
  std::vector<int> out;
  for (int i = 0; i < in.edge_count(); ++i)
    if (!uf.unite(in.edges[i].u, in.edges[i].v)) out.push_back(i);
  return out;
}

inline int feedback_edge_number(const Instance& in) {
  return static_cast<int>(compute_fes(in).size());
}

inline bool is_vertex_cover(const Instance& in, const std::vector<int>& cover) {
  std::vector<bool> in_cover(static_cast<std::size_t>(in.vertex_count), false);
  for (int v : cover) in_cover[v] = true;
  for (const auto& e : in.edges)
    if (!in_cover[e.u] && !in_cover[e.v]) return false;
  return true;
}

// Smallest vertex cover of size at most k_max, by branching on the first uncovered edge.
inline std::optional<std::vector<int>> compute_vc(const Instance& in, int k_max) {
  if (k_max < 0) throw PreconditionError("k_max must be nonnegative");
  std::vector<bool> chosen(static_cast<std::size_t>(in.vertex_count), false);
  std::function<bool(int)> branch = [&](int left) -> bool {
    int pick = -1;
    for (int i = 0; i < in.edge_count(); ++i) {
      const auto& e = in.edges[i];
      if (!chosen[e.u] && !chosen[e.v]) {
        pick = i;
        break;
      }
    }
    if (pick < 0) return true;
    if (left == 0) return false;
    for (int v : {in.edges[pick].u, in.edges[pick].v}) {
      chosen[v] = true;
      if (branch(left - 1)) return true;
      chosen[v] = false;
    }
    return false;
  };
  for (int size = 0; size <= k_max; ++size) {
    std::fill(chosen.begin(), chosen.end(), false);
    if (branch(size)) {
      std::vector<int> out;
      for (int v = 0; v < in.vertex_count; ++v)
        if (chosen[v]) out.push_back(v);
      return out;
    }
  }
  return std::nullopt;
}

struct Regime {
  enum class Kind { vertex_cover, components, paths };
  Kind kind = Kind::vertex_cover;
  int r = 1;

  static Regime vertex_cover() { return {Kind::vertex_cover, 1}; }
  static Regime components(int r) { return {Kind::components, r}; }
  static Regime paths(int r) { return {Kind::paths, r}; }

  std::string name() const {
    switch (kind) {
      case Kind::vertex_cover: return "vertex-cover";
      case Kind::components: return "components(" + std::to_string(r) + ")";
      case Kind::paths: return "paths(" + std::to_string(r) + ")";
    }
    return "?";
  }
  bool operator==(const Regime&) const = default;
};

struct ModulatorDecomposition {
  std::vector<int> modulator;
  // Components of G - M ordered by smallest vertex; path components list their
  // vertices in path order starting from the end with the smaller id.
  std::vector<std::vector<int>> components;
  Regime regime;
};

namespace detail {

struct ComponentScan {
  std::vector<std::vector<int>> components;
  std::vector<int> label;
};

inline ComponentScan scan_components(const Instance& in, const std::vector<bool>& in_modulator) {
  ComponentScan s;
  int count = 0;
  s.label = component_labels(in, &in_modulator, &count);
  s.components.resize(static_cast<std::size_t>(count));
  for (int v = 0; v < in.vertex_count; ++v)
    if (s.label[v] >= 0) s.components[s.label[v]].push_back(v);
  return s;
}

// Vertices of the component in breadth-first order from its smallest vertex.
inline std::vector<int> bfs_order(const Instance& in, const std::vector<std::vector<int>>& inc,
                                  const std::vector<int>& label, int start) {
  std::vector<int> order{start};
  std::set<int> seen{start};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int e : inc[order[i]]) {
      int w = in.edges[e].other(order[i]);
      if (label[w] == label[start] && seen.insert(w).second) order.push_back(w);
    }
  }
  return order;
}

// A vertex set any valid modulator extending the current one must hit, or
// empty when the current modulator already satisfies the regime.
inline std::vector<int> violation_witness(const Instance& in, const std::vector<bool>& in_modulator,
                                          Regime regime) {
  const auto inc = incidence(in);
  auto scan = scan_components(in, in_modulator);
  const int limit = regime.kind == Regime::Kind::vertex_cover ? 1 : regime.r;
  for (const auto& comp : scan.components) {
    if (static_cast<int>(comp.size()) > limit) {
      auto order = bfs_order(in, inc, scan.label, comp.front());
      order.resize(static_cast<std::size_t>(limit) + 1);
      std::sort(order.begin(), order.end());
      return order;
    }
  }
  if (regime.kind != Regime::Kind::paths) return {};
  for (const auto& comp : scan.components) {
    int internal = 0;
    for (int v : comp) {
      std::vector<int> nbrs;
      for (int e : inc[v]) {
        int w = in.edges[e].other(v);
        if (in_modulator[w]) continue;
        ++internal;
        if (std::find(nbrs.begin(), nbrs.end(), w) != nbrs.end()) {
          std::vector<int> out{std::min(v, w), std::max(v, w)};
          return out;
        }
        nbrs.push_back(w);
      }
      if (nbrs.size() >= 3) {
        std::vector<int> out{v, nbrs[0], nbrs[1], nbrs[2]};
        std::sort(out.begin(), out.end());
        return out;
      }
    }
    if (internal / 2 >= static_cast<int>(comp.size())) return comp;  // a cycle
  }
  return {};
}

inline std::vector<int> path_order(const Instance& in, const std::vector<std::vector<int>>& inc,
                                   const std::vector<bool>& in_modulator, const std::vector<int>& comp) {
  if (comp.size() <= 1) return comp;
  int start = -1;
  for (int v : comp) {
    int d = 0;
    for (int e : inc[v])
      if (!in_modulator[in.edges[e].other(v)]) ++d;
    if (d == 1) {
      start = v;
      break;
    }
  }
  std::vector<int> order{start};
  int prev = -1, cur = start;
  while (order.size() < comp.size()) {
    int next = -1;
    for (int e : inc[cur]) {
      int w = in.edges[e].other(cur);
      if (!in_modulator[w] && w != prev) next = w;
    }
    prev = cur;
    cur = next;
    order.push_back(cur);
  }
  return order;
}

}  // namespace detail

inline std::optional<std::string> regime_violation(const Instance& in, const std::vector<int>& modulator,
                                                   Regime regime) {
  std::vector<bool> in_mod(static_cast<std::size_t>(in.vertex_count), false);
  for (int v : modulator) in_mod[v] = true;
  auto w = detail::violation_witness(in, in_mod, regime);
  if (w.empty()) return std::nullopt;
  auto scan = detail::scan_components(in, in_mod);
  const auto& comp = scan.components[scan.label[w.front()]];
  const int limit = regime.kind == Regime::Kind::vertex_cover ? 1 : regime.r;
  if (static_cast<int>(comp.size()) > limit)
    return "hint leaves component of size " + std::to_string(comp.size());
  return "hint leaves a component that is not a path";
}

inline ModulatorDecomposition decompose(const Instance& in, std::vector<int> modulator, Regime regime) {
  std::sort(modulator.begin(), modulator.end());
  modulator.erase(std::unique(modulator.begin(), modulator.end()), modulator.end());
  if (auto why = regime_violation(in, modulator, regime)) throw Error(*why);
  std::vector<bool> in_mod(static_cast<std::size_t>(in.vertex_count), false);
  for (int v : modulator) in_mod[v] = true;
  ModulatorDecomposition d;
  d.modulator = modulator;
  d.regime = regime;
  d.components = detail::scan_components(in, in_mod).components;
  if (regime.kind == Regime::Kind::paths) {
    const auto inc = incidence(in);
    for (auto& comp : d.components) {
      auto order = detail::path_order(in, inc, in_mod, comp);
      if (order.back() < order.front()) std::reverse(order.begin(), order.end());
      comp = order;
    }
  }
  return d;
}

// Uses the instance's hint when present (an invalid hint is an error); otherwise
// searches for a smallest modulator of size at most k_max.
inline std::optional<ModulatorDecomposition> find_modulator(const Instance& in, Regime regime, int k_max) {
  if (regime.r < 1) throw PreconditionError("r must be at least 1");
  if (in.modulator_hint) return decompose(in, *in.modulator_hint, regime);
  std::vector<bool> in_mod(static_cast<std::size_t>(in.vertex_count), false);
  std::function<bool(int)> branch = [&](int left) -> bool {
    auto witness = detail::violation_witness(in, in_mod, regime);
    if (witness.empty()) return true;
    if (left == 0) return false;
    for (int v : witness) {
      in_mod[v] = true;
      if (branch(left - 1)) return true;
      in_mod[v] = false;
    }
    return false;
  };
  for (int size = 0; size <= k_max; ++size) {
    std::fill(in_mod.begin(), in_mod.end(), false);
    if (branch(size)) {
      std::vector<int> m;
      for (int v = 0; v < in.vertex_count; ++v)
        if (in_mod[v]) m.push_back(v);
      return decompose(in, m, regime);
    }
  }
  return std::nullopt;
}

}  // namespace tspk
