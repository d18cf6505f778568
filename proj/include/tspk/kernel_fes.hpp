#pragma once

#include "preprocess.hpp"
#include "report.hpp"
#include "structure.hpp"

namespace tspk {

namespace detail {

inline std::vector<int> ids_of(const std::vector<int>& vs) {
  std::vector<int> out;
  for (int v : vs) out.push_back(v + 1);
  return out;
}

// Maximal run c_1..c_q of degree-2 vertices satisfying a predicate, with the
// outer ends a, b and the q+1 edges a-c_1, ..., c_q-b. When the whole component
// is such a cycle, a = b is its smallest vertex and the run is the rest.
struct Chain {
  std::vector<int> inner;
  std::vector<int> edges;
  int a = -1;
  int b = -1;
};

template <class Pred>
std::vector<Chain> find_chains(const Instance& in, Pred pred) {
  const auto inc = incidence(in);
  auto member = [&](int v) { return inc[v].size() == 2 && pred(v); };
  std::vector<bool> seen(static_cast<std::size_t>(in.vertex_count), false);
  std::vector<Chain> out;

  auto walk = [&](int s, int e, std::vector<int>& verts, std::vector<int>& edges) {
    edges.push_back(e);
    int v = in.edges[e].other(s);
    while (v != s && member(v)) {
      verts.push_back(v);
      e = inc[v][0] == e ? inc[v][1] : inc[v][0];
      edges.push_back(e);
      v = in.edges[e].other(v);
    }
    return v;
  };

  for (int s = 0; s < in.vertex_count; ++s) {
    if (seen[s] || !member(s)) continue;
    Chain c;
    std::vector<int> right, right_edges;
    int b = walk(s, inc[s][1], right, right_edges);
    if (b == s) {
      // closed cycle; anchor it at its smallest vertex
      std::vector<int> cyc{s};
      cyc.insert(cyc.end(), right.begin(), right.end());
      seen[s] = true;
      for (int v : right) seen[v] = true;
      int lo = static_cast<int>(std::min_element(cyc.begin(), cyc.end()) - cyc.begin());
      std::rotate(cyc.begin(), cyc.begin() + lo, cyc.end());
      std::rotate(right_edges.begin(), right_edges.begin() + lo, right_edges.end());
      c.a = c.b = cyc[0];
      c.inner.assign(cyc.begin() + 1, cyc.end());
      c.edges = right_edges;
      out.push_back(std::move(c));
      continue;
    }
    std::vector<int> left, left_edges;
    int a = walk(s, inc[s][0], left, left_edges);
    c.a = a;
    c.b = b;
    c.inner.assign(left.rbegin(), left.rend());
    c.inner.push_back(s);
    c.inner.insert(c.inner.end(), right.begin(), right.end());
    c.edges.assign(left_edges.rbegin(), left_edges.rend());
    c.edges.insert(c.edges.end(), right_edges.begin(), right_edges.end());
    for (int v : c.inner) seen[v] = true;
    out.push_back(std::move(c));
  }
  return out;
}

// Deletes the given inner vertices, appends `extra` new vertices (waypoints when
// flagged) and adds the new edges; new vertices are addressed as n, n+1, ...
inline Instance rewrite(const Instance& in, const std::vector<int>& drop, int extra, bool extra_waypoints,
                        const std::vector<Edge>& add) {
  Instance work = in;
  work.vertex_count += extra;
  for (int i = 0; i < extra; ++i) work.waypoint.push_back(extra_waypoints);
  for (const auto& e : add) work.edges.push_back(e);
  std::vector<bool> removed(static_cast<std::size_t>(work.vertex_count), false);
  for (int v : drop) removed[v] = true;
  return remove_vertices(work, removed);
}

}  // namespace detail

inline RuleOutcome rr_leaf_cap1(const Instance& in) {
  const auto inc = incidence(in);
  for (int v = 0; v < in.vertex_count; ++v)
    if (in.is_waypoint(v) && inc[v].size() == 1 && in.edges[inc[v][0]].capacity == Capacity::one)
      return RuleOutcome::no({"leaf-cap1", {v + 1}, 0, "waypoint leaf behind a capacity-1 edge"});
  return RuleOutcome::unchanged();
}

inline RuleOutcome rr_nonterminal_leaf(const Instance& in) {
  const auto inc = incidence(in);
  for (int v = 0; v < in.vertex_count; ++v) {
    if (in.is_waypoint(v) || inc[v].size() != 1) continue;
    std::vector<bool> removed(static_cast<std::size_t>(in.vertex_count), false);
    removed[v] = true;
    return RuleOutcome::reduced(remove_vertices(in, removed), {"nonterminal-leaf", {v + 1}, 0, ""});
  }
  return RuleOutcome::unchanged();
}

inline RuleOutcome rr_terminal_leaf(const Instance& in) {
  const auto inc = incidence(in);
  for (int v = 0; v < in.vertex_count; ++v) {
    if (!in.is_waypoint(v) || inc[v].size() != 1) continue;
    const auto& e = in.edges[inc[v][0]];
    if (e.capacity == Capacity::one) continue;  // leaf-cap1 answers these
    Instance work = in;
    int u = e.other(v);
    work.waypoint[u] = true;
    const Weight delta = checked_mul(2, e.weight);
    work.budget = checked_sub(work.budget, delta);
    std::vector<bool> removed(static_cast<std::size_t>(in.vertex_count), false);
    removed[v] = true;
    return RuleOutcome::reduced(remove_vertices(work, removed), {"terminal-leaf", {v + 1, u + 1}, -delta, ""});
  }
  return RuleOutcome::unchanged();
}

// Contracts a path whose inner vertices are degree-2 non-waypoints into one edge.
inline RuleOutcome rr_contract_nonterminal_path(const Instance& in) {
  for (const auto& c : detail::find_chains(in, [&](int v) { return !in.is_waypoint(v); })) {
    if (c.a == c.b) continue;  // would need a loop
    Weight w = 0;
    Capacity cap = Capacity::unbounded;
    for (int e : c.edges) {
      w = checked_add(w, in.edges[e].weight);
      cap = min_capacity(cap, in.edges[e].capacity);
    }
    auto out = detail::rewrite(in, c.inner, 0, false, {{c.a, c.b, w, cap}});
    return RuleOutcome::reduced(std::move(out), {"contract-path", detail::ids_of(c.inner), 0, ""});
  }
  return RuleOutcome::unchanged();
}

// A cycle of degree-2 non-waypoints hanging at one vertex is never worth entering.
inline RuleOutcome rr_drop_nonterminal_cycle(const Instance& in) {
  for (const auto& c : detail::find_chains(in, [&](int v) { return !in.is_waypoint(v); })) {
    if (c.a != c.b) continue;
    return RuleOutcome::reduced(detail::rewrite(in, c.inner, 0, false, {}),
                                {"drop-cycle", detail::ids_of(c.inner), 0, ""});
  }
  return RuleOutcome::unchanged();
}

// Replaces a run of degree-2 waypoints by one (or two) new waypoints.
//
// The construction on a path p0..pl depends on its capacity-1 edges: two or
// more force a single pass; exactly one allows a pass or a doubled visit that
// skips it; none allows a pass, a doubled visit skipping the heaviest edge, or
// a doubled pass (kept through the bypass p0-pl). Endpoints that are not
// waypoints need care: a doubled visit that skips an interior edge reaches the
// run from both ends, so the path is trimmed to waypoint ends or, for a
// single interior capacity-1 edge, replaced by two new waypoints instead.
inline RuleOutcome rr_replace_terminal_path(const Instance& in) {
  for (const auto& c : detail::find_chains(in, [&](int v) { return in.is_waypoint(v); })) {
    const int q = static_cast<int>(c.inner.size());
    const bool outside = in.waypoint_count() > q;  // some waypoint is not in the run
    const int n = in.vertex_count;
    auto weight_of = [&](int e) { return in.edges[e].weight; };
    auto sum = [&](std::size_t lo, std::size_t hi) {  // edges [lo, hi)
      Weight s = 0;
      for (std::size_t i = lo; i < hi; ++i) s = checked_add(s, weight_of(c.edges[i]));
      return s;
    };
    auto emit = [&](const std::vector<int>& drop, int extra, const std::vector<Edge>& add, const std::string& note) {
      return RuleOutcome::reduced(detail::rewrite(in, drop, extra, true, add),
                                  {"replace-path", detail::ids_of(drop), 0, note});
    };

    // path p0..pl given by a slice [lo, hi) of the chain edges
    auto paper_case = [&](std::size_t lo, std::size_t hi, int p0, int pl, bool flip) -> RuleOutcome {
      std::vector<int> drop(c.inner.begin() + static_cast<long>(lo), c.inner.begin() + static_cast<long>(hi - 1));
      const Weight total = sum(lo, hi);
      std::vector<std::size_t> ones;
      for (std::size_t i = lo; i < hi; ++i)
        if (in.edges[c.edges[i]].capacity == Capacity::one) ones.push_back(i);
      if (flip) std::swap(p0, pl);
      if (ones.size() >= 2) {
        Weight w1 = weight_of(c.edges[flip ? hi - 1 : lo]);
        return emit(drop, 1, {{p0, n, w1, Capacity::one}, {n, pl, total - w1, Capacity::one}}, "two capacity-1 edges");
      }
      if (ones.size() == 1) {
        Weight w1 = weight_of(c.edges[ones[0]]);
        return emit(drop, 1, {{p0, n, w1, Capacity::one}, {n, pl, total - w1, Capacity::two}}, "one capacity-1 edge");
      }
      Weight top = 0;
      for (std::size_t i = lo; i < hi; ++i) top = std::max(top, weight_of(c.edges[i]));
      std::vector<Edge> add{{p0, n, top, Capacity::one}, {n, pl, total - top, Capacity::two}};
      if (p0 == pl) return emit(drop, 1, add, "no capacity-1 edge");
      add.push_back({p0, pl, total, Capacity::one});
      return emit(drop, 1, add, "no capacity-1 edge, bypass");
    };

    const std::size_t m = c.edges.size();  // q + 1
    if (!outside) {
      // everything lives on the run: keep its first and last vertex
      if (q >= 4) return paper_case(1, m - 1, c.inner.front(), c.inner.back(), false);
      continue;
    }
    std::vector<std::size_t> ones;
    for (std::size_t i = 0; i < m; ++i)
      if (in.edges[c.edges[i]].capacity == Capacity::one) ones.push_back(i);
    const bool ends_reached = c.a == c.b || (in.is_waypoint(c.a) && in.is_waypoint(c.b));

    if (ones.size() >= 2) {
      if (q >= 2) return paper_case(0, m, c.a, c.b, false);
      continue;
    }
    if (ones.size() == 1) {
      const std::size_t i = ones[0];
      if (i == 0 || i == m - 1 || ends_reached) {
        if (q >= 2) return paper_case(0, m, c.a, c.b, i == m - 1);
        continue;
      }
      if (q >= 3) {
        const Weight pre = sum(0, i), post = sum(i + 1, m);
        return emit(c.inner, 2,
                    {{c.a, n, pre, Capacity::two},
                     {n, n + 1, weight_of(c.edges[i]), Capacity::one},
                     {n + 1, c.b, post, Capacity::two}},
                    "interior capacity-1 edge, split");
      }
      continue;
    }
    // no capacity-1 edge: trim to waypoint ends
    if (c.a == c.b) {
      if (in.is_waypoint(c.a)) {
        if (q >= 2) return paper_case(0, m, c.a, c.b, false);
      } else if (q >= 4) {
        return paper_case(1, m - 1, c.inner.front(), c.inner.back(), false);
      }
      continue;
    }
    const bool wa = in.is_waypoint(c.a), wb = in.is_waypoint(c.b);
    const std::size_t lo = wa ? 0 : 1, hi = wb ? m : m - 1;
    if (hi - lo >= 3)
      return paper_case(lo, hi, wa ? c.a : c.inner.front(), wb ? c.b : c.inner.back(), false);
  }
  return RuleOutcome::unchanged();
}

inline void add_fes_bounds(KernelReport& rep, const Instance& out) {
  const long long k = feedback_edge_number(out);
  rep.measures["k"] = k;
  rep.bounds.push_back({"vertices<=8k", 8 * k, out.vertex_count});
  rep.bounds.push_back({"edges<=9k", 9 * k, out.edge_count()});
}

inline KernelResult kernelize_fes(const Instance& input) {
  KernelResult res{as_wrp(input), {}};
  auto& rep = res.report;
  auto& work = res.instance;
  rep.begin("fes", input);
  rep.measures["k_input"] = feedback_edge_number(input);
  if (input.kind != ProblemKind::wrp) rep.notes.push_back("converted to wrp");

  auto finish = [&]() {
    rep.finish(work);
    long long bypass = 0;
    for (const auto& e : rep.log) bypass += e.note.ends_with("bypass");
    rep.measures["bypass_edges"] = bypass;
    if (!rep.decided) add_fes_bounds(rep, work);
    return res;
  };
  if (rep.apply(rr_stop(work), work)) return finish();
  if (rep.apply(ensure_connected(work), work)) return finish();

  using Rule = RuleOutcome (*)(const Instance&);
  const Rule rules[] = {rr_stop,
                        rr_leaf_cap1,
                        rr_nonterminal_leaf,
                        rr_terminal_leaf,
                        rr_contract_nonterminal_path,
                        rr_drop_nonterminal_cycle,
                        rr_replace_terminal_path};
  for (bool fired = true; fired;) {
    fired = false;
    for (Rule rule : rules) {
      auto out = rule(work);
      if (!out.changed()) continue;
      if (rep.apply(out, work)) return finish();
      fired = true;
      break;
    }
  }
  rep.apply(compress_weights(work), work);
  return finish();
}

}  // namespace tspk
