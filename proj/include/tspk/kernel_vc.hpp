#pragma once

#include <map>
#include <set>

#include "preprocess.hpp"
#include "report.hpp"
#include "structure.hpp"

namespace tspk {

enum class VcRegime { tsp, wrp };

struct VertexBehavior {
  int vertex = 0;
  EdgeMultiset edges;
  Weight weight = 0;
};

// Touched modulator vertices (sorted); degrees only in the WRP regime.
struct VertexImpact {
  std::vector<int> touched;
  std::optional<std::vector<int>> degrees;

  auto operator<=>(const VertexImpact&) const = default;
  bool operator==(const VertexImpact&) const = default;
};

namespace detail {

inline std::vector<int> incident_to(const Instance& in, const std::vector<int>& M, int r) {
  if (r < 0 || r >= in.vertex_count) throw PreconditionError("vertex out of range");
  if (std::find(M.begin(), M.end(), r) != M.end()) throw PreconditionError("behaviors are defined outside the modulator");
  std::vector<int> out;
  for (int i = 0; i < in.edge_count(); ++i) {
    const auto& e = in.edges[i];
    if (e.u != r && e.v != r) continue;
    if (std::find(M.begin(), M.end(), e.other(r)) == M.end())
      throw PreconditionError("modulator is not a vertex cover");
    out.push_back(i);
  }
  return out;
}

}  // namespace detail

inline std::vector<VertexBehavior> enumerate_vertex_behaviors(const Instance& in, const std::vector<int>& M, int r,
                                                              VcRegime regime) {
  const auto inc = detail::incident_to(in, M, r);
  std::vector<int> sizes;
  if (regime == VcRegime::tsp) {
    sizes = {2};
  } else {
    if (!in.is_waypoint(r)) sizes.push_back(0);
    sizes.push_back(2);
    sizes.push_back(4);
  }
  std::vector<VertexBehavior> out;
  EdgeMultiset cur;
  Weight w = 0;
  std::function<void(std::size_t, int)> go = [&](std::size_t i, int left) {
    if (left == 0) {
      out.push_back({r, cur, w});
      return;
    }
    if (i == inc.size()) return;
    const auto& e = in.edges[inc[i]];
    int top = std::min(left, regime == VcRegime::wrp && e.capacity == Capacity::one ? 1 : 2);
    for (int c = top; c >= 1; --c) {
      cur.add(inc[i], c);
      w += c * e.weight;
      go(i + 1, left - c);
      cur.add(inc[i], -c);
      w -= c * e.weight;
    }
    go(i + 1, left);
  };
  for (int s : sizes) {
    std::size_t from = out.size();
    go(0, s);
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(from), out.end(),
              [](const VertexBehavior& a, const VertexBehavior& b) { return lex_less(a.edges, b.edges); });
  }
  return out;
}

inline VertexImpact vertex_impact(const Instance& in, const VertexBehavior& b, VcRegime regime) {
  std::map<int, int> deg;
  for (const auto& [e, c] : b.edges.items) deg[in.edges[e].other(b.vertex)] += c;
  VertexImpact imp;
  for (const auto& [m, d] : deg) imp.touched.push_back(m);
  if (regime == VcRegime::wrp) {
    imp.degrees.emplace();
    for (const auto& [m, d] : deg) imp.degrees->push_back(d);
  }
  return imp;
}

// Minimum weight, ties to the lexicographically least edge multiset. For TSP
// that is two copies of the cheapest edge of lowest index.
inline VertexBehavior natural_behavior_vertex(const Instance& in, const std::vector<int>& M, int r, VcRegime regime) {
  auto all = enumerate_vertex_behaviors(in, M, r, regime);
  if (all.empty()) throw PreconditionError("vertex " + std::to_string(r + 1) + " has no behavior");
  const VertexBehavior* best = &all.front();
  for (const auto& b : all)
    if (b.weight < best->weight || (b.weight == best->weight && lex_less(b.edges, best->edges))) best = &b;
  return *best;
}

// Everything the marking rules need to know about one vertex.
struct VertexProfile {
  int vertex = 0;
  std::optional<VertexBehavior> natural;
  VertexImpact natural_impact;
  std::map<VertexImpact, Weight> cheapest;  // per attainable impact
  std::set<VertexImpact> short_impacts;     // impacts of behaviors with at most two occurrences
};

inline VertexProfile profile_vertex(const Instance& in, const std::vector<int>& M, int r, VcRegime regime) {
  VertexProfile p;
  p.vertex = r;
  for (const auto& b : enumerate_vertex_behaviors(in, M, r, regime)) {
    auto imp = vertex_impact(in, b, regime);
    auto it = p.cheapest.find(imp);
    if (it == p.cheapest.end() || b.weight < it->second) p.cheapest[imp] = b.weight;
    if (b.edges.size() <= 2) p.short_impacts.insert(imp);
    if (!p.natural || b.weight < p.natural->weight ||
        (b.weight == p.natural->weight && lex_less(b.edges, p.natural->edges))) {
      p.natural = b;
      p.natural_impact = imp;
    }
  }
  return p;
}

inline Weight price_vertex_tsp(const Instance& in, const std::vector<int>& M, int r, const VertexImpact& I) {
  auto p = profile_vertex(in, M, r, VcRegime::tsp);
  auto it = p.cheapest.find(I);
  if (!p.natural || it == p.cheapest.end()) return kInfinity;
  return it->second - p.natural->weight;
}

inline Weight price_vertex_wrp(const Instance& in, const std::vector<int>& M, int r, const VertexImpact& I,
                               const VertexImpact& I2) {
  auto p = profile_vertex(in, M, r, VcRegime::wrp);
  if (!p.natural || p.natural_impact != I) return kInfinity;
  auto it = p.cheapest.find(I2);
  return it == p.cheapest.end() ? kInfinity : it->second - p.natural->weight;
}

namespace detail {

struct VcSetup {
  std::vector<int> rest;  // R
  std::vector<VertexProfile> profiles;
  std::optional<int> stuck;  // waypoint of R without any behavior
};

inline VcSetup vc_setup(const Instance& in, const std::vector<int>& M, VcRegime regime) {
  if (!is_vertex_cover(in, M)) throw PreconditionError("modulator is not a vertex cover");
  VcSetup s;
  std::vector<bool> in_m(static_cast<std::size_t>(in.vertex_count), false);
  for (int m : M) in_m[m] = true;
  for (int v = 0; v < in.vertex_count; ++v) {
    if (in_m[v]) continue;
    s.rest.push_back(v);
    s.profiles.push_back(profile_vertex(in, M, v, regime));
    if (!s.profiles.back().natural && !s.stuck) s.stuck = v;
  }
  return s;
}

// Marks the `quota` cheapest finite entries, ties by vertex id.
inline void mark_cheapest(std::vector<std::pair<Weight, int>> cand, long long quota, std::vector<bool>& marked) {
  std::sort(cand.begin(), cand.end());
  for (std::size_t i = 0; i < cand.size() && static_cast<long long>(i) < quota; ++i) marked[cand[i].second] = true;
}

}  // namespace detail

inline KernelResult rule_vc_tsp(const Instance& in, const std::vector<int>& M) {
  if (in.kind != ProblemKind::tsp) throw PreconditionError("the TSP marking rule needs a TSP instance");
  KernelResult res{in, {}};
  auto& rep = res.report;
  rep.begin("rule-vc-tsp", in);
  const long long k = static_cast<long long>(M.size());
  auto s = detail::vc_setup(in, M, VcRegime::tsp);
  if (s.stuck && in.waypoint_count() >= 2) {
    rep.record({"vc-tsp", {*s.stuck + 1}, 0, "isolated vertex"});
    rep.decided = false;
    rep.finish(in);
    return res;
  }

  std::map<VertexImpact, std::vector<std::pair<Weight, int>>> by_impact;
  for (std::size_t i = 0; i < s.rest.size(); ++i) {
    const auto& p = s.profiles[i];
    for (const auto& [imp, w] : p.cheapest) by_impact[imp].emplace_back(w - p.natural->weight, static_cast<int>(i));
  }
  std::vector<bool> marked(s.rest.size(), false);
  for (auto& [imp, cand] : by_impact) detail::mark_cheapest(std::move(cand), 3 * k, marked);

  std::vector<bool> removed(static_cast<std::size_t>(in.vertex_count), false);
  std::vector<int> gone;
  Weight delta = 0;
  for (std::size_t i = 0; i < s.rest.size(); ++i) {
    if (marked[i]) continue;
    removed[s.rest[i]] = true;
    gone.push_back(s.rest[i] + 1);
    if (s.profiles[i].natural) delta = checked_add(delta, s.profiles[i].natural->weight);
  }
  const long long kept = static_cast<long long>(std::count(marked.begin(), marked.end(), true));
  rep.measures["k"] = k;
  rep.measures["impacts"] = static_cast<long long>(by_impact.size());
  rep.measures["rest"] = kept;
  rep.bounds.push_back({"impacts<=k^2", k * k, static_cast<long long>(by_impact.size())});
  rep.bounds.push_back({"rest<=3k^3", 3 * k * k * k, kept});
  if (!gone.empty()) {
    res.instance = remove_vertices(in, removed);
    res.instance.budget = in.budget - delta;
    rep.record({"vc-tsp", gone, -delta, ""});
  }
  rep.finish(res.instance);
  return res;
}

inline KernelResult rule_vc_wrp(const Instance& in, const std::vector<int>& M) {
  if (in.kind != ProblemKind::wrp) throw PreconditionError("the WRP marking rule needs a WRP instance");
  KernelResult res{in, {}};
  auto& rep = res.report;
  rep.begin("rule-vc-wrp", in);
  const long long k = static_cast<long long>(M.size());
  auto s = detail::vc_setup(in, M, VcRegime::wrp);
  if (s.stuck && in.waypoint_count() >= 2) {
    rep.record({"vc-wrp", {*s.stuck + 1}, 0, "waypoint without behavior"});
    rep.decided = false;
    rep.finish(in);
    return res;
  }
  const std::size_t nr = s.rest.size();

  std::set<VertexImpact> all, shorts;
  for (const auto& p : s.profiles) {
    for (const auto& [imp, w] : p.cheapest) all.insert(imp);
    shorts.insert(p.short_impacts.begin(), p.short_impacts.end());
  }
  const long long n_all = static_cast<long long>(all.size());
  const long long n_short = static_cast<long long>(shorts.size());

  std::map<VertexImpact, std::vector<int>> natural_group;  // by natural impact, ascending id
  for (std::size_t i = 0; i < nr; ++i) natural_group[s.profiles[i].natural_impact].push_back(static_cast<int>(i));

  // red: the price is finite only for vertices whose natural impact is I
  enum Color : std::uint8_t { none, red, yellow, green };
  std::vector<Color> color(nr, none);
  const long long red_quota = 2 * n_short + k;
  for (const auto& [I, members] : natural_group) {
    std::map<VertexImpact, std::vector<std::pair<Weight, int>>> by_target;
    for (int i : members) {
      const auto& p = s.profiles[i];
      for (const auto& [imp, w] : p.cheapest) by_target[imp].emplace_back(w - p.natural->weight, i);
    }
    std::vector<bool> hit(nr, false);
    for (auto& [target, cand] : by_target) detail::mark_cheapest(std::move(cand), red_quota, hit);
    for (std::size_t i = 0; i < nr; ++i)
      if (hit[i]) color[i] = red;
  }

  // yellow, or promote T; "unmarked" means not red here
  std::vector<int> promote;
  for (const auto& [I, members] : natural_group) {
    bool inside = std::all_of(I.touched.begin(), I.touched.end(), [&](int m) { return in.is_waypoint(m); });
    if (inside) continue;
    std::vector<int> open;
    for (int i : members)
      if (color[i] == none) open.push_back(i);
    if (static_cast<long long>(open.size()) <= 2 * n_short) {
      for (int i : open) color[i] = yellow;
    } else {
      for (int m : I.touched)
        if (!in.is_waypoint(m)) promote.push_back(m);
    }
  }
  std::sort(promote.begin(), promote.end());
  promote.erase(std::unique(promote.begin(), promote.end()), promote.end());

  // green: leave an even remainder and keep one representative
  for (const auto& [I, members] : natural_group) {
    std::vector<int> open;
    for (int i : members)
      if (color[i] == none) open.push_back(i);
    if (open.empty()) continue;
    std::size_t take = open.size() % 2 ? 1 : 2;
    for (std::size_t j = 0; j < take && j < open.size(); ++j) color[open[j]] = green;
  }

  long long reds = 0, yellows = 0, greens = 0;
  for (auto c : color) {
    reds += c == red;
    yellows += c == yellow;
    greens += c == green;
  }
  long long odd_groups = 0;
  for (const auto& [I, members] : natural_group) {
    long long gone = 0;
    for (int i : members) gone += color[i] == none;
    odd_groups += gone % 2;
  }
  rep.measures["k"] = k;
  rep.measures["impacts"] = n_all;
  rep.measures["impacts2"] = n_short;
  rep.measures["red"] = reds;
  rep.measures["yellow"] = yellows;
  rep.measures["green"] = greens;
  rep.measures["marked"] = reds + yellows + greens;
  rep.measures["odd_removed_impacts"] = odd_groups;
  rep.bounds.push_back({"marked<=(2|I2|+k)|I2||I|+4|I2|", red_quota * n_short * n_all + 4 * n_short,
                        reds + yellows + greens});
  rep.bounds.push_back({"odd-removed-impacts<=0", 0, odd_groups});

  if (!promote.empty()) {
    for (int m : promote) res.instance.waypoint[m] = true;
    std::vector<int> ids;
    for (int m : promote) ids.push_back(m + 1);
    rep.promoted = ids;
    rep.record({"vc-wrp", ids, 0, "promoted"});
    rep.finish(res.instance);
    return res;
  }

  std::vector<bool> removed(static_cast<std::size_t>(in.vertex_count), false);
  std::vector<int> gone;
  Weight delta = 0;
  for (std::size_t i = 0; i < nr; ++i) {
    if (color[i] != none) continue;
    removed[s.rest[i]] = true;
    gone.push_back(s.rest[i] + 1);
    if (s.profiles[i].natural) delta = checked_add(delta, s.profiles[i].natural->weight);
  }
  if (!gone.empty()) {
    res.instance = remove_vertices(in, removed);
    res.instance.budget = in.budget - delta;
    rep.record({"vc-wrp", gone, -delta, ""});
  }
  rep.finish(res.instance);
  return res;
}

namespace detail {

inline std::vector<int> vertex_cover_for(const Instance& in, int k_max) {
  auto d = find_modulator(in, Regime::vertex_cover(), k_max);
  if (!d) throw ScaleError("no vertex cover with at most " + std::to_string(k_max) + " vertices");
  return d->modulator;
}

// Runs a marking rule to fixpoint on `work`, whose hint holds the cover.
// Keeps the measures and bounds of the last application.
template <class Rule>
bool marking_fixpoint(Instance& work, KernelReport& rep, Rule rule) {
  long long odd = 0;
  std::vector<bool> promoted(static_cast<std::size_t>(work.vertex_count), false);
  for (;;) {
    auto step = rule(work, *work.modulator_hint);
    for (const auto& e : step.report.log) rep.record(e);
    for (const auto& [name, v] : step.report.measures) rep.measures[name] = v;
    rep.bounds = step.report.bounds;
    odd += step.report.measures["odd_removed_impacts"];
    if (step.report.decided) {
      rep.decided = step.report.decided;
      return true;
    }
    if (step.report.log.empty()) break;
    for (int id : step.report.promoted) promoted[id - 1] = true;
    if (step.instance.vertex_count != work.vertex_count) {
      // only vertices outside the cover go, and they are listed in the last entry
      const auto& ids = step.report.log.back().ids;
      std::vector<bool> next;
      for (int v = 0; v < work.vertex_count; ++v)
        if (std::find(ids.begin(), ids.end(), v + 1) == ids.end()) next.push_back(promoted[v]);
      promoted = std::move(next);
    }
    work = std::move(step.instance);
  }
  if (rep.measures.count("odd_removed_impacts")) {
    rep.measures["odd_removed_impacts"] = odd;
    for (auto& b : rep.bounds)
      if (b.name == "odd-removed-impacts<=0") b.measured = odd;
  }
  rep.promoted.clear();
  for (int v = 0; v < work.vertex_count; ++v)
    if (promoted[v]) rep.promoted.push_back(v + 1);
  return false;
}

template <class Rule>
KernelResult kernelize_vc(const Instance& input, Instance start, const std::string& name, int k_max, Rule rule) {
  KernelResult res{std::move(start), {}};
  auto& rep = res.report;
  auto& work = res.instance;
  rep.begin(name, input);
  auto finish = [&]() {
    rep.finish(work);
    return res;
  };
  if (rep.apply(rr_stop(work), work)) return finish();
  if (rep.apply(ensure_connected(work), work)) return finish();
  work.modulator_hint = vertex_cover_for(work, k_max);
  rep.measures["k_input"] = static_cast<long long>(work.modulator_hint->size());
  if (marking_fixpoint(work, rep, rule)) return finish();
  if (rep.apply(rr_stop(work), work)) return finish();
  rep.apply(compress_weights(work), work);
  return finish();
}

}  // namespace detail

inline KernelResult kernelize_vc_tsp(const Instance& input, int k_max = 8) {
  if (input.kind != ProblemKind::tsp) throw PreconditionError("vc-tsp needs a TSP instance");
  return detail::kernelize_vc(input, input, "vc-tsp", k_max, rule_vc_tsp);
}

inline KernelResult kernelize_vc_wrp(const Instance& input, int k_max = 8) {
  auto res = detail::kernelize_vc(input, as_wrp(input), "vc-wrp", k_max, rule_vc_wrp);
  if (input.kind != ProblemKind::wrp) res.report.notes.insert(res.report.notes.begin(), "converted to wrp");
  res.report.notes.push_back("yellow phase counts vertices that are not red");
  return res;
}

}  // namespace tspk
