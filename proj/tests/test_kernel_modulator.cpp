#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"
#include "tspk/kernel_modulator.hpp"
#include "tspk/oracle.hpp"

using namespace tspk;
using fixtures::modulator_instance;

namespace {

Instance graph(ProblemKind kind, int n, std::vector<std::tuple<int, int, Weight>> es, std::vector<int> w,
               Weight budget) {
  std::vector<Edge> edges;
  for (auto [a, b, x] : es) edges.push_back({a, b, x, Capacity::unbounded});
  return make_instance(kind, n, edges, w, budget);
}

EdgeMultiset multiset(std::vector<std::pair<int, int>> items) {
  EdgeMultiset m;
  for (auto [e, c] : items) m.add(e, c);
  return m;
}

std::optional<Weight> opt_of(const Instance& in) {
  return solve(in, {}, Engine::held_karp).opt_weight;
}

// Independent enumeration over {0,1,2}^E(G_C) with the behavior conditions spelled out.
std::set<std::vector<std::pair<int, int>>> naive_behaviors(const Instance& in, const std::vector<int>& M,
                                                          const std::vector<int>& C, int r) {
  auto inC = [&](int v) { return std::find(C.begin(), C.end(), v) != C.end(); };
  auto inM = [&](int v) { return std::find(M.begin(), M.end(), v) != M.end(); };
  std::vector<int> es;
  for (int i = 0; i < in.edge_count(); ++i) {
    int a = in.edges[i].u, b = in.edges[i].v;
    if ((inC(a) && (inC(b) || inM(b))) || (inC(b) && inM(a))) es.push_back(i);
  }
  std::set<std::vector<std::pair<int, int>>> out;
  std::vector<int> c(es.size(), 0);
  for (;;) {
    std::vector<int> deg(static_cast<std::size_t>(in.vertex_count), 0);
    int legs = 0;
    for (std::size_t j = 0; j < es.size(); ++j) {
      deg[in.edges[es[j]].u] += c[j];
      deg[in.edges[es[j]].v] += c[j];
      if (inM(in.edges[es[j]].u) || inM(in.edges[es[j]].v)) legs += c[j];
    }
    bool ok = legs <= 2 * r;
    for (int v : C) ok &= deg[v] > 0 && deg[v] % 2 == 0;
    if (ok) {
      // every C vertex reaches M through used edges
      std::vector<bool> reach(static_cast<std::size_t>(in.vertex_count), false);
      for (int m : M) reach[m] = true;
      for (bool grew = true; grew;) {
        grew = false;
        for (std::size_t j = 0; j < es.size(); ++j) {
          if (!c[j]) continue;
          int a = in.edges[es[j]].u, b = in.edges[es[j]].v;
          if (reach[a] != reach[b]) reach[a] = reach[b] = grew = true;
        }
      }
      for (int v : C) ok &= reach[v];
    }
    if (ok) {
      std::vector<std::pair<int, int>> ms;
      for (std::size_t j = 0; j < es.size(); ++j)
        if (c[j]) ms.emplace_back(es[j], c[j]);
      std::sort(ms.begin(), ms.end());
      out.insert(ms);
    }
    std::size_t j = 0;
    while (j < c.size() && c[j] == 2) c[j++] = 0;
    if (j == c.size()) break;
    ++c[j];
  }
  return out;
}

Weight weight_of(const Instance& in, const EdgeMultiset& F) {
  Weight w = 0;
  for (auto [e, c] : F.items) w += c * in.edges[e].weight;
  return w;
}

std::vector<int> touched(const Instance& in, const std::vector<int>& M, const EdgeMultiset& F) {
  std::set<int> out;
  for (auto [e, c] : F.items)
    for (int x : {in.edges[e].u, in.edges[e].v})
      if (std::find(M.begin(), M.end(), x) != M.end()) out.insert(x);
  return {out.begin(), out.end()};
}

}  // namespace

TEST(ComponentBehaviors, SingletonExamples) {
  // m0 - c(2) - m1 with weights 2 and 5
  auto in = graph(ProblemKind::tsp, 3, {{0, 2, 2}, {1, 2, 5}}, {}, 0);
  auto nat = natural_behavior_component(in, {0, 1}, {2}, 1);
  EXPECT_EQ(nat.edges.items, (multiset({{0, 2}}).items));
  EXPECT_EQ(nat.weight, 4);

  auto tie = graph(ProblemKind::tsp, 3, {{0, 2, 3}, {1, 2, 3}}, {}, 0);
  auto nat2 = natural_behavior_component(tie, {0, 1}, {2}, 1);
  EXPECT_EQ(nat2.edges.items, (multiset({{0, 2}}).items));
}

TEST(ComponentBehaviors, MatchNaiveEnumeration) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 150; ++t) {
    int r = 1 + static_cast<int>(rng() % 3);
    auto mi = modulator_instance(rng, ProblemKind::tsp, 1 + static_cast<int>(rng() % 3), r, t % 2, 2, 6);
    auto d = decompose(mi.instance, mi.modulator, t % 2 ? Regime::paths(r) : Regime::components(r));
    for (const auto& C : d.components) {
      auto mine = enumerate_component_behaviors(mi.instance, d.modulator, C, r);
      std::set<std::vector<std::pair<int, int>>> got;
      for (const auto& b : mine) {
        EXPECT_TRUE(is_component_behavior(mi.instance, d.modulator, C, b.edges, r));
        EXPECT_EQ(b.weight, weight_of(mi.instance, b.edges));
        got.insert(b.edges.items);
      }
      EXPECT_EQ(got.size(), mine.size());
      EXPECT_EQ(got, naive_behaviors(mi.instance, d.modulator, C, r));
    }
  }
}

TEST(ComponentBehaviors, GuardThrowsScaleError) {
  auto in = graph(ProblemKind::tsp, 4, {{0, 3, 1}, {1, 3, 1}, {2, 3, 1}}, {}, 0);
  EXPECT_THROW(enumerate_component_behaviors(in, {0, 1, 2}, {3}, 1, 5), ScaleError);
}

TEST(ComponentImpacts, TwoPartExample) {
  // modulator m1..m5 = 0..4, component c1 = 5, c2 = 6, c3 = 7
  auto in = graph(ProblemKind::tsp, 8,
                  {{5, 6, 1}, {6, 7, 1}, {5, 1, 1}, {6, 2, 1}, {6, 4, 1}, {7, 3, 1}, {7, 0, 1}}, {}, 0);
  const std::vector<int> M = {0, 1, 2, 3, 4};
  // red part: c1-m2, c1-c2, c2-m3 twice, c2-m5; green part: c3-m4 twice
  auto F = multiset({{0, 1}, {2, 1}, {3, 2}, {4, 1}, {5, 2}});
  ASSERT_TRUE(is_component_behavior(in, M, {5, 6, 7}, F, 3));
  auto imp = component_impact(in, M, F);
  EXPECT_EQ(imp.touched, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(imp.rep_edges, (std::vector<std::tuple<int, int, int>>{{1, 2, 2}, {1, 4, 1}}));

  auto single = component_impact(in, M, multiset({{5, 2}}));
  EXPECT_TRUE(single.rep_edges.empty());
}

TEST(ComponentImpacts, ParityLaw) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 100; ++t) {
    int r = 2 + static_cast<int>(rng() % 2);
    auto mi = modulator_instance(rng, ProblemKind::tsp, 2 + static_cast<int>(rng() % 2), r, false, 2, 5);
    auto d = decompose(mi.instance, mi.modulator, Regime::components(r));
    for (const auto& C : d.components)
      for (const auto& b : enumerate_component_behaviors(mi.instance, d.modulator, C, r)) {
        auto imp = component_impact(mi.instance, d.modulator, b.edges);
        std::map<int, int> deg;
        for (auto [e, c] : b.edges.items)
          for (int x : {mi.instance.edges[e].u, mi.instance.edges[e].v}) deg[x] += c;
        for (auto [a, z, mult] : imp.rep_edges) {
          EXPECT_LT(a, z);
          EXPECT_EQ(mult, deg[z] % 2 ? 1 : 2);
        }
        // the odd-degree modulator vertices pair up: their count is even
        int odd = 0;
        for (int m : imp.touched) odd += deg[m] % 2;
        EXPECT_EQ(odd % 2, 0);
      }
  }
}

TEST(ComponentPrices, MatchBruteForce) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 100; ++t) {
    int r = 1 + static_cast<int>(rng() % 3);
    auto mi = modulator_instance(rng, ProblemKind::tsp, 2 + static_cast<int>(rng() % 2), r, false, 2, 6);
    const auto& in = mi.instance;
    auto d = decompose(in, mi.modulator, Regime::components(r));
    for (const auto& C : d.components) {
      auto all = naive_behaviors(in, d.modulator, C, r);
      if (all.empty()) continue;
      // naive natural: min weight, then size, then lexicographic expansion
      std::optional<EdgeMultiset> nat;
      for (const auto& items : all) {
        EdgeMultiset F;
        for (auto [e, c] : items) F.add(e, c);
        if (!nat || detail::better_natural(F, weight_of(in, F), *nat, weight_of(in, *nat))) nat = F;
      }
      auto I = component_impact(in, d.modulator, *nat);
      std::map<ComponentImpact, Weight> cheapest;
      for (const auto& items : all) {
        EdgeMultiset F;
        for (auto [e, c] : items) F.add(e, c);
        auto imp = component_impact(in, d.modulator, F);
        auto it = cheapest.find(imp);
        if (it == cheapest.end() || weight_of(in, F) < it->second) cheapest[imp] = weight_of(in, F);
      }
      for (const auto& [I2, w] : cheapest) EXPECT_EQ(price_component(in, d.modulator, C, r, I, I2), w - weight_of(in, *nat));
      EXPECT_EQ(price_component(in, d.modulator, C, r, I, I), 0);
      ComponentImpact bogus{{-1}, {}};
      EXPECT_EQ(price_component(in, d.modulator, C, r, bogus, I), kInfinity);
    }
  }
}

TEST(ComponentBehaviors, SolutionBehaviorsPassPredicate) {
  std::mt19937_64 rng(44);
  int checked = 0;
  for (int t = 0; t < 150; ++t) {
    int r = 1 + static_cast<int>(rng() % 3);
    auto mi = modulator_instance(rng, ProblemKind::tsp, 1 + static_cast<int>(rng() % 2), r, false,
                                 2 + static_cast<int>(rng() % 2), 6);
    const auto& in = mi.instance;
    auto res = solve(in, {}, Engine::held_karp);
    if (!res.witness) continue;
    auto nice = make_nice(in, *res.witness);
    auto walk = eulerian_walk(in, nice.multiplicity, mi.modulator.front());
    auto d = decompose(in, mi.modulator, Regime::components(r));
    for (const auto& C : d.components) {
      auto F = solution_component_behavior(in, walk, d.modulator, C);
      EXPECT_TRUE(is_component_behavior(in, d.modulator, C, F, r)) << render_instance(in);
      ++checked;
    }
  }
  EXPECT_GT(checked, 200);
}

TEST(Pieces, NaturalBehaviorsOfPathsAreTwoLegged) {
  std::mt19937_64 rng(45);
  for (int t = 0; t < 200; ++t) {
    int r = 1 + static_cast<int>(rng() % 4);
    auto mi = modulator_instance(rng, ProblemKind::subset_tsp, 1 + static_cast<int>(rng() % 3), r, true, 1,
                                 t % 3 ? 6 : 0);
    auto d = decompose(mi.instance, mi.modulator, Regime::paths(r));
    const auto& C = d.components.front();
    auto all = enumerate_component_behaviors(mi.instance, d.modulator, C, r);
    if (all.empty()) continue;
    auto nat = natural_behavior_component(mi.instance, d.modulator, C, r);
    auto ps = pieces(mi.instance, d.modulator, C, nat.edges);
    std::size_t covered = 0;
    for (const auto& p : ps) {
      EXPECT_EQ(p.legs.size(), 2) << render_instance(mi.instance);
      covered += p.path_vertices.size();
    }
    EXPECT_EQ(covered, C.size());
  }
}

TEST(Pieces, OnePieceTwoLegs) {
  // m0 - c1 - c2 - m0 as a path component
  auto in = graph(ProblemKind::subset_tsp, 3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}, {1, 2}, 0);
  auto ps = pieces(in, {0}, {1, 2}, multiset({{0, 1}, {1, 1}, {2, 1}}));
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].path_vertices, (std::vector<int>{1, 2}));
  EXPECT_EQ(ps[0].legs.size(), 2);
}

TEST(Blending, SingletonExample) {
  // c = 2; m0 costs 5, m1 costs 1: A = {2 x c-m0}, natural = {2 x c-m1}
  auto in = graph(ProblemKind::subset_tsp, 3, {{2, 0, 5}, {2, 1, 1}}, {0, 2}, 0);
  ComponentBehavior A{0, multiset({{0, 2}}), 10};
  auto F = blend_behavior(in, {0, 1}, {2}, 1, A, {0}, 1);
  EXPECT_LE(F.weight, 10);
  EXPECT_EQ(F.edges.count(1) >= 1, true);
  EXPECT_EQ(F.edges.count(0), 1);  // anchored at m0, so one leg stays
  EXPECT_THROW(blend_behavior(in, {0, 1}, {2}, 1, A, {0, 1}, 1), PreconditionError);
}

TEST(Blending, PropertyOnGeneratedTuples) {
  std::mt19937_64 rng(46);
  int tuples = 0;
  for (int t = 0; t < 4000 && tuples < 200; ++t) {
    int r = 1 + static_cast<int>(rng() % 4);
    auto mi = modulator_instance(rng, ProblemKind::subset_tsp, 2 + static_cast<int>(rng() % 2), r, true, 1, 7);
    const auto& in = mi.instance;
    auto d = decompose(in, mi.modulator, Regime::paths(r));
    const auto& C = d.components.front();
    const auto& M = d.modulator;
    auto all = enumerate_component_behaviors(in, M, C, r);
    if (all.empty()) continue;
    auto nat = natural_behavior_component(in, M, C, r);
    auto t_nat = touched(in, M, nat.edges);
    for (const auto& A : all) {
      bool two = true;
      for (const auto& p : pieces(in, M, C, A.edges)) two &= p.legs.size() == 2;
      if (!two) continue;
      auto t_a = touched(in, M, A.edges);
      for (int v : t_nat) {
        if (std::find(t_a.begin(), t_a.end(), v) != t_a.end()) continue;
        // M' = T(A) plus a random subset of the rest, never v
        std::vector<int> Mp = t_a;
        for (int m : M)
          if (m != v && std::find(t_a.begin(), t_a.end(), m) == t_a.end() && rng() % 2) Mp.push_back(m);
        std::sort(Mp.begin(), Mp.end());
        auto F = blend_behavior(in, M, C, r, A, Mp, v);
        ++tuples;
        EXPECT_TRUE(is_component_behavior(in, M, C, F.edges, r));
        auto t_f = touched(in, M, F.edges);
        EXPECT_TRUE(std::find(t_f.begin(), t_f.end(), v) != t_f.end());
        for (int m : t_f)
          EXPECT_TRUE(std::find(t_a.begin(), t_a.end(), m) != t_a.end() ||
                      std::find(t_nat.begin(), t_nat.end(), m) != t_nat.end());
        EXPECT_LE(weight_of(in, F.edges), A.weight);
        // every part of (C + M, F) reaches M'
        std::vector<bool> reach(static_cast<std::size_t>(in.vertex_count), false);
        for (int m : Mp) reach[m] = true;
        for (bool grew = true; grew;) {
          grew = false;
          for (auto [e, c] : F.edges.items) {
            int a = in.edges[e].u, b = in.edges[e].v;
            if (reach[a] != reach[b]) reach[a] = reach[b] = grew = true;
          }
        }
        for (auto [e, c] : F.edges.items) EXPECT_TRUE(reach[in.edges[e].u]);
        break;
      }
      if (tuples >= 200) break;
    }
  }
  EXPECT_GE(tuples, 200);
}

TEST(Saturation, ShortCircuitsPathNonWaypoints) {
  // m0 joined to c1 - c2 - c3, c2 not a waypoint
  auto in = graph(ProblemKind::subset_tsp, 4, {{0, 1, 1}, {1, 2, 2}, {2, 3, 3}, {3, 0, 1}}, {0, 1, 3}, 0);
  auto out = saturate_path_nonterminals(in, {0});
  EXPECT_EQ(out.vertex_count, 3);
  EXPECT_EQ(*out.modulator_hint, std::vector<int>{0});
  bool found = false;
  for (const auto& e : out.edges) found |= std::minmax(e.u, e.v) == std::minmax(1, 2) && e.weight == 5;
  EXPECT_TRUE(found);

  auto same = saturate_path_nonterminals(in, {0, 2});
  EXPECT_EQ(same.vertex_count, 4);
}

TEST(Saturation, KeepsPathsRegime) {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 200; ++t) {
    int r = 1 + static_cast<int>(rng() % 4);
    auto mi = modulator_instance(rng, ProblemKind::subset_tsp, 1 + static_cast<int>(rng() % 3), r, true, 3, 6);
    auto out = saturate_path_nonterminals(mi.instance, mi.modulator);
    EXPECT_NO_THROW(decompose(out, *out.modulator_hint, Regime::paths(r)));
    auto d = decompose(out, *out.modulator_hint, Regime::paths(r));
    for (const auto& C : d.components)
      for (int c : C) EXPECT_TRUE(out.is_waypoint(c));
    EXPECT_EQ(opt_of(out), opt_of(mi.instance));
  }
}

TEST(RuleComponents, SingleComponentUnchanged) {
  auto in = graph(ProblemKind::tsp, 3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}, {}, 5);
  auto res = rule_components_tsp(in, {0}, 2);
  EXPECT_TRUE(res.report.log.empty());
  EXPECT_EQ(res.instance, in);
}

TEST(RuleComponents, StarOfSingletons) {
  // hub 0 with 8 leaves, leaf i at weight i
  std::vector<std::tuple<int, int, Weight>> es;
  for (int i = 1; i <= 8; ++i) es.emplace_back(0, i, i);
  auto in = graph(ProblemKind::tsp, 9, es, {}, 100);
  auto res = rule_components_tsp(in, {0}, 2);
  EXPECT_EQ(res.report.measures.at("impacts"), 1);
  EXPECT_EQ(res.report.measures.at("red"), 4);
  EXPECT_EQ(res.report.measures.at("green"), 2);
  EXPECT_EQ(res.instance.vertex_count, 7);
  // leaves 7 and 8 go, naturals 14 and 16
  EXPECT_EQ(res.instance.budget, 100 - 30);
  ASSERT_EQ(res.report.bounds.size(), 1u);
  EXPECT_EQ(res.report.bounds[0].bound, 8);
  EXPECT_EQ(res.report.bounds[0].measured, 6);
  EXPECT_EQ(opt_of(res.instance).value() + 30, opt_of(in).value());
}

TEST(RuleComponents, StuckComponent) {
  // component {2, 3} has no edge to the modulator
  auto in = graph(ProblemKind::tsp, 4, {{0, 1, 1}, {2, 3, 1}}, {}, 9);
  auto res = rule_components_tsp(in, {0}, 2);
  ASSERT_TRUE(res.report.decided.has_value());
  EXPECT_FALSE(*res.report.decided);
}

TEST(RuleComponents, PreservesOptimum) {
  std::mt19937_64 rng(48);
  int fired = 0;
  for (int t = 0; t < 300; ++t) {
    int r = 2 + static_cast<int>(rng() % 2);
    int k = t % 3 ? 1 : 2;
    auto mi = modulator_instance(rng, ProblemKind::tsp, k, r, false, k == 1 ? 5 + static_cast<int>(rng() % 5) : 4, 6);
    const auto& in = mi.instance;
    auto d = decompose(in, mi.modulator, Regime::components(r));
    if (static_cast<int>(in.vertex_count) > 16) continue;
    auto res = rule_components_tsp(in, d.modulator, r);
    auto before = opt_of(in);
    if (res.report.decided) {
      EXPECT_EQ(*res.report.decided, false);
      EXPECT_FALSE(before.has_value());
      continue;
    }
    for (const auto& b : res.report.bounds) EXPECT_TRUE(b.ok()) << b.name;
    if (res.report.log.empty()) continue;
    ++fired;
    const Weight delta = in.budget - res.instance.budget;
    auto after = opt_of(res.instance);
    ASSERT_EQ(before.has_value(), after.has_value()) << render_instance(in);
    if (before) EXPECT_EQ(*after + delta, *before) << render_instance(in);
  }
  EXPECT_GT(fired, 40);
}

TEST(RulePaths, NeedsSaturation) {
  auto in = graph(ProblemKind::subset_tsp, 3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}, {0, 2}, 5);
  EXPECT_THROW(rule_paths_subtsp(in, {0}, 2), PreconditionError);
}

TEST(RulePaths, ThresholdFormula) {
  EXPECT_EQ(detail::paths_threshold(1, 2, 3), (16 * 32 + 2) * 3);
  EXPECT_EQ(detail::paths_threshold(50, 2, 3), kInfinity);
}

TEST(RulePaths, YellowBelowThresholdAndPromotionAbove) {
  // non-waypoint hub 0 with leaves 1..6 and the path 8 - 7
  std::vector<std::tuple<int, int, Weight>> es;
  for (int i = 1; i <= 6; ++i) es.emplace_back(0, i, i);
  es.emplace_back(0, 8, 1);
  es.emplace_back(8, 7, 1);
  std::vector<int> w = {1, 2, 3, 4, 5, 6, 7, 8};
  auto in = graph(ProblemKind::subset_tsp, 9, es, w, 100);

  auto kept = rule_paths_subtsp(in, {0}, 2);
  EXPECT_TRUE(kept.report.log.empty());
  EXPECT_GT(kept.report.measures.at("yellow"), 0);

  auto promoted = rule_paths_subtsp(in, {0}, 2, 1);
  EXPECT_EQ(promoted.report.promoted, std::vector<int>{1});
  EXPECT_TRUE(promoted.instance.is_waypoint(0));
  EXPECT_EQ(promoted.instance.vertex_count, 9);
  EXPECT_EQ(opt_of(promoted.instance), opt_of(in));

  // the fixpoint then removes leaves through the green phase
  auto k = kernelize_paths(in, 2, 4, 1);
  EXPECT_LT(k.instance.vertex_count, 9);
  EXPECT_EQ(k.report.promoted, std::vector<int>{1});
}

TEST(RulePaths, PreservesOptimum) {
  std::mt19937_64 rng(49);
  int fired = 0;
  for (int t = 0; t < 300; ++t) {
    int r = 2 + static_cast<int>(rng() % 2);
    auto mi = modulator_instance(rng, ProblemKind::subset_tsp, 1, r, true, 5 + static_cast<int>(rng() % 5), 6);
    auto sat = saturate_path_nonterminals(mi.instance, mi.modulator);
    if (sat.waypoint_count() > 16) continue;
    auto res = rule_paths_subtsp(sat, *sat.modulator_hint, r);
    auto before = opt_of(sat);
    if (res.report.decided) {
      EXPECT_FALSE(before.has_value());
      continue;
    }
    for (const auto& b : res.report.bounds) EXPECT_TRUE(b.ok()) << b.name;
    if (res.report.log.empty()) continue;
    ++fired;
    auto after = opt_of(res.instance);
    ASSERT_EQ(before.has_value(), after.has_value()) << render_instance(sat);
    if (before) EXPECT_EQ(*after + (sat.budget - res.instance.budget), *before) << render_instance(sat);
  }
  EXPECT_GT(fired, 40);
}

TEST(KernelizeModulator, PipelinesPreserveVerdict) {
  std::mt19937_64 rng(50);
  for (int t = 0; t < 200; ++t) {
    int r = 2 + static_cast<int>(rng() % 2);
    bool paths = t % 2;
    auto mi = modulator_instance(rng, paths ? ProblemKind::subset_tsp : ProblemKind::tsp,
                                 1 + static_cast<int>(rng() % 2), r, paths, 3 + static_cast<int>(rng() % 4), 6);
    auto in = mi.instance;
    if (in.edge_count() > 12) continue;
    auto opt = fixtures::brute_force_opt(in);
    in.budget = (opt ? *opt : 10) + static_cast<Weight>(rng() % 3) - 1;
    auto res = paths ? kernelize_paths(in, r) : kernelize_components(in, r);
    bool want = fixtures::brute_force_feasible(in);
    bool got = res.report.decided ? *res.report.decided : fixtures::brute_force_feasible(res.instance);
    EXPECT_EQ(got, want) << render_instance(in);
    auto again = paths ? kernelize_paths(in, r) : kernelize_components(in, r);
    EXPECT_EQ(render_instance(again.instance), render_instance(res.instance));
  }
}

TEST(KernelizeModulator, PathsRejectsCapacities) {
  auto in = make_instance(ProblemKind::wrp, 2, {{0, 1, 1, Capacity::two}}, {0, 1}, 2);
  EXPECT_THROW(kernelize_paths(in, 2), PreconditionError);
}
