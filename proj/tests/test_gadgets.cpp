#include <gtest/gtest.h>

#include "support.hpp"
#include "tspk/gadgets.hpp"

using namespace tspk;

namespace {

// All labelled simple graphs on n vertices, by edge mask.
std::vector<HpGraph> all_graphs(int n) {
  std::vector<std::pair<int, int>> slots;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) slots.emplace_back(a, b);
  std::vector<HpGraph> out;
  for (unsigned mask = 0; mask < (1u << slots.size()); ++mask) {
    HpGraph g{n, {}};
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (mask >> i & 1) g.edges.push_back(slots[i]);
    out.push_back(g);
  }
  return out;
}

std::vector<std::array<int, 4>> mcc_slots() {
  std::vector<std::array<int, 4>> all;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) all.push_back({i, a, j, b});
  return all;
}

MccInstance mcc_from_mask(unsigned mask) {
  auto slots = mcc_slots();
  std::vector<std::array<int, 4>> es;
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (mask >> i & 1) es.push_back(slots[i]);
  return make_mcc(3, 2, es);
}

}  // namespace

TEST(HamiltonianPath, Examples) {
  EXPECT_TRUE(has_hamiltonian_path({3, {{0, 1}, {1, 2}, {2, 0}}}));
  EXPECT_TRUE(has_hamiltonian_path({4, {{0, 1}, {1, 2}, {2, 3}}}));
  EXPECT_FALSE(has_hamiltonian_path({4, {{0, 1}, {0, 2}, {0, 3}}}));
  EXPECT_FALSE(has_hamiltonian_path({3, {{0, 1}}}));
  EXPECT_THROW(has_hamiltonian_path({11, {}}), ScaleError);
}

TEST(ComposeFn, Shape) {
  HpGraph p4{4, {{0, 1}, {1, 2}, {2, 3}}};
  auto in = compose_fn({p4, p4});
  EXPECT_EQ(in.vertex_count, 9);
  EXPECT_EQ(in.budget, 10);
  EXPECT_EQ(in.kind, ProblemKind::tsp);
  // apex alone leaves components of k vertices
  EXPECT_FALSE(regime_violation(in, {8}, Regime::components(4)).has_value());
  EXPECT_THROW(compose_fn({p4, HpGraph{3, {}}}), PreconditionError);

  HpGraph triangle{3, {{0, 1}, {1, 2}, {2, 0}}};
  EXPECT_TRUE(decide(compose_fn({triangle})));
}

TEST(ComposeFn, FeasibleIffEveryInputHasPath) {
  auto graphs = all_graphs(4);
  std::vector<bool> hp;
  for (const auto& g : graphs) hp.push_back(has_hamiltonian_path(g));
  for (std::size_t a = 0; a < graphs.size(); ++a)
    for (std::size_t b = 0; b < graphs.size(); ++b) {
      auto in = compose_fn({graphs[a], graphs[b]});
      ASSERT_EQ(decide(in), hp[a] && hp[b]) << a << ' ' << b;
    }
}

TEST(ComposeDegTw, Shape) {
  HpGraph p3{3, {{0, 1}, {1, 2}}};
  auto in = compose_degtw({p3, p3});
  EXPECT_EQ(in.vertex_count, 8);
  EXPECT_EQ(in.budget, 8);
  auto deg = degrees(in);
  EXPECT_EQ(deg[6], 6);
  EXPECT_EQ(deg[7], 6);
  EXPECT_EQ(*std::max_element(deg.begin(), deg.end()), 6);
}

TEST(ComposeDegTw, FeasibleIffEveryInputHasPath) {
  auto graphs = all_graphs(4);
  std::vector<bool> hp;
  for (const auto& g : graphs) hp.push_back(has_hamiltonian_path(g));
  for (std::size_t a = 0; a < graphs.size(); ++a)
    for (std::size_t b = 0; b < graphs.size(); ++b) {
      auto in = compose_degtw({graphs[a], graphs[b]});
      ASSERT_EQ(decide(in), hp[a] && hp[b]) << a << ' ' << b;
    }
  // three inputs, one without a path
  HpGraph p4{4, {{0, 1}, {1, 2}, {2, 3}}}, star{4, {{0, 1}, {0, 2}, {0, 3}}};
  EXPECT_TRUE(decide(compose_degtw({p4, p4, p4})));
  EXPECT_FALSE(decide(compose_degtw({p4, star, p4})));
}

TEST(SelectionGadget, Optima) {
  auto s3 = selection_gadget(3);
  EXPECT_EQ(s3.vertex_count, 9);
  EXPECT_EQ(s3.edge_count(), 12);
  EXPECT_EQ(s3.waypoint_count(), 3);
  EXPECT_EQ(solve(s3).opt_weight, 6);
  EXPECT_EQ(solve(selection_gadget(4)).opt_weight, 8);
  EXPECT_EQ(solve(selection_gadget(5)).opt_weight, 10);
  EXPECT_THROW(selection_gadget(2), PreconditionError);
}

TEST(SelectionGadget, OptimalToursPickOnePortPerCherry) {
  auto in = selection_gadget(3);
  auto sols = enumerate_solutions(in, 6);
  ASSERT_FALSE(sols.empty());
  for (const auto& s : sols) {
    std::vector<int> deg(static_cast<std::size_t>(in.vertex_count), 0);
    for (int e = 0; e < in.edge_count(); ++e) {
      deg[in.edges[e].u] += s.multiplicity[e];
      deg[in.edges[e].v] += s.multiplicity[e];
    }
    for (int i = 0; i < 3; ++i) EXPECT_EQ((deg[3 * i] > 0) + (deg[3 * i + 1] > 0), 1);
  }
  // 2^3 port choices, each a single cycle
  EXPECT_EQ(sols.size(), 8u);
}

TEST(CycleGadget, Shapes) {
  auto c1 = cycle_gadget(1);
  EXPECT_EQ(c1.vertex_count, 3);
  EXPECT_EQ(c1.edge_count(), 3);
  EXPECT_EQ(c1.waypoint_count(), 3);
  auto c2 = cycle_gadget(2);
  EXPECT_EQ(c2.vertex_count, 6);
  EXPECT_EQ(solve(c2).opt_weight, 6);
  for (int d : degrees(c2)) EXPECT_EQ(d, 2);
}

TEST(CycleGadget, AttachedGadgetCostsAtLeastSevenEdges) {
  GadgetBuilder b;
  auto sel = add_selection_gadget(b, 3);
  auto cyc = add_cycle_gadget(b, 2);
  connect_triplet(b, cyc, 0, sel.ports[0][0]);
  connect_triplet(b, cyc, 1, sel.ports[1][1]);
  auto in = b.build(0);
  EXPECT_EQ(degrees(in)[cyc.triplets[0][2]], 2);
  auto res = solve(in);
  ASSERT_TRUE(res.witness.has_value());
  EXPECT_EQ(res.opt_weight, 6 + 7);
  int touching = 0;
  for (int e = 0; e < in.edge_count(); ++e) {
    bool inside = false;
    for (const auto& t : cyc.triplets)
      for (int x : t) inside |= in.edges[e].u == x || in.edges[e].v == x;
    if (inside) touching += res.witness->multiplicity[e];
  }
  EXPECT_GE(touching, 7);
}

TEST(Mcc, Helpers) {
  EXPECT_EQ(bit(5, 1), 1);
  EXPECT_EQ(bit(5, 2), 0);
  EXPECT_EQ(bit(5, 3), 1);
  auto m = make_mcc(3, 3, {{0, 2, 1, 0}, {1, 0, 0, 2}});
  EXPECT_EQ(m.N, 4);
  EXPECT_EQ(m.edges.size(), 1u);
  EXPECT_TRUE(m.adjacent(1, 0, 0, 2));
  EXPECT_THROW(make_mcc(3, 2, {{0, 0, 0, 1}}), PreconditionError);
  EXPECT_FALSE(has_multicolored_clique(m));
  EXPECT_TRUE(has_multicolored_clique(mcc_from_mask(0xFFF)));
  EXPECT_FALSE(has_multicolored_clique(mcc_from_mask(0)));
}

TEST(Mcc, CompleteTripartiteGivesBareSelectionGadget) {
  auto in = mcc_to_subtsp(mcc_from_mask(0xFFF));
  EXPECT_EQ(in.vertex_count, 9);
  EXPECT_EQ(in.budget, 6);
  EXPECT_TRUE(decide(in));
  EXPECT_THROW(mcc_to_subtsp(make_mcc(2, 2, {})), PreconditionError);
}

TEST(Mcc, BudgetCountsNonEdges) {
  auto in = mcc_to_subtsp(mcc_from_mask(0xFFF & ~1u));
  EXPECT_EQ(in.vertex_count, 15);
  EXPECT_EQ(in.budget, 6 + 7);
}

TEST(Mcc, ReductionMatchesCliqueDetection) {
  // every graph with at most two non-edges, plus a seeded sample of the rest
  std::vector<unsigned> masks;
  for (unsigned mask = 0; mask < 4096; ++mask)
    if (std::popcount(mask) >= 10) masks.push_back(mask);
  std::mt19937_64 rng(51);
  for (int i = 0; i < 25; ++i) masks.push_back(static_cast<unsigned>(rng() % 4096));
  int yes = 0, no = 0;
  for (unsigned mask : masks) {
    auto m = mcc_from_mask(mask);
    bool clique = has_multicolored_clique(m);
    ASSERT_EQ(decide(mcc_to_subtsp(m)), clique) << mask;
    (clique ? yes : no)++;
  }
  EXPECT_GT(yes, 0);
  EXPECT_GT(no, 0);
}

TEST(GenPlanted, RegimesHold) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    PlantedParams p;
    p.seed = seed;
    p.n = 8 + static_cast<int>(seed % 7);
    p.k = 2;
    p.regime = PlantedRegime::vertex_cover;
    auto vc = gen_planted(p);
    ASSERT_TRUE(vc.modulator_hint.has_value());
    EXPECT_LE(vc.modulator_hint->size(), 2u);
    EXPECT_TRUE(is_vertex_cover(vc, *vc.modulator_hint));

    p.regime = PlantedRegime::paths;
    p.r = 3;
    p.kind = ProblemKind::subset_tsp;
    auto paths = gen_planted(p);
    EXPECT_FALSE(regime_violation(paths, *paths.modulator_hint, Regime::paths(3)).has_value());

    p.regime = PlantedRegime::components;
    p.kind = ProblemKind::tsp;
    auto comps = gen_planted(p);
    EXPECT_FALSE(regime_violation(comps, *comps.modulator_hint, Regime::components(3)).has_value());
    // small enough for the oracle, so the budget is the optimum
    EXPECT_EQ(solve(comps).opt_weight, comps.budget);

    p.regime = PlantedRegime::fes;
    p.kind = ProblemKind::wrp;
    p.k = 3;
    auto fes = gen_planted(p);
    EXPECT_EQ(fes.edge_count() - fes.vertex_count + 1, 3);
    EXPECT_FALSE(fes.modulator_hint.has_value());
  }
}

TEST(GenPlanted, Deterministic) {
  PlantedParams p;
  p.regime = PlantedRegime::fes;
  p.n = 120;
  p.k = 4;
  p.seed = 7;
  EXPECT_EQ(render_instance(gen_planted(p)), render_instance(gen_planted(p)));
  p.seed = 8;
  auto other = gen_planted(p);
  p.seed = 7;
  EXPECT_NE(render_instance(gen_planted(p)), render_instance(other));
  EXPECT_GT(gen_planted(p).budget, 0);
  EXPECT_EQ(render_instance(mcc_to_subtsp(random_mcc(3, 2, 0.5, 1))),
            render_instance(mcc_to_subtsp(random_mcc(3, 2, 0.5, 1))));
}

TEST(GenPlanted, RejectsBadParameters) {
  PlantedParams p;
  p.k = 0;
  EXPECT_THROW(gen_planted(p), PreconditionError);
  p.k = 2;
  p.r = 0;
  EXPECT_THROW(gen_planted(p), PreconditionError);
}
