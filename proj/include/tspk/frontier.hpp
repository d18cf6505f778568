#pragma once

#include <algorithm>

#include "certificate.hpp"

namespace tspk {

// Edge-by-edge dynamic program over the vertices that still have unprocessed
// edges (the frontier). A state records, per frontier vertex, its parity status
// and a connectivity class, plus whether the single allowed component of the
// solution has already been closed.
struct FrontierPlan {
  std::vector<int> order;  // edge processing order
  int width = 0;           // slots needed
  std::vector<int> slot;   // per vertex
  std::vector<int> first;  // per vertex, first position or -1
  std::vector<int> last;   // per vertex, last position or -1
};

namespace detail {

inline FrontierPlan greedy_plan(const Instance& in, int start) {
  const int m = in.edge_count();
  const auto inc = incidence(in);
  std::vector<int> remaining = degrees(in);
  std::vector<bool> active(static_cast<std::size_t>(in.vertex_count), false);
  std::vector<bool> done(static_cast<std::size_t>(m), false);
  FrontierPlan p;
  int live = 0;
  for (int step = 0; step < m; ++step) {
    int best = -1;
    std::tuple<int, int, int> best_key{};
    auto consider = [&](int e) {
      const auto& ed = in.edges[e];
      int fresh = !active[ed.u] + !active[ed.v];
      int peak = live + fresh;
      int after = peak - (remaining[ed.u] == 1) - (remaining[ed.v] == 1);
      auto key = std::make_tuple(peak, after, -(2 - fresh));
      if (best < 0 || key < best_key) {
        best = e;
        best_key = key;
      }
    };
    if (step == 0 && start >= 0 && !inc[start].empty()) {
      best = inc[start].front();
    } else {
      for (int e = 0; e < m; ++e)
        if (!done[e]) consider(e);
    }
    done[best] = true;
    p.order.push_back(best);
    const auto& ed = in.edges[best];
    int fresh = !active[ed.u] + !active[ed.v];
    p.width = std::max(p.width, live + fresh);
    for (int x : {ed.u, ed.v}) {
      if (!active[x]) {
        active[x] = true;
        ++live;
      }
      if (--remaining[x] == 0) {
        active[x] = false;
        --live;
      }
    }
  }
  return p;
}

inline void assign_slots(const Instance& in, FrontierPlan& p) {
  p.slot.assign(static_cast<std::size_t>(in.vertex_count), -1);
  p.first.assign(static_cast<std::size_t>(in.vertex_count), -1);
  p.last.assign(static_cast<std::size_t>(in.vertex_count), -1);
  for (int i = 0; i < static_cast<int>(p.order.size()); ++i) {
    const auto& e = in.edges[p.order[i]];
    for (int x : {e.u, e.v}) {
      if (p.first[x] < 0) p.first[x] = i;
      p.last[x] = i;
    }
  }
  std::vector<int> free_slots;
  int width = 0;
  for (int i = 0; i < static_cast<int>(p.order.size()); ++i) {
    const auto& e = in.edges[p.order[i]];
    for (int x : {e.u, e.v}) {
      if (p.first[x] != i || p.slot[x] >= 0) continue;
      if (free_slots.empty()) {
        p.slot[x] = width++;
      } else {
        std::sort(free_slots.begin(), free_slots.end(), std::greater<>());
        p.slot[x] = free_slots.back();
        free_slots.pop_back();
      }
    }
    for (int x : {e.u, e.v})
      if (p.last[x] == i && std::find(free_slots.begin(), free_slots.end(), p.slot[x]) == free_slots.end())
        free_slots.push_back(p.slot[x]);
  }
  p.width = width;
}

using StateKey = unsigned __int128;

struct StateKeyHash {
  std::size_t operator()(StateKey k) const {
    auto lo = static_cast<std::uint64_t>(k);
    auto hi = static_cast<std::uint64_t>(k >> 64);
    std::uint64_t h = lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x632BE59BD9B4E019ULL + (lo << 6) + (lo >> 2));
    h ^= h >> 29;
    return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ULL);
  }
};

// Open addressing table from state key to layer index.
class StateIndex {
 public:
  explicit StateIndex(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < expected) cap <<= 1;
    keys_.resize(cap);
    vals_.assign(cap, kEmpty);
  }

  // Returns the stored index and whether the key was new.
  std::pair<std::uint32_t, bool> try_emplace(StateKey k, std::uint32_t v) {
    if ((size_ + 1) * 2 > keys_.size()) grow();
    std::size_t mask = keys_.size() - 1;
    for (std::size_t i = StateKeyHash{}(k) & mask;; i = (i + 1) & mask) {
      if (vals_[i] == kEmpty) {
        keys_[i] = k;
        vals_[i] = v;
        ++size_;
        return {v, true};
      }
      if (keys_[i] == k) return {vals_[i], false};
    }
  }

 private:
  static constexpr std::uint32_t kEmpty = 0xFFFFFFFFu;

  void grow() {
    std::vector<StateKey> keys(keys_.size() * 2);
    std::vector<std::uint32_t> vals(keys_.size() * 2, kEmpty);
    std::size_t mask = keys.size() - 1;
    for (std::size_t j = 0; j < keys_.size(); ++j) {
      if (vals_[j] == kEmpty) continue;
      std::size_t i = StateKeyHash{}(keys_[j]) & mask;
      while (vals[i] != kEmpty) i = (i + 1) & mask;
      keys[i] = keys_[j];
      vals[i] = vals_[j];
    }
    keys_ = std::move(keys);
    vals_ = std::move(vals);
  }

  std::vector<StateKey> keys_;
  std::vector<std::uint32_t> vals_;
  std::size_t size_ = 0;
};

constexpr int kSlotBits = 6;
constexpr int kDoneBit = 127;
// Class labels use 4 bits and 14, 15 are reserved for fresh classes.
constexpr int kMaxSlots = 13;

inline int slot_status(StateKey k, int s) { return static_cast<int>((k >> (s * kSlotBits)) & 3); }
inline int slot_label(StateKey k, int s) { return static_cast<int>((k >> (s * kSlotBits + 2)) & 15); }
inline StateKey with_slot(StateKey k, int s, int status, int label) {
  StateKey mask = static_cast<StateKey>(63) << (s * kSlotBits);
  k &= ~mask;
  k |= static_cast<StateKey>(status | (label << 2)) << (s * kSlotBits);
  return k;
}
inline bool is_done(StateKey k) { return (k >> kDoneBit) & 1; }

// Relabels classes 1, 2, ... in slot order.
inline StateKey canonical(StateKey k, int width) {
  int map[16] = {0};
  int next = 1;
  for (int s = 0; s < width; ++s) {
    int l = slot_label(k, s);
    if (l == 0) continue;
    if (map[l] == 0) map[l] = next++;
    k = with_slot(k, s, slot_status(k, s), map[l]);
  }
  return k;
}

}  // namespace detail

inline FrontierPlan plan_frontier(const Instance& in) {
  FrontierPlan best = detail::greedy_plan(in, -1);
  for (int s = 0; s < in.vertex_count && in.edge_count() <= 400; ++s) {
    auto p = detail::greedy_plan(in, s);
    if (p.width < best.width) best = p;
  }
  detail::assign_slots(in, best);
  return best;
}

struct FrontierOptions {
  // Drop partial solutions that cannot stay within the budget; the optimum is
  // then only reported when it is at most the budget.
  bool prune_at_budget = false;
  bool witness = true;
};

inline OptResult solve_frontier(const Instance& in, const OracleLimits& limits = {},
                                const FrontierOptions& opt = {}) {
  using namespace detail;
  OptResult r;
  r.engine = "frontier";
  if (in.waypoint_count() <= 1) return trivial_result(in, "frontier");
  auto plan = plan_frontier(in);
  if (plan.width > std::min(limits.max_width, kMaxSlots))
    throw ScaleError("oracle scale exceeded: frontier width " + std::to_string(plan.width) + ", cap " +
                     std::to_string(limits.max_width));
  for (int v = 0; v < in.vertex_count; ++v)
    if (in.is_waypoint(v) && plan.first[v] < 0) return r;

  const int m = in.edge_count();
  // Lower bound on the cost of edges from position i on: every waypoint first
  // seen there needs two occurrences of edges at least as heavy as its lightest.
  std::vector<Weight> future(static_cast<std::size_t>(m) + 1, 0);
  if (opt.prune_at_budget) {
    std::vector<Weight> lightest(static_cast<std::size_t>(in.vertex_count), kInfinity);
    for (const auto& e : in.edges) {
      lightest[e.u] = std::min(lightest[e.u], e.weight);
      lightest[e.v] = std::min(lightest[e.v], e.weight);
    }
    for (int v = 0; v < in.vertex_count; ++v)
      if (in.is_waypoint(v)) future[plan.first[v]] += lightest[v];
    for (int i = m - 1; i >= 0; --i) future[i] += future[i + 1];
  }
  const Weight bound = opt.prune_at_budget ? in.budget : kInfinity;

  struct Layer {
    std::vector<StateKey> key;
    std::vector<Weight> cost;
    std::vector<std::uint32_t> pred;
    std::vector<std::uint8_t> mult;
  };
  std::vector<Layer> layers;
  Layer cur;
  cur.key.push_back(0);
  cur.cost.push_back(0);
  cur.pred.push_back(0);
  cur.mult.push_back(0);
  const int W = plan.width;

  for (int i = 0; i < m; ++i) {
    const int e = plan.order[i];
    const auto& ed = in.edges[e];
    const int su = plan.slot[ed.u], sv = plan.slot[ed.v];
    Layer nxt;
    StateIndex index(cur.key.size() + 8);
    for (std::uint32_t si = 0; si < cur.key.size(); ++si) {
      const StateKey k0 = cur.key[si];
      const bool done0 = is_done(k0);
      std::uint8_t st0[kMaxSlots], lab0[kMaxSlots];
      for (int s = 0; s < W; ++s) {
        st0[s] = static_cast<std::uint8_t>(slot_status(k0, s));
        lab0[s] = static_cast<std::uint8_t>(slot_label(k0, s));
      }
      for (int x = 0; x <= nice_limit(ed.capacity); ++x) {
        const Weight c = cur.cost[si] + x * ed.weight;
        if (c > bound || c + future[i + 1] > bound) break;
        if (x > 0 && done0) break;
        std::uint8_t st[kMaxSlots], lab[kMaxSlots];
        std::copy(st0, st0 + W, st);
        std::copy(lab0, lab0 + W, lab);
        bool done = done0;
        if (x > 0) {
          // Fresh classes get labels 15 and 14, above any canonical label.
          const std::uint8_t lu = st[su] == 0 ? 15 : lab[su];
          const std::uint8_t lv = st[sv] == 0 ? 14 : lab[sv];
          auto flip = [&](int s) {
            st[s] = static_cast<std::uint8_t>(st[s] == 0 ? (x % 2 ? 1 : 2) : (x % 2 ? 3 - st[s] : st[s]));
          };
          flip(su);
          flip(sv);
          lab[su] = lu;
          lab[sv] = lv;
          for (int s = 0; s < W; ++s)
            if (lab[s] == lv) lab[s] = lu;
        }
        bool ok = true;
        for (int vx : {ed.u, ed.v}) {
          if (plan.last[vx] != i) continue;
          const int s = plan.slot[vx];
          const int stv = st[s];
          const int l = lab[s];
          if (stv == 1 || (stv == 0 && in.is_waypoint(vx))) {
            ok = false;
            break;
          }
          st[s] = lab[s] = 0;
          if (stv == 0) continue;
          bool shared = false, others = false;
          for (int t = 0; t < W; ++t) {
            if (lab[t] == l) shared = true;
            if (st[t] != 0) others = true;
          }
          if (shared) continue;
          if (others || done) {
            ok = false;
            break;
          }
          done = true;
        }
        if (!ok) continue;
        // canonical labels 1, 2, ... in slot order
        std::uint8_t map[16] = {0};
        std::uint8_t next = 1;
        StateKey k = done ? static_cast<StateKey>(1) << kDoneBit : 0;
        for (int s = 0; s < W; ++s) {
          std::uint8_t l = lab[s];
          if (l != 0) {
            if (map[l] == 0) map[l] = next++;
            l = map[l];
          }
          if (st[s] | l) k |= static_cast<StateKey>(st[s] | (l << 2)) << (s * kSlotBits);
        }
        auto [at, inserted] = index.try_emplace(k, static_cast<std::uint32_t>(nxt.key.size()));
        if (inserted) {
          nxt.key.push_back(k);
          nxt.cost.push_back(c);
          nxt.pred.push_back(si);
          nxt.mult.push_back(static_cast<std::uint8_t>(x));
        } else if (c < nxt.cost[at]) {
          nxt.cost[at] = c;
          nxt.pred[at] = si;
          nxt.mult[at] = static_cast<std::uint8_t>(x);
        }
      }
    }
    if (opt.witness) layers.push_back(std::move(cur));
    cur = std::move(nxt);
    if (cur.key.empty()) return r;
  }

  std::int64_t best = -1;
  for (std::uint32_t si = 0; si < cur.key.size(); ++si)
    if (is_done(cur.key[si]) && (best < 0 || cur.cost[si] < cur.cost[best])) best = si;
  if (best < 0) return r;
  r.opt_weight = cur.cost[best];
  r.feasible = *r.opt_weight <= in.budget;
  if (opt.witness) {
    std::vector<int> mult(static_cast<std::size_t>(m), 0);
    std::uint32_t idx = static_cast<std::uint32_t>(best);
    const Layer* layer = &cur;
    for (int i = m - 1; i >= 0; --i) {
      mult[plan.order[i]] = layer->mult[idx];
      idx = layer->pred[idx];
      layer = &layers[i];
    }
    r.witness = make_solution(in, mult);
    if (r.witness->total_weight != *r.opt_weight) throw Error("frontier witness weight mismatch");
  }
  return r;
}

}  // namespace tspk
