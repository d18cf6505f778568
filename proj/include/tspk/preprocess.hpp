#pragma once

#include <bit>
#include <map>
#include <numeric>

#include "instance.hpp"

namespace tspk {

struct LogEntry {
  std::string rule;
  std::vector<int> ids;  // 1-based vertex ids, as in files
  Weight budget_delta = 0;
  std::string note;
};

struct RuleOutcome {
  enum class Kind { decided_yes, decided_no, reduced, unchanged };
  Kind kind = Kind::unchanged;
  std::optional<Instance> instance;
  LogEntry log;

  bool decided() const { return kind == Kind::decided_yes || kind == Kind::decided_no; }
  bool changed() const { return kind != Kind::unchanged; }

  static RuleOutcome yes(LogEntry log) { return {Kind::decided_yes, std::nullopt, std::move(log)}; }
  static RuleOutcome no(LogEntry log) { return {Kind::decided_no, std::nullopt, std::move(log)}; }
  static RuleOutcome reduced(Instance in, LogEntry log) { return {Kind::reduced, std::move(in), std::move(log)}; }
  static RuleOutcome unchanged() { return {}; }
};

inline RuleOutcome rr_stop(const Instance& in) {
  if (in.budget < 0) return RuleOutcome::no({"stop", {}, 0, "negative budget"});
  if (in.waypoint_count() <= 1) return RuleOutcome::yes({"stop", {}, 0, "at most one waypoint"});
  return RuleOutcome::unchanged();
}

// Replaces the non-waypoint v by direct edges between its neighbors.
inline RuleOutcome rr_short_circuit(const Instance& in, int v) {
  if (in.kind != ProblemKind::subset_tsp) throw PreconditionError("short-circuiting needs a subset TSP instance");
  if (v < 0 || v >= in.vertex_count) throw PreconditionError("vertex out of range");
  if (in.is_waypoint(v)) throw PreconditionError("cannot short-circuit a waypoint");

  // cheapest edge to each neighbor
  std::map<int, Weight> near;
  for (const auto& e : in.edges) {
    if (e.u != v && e.v != v) continue;
    int w = e.other(v);
    auto it = near.find(w);
    if (it == near.end() || e.weight < it->second) near[w] = e.weight;
  }
  std::map<std::pair<int, int>, Weight> best;
  for (auto a = near.begin(); a != near.end(); ++a)
    for (auto b = std::next(a); b != near.end(); ++b)
      best[{a->first, b->first}] = checked_add(a->second, b->second);

  Instance work = in;
  work.edges.clear();
  for (const auto& e : in.edges) {
    if (e.u == v || e.v == v) continue;
    auto it = best.find({std::min(e.u, e.v), std::max(e.u, e.v)});
    if (it != best.end()) {
      it->second = std::min(it->second, e.weight);  // the existing edge absorbs the candidate
      continue;
    }
    work.edges.push_back(e);
  }
  for (const auto& [ends, w] : best) work.edges.push_back({ends.first, ends.second, w, Capacity::unbounded});
  std::vector<bool> removed(static_cast<std::size_t>(in.vertex_count), false);
  removed[v] = true;
  return RuleOutcome::reduced(remove_vertices(work, removed), {"short-circuit", {v + 1}, 0, ""});
}

// Keeps only the component that holds the waypoints.
inline RuleOutcome ensure_connected(const Instance& in) {
  if (in.waypoint_count() == 0) return RuleOutcome::unchanged();
  int count = 0;
  auto label = component_labels(in, nullptr, &count);
  if (count == 1) return RuleOutcome::unchanged();
  int keep = -1;
  for (int v : in.waypoints()) {
    if (keep < 0) keep = label[v];
    else if (label[v] != keep) return RuleOutcome::no({"connect", {v + 1}, 0, "waypoints in different components"});
  }
  std::vector<bool> removed(static_cast<std::size_t>(in.vertex_count));
  std::vector<int> gone;
  for (int v = 0; v < in.vertex_count; ++v) {
    removed[v] = label[v] != keep;
    if (removed[v]) gone.push_back(v + 1);
  }
  return RuleOutcome::reduced(remove_vertices(in, removed), {"connect", gone, 0, ""});
}

// Rescales so that no edge is free; nice solutions traverse at most 2n edges,
// which the slack 2n on the budget absorbs.
inline RuleOutcome ensure_positive_weights(const Instance& in) {
  bool any_zero = false;
  for (const auto& e : in.edges) any_zero |= e.weight == 0;
  if (!any_zero) return RuleOutcome::unchanged();
  try {
    const Weight two_n = checked_mul(2, in.vertex_count);
    const Weight q = checked_add(checked_add(in.total_weight(), two_n), 1);
    Instance out = in;
    for (auto& e : out.edges) e.weight = e.weight == 0 ? 1 : checked_mul(q, e.weight);
    out.budget = checked_add(checked_mul(q, in.budget), two_n);
    return RuleOutcome::reduced(std::move(out), {"positive-weights", {}, out.budget - in.budget, "Q=" + std::to_string(q)});
  } catch (const OverflowError&) {
    throw OverflowError("instance too large to normalize in 63 bits");
  }
}

inline int bit_size(Weight x) {
  if (x == 0) return 1;
  auto mag = x < 0 ? static_cast<std::uint64_t>(-(x + 1)) + 1 : static_cast<std::uint64_t>(x);
  return static_cast<int>(std::bit_width(mag)) + (x < 0 ? 1 : 0);
}

inline int encoding_bits(const std::vector<Weight>& w, Weight b) {
  int total = bit_size(b);
  for (Weight x : w) total += bit_size(x);
  return total;
}

namespace detail {

// All values (w.x, w2.x) over x in {0,1,2}^|idx| for the given edge indices.
inline std::vector<std::pair<Weight, Weight>> half_sums(const std::vector<Weight>& w, const std::vector<Weight>& w2,
                                                        const std::vector<int>& idx) {
  std::vector<std::pair<Weight, Weight>> out{{0, 0}};
  for (int i : idx) {
    std::size_t n = out.size();
    for (int c = 1; c <= 2; ++c)
      for (std::size_t j = 0; j < n; ++j) out.emplace_back(out[j].first + c * w[i], out[j].second + c * w2[i]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Smallest-encoding budget b2 with sign(w.x - b) = sign(w2.x - b2) on all of
// {0,1,2}^m, if one exists. Splits the edges in halves and joins them by value.
inline std::optional<Weight> matching_budget(const std::vector<Weight>& w, Weight b, const std::vector<Weight>& w2) {
  const int m = static_cast<int>(w.size());
  std::vector<int> left, right;
  for (int i = 0; i < m; ++i) (i < m / 2 ? left : right).push_back(i);
  const auto A = half_sums(w, w2, left);
  const auto B = half_sums(w, w2, right);  // sorted by first

  // prefix max / suffix min of the second coordinate along B
  std::vector<Weight> pre_max(B.size()), suf_min(B.size());
  for (std::size_t i = 0; i < B.size(); ++i) pre_max[i] = std::max(i ? pre_max[i - 1] : B[i].second, B[i].second);
  for (std::size_t i = B.size(); i-- > 0;)
    suf_min[i] = std::min(i + 1 < B.size() ? suf_min[i + 1] : B[i].second, B[i].second);

  const Weight none_lo = std::numeric_limits<Weight>::min();
  Weight max_below = none_lo, min_above = kInfinity;
  std::optional<Weight> equal;
  for (const auto& [a1, c1] : A) {
    const Weight need = b - a1;
    auto lo = std::lower_bound(B.begin(), B.end(), std::make_pair(need, none_lo));
    auto hi = std::upper_bound(B.begin(), B.end(), std::make_pair(need, kInfinity));
    if (lo != B.begin()) max_below = std::max(max_below, c1 + pre_max[lo - B.begin() - 1]);
    if (hi != B.end()) min_above = std::min(min_above, c1 + suf_min[hi - B.begin()]);
    for (auto it = lo; it != hi; ++it) {
      if (equal && *equal != c1 + it->second) return std::nullopt;
      equal = c1 + it->second;
    }
  }
  if (equal) {
    if (max_below != none_lo && max_below >= *equal) return std::nullopt;
    if (min_above != kInfinity && min_above <= *equal) return std::nullopt;
    return equal;
  }
  // any integer strictly between; pick the one with the shortest encoding
  Weight lo = max_below == none_lo ? none_lo : max_below + 1;
  Weight hi = min_above == kInfinity ? kInfinity : min_above - 1;
  if (lo > hi) return std::nullopt;
  if (lo <= 0 && 0 <= hi) return 0;
  if (hi < 0) return hi;
  return lo;
}

}  // namespace detail

// Replaces weights and budget by a shorter encoding that orders every
// multiplicity vector in {0,1,2}^m against the budget exactly as before.
// Candidates are checked exhaustively, so only small edge counts are handled.
inline RuleOutcome compress_weights(const Instance& in, int max_edges = 12) {
  const int m = in.edge_count();
  if (m == 0 || m > max_edges) return RuleOutcome::unchanged();
  std::vector<Weight> w(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) w[i] = in.edges[i].weight;
  Weight b = in.budget;
  const int start_bits = encoding_bits(w, b);

  for (;;) {
    Weight top = *std::max_element(w.begin(), w.end());
    std::vector<std::vector<Weight>> candidates;
    auto push = [&](std::vector<Weight> c) {
      Weight g = 0;
      for (Weight x : c) g = std::gcd(g, x);
      if (g > 1)
        for (auto& x : c) x /= g;
      candidates.push_back(c);
      for (auto& x : c) x *= 2;  // room for a budget strictly between two sums
      candidates.push_back(std::move(c));
    };
    push(w);
    if (top > 0) {
      for (int p = 0; p < static_cast<int>(std::bit_width(static_cast<std::uint64_t>(top))); ++p) {
        std::vector<Weight> c(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
          __int128 num = static_cast<__int128>(w[i]) * (__int128{2} << p) + top;
          c[i] = static_cast<Weight>(num / (2 * static_cast<__int128>(top)));
        }
        push(std::move(c));
      }
    }
    int best_bits = encoding_bits(w, b);
    std::optional<std::pair<std::vector<Weight>, Weight>> best;
    for (const auto& c : candidates) {
      int lower = 0;
      for (Weight x : c) lower += bit_size(x);
      if (lower + 1 >= best_bits) continue;
      auto b2 = detail::matching_budget(w, b, c);
      if (!b2) continue;
      int bits = encoding_bits(c, *b2);
      if (bits < best_bits) {
        best_bits = bits;
        best = {c, *b2};
      }
    }
    if (!best) break;
    w = best->first;
    b = best->second;
  }
  if (encoding_bits(w, b) >= start_bits) return RuleOutcome::unchanged();
  Instance out = in;
  for (int i = 0; i < m; ++i) out.edges[i].weight = w[i];
  out.budget = b;
  return RuleOutcome::reduced(std::move(out), {"compress", {}, b - in.budget,
                                               std::to_string(start_bits) + " -> " + std::to_string(encoding_bits(w, b)) + " bits"});
}

}  // namespace tspk
