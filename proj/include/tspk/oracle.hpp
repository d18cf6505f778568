#pragma once

#include "certificate.hpp"
#include "exact.hpp"
#include "frontier.hpp"

namespace tspk {

enum class Engine { automatic, multiplicity, held_karp, frontier };

inline std::optional<Engine> engine_from_name(std::string_view s) {
  if (s == "auto") return Engine::automatic;
  if (s == "multiplicity") return Engine::multiplicity;
  if (s == "heldkarp" || s == "held-karp") return Engine::held_karp;
  if (s == "frontier") return Engine::frontier;
  return std::nullopt;
}

// Picks the engine that covers the instance: Held-Karp for few waypoints, then
// plain enumeration for few edges, then the frontier program.
inline Engine pick_engine(const Instance& in, const OracleLimits& limits) {
  if (in.kind != ProblemKind::wrp && in.waypoint_count() <= limits.max_waypoints) return Engine::held_karp;
  if (in.edge_count() <= limits.max_edges) return Engine::multiplicity;
  return Engine::frontier;
}

inline OptResult solve(const Instance& in, const OracleLimits& limits = {}, Engine engine = Engine::automatic) {
  if (engine == Engine::automatic) engine = pick_engine(in, limits);
  switch (engine) {
    case Engine::held_karp: return solve_heldkarp(in, limits);
    case Engine::multiplicity: return solve_exact_multiplicity(in, limits);
    default: return solve_frontier(in, limits);
  }
}

// Feasibility verdict only; may use budget pruning.
inline bool decide(const Instance& in, const OracleLimits& limits = {}) {
  if (in.budget < 0) return false;
  Engine e = pick_engine(in, limits);
  if (e == Engine::frontier) return solve_frontier(in, limits, {true, false}).feasible;
  return solve(in, limits, e).feasible;
}

inline bool equivalent(const Instance& a, const Instance& b, const OracleLimits& limits = {}) {
  return decide(a, limits) == decide(b, limits);
}

}  // namespace tspk
