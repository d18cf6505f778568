#pragma once

#include <numeric>

#include "kernel_fes.hpp"
#include "kernel_modulator.hpp"
#include "kernel_vc.hpp"

namespace tspk {

enum class Pipeline { fes, vc_tsp, vc_wrp, components, paths };

inline std::optional<Pipeline> pipeline_from_name(std::string_view s) {
  if (s == "fes") return Pipeline::fes;
  if (s == "vc-tsp") return Pipeline::vc_tsp;
  if (s == "vc-wrp") return Pipeline::vc_wrp;
  if (s == "components") return Pipeline::components;
  if (s == "paths") return Pipeline::paths;
  return std::nullopt;
}

inline std::string_view pipeline_name(Pipeline p) {
  switch (p) {
    case Pipeline::fes: return "fes";
    case Pipeline::vc_tsp: return "vc-tsp";
    case Pipeline::vc_wrp: return "vc-wrp";
    case Pipeline::components: return "components";
    case Pipeline::paths: return "paths";
  }
  return "?";
}

struct PipelineConfig {
  Pipeline pipeline = Pipeline::fes;
  int r = 2;
  int k_max = 8;
  std::optional<Weight> threshold;  // paths only
};

// Smallest instance with the given answer: one waypoint, or two that no edge joins.
inline Instance decided_instance(ProblemKind kind, bool yes) {
  const int n = yes ? 1 : 2;
  std::vector<int> w(static_cast<std::size_t>(n));
  std::iota(w.begin(), w.end(), 0);
  return make_instance(kind, n, {}, w, 0);
}

// Throws PreconditionError when the problem kind does not fit the pipeline and
// ScaleError when no modulator within k_max exists.
inline KernelResult run_pipeline(const Instance& in, const PipelineConfig& cfg) {
  if (cfg.r < 1) throw PreconditionError("r must be at least 1");
  if (cfg.k_max < 0) throw PreconditionError("k-max must be nonnegative");
  switch (cfg.pipeline) {
    case Pipeline::fes: return kernelize_fes(in);
    case Pipeline::vc_tsp: return kernelize_vc_tsp(in, cfg.k_max);
    case Pipeline::vc_wrp: return kernelize_vc_wrp(in, cfg.k_max);
    case Pipeline::components: return kernelize_components(in, cfg.r, cfg.k_max);
    case Pipeline::paths: return kernelize_paths(in, cfg.r, cfg.k_max, cfg.threshold);
  }
  throw PreconditionError("unknown pipeline");
}

}  // namespace tspk
