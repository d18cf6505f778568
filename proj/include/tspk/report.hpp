#pragma once

#include <map>
#include <sstream>

#include "json.hpp"
#include "preprocess.hpp"

namespace tspk {

struct BoundCheck {
  std::string name;
  long long bound = 0;
  long long measured = 0;
  bool ok() const { return measured <= bound; }
};

struct KernelReport {
  std::string pipeline;
  std::optional<bool> decided;
  int input_vertices = 0;
  int input_edges = 0;
  int output_vertices = 0;
  int output_edges = 0;
  Weight input_budget = 0;
  Weight output_budget = 0;
  std::map<std::string, int> rule_counts;
  std::map<std::string, long long> measures;
  std::vector<BoundCheck> bounds;
  std::vector<int> promoted;  // 1-based ids in the output instance
  std::vector<std::string> notes;
  std::vector<LogEntry> log;

  void record(const LogEntry& e) {
    ++rule_counts[e.rule];
    log.push_back(e);
  }

  // Absorbs an outcome; returns true when it decided the instance.
  bool apply(const RuleOutcome& out, Instance& work) {
    if (!out.changed()) return false;
    record(out.log);
    if (out.kind == RuleOutcome::Kind::decided_yes) decided = true;
    if (out.kind == RuleOutcome::Kind::decided_no) decided = false;
    if (out.instance) work = *out.instance;
    return out.decided();
  }

  void begin(std::string name, const Instance& in) {
    pipeline = std::move(name);
    input_vertices = in.vertex_count;
    input_edges = in.edge_count();
    input_budget = in.budget;
  }

  void finish(const Instance& out) {
    output_vertices = out.vertex_count;
    output_edges = out.edge_count();
    output_budget = out.budget;
  }

  bool bounds_ok() const {
    return std::all_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.ok(); });
  }
};

struct KernelResult {
  Instance instance;
  KernelReport report;
};

inline nlohmann::json to_json(const KernelReport& r) {
  nlohmann::json j;
  j["pipeline"] = r.pipeline;
  j["decided"] = r.decided ? nlohmann::json(*r.decided ? "yes" : "no") : nlohmann::json(nullptr);
  j["input"] = {{"vertices", r.input_vertices}, {"edges", r.input_edges}, {"budget", r.input_budget}};
  j["output"] = {{"vertices", r.output_vertices}, {"edges", r.output_edges}, {"budget", r.output_budget}};
  j["rules"] = r.rule_counts;
  j["measures"] = r.measures;
  j["bounds"] = nlohmann::json::array();
  for (const auto& b : r.bounds)
    j["bounds"].push_back({{"name", b.name}, {"bound", b.bound}, {"measured", b.measured}, {"ok", b.ok()}});
  j["promoted"] = r.promoted;
  j["notes"] = r.notes;
  j["log"] = nlohmann::json::array();
  for (const auto& e : r.log)
    j["log"].push_back({{"rule", e.rule}, {"ids", e.ids}, {"budget_delta", e.budget_delta}, {"note", e.note}});
  return j;
}

inline std::string to_text(const KernelReport& r) {
  std::ostringstream os;
  os << "pipeline " << r.pipeline << '\n';
  if (r.decided) os << "DECIDED " << (*r.decided ? "yes" : "no") << '\n';
  os << "input " << r.input_vertices << " vertices " << r.input_edges << " edges budget " << r.input_budget << '\n';
  os << "output " << r.output_vertices << " vertices " << r.output_edges << " edges budget " << r.output_budget << '\n';
  for (const auto& [name, n] : r.rule_counts) os << "rule " << name << ' ' << n << '\n';
  for (const auto& [name, v] : r.measures) os << "measure " << name << ' ' << v << '\n';
  for (const auto& b : r.bounds)
    os << "bound " << b.name << ' ' << b.measured << " <= " << b.bound << (b.ok() ? " ok" : " VIOLATED") << '\n';
  if (!r.promoted.empty()) {
    os << "promoted";
    for (int v : r.promoted) os << ' ' << v;
    os << '\n';
  }
  for (const auto& n : r.notes) os << "note " << n << '\n';
  return os.str();
}

}  // namespace tspk
