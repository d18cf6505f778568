#pragma once

#include <cctype>
#include <charconv>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "graph.hpp"

namespace tspk {

enum class ProblemKind { tsp, subset_tsp, wrp };

enum class Capacity : std::uint8_t { one = 1, two = 2, unbounded = 3 };

inline std::string_view kind_token(ProblemKind k) {
  switch (k) {
    case ProblemKind::tsp: return "tsp";
    case ProblemKind::subset_tsp: return "stsp";
    case ProblemKind::wrp: return "wrp";
  }
  return "?";
}

inline std::optional<ProblemKind> kind_from_token(std::string_view s) {
  if (s == "tsp") return ProblemKind::tsp;
  if (s == "stsp") return ProblemKind::subset_tsp;
  if (s == "wrp") return ProblemKind::wrp;
  return std::nullopt;
}

inline bool admits(Capacity c, int multiplicity) {
  return c == Capacity::unbounded || multiplicity <= static_cast<int>(c);
}

// Largest multiplicity a nice solution ever needs on an edge of this capacity.
inline int nice_limit(Capacity c) { return c == Capacity::one ? 1 : 2; }

inline Capacity min_capacity(Capacity a, Capacity b) {
  return static_cast<int>(a) < static_cast<int>(b) ? a : b;
}

struct Edge {
  int u = 0;
  int v = 0;
  Weight weight = 0;
  Capacity capacity = Capacity::unbounded;

  int other(int x) const { return x == u ? v : u; }
  bool operator==(const Edge&) const = default;
};

// Vertices are 0-based here; files and reports use 1-based ids.
struct Instance {
  ProblemKind kind = ProblemKind::tsp;
  int vertex_count = 0;
  std::vector<Edge> edges;
  std::vector<bool> waypoint;
  Weight budget = 0;
  std::optional<std::vector<int>> modulator_hint;

  int edge_count() const { return static_cast<int>(edges.size()); }
  bool is_waypoint(int v) const { return waypoint[static_cast<std::size_t>(v)]; }

  int waypoint_count() const {
    return static_cast<int>(std::count(waypoint.begin(), waypoint.end(), true));
  }

  std::vector<int> waypoints() const {
    std::vector<int> out;
    for (int v = 0; v < vertex_count; ++v)
      if (waypoint[v]) out.push_back(v);
    return out;
  }

  Weight total_weight() const {
    Weight s = 0;
    for (const auto& e : edges) s = checked_add(s, e.weight);
    return s;
  }

  bool operator==(const Instance&) const = default;
};

inline void validate(const Instance& in) {
  if (in.vertex_count < 1) throw Error("instance needs at least one vertex");
  if (static_cast<int>(in.waypoint.size()) != in.vertex_count)
    throw Error("waypoint mask length differs from vertex count");
  for (const auto& e : in.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= in.vertex_count || e.v >= in.vertex_count)
      throw Error("edge endpoint out of range");
    if (e.u == e.v) throw Error("self-loops are not allowed");
    if (e.weight < 0) throw Error("negative edge weight");
    if (in.kind == ProblemKind::wrp) {
      if (e.capacity == Capacity::unbounded) throw Error("WRP edges need capacity 1 or 2");
    } else if (e.capacity != Capacity::unbounded) {
      throw Error("only WRP edges carry capacities");
    }
  }
  if (in.kind == ProblemKind::tsp && in.waypoint_count() != in.vertex_count)
    throw Error("every TSP vertex is a waypoint");
  if (in.modulator_hint) {
    const auto& h = *in.modulator_hint;
    if (!std::is_sorted(h.begin(), h.end()) || std::adjacent_find(h.begin(), h.end()) != h.end())
      throw Error("modulator hint must be a sorted set");
    for (int v : h)
      if (v < 0 || v >= in.vertex_count) throw Error("modulator hint vertex out of range");
  }
}

inline Instance make_instance(ProblemKind kind, int n, std::vector<Edge> edges,
                              const std::vector<int>& waypoints, Weight budget) {
  Instance in;
  in.kind = kind;
  in.vertex_count = n;
  in.edges = std::move(edges);
  in.budget = budget;
  in.waypoint.assign(static_cast<std::size_t>(n), kind == ProblemKind::tsp);
  if (kind != ProblemKind::tsp)
    for (int w : waypoints) in.waypoint.at(static_cast<std::size_t>(w)) = true;
  for (auto& e : in.edges) {
    if (kind != ProblemKind::wrp) e.capacity = Capacity::unbounded;
    else if (e.capacity == Capacity::unbounded) e.capacity = Capacity::two;
  }
  validate(in);
  return in;
}

// Incident edge indices per vertex, in edge order.
inline std::vector<std::vector<int>> incidence(const Instance& in) {
  std::vector<std::vector<int>> inc(static_cast<std::size_t>(in.vertex_count));
  for (int i = 0; i < in.edge_count(); ++i) {
    inc[in.edges[i].u].push_back(i);
    inc[in.edges[i].v].push_back(i);
  }
  return inc;
}

inline std::vector<int> degrees(const Instance& in) {
  std::vector<int> d(static_cast<std::size_t>(in.vertex_count), 0);
  for (const auto& e : in.edges) {
    ++d[e.u];
    ++d[e.v];
  }
  return d;
}

// Component label per vertex; labels are numbered by smallest member.
// Vertices with skip[v] set get label -1 and block connectivity.
inline std::vector<int> component_labels(const Instance& in, const std::vector<bool>* skip = nullptr,
                                         int* count = nullptr) {
  const int n = in.vertex_count;
  UnionFind uf(n);
  for (const auto& e : in.edges) {
    if (skip && ((*skip)[e.u] || (*skip)[e.v])) continue;
    uf.unite(e.u, e.v);
  }
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::vector<int> root_label(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    if (skip && (*skip)[v]) continue;
    int r = uf.find(v);
    if (root_label[r] < 0) root_label[r] = next++;
    label[v] = root_label[r];
  }
  if (count) *count = next;
  return label;
}

// Drops the marked vertices and their edges; survivors keep their relative order.
inline Instance remove_vertices(const Instance& in, const std::vector<bool>& removed) {
  std::vector<int> remap(static_cast<std::size_t>(in.vertex_count), -1);
  Instance out;
  out.kind = in.kind;
  out.budget = in.budget;
  for (int v = 0; v < in.vertex_count; ++v) {
    if (removed[v]) continue;
    remap[v] = out.vertex_count++;
    out.waypoint.push_back(in.waypoint[v]);
  }
  for (const auto& e : in.edges) {
    if (removed[e.u] || removed[e.v]) continue;
    out.edges.push_back({remap[e.u], remap[e.v], e.weight, e.capacity});
  }
  if (in.modulator_hint) {
    std::vector<int> h;
    for (int v : *in.modulator_hint)
      if (!removed[v]) h.push_back(remap[v]);
    out.modulator_hint = std::move(h);
  }
  return out;
}

// Reinterprets a TSP/SUBTSP instance as WRP; unbounded capacity becomes 2.
inline Instance as_wrp(const Instance& in) {
  Instance out = in;
  out.kind = ProblemKind::wrp;
  for (auto& e : out.edges)
    if (e.capacity == Capacity::unbounded) e.capacity = Capacity::two;
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::int64_t parse_int(std::string_view tok, std::size_t line) {
  std::int64_t value = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(line, "malformed number '" + std::string(tok) + "'");
  return value;
}

}  // namespace detail

inline Instance parse_instance(std::istream& is) {
  Instance in;
  bool have_header = false, have_budget = false, have_waypoints = false;
  int declared_edges = 0;
  std::size_t line_no = 0;
  std::string line;
  std::vector<int> waypoint_ids;

  auto vertex = [&](std::string_view tok) {
    auto id = detail::parse_int(tok, line_no);
    if (id < 1 || id > in.vertex_count)
      throw ParseError(line_no, "vertex " + std::string(tok) + " out of range");
    return static_cast<int>(id - 1);
  };

  while (std::getline(is, line)) {
    ++line_no;
    auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0] == "c") continue;
    const auto rec = tok[0];
    if (rec == "p") {
      if (have_header) throw ParseError(line_no, "duplicate header");
      if (tok.size() != 4) throw ParseError(line_no, "malformed header");
      auto kind = kind_from_token(tok[1]);
      if (!kind) throw ParseError(line_no, "unknown problem kind");
      in.kind = *kind;
      auto n = detail::parse_int(tok[2], line_no);
      auto m = detail::parse_int(tok[3], line_no);
      if (n < 1 || n > 10'000'000) throw ParseError(line_no, "vertex count must be positive");
      if (m < 0 || m > 100'000'000) throw ParseError(line_no, "edge count must be nonnegative");
      in.vertex_count = static_cast<int>(n);
      declared_edges = static_cast<int>(m);
      in.waypoint.assign(static_cast<std::size_t>(n), in.kind == ProblemKind::tsp);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "record before header");
    if (rec == "b") {
      if (have_budget) throw ParseError(line_no, "duplicate budget line");
      if (tok.size() != 2) throw ParseError(line_no, "malformed budget line");
      in.budget = detail::parse_int(tok[1], line_no);
      have_budget = true;
    } else if (rec == "w") {
      if (in.kind == ProblemKind::tsp) throw ParseError(line_no, "waypoint line not allowed for tsp");
      if (have_waypoints) throw ParseError(line_no, "duplicate waypoint line");
      for (std::size_t i = 1; i < tok.size(); ++i) in.waypoint[vertex(tok[i])] = true;
      have_waypoints = true;
    } else if (rec == "m") {
      if (in.modulator_hint) throw ParseError(line_no, "duplicate modulator line");
      std::vector<int> h;
      for (std::size_t i = 1; i < tok.size(); ++i) h.push_back(vertex(tok[i]));
      std::sort(h.begin(), h.end());
      h.erase(std::unique(h.begin(), h.end()), h.end());
      in.modulator_hint = std::move(h);
    } else if (rec == "e") {
      if (in.edge_count() >= declared_edges) throw ParseError(line_no, "more edges than declared");
      if (tok.size() != 4 && tok.size() != 5) throw ParseError(line_no, "malformed edge line");
      Edge e;
      e.u = vertex(tok[1]);
      e.v = vertex(tok[2]);
      if (e.u == e.v) throw ParseError(line_no, "self-loop");
      e.weight = detail::parse_int(tok[3], line_no);
      if (e.weight < 0) throw ParseError(line_no, "negative weight");
      if (in.kind == ProblemKind::wrp) {
        e.capacity = Capacity::two;
        if (tok.size() == 5) {
          auto c = detail::parse_int(tok[4], line_no);
          if (c < 1) throw ParseError(line_no, "capacity must be positive");
          e.capacity = c == 1 ? Capacity::one : Capacity::two;
        }
      } else if (tok.size() == 5) {
        throw ParseError(line_no, "capacity only allowed for wrp");
      }
      in.edges.push_back(e);
    } else {
      throw ParseError(line_no, "unknown record '" + std::string(rec) + "'");
    }
  }
  if (!have_header) throw ParseError(line_no, "missing header");
  if (!have_budget) throw ParseError(line_no, "missing budget line");
  if (in.edge_count() != declared_edges)
    throw ParseError(line_no, "expected " + std::to_string(declared_edges) + " edges, found " +
                                  std::to_string(in.edge_count()));
  validate(in);
  return in;
}

inline Instance parse_instance_string(std::string_view text) {
  std::istringstream is{std::string(text)};
  return parse_instance(is);
}

inline std::string render_instance(const Instance& in, const std::vector<std::string>& comments = {}) {
  std::ostringstream os;
  for (const auto& c : comments) os << "c " << c << '\n';
  os << "p " << kind_token(in.kind) << ' ' << in.vertex_count << ' ' << in.edge_count() << '\n';
  os << "b " << in.budget << '\n';
  if (in.kind != ProblemKind::tsp) {
    os << 'w';
    for (int v : in.waypoints()) os << ' ' << v + 1;
    os << '\n';
  }
  if (in.modulator_hint) {
    os << 'm';
    for (int v : *in.modulator_hint) os << ' ' << v + 1;
    os << '\n';
  }
  for (const auto& e : in.edges) {
    os << "e " << e.u + 1 << ' ' << e.v + 1 << ' ' << e.weight;
    if (in.kind == ProblemKind::wrp) os << ' ' << static_cast<int>(e.capacity);
    os << '\n';
  }
  return os.str();
}

}  // namespace tspk
