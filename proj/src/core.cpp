#include "tap/core.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

namespace tap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EdgeEndpointMissing: return "EdgeEndpointMissing";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::SpanOutOfBounds: return "SpanOutOfBounds";
    case ErrorCode::UnknownRole: return "UnknownRole";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::InconsistentFrame: return "InconsistentFrame";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::DistributionNotNormalized: return "DistributionNotNormalized";
    case ErrorCode::BudgetExhaustedWithNoIncumbent: return "BudgetExhaustedWithNoIncumbent";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::UnitMismatchWithinSeries: return "UnitMismatchWithinSeries";
    case ErrorCode::NoComparedRole: return "NoComparedRole";
    case ErrorCode::NoNumberFound: return "NoNumberFound";
  }
  return "Error";
}

std::string Sentence::text(std::size_t start, std::size_t end) const {
  std::string out;
  for (std::size_t i = start; i < end && i < tokens.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i];
  }
  return out;
}

void Sentence::check() const {
  if (tokens.empty()) throw Error(ErrorCode::MalformedInput, "sentence '" + id + "' has no tokens");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty())
      throw Error(ErrorCode::MalformedInput,
                  "sentence '" + id + "' token " + std::to_string(i) + " is empty");
  }
  for (const auto& [key, values] : meta) {
    if (values.size() != tokens.size())
      throw Error(ErrorCode::MalformedInput, "sentence '" + id + "' meta '" + key + "' has " +
                                                 std::to_string(values.size()) + " entries for " +
                                                 std::to_string(tokens.size()) + " tokens");
  }
}

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

RoleInventory::RoleInventory(std::vector<std::string> roles, std::string_view value_role) {
  if (roles.empty()) throw Error(ErrorCode::MalformedInput, "role inventory is empty");
  for (auto& r : roles) {
    if (r.empty()) throw Error(ErrorCode::MalformedInput, "empty role name in inventory");
    r = upper(r);
    if (r == "O" || r == "NONE")
      throw Error(ErrorCode::MalformedInput, "role name '" + r + "' is reserved");
    if (std::find(roles_.begin(), roles_.end(), r) != roles_.end())
      throw Error(ErrorCode::MalformedInput, "duplicate role '" + r + "' in inventory");
    roles_.push_back(r);
  }
  auto v = find(value_role);
  if (!v)
    throw Error(ErrorCode::UnknownRole,
                "value role '" + std::string(value_role) + "' is not in the inventory");
  value_ = *v;
}

RoleInventory RoleInventory::default_inventory() {
  return RoleInventory({"VALUE", "QUANTITY", "WHOLE", "AGENT", "THEME", "SOURCE", "CAUSE", "TIME"},
                       "VALUE");
}

std::optional<RoleId> RoleInventory::find(std::string_view name) const {
  const auto key = upper(name);
  for (RoleId i = 0; i < roles_.size(); ++i)
    if (roles_[i] == key) return i;
  return std::nullopt;
}

RoleId RoleInventory::at(std::string_view name) const {
  if (auto r = find(name)) return *r;
  throw Error(ErrorCode::UnknownRole, "unknown role '" + std::string(name) + "'");
}

std::string_view to_string(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::Fact: return "FACT";
    case EdgeLabel::Equivalence: return "EQUIVALENCE";
    case EdgeLabel::Analogy: return "ANALOGY";
  }
  return "?";
}

std::optional<EdgeLabel> parse_edge_label(std::string_view name) {
  const auto key = upper(name);
  if (key == "FACT") return EdgeLabel::Fact;
  if (key == "EQUIVALENCE") return EdgeLabel::Equivalence;
  if (key == "ANALOGY") return EdgeLabel::Analogy;
  return std::nullopt;
}

UnionFind::UnionFind(std::size_t n) : parent_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  // Smaller index becomes the root so representatives are deterministic.
  if (b < a) std::swap(a, b);
  parent_[b] = a;
  return true;
}

std::optional<VertexId> AnalogyGraph::find_vertex(const Vertex& v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) return std::nullopt;
  return static_cast<VertexId>(it - vertices_.begin());
}

bool AnalogyGraph::has_edge(VertexId a, VertexId b, EdgeLabel label) const {
  Edge key{a, b, label};
  if (label != EdgeLabel::Fact && key.a > key.b) std::swap(key.a, key.b);
  return std::binary_search(edges_.begin(), edges_.end(), key);
}

const std::vector<VertexId>& AnalogyGraph::neighbors(VertexId v, EdgeLabel label) const {
  return adjacency_.at(static_cast<std::size_t>(label)).at(v);
}

std::string AnalogyGraph::text(VertexId id) const {
  const auto& v = vertices_.at(id);
  return sentence_.text(v.start, v.end);
}

void AnalogyGraph::index() {
  adjacency_.assign(kEdgeLabelCount, std::vector<std::vector<VertexId>>(vertices_.size()));
  for (const auto& e : edges_) {
    auto& adj = adjacency_[static_cast<std::size_t>(e.label)];
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (auto& per_label : adjacency_)
    for (auto& list : per_label) std::sort(list.begin(), list.end());
}

AnalogyGraph build_graph(Sentence sentence, std::span<const Vertex> vertices,
                         std::span<const Edge> edges, RoleInventory inventory) {
  AnalogyGraph g(std::move(sentence), std::move(inventory));
  const auto n_tokens = g.sentence_.size();

  for (const auto& v : vertices) {
    if (v.role >= g.inventory_.size())
      throw Error(ErrorCode::UnknownRole, "role id " + std::to_string(v.role) +
                                              " outside inventory of size " +
                                              std::to_string(g.inventory_.size()));
    if (!(v.start < v.end && v.end <= n_tokens))
      throw Error(ErrorCode::SpanOutOfBounds,
                  "span [" + std::to_string(v.start) + ", " + std::to_string(v.end) +
                      ") outside sentence of " + std::to_string(n_tokens) + " tokens");
  }

  g.vertices_.assign(vertices.begin(), vertices.end());
  std::sort(g.vertices_.begin(), g.vertices_.end());
  g.vertices_.erase(std::unique(g.vertices_.begin(), g.vertices_.end()), g.vertices_.end());

  std::vector<VertexId> remap(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) remap[i] = *g.find_vertex(vertices[i]);

  std::set<Edge> canonical;
  for (const auto& e : edges) {
    if (e.a >= vertices.size() || e.b >= vertices.size())
      throw Error(ErrorCode::EdgeEndpointMissing,
                  "edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                      ") references a vertex that does not exist");
    Edge c{remap[e.a], remap[e.b], e.label};
    if (c.a == c.b)
      throw Error(ErrorCode::SelfLoop, "edge on vertex " + std::to_string(c.a) + " is a self loop");
    if (c.label == EdgeLabel::Fact) {
      const bool a_value = g.inventory_.is_value(g.vertices_[c.a].role);
      const bool b_value = g.inventory_.is_value(g.vertices_[c.b].role);
      // Mistyped FACT edges (both or neither VALUE) keep their given direction;
      // the validator reports them.
      if (!a_value && b_value) std::swap(c.a, c.b);
    } else if (c.a > c.b) {
      std::swap(c.a, c.b);
    }
    canonical.insert(c);
  }
  g.edges_.assign(canonical.begin(), canonical.end());
  g.index();
  return g;
}

AnalogyGraph with_edges(const AnalogyGraph& g, std::span<const Edge> edges) {
  return build_graph(g.sentence(), g.vertices(), edges, g.inventory());
}

AnalogyGraph transitive_closure(const AnalogyGraph& g) {
  const auto n = g.vertices().size();
  UnionFind equiv(n);
  UnionFind analogy(n);
  for (const auto& e : g.edges()) {
    if (e.label == EdgeLabel::Equivalence) equiv.unite(e.a, e.b);
    if (e.label == EdgeLabel::Analogy && g.is_value(e.a) && g.is_value(e.b)) analogy.unite(e.a, e.b);
  }
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (VertexId a = 0; a < n; ++a) {
    for (VertexId b = a + 1; b < n; ++b) {
      if (equiv.find(a) == equiv.find(b)) edges.push_back({a, b, EdgeLabel::Equivalence});
      if (g.is_value(a) && g.is_value(b) && analogy.find(a) == analogy.find(b))
        edges.push_back({a, b, EdgeLabel::Analogy});
    }
  }
  return with_edges(g, edges);
}

}  // namespace tap
