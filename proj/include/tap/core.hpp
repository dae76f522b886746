#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tap/error.hpp"

namespace tap {

using RoleId = std::size_t;
using VertexId = std::size_t;

struct Sentence {
  std::string id;
  std::vector<std::string> tokens;
  // Optional per-token annotations keyed by name ("ner", "head", "deprel", ...).
  // Every list has one entry per token.
  std::map<std::string, std::vector<std::string>> meta;

  std::size_t size() const { return tokens.size(); }
  // Tokens [start, end) joined by single spaces.
  std::string text(std::size_t start, std::size_t end) const;

  // Throws MalformedInput on empty tokens or mis-sized metadata.
  void check() const;

  bool operator==(const Sentence&) const = default;
};

/// Ordered set of role names with one designated value role. Names are stored
/// upper-case and compared case-insensitively.
class RoleInventory {
 public:
  RoleInventory(std::vector<std::string> roles, std::string_view value_role);

  /// VALUE, QUANTITY, WHOLE, AGENT, THEME, SOURCE, CAUSE, TIME.
  static RoleInventory default_inventory();

  std::size_t size() const { return roles_.size(); }
  const std::vector<std::string>& roles() const { return roles_; }
  const std::string& name(RoleId role) const { return roles_.at(role); }
  RoleId value_role() const { return value_; }
  bool is_value(RoleId role) const { return role == value_; }

  std::optional<RoleId> find(std::string_view name) const;
  // Throws UnknownRole.
  RoleId at(std::string_view name) const;

  bool operator==(const RoleInventory&) const = default;

 private:
  std::vector<std::string> roles_;
  RoleId value_ = 0;
};

/// Role-labelled token span [start, end).
struct Vertex {
  std::size_t start = 0;
  std::size_t end = 0;
  RoleId role = 0;

  bool overlaps(const Vertex& other) const { return start < other.end && other.start < end; }

  auto operator<=>(const Vertex&) const = default;
};

enum class EdgeLabel { Fact = 0, Equivalence = 1, Analogy = 2 };

inline constexpr std::size_t kEdgeLabelCount = 3;

std::string_view to_string(EdgeLabel label);
std::optional<EdgeLabel> parse_edge_label(std::string_view name);

/// FACT edges point from the VALUE endpoint (`a`) to the argument (`b`);
/// EQUIVALENCE and ANALOGY are undirected and stored with a < b.
struct Edge {
  VertexId a = 0;
  VertexId b = 0;
  EdgeLabel label = EdgeLabel::Fact;

  auto operator<=>(const Edge&) const = default;
};

class AnalogyGraph {
 public:
  AnalogyGraph(Sentence sentence, RoleInventory inventory)
      : sentence_(std::move(sentence)), inventory_(std::move(inventory)) {}

  const Sentence& sentence() const { return sentence_; }
  const RoleInventory& inventory() const { return inventory_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Vertex& vertex(VertexId id) const { return vertices_.at(id); }
  std::optional<VertexId> find_vertex(const Vertex& v) const;
  bool is_value(VertexId id) const { return inventory_.is_value(vertices_.at(id).role); }
  bool empty() const { return vertices_.empty() && edges_.empty(); }

  /// Undirected lookup for EQUIVALENCE/ANALOGY; for FACT, `a` is the VALUE side.
  bool has_edge(VertexId a, VertexId b, EdgeLabel label) const;
  /// Neighbours of `v` along edges with `label`, ascending. For FACT this
  /// ignores direction.
  const std::vector<VertexId>& neighbors(VertexId v, EdgeLabel label) const;
  /// Text covered by a vertex.
  std::string text(VertexId id) const;

  bool operator==(const AnalogyGraph& other) const {
    return sentence_ == other.sentence_ && inventory_ == other.inventory_ &&
           vertices_ == other.vertices_ && edges_ == other.edges_;
  }

 private:
  friend AnalogyGraph build_graph(Sentence, std::span<const Vertex>, std::span<const Edge>,
                                  RoleInventory);
  void index();

  Sentence sentence_;
  RoleInventory inventory_;
  std::vector<Vertex> vertices_;  // sorted by (start, end, role)
  std::vector<Edge> edges_;       // sorted, canonical, unique
  std::vector<std::vector<std::vector<VertexId>>> adjacency_;  // [label][vertex]
};

/// Builds a canonical graph. Edge endpoints index into `vertices`; duplicate
/// vertices and edges collapse, vertex ids are reassigned in (start, end, role)
/// order. Throws EdgeEndpointMissing, SelfLoop, SpanOutOfBounds, UnknownRole.
AnalogyGraph build_graph(Sentence sentence, std::span<const Vertex> vertices,
                         std::span<const Edge> edges, RoleInventory inventory);

/// Closes EQUIVALENCE over all vertices and ANALOGY over VALUE vertices only.
AnalogyGraph transitive_closure(const AnalogyGraph& g);

/// Same graph with a subset of edges; used by perturbation tooling.
AnalogyGraph with_edges(const AnalogyGraph& g, std::span<const Edge> edges);

struct Fact {
  Vertex value;
  std::map<RoleId, std::vector<Vertex>> arguments;

  bool operator==(const Fact&) const = default;
};

struct SharedContent {
  RoleId role = 0;
  std::vector<Vertex> cluster;

  bool operator==(const SharedContent&) const = default;
};

struct ComparedContent {
  RoleId role = 0;
  // One slot per fact, aligned with TapFrame::facts.
  std::vector<std::vector<Vertex>> slots;

  bool operator==(const ComparedContent&) const = default;
};

struct TapFrame {
  std::vector<Fact> facts;
  std::vector<SharedContent> shared;
  std::vector<ComparedContent> compared;

  bool operator==(const TapFrame&) const = default;
};

/// Sorts a frame's facts and entries into the order graph_to_frames emits.
void canonicalize_frame(TapFrame& frame);

/// One frame per ANALOGY component of VALUE vertices. Throws InvalidGraph if
/// the graph has constraint violations.
std::vector<TapFrame> graph_to_frames(const AnalogyGraph& g);

/// Inverse of graph_to_frames up to ordering; returns the closed graph.
/// Throws InconsistentFrame.
AnalogyGraph frames_to_graph(std::span<const TapFrame> frames, const Sentence& sentence,
                             const RoleInventory& inventory);

/// Disjoint-set forest used for EQUIVALENCE/ANALOGY clustering.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace tap
