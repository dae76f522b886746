#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tap/assignment.hpp"
#include "tap/core.hpp"

namespace tap {

/// Structural constraints on analogy graphs. Well-formedness and transitivity
/// each split into two ids.
enum class ConstraintId {
  WellFormedOverlap,
  WellFormedConnected,
  TypingFact,
  TypingEquivAnalogy,
  UniqueFacts,
  TransitivityEquiv,
  TransitivityAnalogy,
  AnalogyValuePair,
  AnalogyQuadrangle,
};

inline constexpr ConstraintId kAllConstraints[] = {
    ConstraintId::WellFormedOverlap,   ConstraintId::WellFormedConnected,
    ConstraintId::TypingFact,          ConstraintId::TypingEquivAnalogy,
    ConstraintId::UniqueFacts,         ConstraintId::TransitivityEquiv,
    ConstraintId::TransitivityAnalogy, ConstraintId::AnalogyValuePair,
    ConstraintId::AnalogyQuadrangle,
};

/// "WELL_FORMED_OVERLAP" etc.
std::string_view to_string(ConstraintId id);

struct Violation {
  ConstraintId id;
  std::vector<VertexId> vertices;
  // Offending edges, or for transitivity / unique-facts breaches, the edge
  // that is missing.
  std::vector<Edge> edges;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// All violations, ordered by constraint id, then vertex ids, then edges.
/// The empty graph is valid.
std::vector<Violation> validate(const AnalogyGraph& g);
std::vector<Violation> check(const AnalogyGraph& g, ConstraintId id);

struct FeasibilityMode {
  // Partial assignments: true unless the decided variables already refute
  // every completion. Never rejects a completable assignment.
  bool allow_undecided = false;
  // Admit the all-NONE assignment (a sentence without analogy).
  bool allow_empty = true;
};

/// Feasibility of a (partial) assignment over `spans` with the decoder's
/// constraint set. With allow_undecided=false, an assignment containing
/// undecided variables is infeasible.
bool feasible(std::span<const SpanRange> spans, const RoleInventory& inventory,
              const Assignment& assignment, FeasibilityMode mode = {});

/// Candidate spans and total assignment induced by a graph: one span per
/// vertex, in vertex-id order.
struct InducedAssignment {
  std::vector<SpanRange> spans;
  Assignment assignment;
};
InducedAssignment induced_assignment(const AnalogyGraph& g);

/// Graph whose vertices are the active spans of a complete assignment.
AnalogyGraph assignment_to_graph(std::span<const SpanRange> spans, const Assignment& a,
                                 const Sentence& sentence, const RoleInventory& inventory);

}  // namespace tap
