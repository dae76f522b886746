#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "tap/assignment.hpp"
#include "tap/core.hpp"
#include "tap/scores.hpp"

namespace tap {

struct DecodeOptions {
  // When false, a decoded graph must contain an analogous VALUE pair.
  bool allow_empty = true;
  // Restrict each span to its k most probable roles (plus NONE); 0 = all roles.
  std::size_t top_k_roles = 0;
  std::size_t max_spans = 64;
  std::uint64_t budget_nodes = 10'000'000;
  std::chrono::milliseconds budget_time{30'000};
};

struct DecodeResult {
  AnalogyGraph graph;
  Assignment assignment;
  double objective = 0.0;
  bool optimal = false;
  std::uint64_t nodes_explored = 0;
};

/// Sum of clamped log-probabilities of every span-role and pair-label
/// decision, NONE included.
double objective(const Assignment& a, const ScoreSet& s);

/// Candidate options of one span: its top-k roles (all roles when k is 0 or
/// not smaller than the inventory) ordered by descending probability with
/// ties to the lower index, followed by NONE.
std::vector<int> role_domain(const ScoreSet& s, std::size_t span, std::size_t top_k);

/// Argmax decisions repaired step by step: overlap and typing, transitive
/// clustering, unique facts, then analogy support. May return the empty graph.
DecodeResult greedy_decode(const ScoreSet& s, const DecodeOptions& options = {});

/// Depth-first branch-and-bound over span roles then pair labels, pruned by
/// an upper bound and by partial feasibility. `optimal` is false when the node
/// or time budget ran out; the best incumbent is returned.
/// Throws InstanceTooLarge (more than max_spans candidates) and
/// BudgetExhaustedWithNoIncumbent (no admissible solution found).
DecodeResult exact_decode(const ScoreSet& s, const DecodeOptions& options = {});

inline constexpr std::size_t kBruteForceMaxSpans = 5;
inline constexpr std::size_t kBruteForceMaxRoles = 3;

/// Test oracle: exhaustive enumeration over each span's top-k roles and NONE
/// and every well-typed labelling, each candidate checked with `validate`.
/// Ties resolve to the lexicographically first assignment. Throws
/// InstanceTooLarge beyond 5 spans or 3 roles.
DecodeResult brute_force_decode(const ScoreSet& s, std::size_t top_k_roles, bool allow_empty = true);

}  // namespace tap
