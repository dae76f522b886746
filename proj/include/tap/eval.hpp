#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tap/core.hpp"

namespace tap {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  /// Counts to scores; 0/0 is 0.
  static PRF from_counts(std::size_t tp, std::size_t fp, std::size_t fn);
  /// Micro-average: sums the counts.
  PRF& operator+=(const PRF& other);
};

struct MatchedSpan {
  VertexId gold = 0;
  VertexId pred = 0;
  std::size_t overlap = 0;  // tokens

  bool operator==(const MatchedSpan&) const = default;
};

struct SpanMatching {
  std::vector<MatchedSpan> pairs;  // sorted by gold id

  std::size_t total_overlap() const;
  bool operator==(const SpanMatching&) const = default;
};

/// Token overlap of two spans.
std::size_t overlap(const Vertex& a, const Vertex& b);

/// One-to-one matching maximizing total token overlap (Hungarian method);
/// roles are ignored and zero-overlap pairs are never matched.
SpanMatching match_spans(std::span<const Vertex> gold, std::span<const Vertex> pred);

/// Minimum-cost assignment on an n x m cost matrix (row-major), n <= m.
/// Returns, for each row, its assigned column.
std::vector<std::size_t> hungarian_min_cost(std::span<const long long> cost, std::size_t rows,
                                            std::size_t cols);

/// Labelled vertex-edge-vertex triples on the transitively closed graphs;
/// a predicted triple counts when its matched gold triple has the same label
/// and both endpoint roles agree.
PRF frame_prf(const AnalogyGraph& gold, const AnalogyGraph& pred);

/// Labelled non-VALUE spans under the overlap matching.
PRF span_prf(const AnalogyGraph& gold, const AnalogyGraph& pred);

/// Labelled edges under the overlap matching, endpoint roles not checked.
/// With `close`, both graphs are transitively closed first.
PRF edge_prf(const AnalogyGraph& gold, const AnalogyGraph& pred, bool close = false);

struct AlphaResult {
  double alpha = 1.0;
  // All values identical across all items: alpha is undefined and reported as 1.0.
  bool degenerate = false;
};

/// Krippendorff's alpha with the nominal metric. Each inner vector is one
/// annotator's label sequence over the same items. Throws MalformedInput on
/// fewer than two annotators or unequal lengths.
AlphaResult krippendorff_alpha(const std::vector<std::vector<std::string>>& annotations);

/// Per-token role labels of a graph ("O" outside vertices).
std::vector<std::string> token_labels(const AnalogyGraph& g);

}  // namespace tap
