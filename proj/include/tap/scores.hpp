#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tap/assignment.hpp"
#include "tap/core.hpp"

namespace tap {

/// Per-token distributions over the inventory roles followed by O (outside);
/// each row has inventory.size() + 1 entries.
using TokenScores = std::vector<std::vector<double>>;

/// Candidate span with a distribution over the inventory roles followed by
/// NONE (inventory.size() + 1 entries).
struct CandidateSpan {
  SpanRange range;
  std::vector<double> probs;

  bool operator==(const CandidateSpan&) const = default;
};

/// Distribution over FACT, EQUIVALENCE, ANALOGY, NONE (EdgeLabel order, then
/// Assignment::kNoneLabel).
using EdgeDistribution = std::array<double, 4>;

/// The decoder's input: everything an upstream scorer provides for one sentence.
struct ScoreSet {
  Sentence sentence;
  RoleInventory inventory = RoleInventory::default_inventory();
  std::optional<TokenScores> token_scores;
  std::vector<CandidateSpan> spans;
  // One entry per unordered span pair, indexed by pair_index(i, j, spans.size()).
  std::vector<EdgeDistribution> edges;
  // Candidate spans may overlap; decoding keeps at most one of each overlapping set.
  bool raw = false;

  std::size_t role_options() const { return inventory.size() + 1; }
  const EdgeDistribution& edge(std::size_t i, std::size_t j) const {
    return edges[pair_index(i, j, spans.size())];
  }
  std::vector<SpanRange> ranges() const;

  bool operator==(const ScoreSet&) const = default;
};

inline constexpr double kNormalizationTolerance = 1e-6;
inline constexpr double kLogFloorProbability = 1e-12;

/// Natural log with probabilities clamped at kLogFloorProbability.
double clamped_log(double p);

/// Checks shapes, bounds and normalization. Throws MalformedInput or
/// DistributionNotNormalized (which names the offending distribution and sum).
void check_scores(const ScoreSet& s);

ScoreSet parse_scores(std::string_view text);
/// Probabilities are rounded to 9 significant digits; output is deterministic.
std::string emit_scores(const ScoreSet& s);

/// Per-token argmax (ties to the lower inventory index, O last), then maximal
/// runs of one non-O label become spans, in start order.
std::vector<Vertex> extract_spans(const TokenScores& ts);
/// Same run-merging over an externally decoded label sequence, where
/// `outside` is the O label.
std::vector<Vertex> extract_spans_from_labels(const std::vector<std::size_t>& labels,
                                              std::size_t outside);

/// Sum of the constituent token distributions, renormalized; the O entry
/// becomes the NONE entry.
std::vector<double> span_distribution_from_tokens(const TokenScores& ts, SpanRange span);

}  // namespace tap
