#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tap/core.hpp"
#include "tap/scores.hpp"

namespace tap {

struct GenRange {
  std::size_t lo = 1;
  std::size_t hi = 1;  // inclusive
};

struct GenParams {
  std::uint64_t seed = 0;
  GenRange n_frames{1, 2};
  GenRange facts_per_frame{2, 3};
  // Non-VALUE roles per fact; the first is always compared content.
  GenRange roles_per_fact{1, 2};
  // Probability that a further role is shared rather than compared.
  double shared_fraction = 0.3;
  // Upper bound on gold spans plus distractors; frames that would exceed it
  // are shrunk or skipped (the first frame always fits in its minimal form).
  std::size_t max_spans = 12;
  std::size_t distractors = 2;
  RoleInventory inventory = RoleInventory::default_inventory();
};

struct GenResult {
  AnalogyGraph graph;           // closed and constraint-valid
  std::vector<TapFrame> frames;  // as graph_to_frames would report them
};

/// Synthetic sentence of placeholder tokens ("AGT_0", "TIM_1", fillers "w",
/// distractors "DST_0") with numeric VALUE mentions ("17%", "$12",
/// "529 marks"), and its gold graph and frames. Deterministic per seed.
GenResult gen_graph(const GenParams& p);

/// Candidate spans are the gold vertices plus up to `distractors` single
/// uncovered tokens (true role NONE). Every span, pair and token distribution
/// puts 1 - noise on the true option and spreads `noise` over the others by a
/// seeded draw.
ScoreSet gen_scores(const AnalogyGraph& g, double noise, std::uint64_t seed,
                    std::size_t distractors = 2);

struct AdversarialInstance {
  ScoreSet scores;
  AnalogyGraph gold;
  std::string kind;  // "equivalence-trap" or "surface-similarity-trap"
};

/// Five-span instances whose argmax graph violates the analogy or unique-fact
/// constraints. Even seeds: two TIME spans scored more equivalent than
/// analogous, which leaves the VALUE pair unsupported. Odd seeds: a duplicate
/// of an argument's text strongly analogous to it and attached to the same
/// VALUE.
AdversarialInstance gen_adversarial(std::uint64_t seed);

}  // namespace tap
