#include "tap/gen.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>

namespace tap {

namespace {

// mt19937_64 output is fixed by the standard; the mappings below are ours so
// results do not depend on the library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(next() % (hi - lo + 1));
  }
  double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return real() < p; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform(0, i - 1)]);
  }

 private:
  std::mt19937_64 engine_;
};

std::string prefix(const RoleInventory& inv, RoleId role) {
  static const std::map<std::string, std::string> known = {
      {"VALUE", "VAL"},  {"QUANTITY", "QNT"}, {"WHOLE", "WHL"},  {"AGENT", "AGT"},
      {"THEME", "THM"},  {"SOURCE", "SRC"},   {"CAUSE", "CAU"},  {"TIME", "TIM"}};
  const auto& name = inv.name(role);
  if (auto it = known.find(name); it != known.end()) return it->second;
  return name.substr(0, 3);
}

enum class Kind { Compared, Scope, SharedClass };

struct FramePlan {
  std::size_t facts = 2;
  std::vector<std::pair<RoleId, Kind>> roles;
  std::string unit;

  std::size_t spans() const {
    std::size_t n = facts;
    for (const auto& [role, kind] : roles) n += kind == Kind::Scope ? 1 : facts;
    return n;
  }
};

// A run of tokens in the generated sentence, optionally a vertex.
struct Item {
  std::vector<std::string> tokens;
  std::optional<RoleId> role;
  Vertex vertex{};
};

std::vector<std::string> value_tokens(const std::string& unit, Rng& rng) {
  const auto magnitude = std::to_string(unit == "%" ? rng.uniform(1, 99) : rng.uniform(1, 999));
  if (unit == "%") return {magnitude + "%"};
  if (unit == "$") return {"$" + magnitude};
  return {magnitude, unit};
}

}  // namespace

GenResult gen_graph(const GenParams& p) {
  const auto& inv = p.inventory;
  Rng rng(p.seed);
  std::vector<RoleId> argument_roles;
  for (RoleId r = 0; r < inv.size(); ++r)
    if (!inv.is_value(r)) argument_roles.push_back(r);
  static const std::vector<std::string> units = {"%", "$", "marks", "shares"};

  std::vector<FramePlan> plans;
  std::size_t used = p.distractors;
  const auto n_frames = rng.uniform(p.n_frames.lo, p.n_frames.hi);
  for (std::size_t k = 0; k < n_frames; ++k) {
    FramePlan plan;
    plan.facts = rng.uniform(p.facts_per_frame.lo, p.facts_per_frame.hi);
    plan.unit = units[rng.uniform(0, units.size() - 1)];
    auto roles = argument_roles;
    rng.shuffle(roles);
    const auto n_roles = std::min(rng.uniform(p.roles_per_fact.lo, p.roles_per_fact.hi), roles.size());
    for (std::size_t r = 0; r < n_roles; ++r) {
      Kind kind = Kind::Compared;
      if (r > 0 && rng.chance(p.shared_fraction)) kind = rng.chance(0.5) ? Kind::Scope : Kind::SharedClass;
      plan.roles.emplace_back(roles[r], kind);
    }
    if (used + plan.spans() > p.max_spans) {
      plan.facts = std::max<std::size_t>(p.facts_per_frame.lo, 2);
      plan.roles.resize(1);
    }
    if (k > 0 && used + plan.spans() > p.max_spans) break;
    used += plan.spans();
    plans.push_back(std::move(plan));
  }

  // Items per frame: scope vertices first, then each fact's clause in random order.
  std::vector<Item> items;
  std::map<RoleId, std::size_t> counters;
  auto placeholder = [&](RoleId role) {
    return Item{{prefix(inv, role) + "_" + std::to_string(counters[role]++)}, role, {}};
  };
  struct FrameItems {
    std::vector<std::size_t> values;                      // per fact
    std::map<RoleId, std::vector<std::size_t>> arguments;  // per role, per fact (or one scope item)
  };
  std::vector<FrameItems> frame_items(plans.size());
  for (std::size_t k = 0; k < plans.size(); ++k) {
    const auto& plan = plans[k];
    auto& fi = frame_items[k];
    for (const auto& [role, kind] : plan.roles)
      if (kind == Kind::Scope) {
        fi.arguments[role].push_back(items.size());
        items.push_back(placeholder(role));
      }
    for (std::size_t f = 0; f < plan.facts; ++f) {
      std::vector<Item> clause;
      std::vector<std::pair<RoleId, bool>> slots;  // role, is_value
      clause.push_back({value_tokens(plan.unit, rng), inv.value_role(), {}});
      slots.emplace_back(inv.value_role(), true);
      for (const auto& [role, kind] : plan.roles)
        if (kind != Kind::Scope) {
          clause.push_back(placeholder(role));
          slots.emplace_back(role, false);
        }
      std::vector<std::size_t> order(clause.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      rng.shuffle(order);
      for (auto i : order) {
        if (slots[i].second) fi.values.push_back(items.size());
        else fi.arguments[slots[i].first].push_back(items.size());
        items.push_back(std::move(clause[i]));
      }
    }
  }
  for (std::size_t d = 0; d < p.distractors; ++d) {
    const auto at = rng.uniform(0, items.size());
    Item distractor{{"DST_" + std::to_string(d)}, std::nullopt, {}};
    items.insert(items.begin() + static_cast<std::ptrdiff_t>(at), distractor);
    for (auto& fi : frame_items) {
      for (auto& v : fi.values) v += v >= at ? 1 : 0;
      for (auto& [role, ids] : fi.arguments)
        for (auto& v : ids) v += v >= at ? 1 : 0;
    }
  }

  Sentence sentence;
  sentence.id = "gen-" + std::to_string(p.seed);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0 && rng.chance(0.5)) sentence.tokens.emplace_back("w");
    auto& item = items[i];
    const auto start = sentence.tokens.size();
    sentence.tokens.insert(sentence.tokens.end(), item.tokens.begin(), item.tokens.end());
    if (item.role) item.vertex = {start, sentence.tokens.size(), *item.role};
  }

  std::vector<TapFrame> frames;
  for (std::size_t k = 0; k < plans.size(); ++k) {
    const auto& plan = plans[k];
    const auto& fi = frame_items[k];
    TapFrame frame;
    ComparedContent value_entry{inv.value_role(), {}};
    for (std::size_t f = 0; f < plan.facts; ++f) {
      Fact fact{items[fi.values[f]].vertex, {}};
      for (const auto& [role, kind] : plan.roles) {
        const auto& ids = fi.arguments.at(role);
        fact.arguments[role].push_back(items[kind == Kind::Scope ? ids.front() : ids[f]].vertex);
      }
      value_entry.slots.push_back({fact.value});
      frame.facts.push_back(std::move(fact));
    }
    frame.compared.push_back(std::move(value_entry));
    for (const auto& [role, kind] : plan.roles) {
      const auto& ids = fi.arguments.at(role);
      if (kind == Kind::Compared) {
        ComparedContent entry{role, {}};
        for (auto id : ids) entry.slots.push_back({items[id].vertex});
        frame.compared.push_back(std::move(entry));
      } else {
        SharedContent entry{role, {}};
        for (auto id : ids) entry.cluster.push_back(items[id].vertex);
        frame.shared.push_back(std::move(entry));
      }
    }
    canonicalize_frame(frame);
    frames.push_back(std::move(frame));
  }
  std::sort(frames.begin(), frames.end(), [](const TapFrame& a, const TapFrame& b) {
    return a.facts.front().value < b.facts.front().value;
  });

  auto graph = frames_to_graph(frames, sentence, inv);
  return {std::move(graph), std::move(frames)};
}

namespace {

// 1 - noise on `truth`, the rest spread by random weights.
std::vector<double> noisy(std::size_t n, std::size_t truth, double noise, Rng& rng) {
  std::vector<double> p(n, 0.0);
  if (n == 1) {
    p[0] = 1.0;
    return p;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (i != truth) total += p[i] = rng.real() + 1e-3;
  for (std::size_t i = 0; i < n; ++i)
    if (i != truth) p[i] *= noise / total;
  p[truth] = 1.0 - noise;
  return p;
}

}  // namespace

ScoreSet gen_scores(const AnalogyGraph& g, double noise, std::uint64_t seed, std::size_t distractors) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const auto& inv = g.inventory();
  const auto none_role = inv.size();
  ScoreSet s;
  s.sentence = g.sentence();
  s.inventory = inv;

  std::vector<bool> covered(g.sentence().size(), false);
  for (const auto& v : g.vertices())
    for (auto t = v.start; t < v.end; ++t) covered[t] = true;
  std::vector<std::size_t> free_tokens;
  for (std::size_t t = 0; t < covered.size(); ++t)
    if (!covered[t]) free_tokens.push_back(t);
  rng.shuffle(free_tokens);
  free_tokens.resize(std::min(free_tokens.size(), distractors));

  struct Candidate {
    SpanRange range;
    std::size_t truth;
    std::optional<VertexId> vertex;
  };
  std::vector<Candidate> candidates;
  for (VertexId v = 0; v < g.vertices().size(); ++v)
    candidates.push_back({{g.vertex(v).start, g.vertex(v).end}, g.vertex(v).role, v});
  for (auto t : free_tokens) candidates.push_back({{t, t + 1}, none_role, std::nullopt});
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.range.start, a.range.end) < std::tie(b.range.start, b.range.end);
  });

  for (const auto& c : candidates) s.spans.push_back({c.range, noisy(inv.size() + 1, c.truth, noise, rng)});

  const auto n = candidates.size();
  s.edges.resize(pair_count(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t truth = Assignment::kNoneLabel;
      const auto& a = candidates[i].vertex;
      const auto& b = candidates[j].vertex;
      if (a && b) {
        for (std::size_t l = 0; l < kEdgeLabelCount; ++l)
          if (g.has_edge(*a, *b, static_cast<EdgeLabel>(l)) || g.has_edge(*b, *a, static_cast<EdgeLabel>(l)))
            truth = l;
      }
      const auto p = noisy(4, truth, noise, rng);
      std::copy(p.begin(), p.end(), s.edges[pair_index(i, j, n)].begin());
    }

  TokenScores ts;
  std::vector<std::size_t> token_truth(g.sentence().size(), none_role);
  for (const auto& v : g.vertices())
    for (auto t = v.start; t < v.end; ++t) token_truth[t] = v.role;
  for (auto truth : token_truth) ts.push_back(noisy(inv.size() + 1, truth, noise, rng));
  s.token_scores = std::move(ts);
  return s;
}

namespace {

// Distribution with the given entries fixed and the remainder spread randomly.
std::vector<double> shaped(std::size_t n, const std::map<std::size_t, double>& fixed, Rng& rng) {
  std::vector<double> p(n, 0.0);
  double rest = 1.0, total = 0.0;
  for (const auto& [i, q] : fixed) rest -= p[i] = q;
  for (std::size_t i = 0; i < n; ++i)
    if (!fixed.count(i)) total += p[i] = rng.real() + 1e-3;
  for (std::size_t i = 0; i < n; ++i)
    if (!fixed.count(i)) p[i] *= rest / total;
  return p;
}

double between(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.real(); }

}  // namespace

AdversarialInstance gen_adversarial(std::uint64_t seed) {
  Rng rng(seed);
  const auto inv = RoleInventory::default_inventory();
  const auto R = inv.size();
  const auto value = inv.value_role();
  constexpr auto kF = static_cast<std::size_t>(EdgeLabel::Fact);
  constexpr auto kE = static_cast<std::size_t>(EdgeLabel::Equivalence);
  constexpr auto kA = static_cast<std::size_t>(EdgeLabel::Analogy);
  constexpr auto kN = static_cast<std::size_t>(Assignment::kNoneLabel);

  AdversarialInstance out{{}, AnalogyGraph({}, inv), {}};
  ScoreSet& s = out.scores;
  s.inventory = inv;
  std::vector<Vertex> gold_vertices;
  std::vector<Edge> gold_edges;
  std::map<std::pair<std::size_t, std::size_t>, std::map<std::size_t, double>> pair_scores;
  std::vector<std::map<std::size_t, double>> span_scores;

  if (seed % 2 == 0) {
    // Two TIME spans that look equivalent although their facts are compared.
    out.kind = "equivalence-trap";
    const auto time = inv.at("TIME");
    s.sentence = {"adv-" + std::to_string(seed), {"TIM_0", "w", "9,118", "w", "TIM_1", "w", "12,500", "DST_0"}, {}};
    gold_vertices = {{0, 1, time}, {2, 3, value}, {4, 5, time}, {6, 7, value}};
    s.spans = {{{0, 1}, {}}, {{2, 3}, {}}, {{4, 5}, {}}, {{6, 7}, {}}, {{7, 8}, {}}};
    span_scores = {{{time, between(rng, 0.8, 0.9)}}, {{value, between(rng, 0.8, 0.9)}},
                   {{time, between(rng, 0.8, 0.9)}}, {{value, between(rng, 0.8, 0.9)}},
                   {{R, between(rng, 0.8, 0.9)}}};
    gold_edges = {{1, 0, EdgeLabel::Fact}, {3, 2, EdgeLabel::Fact}, {1, 3, EdgeLabel::Analogy},
                  {0, 2, EdgeLabel::Analogy}};
    pair_scores[{0, 1}] = {{kF, between(rng, 0.8, 0.9)}};
    pair_scores[{2, 3}] = {{kF, between(rng, 0.8, 0.9)}};
    pair_scores[{1, 3}] = {{kA, between(rng, 0.7, 0.8)}};
    pair_scores[{0, 2}] = {{kE, between(rng, 0.5, 0.55)}, {kA, between(rng, 0.35, 0.4)}};
  } else {
    // A repeated argument mention strongly analogous to the first one.
    out.kind = "surface-similarity-trap";
    const auto source = inv.at("SOURCE");
    s.sentence = {"adv-" + std::to_string(seed), {"SRC_0", "w", "17%", "w", "SRC_1", "w", "28%", "w", "SRC_0"}, {}};
    gold_vertices = {{0, 1, source}, {2, 3, value}, {4, 5, source}, {6, 7, value}};
    s.spans = {{{0, 1}, {}}, {{2, 3}, {}}, {{4, 5}, {}}, {{6, 7}, {}}, {{8, 9}, {}}};
    span_scores = {{{source, between(rng, 0.8, 0.9)}}, {{value, between(rng, 0.8, 0.9)}},
                   {{source, between(rng, 0.8, 0.9)}}, {{value, between(rng, 0.8, 0.9)}},
                   {{source, 0.7}}};
    gold_edges = {{1, 0, EdgeLabel::Fact}, {3, 2, EdgeLabel::Fact}, {1, 3, EdgeLabel::Analogy},
                  {0, 2, EdgeLabel::Analogy}};
    pair_scores[{0, 1}] = {{kF, 0.9}};
    pair_scores[{1, 4}] = {{kF, 0.6}};
    pair_scores[{0, 4}] = {{kA, 0.8}, {kE, 0.02}};
    pair_scores[{2, 4}] = {{kA, 0.5}};
    pair_scores[{2, 3}] = {{kF, between(rng, 0.8, 0.9)}};
    pair_scores[{0, 2}] = {{kA, between(rng, 0.6, 0.7)}};
    pair_scores[{1, 3}] = {{kA, between(rng, 0.7, 0.8)}};
  }

  for (std::size_t i = 0; i < s.spans.size(); ++i) s.spans[i].probs = shaped(R + 1, span_scores[i], rng);
  const auto n = s.spans.size();
  s.edges.resize(pair_count(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto it = pair_scores.find({i, j});
      const auto fixed =
          it != pair_scores.end() ? it->second : std::map<std::size_t, double>{{kN, between(rng, 0.85, 0.95)}};
      const auto p = shaped(4, fixed, rng);
      std::copy(p.begin(), p.end(), s.edges[pair_index(i, j, n)].begin());
    }
  out.gold = transitive_closure(build_graph(s.sentence, gold_vertices, gold_edges, inv));
  return out;
}

}  // namespace tap
