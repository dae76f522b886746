#include "tap/scores.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>

#include "json_util.hpp"

namespace tap {

using detail::json;

std::vector<SpanRange> ScoreSet::ranges() const {
  std::vector<SpanRange> out;
  out.reserve(spans.size());
  for (const auto& s : spans) out.push_back(s.range);
  return out;
}

double clamped_log(double p) { return std::log(std::max(p, kLogFloorProbability)); }

namespace {

void check_distribution(const std::vector<double>& probs, std::size_t expected,
                        const std::string& what) {
  if (probs.size() != expected)
    throw Error(ErrorCode::MalformedInput, what + " has " + std::to_string(probs.size()) +
                                               " entries, expected " + std::to_string(expected));
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw Error(ErrorCode::DistributionNotNormalized, what + " has a negative or non-finite entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", sum);
    throw Error(ErrorCode::DistributionNotNormalized, what + " sums to " + buf);
  }
}

double round9(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", p);
  return std::strtod(buf, nullptr);
}

}  // namespace

void check_scores(const ScoreSet& s) {
  s.sentence.check();
  const auto n_tokens = s.sentence.size();
  const auto options = s.role_options();
  if (s.token_scores) {
    if (s.token_scores->size() != n_tokens)
      throw Error(ErrorCode::MalformedInput, "token_scores has " +
                                                 std::to_string(s.token_scores->size()) +
                                                 " rows for " + std::to_string(n_tokens) + " tokens");
    for (std::size_t t = 0; t < n_tokens; ++t)
      check_distribution((*s.token_scores)[t], options, "token_scores[" + std::to_string(t) + "]");
  }
  for (std::size_t i = 0; i < s.spans.size(); ++i) {
    const auto& r = s.spans[i].range;
    if (!(r.start < r.end && r.end <= n_tokens))
      throw Error(ErrorCode::SpanOutOfBounds, "spans[" + std::to_string(i) + "] is outside the sentence");
    check_distribution(s.spans[i].probs, options, "spans[" + std::to_string(i) + "]");
    if (!s.raw)
      for (std::size_t j = 0; j < i; ++j)
        if (s.spans[j].range.overlaps(r))
          throw Error(ErrorCode::MalformedInput, "spans[" + std::to_string(j) + "] and spans[" +
                                                     std::to_string(i) +
                                                     "] overlap; set \"raw\": true to allow");
  }
  if (s.edges.size() != pair_count(s.spans.size()))
    throw Error(ErrorCode::MalformedInput, "expected " + std::to_string(pair_count(s.spans.size())) +
                                               " edge entries, found " + std::to_string(s.edges.size()));
  for (std::size_t i = 0; i < s.spans.size(); ++i)
    for (std::size_t j = i + 1; j < s.spans.size(); ++j) {
      const auto& e = s.edge(i, j);
      check_distribution({e.begin(), e.end()}, 4,
                         "edges(" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

ScoreSet parse_scores(std::string_view text) {
  using namespace detail;
  const json j = parse_json(text);
  as_object(j, "<root>");
  ScoreSet s;
  s.sentence = sentence_from_json(field(j, "", "sentence"), "sentence");
  if (const auto* inv = optional_field(j, "inventory")) s.inventory = inventory_from_json(*inv, "inventory");
  if (const auto* raw = optional_field(j, "raw")) {
    if (!raw->is_boolean()) malformed("raw", "expected a boolean");
    s.raw = raw->get<bool>();
  }
  const auto options = s.role_options();

  if (const auto* ts = optional_field(j, "token_scores")) {
    as_array(*ts, "token_scores");
    TokenScores rows;
    for (std::size_t t = 0; t < ts->size(); ++t) {
      const auto p = "token_scores[" + std::to_string(t) + "]";
      const auto& row = as_array((*ts)[t], p);
      std::vector<double> probs;
      for (std::size_t k = 0; k < row.size(); ++k)
        probs.push_back(as_number(row[k], p + "[" + std::to_string(k) + "]"));
      rows.push_back(std::move(probs));
    }
    s.token_scores = std::move(rows);
  }

  const auto& spans = as_array(field(j, "", "spans"), "spans");
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto p = "spans[" + std::to_string(i) + "]";
    CandidateSpan c;
    c.range.start = as_index(field(spans[i], p, "start"), p + ".start");
    c.range.end = as_index(field(spans[i], p, "end"), p + ".end");
    c.probs.assign(options, 0.0);
    const auto& scores = as_object(field(spans[i], p, "scores"), p + ".scores");
    for (const auto& [name, value] : scores.items()) {
      const auto q = p + ".scores." + name;
      if (name == "NONE") {
        c.probs[options - 1] = as_number(value, q);
      } else {
        auto r = s.inventory.find(name);
        if (!r) throw Error(ErrorCode::UnknownRole, "field '" + q + "': unknown role");
        c.probs[*r] = as_number(value, q);
      }
    }
    s.spans.push_back(std::move(c));
  }

  const auto n = s.spans.size();
  s.edges.assign(pair_count(n), EdgeDistribution{});
  std::vector<bool> seen(pair_count(n), false);
  const auto& edges = as_array(field(j, "", "edges"), "edges");
  static constexpr const char* kLabels[] = {"FACT", "EQUIVALENCE", "ANALOGY", "NONE"};
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto p = "edges[" + std::to_string(k) + "]";
    const auto a = as_index(field(edges[k], p, "a"), p + ".a");
    const auto b = as_index(field(edges[k], p, "b"), p + ".b");
    if (!(a < b && b < n)) malformed(p, "expected span indices a < b < " + std::to_string(n));
    const auto idx = pair_index(a, b, n);
    if (seen[idx]) malformed(p, "duplicate entry for pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
    seen[idx] = true;
    const auto& scores = as_object(field(edges[k], p, "scores"), p + ".scores");
    for (const auto& [name, value] : scores.items()) {
      const auto* hit = std::find_if(std::begin(kLabels), std::end(kLabels),
                                     [&](const char* l) { return name == l; });
      if (hit == std::end(kLabels)) malformed(p + ".scores." + name, "unknown edge label");
      s.edges[idx][static_cast<std::size_t>(hit - std::begin(kLabels))] =
          as_number(value, p + ".scores." + name);
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (!seen[pair_index(a, b, n)])
        malformed("edges", "missing entry for pair (" + std::to_string(a) + "," + std::to_string(b) + ")");

  check_scores(s);
  return s;
}

std::string emit_scores(const ScoreSet& s) {
  using namespace detail;
  const auto& roles = s.inventory.roles();
  json j = {{"sentence", sentence_to_json(s.sentence)}, {"inventory", inventory_to_json(s.inventory)}};
  if (s.raw) j["raw"] = true;
  if (s.token_scores) {
    json rows = json::array();
    for (const auto& row : *s.token_scores) {
      json r = json::array();
      for (double p : row) r.push_back(round9(p));
      rows.push_back(std::move(r));
    }
    j["token_scores"] = std::move(rows);
  }
  json spans = json::array();
  for (const auto& c : s.spans) {
    json scores = json::object();
    for (std::size_t r = 0; r < roles.size(); ++r) scores[roles[r]] = round9(c.probs.at(r));
    scores["NONE"] = round9(c.probs.at(roles.size()));
    spans.push_back({{"start", c.range.start}, {"end", c.range.end}, {"scores", std::move(scores)}});
  }
  j["spans"] = std::move(spans);
  json edges = json::array();
  const auto n = s.spans.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto& e = s.edge(a, b);
      edges.push_back({{"a", a},
                       {"b", b},
                       {"scores",
                        {{"FACT", round9(e[0])},
                         {"EQUIVALENCE", round9(e[1])},
                         {"ANALOGY", round9(e[2])},
                         {"NONE", round9(e[3])}}}});
    }
  j["edges"] = std::move(edges);
  return dump(j);
}

std::vector<Vertex> extract_spans_from_labels(const std::vector<std::size_t>& labels,
                                              std::size_t outside) {
  std::vector<Vertex> out;
  std::size_t i = 0;
  while (i < labels.size()) {
    if (labels[i] == outside) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < labels.size() && labels[j] == labels[i]) ++j;
    out.push_back({i, j, labels[i]});
    i = j;
  }
  return out;
}

std::vector<Vertex> extract_spans(const TokenScores& ts) {
  if (ts.empty()) return {};
  const auto outside = ts.front().size() - 1;
  std::vector<std::size_t> labels;
  labels.reserve(ts.size());
  for (const auto& row : ts)
    labels.push_back(static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin()));
  return extract_spans_from_labels(labels, outside);
}

std::vector<double> span_distribution_from_tokens(const TokenScores& ts, SpanRange span) {
  if (!(span.start < span.end && span.end <= ts.size()))
    throw Error(ErrorCode::SpanOutOfBounds, "span outside token scores");
  std::vector<double> sum(ts[span.start].size(), 0.0);
  for (auto t = span.start; t < span.end; ++t)
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += ts[t][k];
  const double total = std::accumulate(sum.begin(), sum.end(), 0.0);
  for (auto& p : sum) p /= total;
  return sum;
}

}  // namespace tap
