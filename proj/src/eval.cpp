#include "tap/eval.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <tuple>

namespace tap {

PRF PRF::from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  PRF r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  r.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  const double pr = r.precision + r.recall;
  r.f1 = pr == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / pr;
  return r;
}

PRF& PRF::operator+=(const PRF& other) {
  *this = from_counts(tp + other.tp, fp + other.fp, fn + other.fn);
  return *this;
}

std::size_t SpanMatching::total_overlap() const {
  std::size_t total = 0;
  for (const auto& p : pairs) total += p.overlap;
  return total;
}

std::size_t overlap(const Vertex& a, const Vertex& b) {
  const auto lo = std::max(a.start, b.start);
  const auto hi = std::min(a.end, b.end);
  return hi > lo ? hi - lo : 0;
}

// Shortest augmenting path formulation with row/column potentials, O(n^2 m).
std::vector<std::size_t> hungarian_min_cost(std::span<const long long> cost, std::size_t rows,
                                            std::size_t cols) {
  if (rows > cols) throw Error(ErrorCode::MalformedInput, "hungarian_min_cost needs rows <= cols");
  constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
  // 1-based with column 0 as the virtual start.
  std::vector<long long> u(rows + 1, 0), v(cols + 1, 0);
  std::vector<std::size_t> owner(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<long long> minv(cols + 1, kInf);
    std::vector<bool> used(cols + 1, false);
    do {
      used[j0] = true;
      const auto i0 = owner[j0];
      long long delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const long long cur = cost[(i0 - 1) * cols + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const auto j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(rows, 0);
  for (std::size_t j = 1; j <= cols; ++j)
    if (owner[j] != 0) assignment[owner[j] - 1] = j - 1;
  return assignment;
}

SpanMatching match_spans(std::span<const Vertex> gold, std::span<const Vertex> pred) {
  SpanMatching m;
  if (gold.empty() || pred.empty()) return m;
  const bool transpose = gold.size() > pred.size();
  const auto rows = transpose ? pred.size() : gold.size();
  const auto cols = transpose ? gold.size() : pred.size();
  std::vector<long long> cost(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& g = transpose ? gold[c] : gold[r];
      const auto& p = transpose ? pred[r] : pred[c];
      cost[r * cols + c] = -static_cast<long long>(overlap(g, p));
    }
  const auto assignment = hungarian_min_cost(cost, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto gi = transpose ? assignment[r] : r;
    const auto pi = transpose ? r : assignment[r];
    const auto w = overlap(gold[gi], pred[pi]);
    if (w > 0) m.pairs.push_back({gi, pi, w});
  }
  std::sort(m.pairs.begin(), m.pairs.end(),
            [](const MatchedSpan& a, const MatchedSpan& b) { return a.gold < b.gold; });
  return m;
}

namespace {

using Triple = std::tuple<VertexId, int, VertexId>;

Triple canonical(const Edge& e) {
  if (e.label == EdgeLabel::Fact) return {e.a, static_cast<int>(e.label), e.b};
  return {std::min(e.a, e.b), static_cast<int>(e.label), std::max(e.a, e.b)};
}

// Shared counting for frame and edge metrics.
PRF triple_prf(const AnalogyGraph& gold, const AnalogyGraph& pred, bool check_roles) {
  const auto m = match_spans(gold.vertices(), pred.vertices());
  std::map<VertexId, VertexId> to_gold;
  for (const auto& p : m.pairs) to_gold[p.pred] = p.gold;

  std::set<Triple> gold_triples;
  for (const auto& e : gold.edges()) gold_triples.insert(canonical(e));

  std::size_t tp = 0;
  std::set<Triple> seen;
  for (const auto& e : pred.edges()) {
    if (!seen.insert(canonical(e)).second) continue;
    auto a = to_gold.find(e.a), b = to_gold.find(e.b);
    if (a == to_gold.end() || b == to_gold.end()) continue;
    if (check_roles && (gold.vertex(a->second).role != pred.vertex(e.a).role ||
                        gold.vertex(b->second).role != pred.vertex(e.b).role))
      continue;
    if (gold_triples.count(canonical(Edge{a->second, b->second, e.label}))) ++tp;
  }
  return PRF::from_counts(tp, seen.size() - tp, gold_triples.size() - tp);
}

}  // namespace

PRF frame_prf(const AnalogyGraph& gold, const AnalogyGraph& pred) {
  return triple_prf(transitive_closure(gold), transitive_closure(pred), true);
}

PRF edge_prf(const AnalogyGraph& gold, const AnalogyGraph& pred, bool close) {
  if (close) return triple_prf(transitive_closure(gold), transitive_closure(pred), false);
  return triple_prf(gold, pred, false);
}

PRF span_prf(const AnalogyGraph& gold, const AnalogyGraph& pred) {
  const auto m = match_spans(gold.vertices(), pred.vertices());
  std::size_t n_gold = 0, n_pred = 0, tp = 0;
  for (VertexId v = 0; v < gold.vertices().size(); ++v) n_gold += gold.is_value(v) ? 0 : 1;
  for (VertexId v = 0; v < pred.vertices().size(); ++v) n_pred += pred.is_value(v) ? 0 : 1;
  for (const auto& p : m.pairs) {
    if (gold.is_value(p.gold) || pred.is_value(p.pred)) continue;
    if (gold.vertex(p.gold).role == pred.vertex(p.pred).role) ++tp;
  }
  return PRF::from_counts(tp, n_pred - tp, n_gold - tp);
}

AlphaResult krippendorff_alpha(const std::vector<std::vector<std::string>>& annotations) {
  if (annotations.size() < 2)
    throw Error(ErrorCode::MalformedInput, "alpha needs at least two annotators");
  const auto items = annotations.front().size();
  for (const auto& a : annotations)
    if (a.size() != items) throw Error(ErrorCode::MalformedInput, "annotations differ in length");

  std::map<std::string, std::size_t> index;
  for (const auto& a : annotations)
    for (const auto& label : a) index.emplace(label, index.size());
  const auto k = index.size();
  if (k <= 1) return {1.0, true};

  // Coincidence matrix: each item contributes every ordered pair of values
  // from different annotators with weight 1 / (m - 1).
  const auto m = annotations.size();
  std::vector<double> coincidence(k * k, 0.0);
  std::vector<std::size_t> counts(k);
  for (std::size_t u = 0; u < items; ++u) {
    std::fill(counts.begin(), counts.end(), 0);
    for (const auto& a : annotations) ++counts[index[a[u]]];
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t d = 0; d < k; ++d) {
        const double pairs = c == d ? static_cast<double>(counts[c] * (counts[c] - (counts[c] > 0 ? 1 : 0)))
                                    : static_cast<double>(counts[c] * counts[d]);
        coincidence[c * k + d] += pairs / static_cast<double>(m - 1);
      }
  }
  std::vector<double> marginal(k, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t d = 0; d < k; ++d) marginal[c] += coincidence[c * k + d];
  for (double x : marginal) n += x;

  double observed = 0.0, expected = 0.0;
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t d = 0; d < k; ++d) {
      if (c == d) continue;
      observed += coincidence[c * k + d];
      expected += marginal[c] * marginal[d];
    }
  if (expected == 0.0) return {1.0, true};
  return {1.0 - (n - 1.0) * observed / expected, false};
}

std::vector<std::string> token_labels(const AnalogyGraph& g) {
  std::vector<std::string> labels(g.sentence().size(), "O");
  for (const auto& v : g.vertices())
    for (auto t = v.start; t < v.end; ++t) labels[t] = g.inventory().name(v.role);
  return labels;
}

}  // namespace tap
