#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

#include "tap/constraints.hpp"
#include "tap/decode.hpp"

namespace tap {

namespace {

constexpr int kFact = static_cast<int>(EdgeLabel::Fact);
constexpr int kEquiv = static_cast<int>(EdgeLabel::Equivalence);
constexpr int kAnalogy = static_cast<int>(EdgeLabel::Analogy);
constexpr int kNone = Assignment::kNoneLabel;
constexpr double kTieEpsilon = 1e-12;

// Labels a pair may take once both roles are known (Active Edges and typing).
std::vector<int> admissible_labels(int r1, int r2, int none_role, int value_role) {
  if (r1 == none_role || r2 == none_role) return {kNone};
  const bool v1 = r1 == value_role, v2 = r2 == value_role;
  if (v1 != v2) return {kFact, kNone};
  if (r1 == r2) return {kEquiv, kAnalogy, kNone};
  return {kNone};
}

double margin(std::vector<double> p) {
  if (p.size() < 2) return 0.0;
  std::partial_sort(p.begin(), p.begin() + 2, p.end(), std::greater<>());
  return p[0] - p[1];
}

class BranchAndBound {
 public:
  BranchAndBound(const ScoreSet& s, const DecodeOptions& opt)
      : s_(s), opt_(opt), n_(s.spans.size()), pairs_(pair_count(n_)),
        none_role_(static_cast<int>(s.inventory.size())),
        value_role_(static_cast<int>(s.inventory.value_role())), ranges_(s.ranges()),
        current_(n_, s.inventory.size()) {
    span_log_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (double p : s.spans[i].probs) span_log_[i].push_back(clamped_log(p));
      domain_.push_back(role_domain(s, i, opt.top_k_roles));
      double best = -std::numeric_limits<double>::infinity();
      for (int r : domain_[i]) best = std::max(best, span_log_[i][static_cast<std::size_t>(r)]);
      span_max_.push_back(best);
    }
    pair_log_.resize(pairs_);
    for (std::size_t k = 0; k < pairs_; ++k)
      for (std::size_t l = 0; l < 4; ++l) pair_log_[k][l] = clamped_log(s.edges[k][l]);

    span_order_.resize(n_);
    std::iota(span_order_.begin(), span_order_.end(), std::size_t{0});
    std::stable_sort(span_order_.begin(), span_order_.end(), [&](std::size_t x, std::size_t y) {
      return margin(s.spans[x].probs) > margin(s.spans[y].probs);
    });
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) pair_order_.push_back({i, j});
    std::stable_sort(pair_order_.begin(), pair_order_.end(), [&](const auto& x, const auto& y) {
      const auto& ex = s.edge(x.first, x.second);
      const auto& ey = s.edge(y.first, y.second);
      return margin({ex.begin(), ex.end()}) > margin({ey.begin(), ey.end()});
    });
    pair_labels_.resize(pairs_);
    pair_suffix_.assign(pairs_ + 1, 0.0);
  }

  void seed(const Assignment& a) {
    if (!feasible(ranges_, s_.inventory, a, {false, opt_.allow_empty})) return;
    for (std::size_t i = 0; i < n_; ++i)
      if (std::find(domain_[i].begin(), domain_[i].end(), a.role_of[i]) == domain_[i].end()) return;
    const double value = objective(a, s_);
    if (!has_best_ || value > best_value_) {
      best_ = a;
      best_value_ = value;
      has_best_ = true;
    }
  }

  void run() {
    start_ = std::chrono::steady_clock::now();
    if (n_ == 0) {
      // Nothing to decide: the empty assignment is the only candidate.
      seed(current_);
      return;
    }
    search_span(0, 0.0);
  }

  bool completed() const { return !aborted_; }
  bool has_best() const { return has_best_; }
  const Assignment& best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  bool out_of_budget() {
    if (nodes_ >= opt_.budget_nodes) return true;
    if ((nodes_ & 1023) == 0 && std::chrono::steady_clock::now() - start_ > opt_.budget_time) return true;
    return false;
  }

  // Bound on the pair terms while some roles are still open.
  double pair_bound_open() const {
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        const auto& lp = pair_log_[pair_index(i, j, n_)];
        const int ri = current_.role_of[i], rj = current_.role_of[j];
        if (ri != Assignment::kUndecided && rj != Assignment::kUndecided) {
          double best = -std::numeric_limits<double>::infinity();
          for (int l : admissible_labels(ri, rj, none_role_, value_role_))
            best = std::max(best, lp[static_cast<std::size_t>(l)]);
          total += best;
        } else if (ri == none_role_ || rj == none_role_) {
          total += lp[kNone];
        } else {
          total += *std::max_element(lp.begin(), lp.end());
        }
      }
    return total;
  }

  bool prune(double bound) const { return has_best_ && bound <= best_value_ + kTieEpsilon; }

  bool partially_feasible() const {
    return feasible(ranges_, s_.inventory, current_, {true, opt_.allow_empty});
  }

  void search_span(std::size_t depth, double score) {
    if (depth == n_) {
      enter_pairs(score);
      return;
    }
    const auto span = span_order_[depth];
    for (int role : domain_[span]) {
      if (aborted_) return;
      if (out_of_budget()) {
        aborted_ = true;
        return;
      }
      ++nodes_;
      current_.role_of[span] = role;
      const double next = score + span_log_[span][static_cast<std::size_t>(role)];
      double open = 0.0;
      for (std::size_t d = depth + 1; d < n_; ++d) open += span_max_[span_order_[d]];
      if (!prune(next + open + pair_bound_open()) && partially_feasible()) search_span(depth + 1, next);
    }
    current_.role_of[span] = Assignment::kUndecided;
  }

  // All roles are fixed: precompute admissible labels in branch order and the
  // suffix bound over them.
  void enter_pairs(double score) {
    for (std::size_t k = 0; k < pairs_; ++k) {
      const auto [i, j] = pair_order_[k];
      const auto& lp = pair_log_[pair_index(i, j, n_)];
      auto labels = admissible_labels(current_.role_of[i], current_.role_of[j], none_role_, value_role_);
      std::stable_sort(labels.begin(), labels.end(), [&](int x, int y) {
        return lp[static_cast<std::size_t>(x)] > lp[static_cast<std::size_t>(y)];
      });
      pair_labels_[k] = std::move(labels);
    }
    pair_suffix_[pairs_] = 0.0;
    for (std::size_t k = pairs_; k-- > 0;) {
      const auto [i, j] = pair_order_[k];
      pair_suffix_[k] = pair_suffix_[k + 1] +
                        pair_log_[pair_index(i, j, n_)][static_cast<std::size_t>(pair_labels_[k].front())];
    }
    search_pair(0, score);
  }

  void search_pair(std::size_t depth, double score) {
    if (depth == pairs_) {
      if (!has_best_ || score > best_value_ + kTieEpsilon) {
        best_ = current_;
        best_value_ = score;
        has_best_ = true;
      }
      return;
    }
    const auto [i, j] = pair_order_[depth];
    const auto idx = pair_index(i, j, n_);
    for (int l : pair_labels_[depth]) {
      if (aborted_) return;
      if (out_of_budget()) {
        aborted_ = true;
        return;
      }
      ++nodes_;
      current_.label_of[idx] = l;
      const double next = score + pair_log_[idx][static_cast<std::size_t>(l)];
      if (!prune(next + pair_suffix_[depth + 1]) && partially_feasible()) search_pair(depth + 1, next);
    }
    current_.label_of[idx] = Assignment::kUndecided;
  }

  const ScoreSet& s_;
  const DecodeOptions& opt_;
  std::size_t n_;
  std::size_t pairs_;
  int none_role_;
  int value_role_;
  std::vector<SpanRange> ranges_;
  std::vector<std::vector<double>> span_log_;
  std::vector<std::array<double, 4>> pair_log_;
  std::vector<std::vector<int>> domain_;
  std::vector<double> span_max_;
  std::vector<std::size_t> span_order_;
  std::vector<std::pair<std::size_t, std::size_t>> pair_order_;
  std::vector<std::vector<int>> pair_labels_;
  std::vector<double> pair_suffix_;

  Assignment current_;
  Assignment best_;
  double best_value_ = -std::numeric_limits<double>::infinity();
  bool has_best_ = false;
  bool aborted_ = false;
  std::uint64_t nodes_ = 0;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

DecodeResult exact_decode(const ScoreSet& s, const DecodeOptions& options) {
  if (s.spans.size() > options.max_spans)
    throw Error(ErrorCode::InstanceTooLarge, std::to_string(s.spans.size()) +
                                                 " candidate spans exceed the maximum of " +
                                                 std::to_string(options.max_spans));
  BranchAndBound search(s, options);
  search.seed(greedy_decode(s, options).assignment);
  if (options.allow_empty) search.seed(Assignment::empty(s.spans.size(), s.inventory.size()));
  search.run();
  if (!search.has_best())
    throw Error(ErrorCode::BudgetExhaustedWithNoIncumbent,
                search.completed() ? "no admissible assignment exists"
                                   : "budget exhausted after " + std::to_string(search.nodes()) +
                                         " nodes without an admissible assignment");
  const auto& best = search.best();
  const auto spans = s.ranges();
  return {assignment_to_graph(spans, best, s.sentence, s.inventory), best, objective(best, s),
          search.completed(), search.nodes()};
}

// ---------------------------------------------------------------------------

DecodeResult brute_force_decode(const ScoreSet& s, std::size_t top_k_roles, bool allow_empty) {
  const auto n = s.spans.size();
  if (n > kBruteForceMaxSpans)
    throw Error(ErrorCode::InstanceTooLarge,
                std::to_string(n) + " spans exceed the brute-force limit of " +
                    std::to_string(kBruteForceMaxSpans));
  if (top_k_roles == 0 || top_k_roles > kBruteForceMaxRoles)
    throw Error(ErrorCode::InstanceTooLarge, "brute force needs 1 <= top_k_roles <= " +
                                                 std::to_string(kBruteForceMaxRoles));

  const int none_role = static_cast<int>(s.inventory.size());
  const int value_role = static_cast<int>(s.inventory.value_role());
  const auto spans = s.ranges();

  // Options in lexicographic (inventory) order so ties resolve deterministically.
  std::vector<std::vector<int>> options(n);
  for (std::size_t i = 0; i < n; ++i) {
    options[i] = role_domain(s, i, top_k_roles);
    std::sort(options[i].begin(), options[i].end());
  }

  DecodeResult result{AnalogyGraph(s.sentence, s.inventory), Assignment::empty(n, s.inventory.size()),
                      -std::numeric_limits<double>::infinity(), true, 0};
  bool found = false;

  // Full enumeration of role tuples; for each, every well-typed labelling.
  // Candidates that cannot beat the incumbent even with their best remaining
  // labels are skipped, which leaves the maximum unchanged.
  Assignment a = Assignment::empty(n, s.inventory.size());
  const auto npairs = pair_count(n);
  std::vector<std::vector<int>> labels(npairs);
  std::vector<double> suffix(npairs + 1, 0.0);

  // Ties within kTieEpsilon go to the lexicographically smaller assignment
  // (roles first, then labels), independent of enumeration order.
  auto consider = [&](double score) {
    ++result.nodes_explored;
    if (found) {
      if (score < result.objective - kTieEpsilon) return;
      if (score <= result.objective + kTieEpsilon &&
          std::tie(a.role_of, a.label_of) >= std::tie(result.assignment.role_of, result.assignment.label_of))
        return;
    }
    bool empty = true;
    for (int r : a.role_of) empty = empty && r == none_role;
    if (empty && !allow_empty) return;
    if (!validate(assignment_to_graph(spans, a, s.sentence, s.inventory)).empty()) return;
    result.assignment = a;
    result.objective = score;
    found = true;
  };

  // The all-NONE objective bounds the optimum from below when it is admissible;
  // strictly worse candidates are skipped, ties are still enumerated.
  const double floor = allow_empty ? objective(Assignment::empty(n, s.inventory.size()), s)
                                   : -std::numeric_limits<double>::infinity();

  auto label_search = [&](auto&& self, std::size_t k, double score) -> void {
    if (found && score + suffix[k] < result.objective - kTieEpsilon) return;
    if (score + suffix[k] < floor - kTieEpsilon) return;
    if (k == npairs) {
      consider(score);
      return;
    }
    for (int l : labels[k]) {
      a.label_of[k] = l;
      self(self, k + 1, score + clamped_log(s.edges[k][static_cast<std::size_t>(l)]));
    }
    a.label_of[k] = kNone;
  };

  // Every role tuple, visited in descending role score so that a strong
  // incumbent appears early.
  std::vector<std::pair<double, std::vector<int>>> tuples;
  std::vector<std::size_t> odometer(n, 0);
  while (true) {
    std::vector<int> roles(n);
    double role_score = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      roles[i] = options[i][odometer[i]];
      role_score += clamped_log(s.spans[i].probs[static_cast<std::size_t>(roles[i])]);
    }
    tuples.emplace_back(role_score, std::move(roles));
    std::size_t pos = n;
    while (pos > 0 && ++odometer[pos - 1] == options[pos - 1].size()) odometer[--pos] = 0;
    if (pos == 0) break;
  }
  std::stable_sort(tuples.begin(), tuples.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });

  for (const auto& [role_score, roles] : tuples) {
    a.role_of = roles;
    for (std::size_t i = 0, k = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        labels[k] = admissible_labels(a.role_of[i], a.role_of[j], none_role, value_role);
        const auto& p = s.edges[k];
        std::stable_sort(labels[k].begin(), labels[k].end(), [&](int x, int y) {
          return p[static_cast<std::size_t>(x)] > p[static_cast<std::size_t>(y)];
        });
      }
    for (std::size_t k = npairs; k-- > 0;) {
      double best = -std::numeric_limits<double>::infinity();
      for (int l : labels[k]) best = std::max(best, clamped_log(s.edges[k][static_cast<std::size_t>(l)]));
      suffix[k] = suffix[k + 1] + best;
    }
    label_search(label_search, 0, role_score);
  }

  if (!found)
    throw Error(ErrorCode::BudgetExhaustedWithNoIncumbent, "no admissible assignment exists");
  result.objective = objective(result.assignment, s);
  result.graph = assignment_to_graph(spans, result.assignment, s.sentence, s.inventory);
  return result;
}

}  // namespace tap
