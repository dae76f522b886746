#include <algorithm>
#include <map>
#include <numeric>

#include "tap/constraints.hpp"
#include "tap/decode.hpp"

namespace tap {

double objective(const Assignment& a, const ScoreSet& s) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.spans.size(); ++i)
    total += clamped_log(s.spans[i].probs.at(static_cast<std::size_t>(a.role_of.at(i))));
  for (std::size_t k = 0; k < s.edges.size(); ++k)
    total += clamped_log(s.edges[k].at(static_cast<std::size_t>(a.label_of.at(k))));
  return total;
}

std::vector<int> role_domain(const ScoreSet& s, std::size_t span, std::size_t top_k) {
  const auto roles = s.inventory.size();
  const auto& probs = s.spans.at(span).probs;
  std::vector<int> order(roles);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return probs[static_cast<std::size_t>(x)] > probs[static_cast<std::size_t>(y)]; });
  if (top_k > 0 && top_k < roles) order.resize(top_k);
  order.push_back(static_cast<int>(roles));
  return order;
}

namespace {

constexpr int kFact = static_cast<int>(EdgeLabel::Fact);
constexpr int kEquiv = static_cast<int>(EdgeLabel::Equivalence);
constexpr int kAnalogy = static_cast<int>(EdgeLabel::Analogy);
constexpr int kNone = Assignment::kNoneLabel;

class Greedy {
 public:
  explicit Greedy(const ScoreSet& s)
      : s_(s), n_(s.spans.size()), value_(static_cast<int>(s.inventory.value_role())),
        a_(Assignment::empty(s.spans.size(), s.inventory.size())) {}

  Assignment run() {
    argmax();
    resolve_overlaps();
    drop_ill_typed_edges();
    cluster();
    resolve_unique_facts();
    prune_disconnected();
    enforce_analogy();
    return a_;
  }

 private:
  bool active(std::size_t i) const { return a_.role_of[i] != a_.none_role(); }
  bool is_value(std::size_t i) const { return a_.role_of[i] == value_; }
  int label(std::size_t i, std::size_t j) const { return a_.label(i, j); }
  void set(std::size_t i, std::size_t j, int l) { a_.set_label(i, j, l); }
  double edge_p(std::size_t i, std::size_t j, int l) const {
    return s_.edge(i, j)[static_cast<std::size_t>(l)];
  }

  void drop_span(std::size_t i) {
    a_.role_of[i] = a_.none_role();
    for (std::size_t j = 0; j < n_; ++j)
      if (j != i) set(i, j, kNone);
  }

  void argmax() {
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& p = s_.spans[i].probs;
      a_.role_of[i] = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
    }
    for (std::size_t k = 0; k < s_.edges.size(); ++k) {
      const auto& p = s_.edges[k];
      a_.label_of[k] = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
    }
  }

  // Higher span score wins; ties go to the earlier start.
  void resolve_overlaps() {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n_; ++i)
      if (active(i)) order.push_back(i);
    auto score = [&](std::size_t i) { return s_.spans[i].probs[static_cast<std::size_t>(a_.role_of[i])]; };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (score(x) != score(y)) return score(x) > score(y);
      return s_.spans[x].range.start < s_.spans[y].range.start;
    });
    std::vector<std::size_t> kept;
    for (auto i : order) {
      const bool clash = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
        return s_.spans[k].range.overlaps(s_.spans[i].range);
      });
      if (clash) a_.role_of[i] = a_.none_role();
      else kept.push_back(i);
    }
  }

  void drop_ill_typed_edges() {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        const int l = label(i, j);
        if (l == kNone) continue;
        bool ok = active(i) && active(j);
        if (ok && l == kFact) ok = is_value(i) != is_value(j);
        if (ok && l != kFact) ok = a_.role_of[i] == a_.role_of[j];
        if (!ok) set(i, j, kNone);
      }
  }

  // Builds EQUIVALENCE clusters and VALUE ANALOGY clusters incrementally, most
  // probable edge first; an edge that would put two spans in both an
  // equivalence and an analogy cluster is dropped.
  void cluster() {
    struct Candidate {
      double p;
      std::size_t i, j;
      int l;
    };
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        const int l = label(i, j);
        if (l == kEquiv || (l == kAnalogy && is_value(i) && is_value(j)))
          cands.push_back({edge_p(i, j, l), i, j, l});
      }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& x, const Candidate& y) { return x.p > y.p; });

    UnionFind eq(n_), an(n_);
    std::vector<std::vector<std::size_t>> eq_members(n_), an_members(n_);
    for (std::size_t i = 0; i < n_; ++i) eq_members[i] = an_members[i] = {i};

    for (const auto& c : cands) {
      auto& same = c.l == kEquiv ? eq : an;
      auto& other = c.l == kEquiv ? an : eq;
      auto& members = c.l == kEquiv ? eq_members : an_members;
      const auto ri = same.find(c.i), rj = same.find(c.j);
      if (ri == rj) continue;
      bool conflict = false;
      for (auto x : members[ri])
        for (auto y : members[rj]) conflict = conflict || other.find(x) == other.find(y);
      if (conflict) continue;
      same.unite(ri, rj);
      const auto root = same.find(ri);
      const auto gone = root == ri ? rj : ri;
      members[root].insert(members[root].end(), members[gone].begin(), members[gone].end());
      members[gone].clear();
    }

    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        const int l = label(i, j);
        if (eq.find(i) == eq.find(j)) set(i, j, kEquiv);
        else if (is_value(i) && is_value(j) && an.find(i) == an.find(j)) set(i, j, kAnalogy);
        else if (l == kEquiv || (l == kAnalogy && is_value(i) && is_value(j))) set(i, j, kNone);
      }
  }

  // Among same-role arguments of one VALUE that are not all equivalent, keep
  // the one with the highest FACT probability and those equivalent to it.
  void resolve_unique_facts() {
    for (std::size_t v = 0; v < n_; ++v) {
      if (!is_value(v)) continue;
      std::map<int, std::vector<std::size_t>> by_role;
      for (std::size_t w = 0; w < n_; ++w)
        if (w != v && label(v, w) == kFact) by_role[a_.role_of[w]].push_back(w);
      for (const auto& [role, args] : by_role) {
        bool all_equiv = true;
        for (std::size_t x = 0; x < args.size(); ++x)
          for (std::size_t y = x + 1; y < args.size(); ++y)
            all_equiv = all_equiv && label(args[x], args[y]) == kEquiv;
        if (all_equiv) continue;
        auto best = args.front();
        for (auto w : args)
          if (edge_p(v, w, kFact) > edge_p(v, best, kFact)) best = w;
        for (auto w : args)
          if (w != best && label(best, w) != kEquiv) set(v, w, kNone);
      }
    }
  }

  bool prune_disconnected() {
    bool any = false;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < n_; ++i) {
        if (!active(i)) continue;
        bool connected = false;
        for (std::size_t j = 0; j < n_ && !connected; ++j) connected = j != i && label(i, j) == kFact;
        if (!connected) {
          drop_span(i);
          changed = any = true;
        }
      }
    }
    return any;
  }

  bool fact_arg(std::size_t v, std::size_t w) const {
    return v != w && is_value(v) && active(w) && !is_value(w) && label(v, w) == kFact;
  }

  bool value_pair_supported(std::size_t v1, std::size_t v2) const {
    for (std::size_t w1 = 0; w1 < n_; ++w1) {
      if (!fact_arg(v1, w1)) continue;
      for (std::size_t w2 = 0; w2 < n_; ++w2)
        if (w2 != w1 && fact_arg(v2, w2) && label(w1, w2) == kAnalogy) return true;
    }
    return false;
  }

  bool argument_pair_supported(std::size_t w1, std::size_t w2) const {
    for (std::size_t v1 = 0; v1 < n_; ++v1) {
      if (!fact_arg(v1, w1)) continue;
      for (std::size_t v2 = 0; v2 < n_; ++v2)
        if (v2 != v1 && fact_arg(v2, w2) && label(v1, v2) == kAnalogy) return true;
    }
    return false;
  }

  // Discards VALUE analogy clusters lacking quadrangle support (with the
  // arguments only they held), and unsupported argument analogies, until stable.
  void enforce_analogy() {
    bool changed = true;
    while (changed) {
      changed = false;
      UnionFind an(n_);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
          if (is_value(i) && is_value(j) && label(i, j) == kAnalogy) an.unite(i, j);
      std::map<std::size_t, std::vector<std::size_t>> clusters;
      for (std::size_t i = 0; i < n_; ++i)
        if (is_value(i)) clusters[an.find(i)].push_back(i);
      for (const auto& [root, members] : clusters) {
        if (members.size() < 2) continue;
        bool ok = true;
        for (std::size_t x = 0; x < members.size() && ok; ++x)
          for (std::size_t y = x + 1; y < members.size() && ok; ++y)
            ok = value_pair_supported(members[x], members[y]);
        if (!ok) {
          for (auto v : members) drop_span(v);
          changed = true;
        }
      }
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
          if (label(i, j) == kAnalogy && !is_value(i) && !is_value(j) &&
              !argument_pair_supported(i, j)) {
            set(i, j, kNone);
            changed = true;
          }
      changed = prune_disconnected() || changed;
    }

    bool has_pair = false;
    for (std::size_t i = 0; i < n_ && !has_pair; ++i)
      for (std::size_t j = i + 1; j < n_ && !has_pair; ++j)
        has_pair = is_value(i) && is_value(j) && label(i, j) == kAnalogy;
    if (!has_pair) a_ = Assignment::empty(n_, s_.inventory.size());
  }

  const ScoreSet& s_;
  std::size_t n_;
  int value_;
  Assignment a_;
};

}  // namespace

DecodeResult greedy_decode(const ScoreSet& s, const DecodeOptions&) {
  Assignment a = Greedy(s).run();
  const auto spans = s.ranges();
  auto graph = assignment_to_graph(spans, a, s.sentence, s.inventory);
  const double obj = objective(a, s);
  return {std::move(graph), std::move(a), obj, false, 0};
}

}  // namespace tap
