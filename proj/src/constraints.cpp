#include "tap/constraints.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace tap {

std::string_view to_string(ConstraintId id) {
  switch (id) {
    case ConstraintId::WellFormedOverlap: return "WELL_FORMED_OVERLAP";
    case ConstraintId::WellFormedConnected: return "WELL_FORMED_CONNECTED";
    case ConstraintId::TypingFact: return "TYPING_FACT";
    case ConstraintId::TypingEquivAnalogy: return "TYPING_EQUIV_ANALOGY";
    case ConstraintId::UniqueFacts: return "UNIQUE_FACTS";
    case ConstraintId::TransitivityEquiv: return "TRANSITIVITY_EQUIV";
    case ConstraintId::TransitivityAnalogy: return "TRANSITIVITY_ANALOGY";
    case ConstraintId::AnalogyValuePair: return "ANALOGY_VALUE_PAIR";
    case ConstraintId::AnalogyQuadrangle: return "ANALOGY_QUADRANGLE";
  }
  return "?";
}

namespace {

std::string vname(const AnalogyGraph& g, VertexId v) {
  const auto& x = g.vertex(v);
  return "v" + std::to_string(v) + "(" + g.inventory().name(x.role) + " [" +
         std::to_string(x.start) + "," + std::to_string(x.end) + "))";
}

Edge undirected(VertexId a, VertexId b, EdgeLabel label) {
  return a < b ? Edge{a, b, label} : Edge{b, a, label};
}

void check_overlap(const AnalogyGraph& g, std::vector<Violation>& out) {
  const auto& vs = g.vertices();
  for (VertexId i = 0; i < vs.size(); ++i)
    for (VertexId j = i + 1; j < vs.size() && vs[j].start < vs[i].end; ++j)
      if (vs[i].overlaps(vs[j]))
        out.push_back({ConstraintId::WellFormedOverlap, {i, j}, {},
                       vname(g, i) + " overlaps " + vname(g, j)});
}

void check_connected(const AnalogyGraph& g, std::vector<Violation>& out) {
  for (VertexId v = 0; v < g.vertices().size(); ++v)
    if (g.neighbors(v, EdgeLabel::Fact).empty())
      out.push_back({ConstraintId::WellFormedConnected, {v}, {},
                     vname(g, v) + " has no FACT edge"});
}

void check_typing(const AnalogyGraph& g, std::vector<Violation>& out, bool facts) {
  for (const auto& e : g.edges()) {
    if (facts && e.label == EdgeLabel::Fact) {
      if (g.is_value(e.a) == g.is_value(e.b))
        out.push_back({ConstraintId::TypingFact, {std::min(e.a, e.b), std::max(e.a, e.b)}, {e},
                       "FACT edge " + vname(g, e.a) + " -> " + vname(g, e.b) +
                           " must join a VALUE to a non-VALUE vertex"});
    } else if (!facts && e.label != EdgeLabel::Fact) {
      if (g.vertex(e.a).role != g.vertex(e.b).role)
        out.push_back({ConstraintId::TypingEquivAnalogy, {e.a, e.b}, {e},
                       std::string(to_string(e.label)) + " edge joins " + vname(g, e.a) +
                           " and " + vname(g, e.b) + " of different roles"});
    }
  }
}

void check_unique_facts(const AnalogyGraph& g, std::vector<Violation>& out) {
  for (VertexId v = 0; v < g.vertices().size(); ++v) {
    if (!g.is_value(v)) continue;
    std::vector<VertexId> args;
    for (auto w : g.neighbors(v, EdgeLabel::Fact))
      if (g.has_edge(v, w, EdgeLabel::Fact)) args.push_back(w);
    for (std::size_t i = 0; i < args.size(); ++i)
      for (std::size_t j = i + 1; j < args.size(); ++j) {
        const auto w1 = args[i], w2 = args[j];
        if (g.vertex(w1).role != g.vertex(w2).role) continue;
        if (g.has_edge(w1, w2, EdgeLabel::Equivalence)) continue;
        out.push_back({ConstraintId::UniqueFacts, {v, w1, w2},
                       {undirected(w1, w2, EdgeLabel::Equivalence)},
                       vname(g, v) + " has FACT edges to same-role " + vname(g, w1) + " and " +
                           vname(g, w2) + " without EQUIVALENCE between them"});
      }
  }
}

void check_transitivity(const AnalogyGraph& g, std::vector<Violation>& out, EdgeLabel label) {
  const bool analogy = label == EdgeLabel::Analogy;
  const auto id = analogy ? ConstraintId::TransitivityAnalogy : ConstraintId::TransitivityEquiv;
  std::set<std::pair<VertexId, VertexId>> missing;
  for (VertexId mid = 0; mid < g.vertices().size(); ++mid) {
    if (analogy && !g.is_value(mid)) continue;
    const auto& nb = g.neighbors(mid, label);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        const auto a = nb[i], c = nb[j];
        if (analogy && !(g.is_value(a) && g.is_value(c))) continue;
        if (!g.has_edge(a, c, label)) missing.insert({a, c});
      }
  }
  for (const auto& [a, c] : missing)
    out.push_back({id, {a, c}, {Edge{a, c, label}},
                   std::string(to_string(label)) + " closure requires an edge between " +
                       vname(g, a) + " and " + vname(g, c)});
}

void check_value_pair(const AnalogyGraph& g, std::vector<Violation>& out) {
  if (g.vertices().empty()) return;
  for (const auto& e : g.edges())
    if (e.label == EdgeLabel::Analogy && g.is_value(e.a) && g.is_value(e.b)) return;
  std::vector<VertexId> witness;
  for (VertexId v = 0; v < g.vertices().size(); ++v)
    if (g.is_value(v)) witness.push_back(v);
  if (witness.empty())
    for (VertexId v = 0; v < g.vertices().size(); ++v) witness.push_back(v);
  out.push_back({ConstraintId::AnalogyValuePair, witness, {},
                 "graph has no ANALOGY edge between two VALUE vertices"});
}

// FACT(v, w) with v VALUE and w non-VALUE, as stored.
bool fact_arg(const AnalogyGraph& g, VertexId v, VertexId w) {
  return g.is_value(v) && !g.is_value(w) && g.has_edge(v, w, EdgeLabel::Fact);
}

bool quadrangle_supported(const AnalogyGraph& g, VertexId v1, VertexId v2) {
  for (auto w1 : g.neighbors(v1, EdgeLabel::Fact)) {
    if (!fact_arg(g, v1, w1)) continue;
    for (auto w2 : g.neighbors(w1, EdgeLabel::Analogy))
      if (fact_arg(g, v2, w2)) return true;
  }
  return false;
}

void check_quadrangle(const AnalogyGraph& g, std::vector<Violation>& out) {
  for (const auto& e : g.edges()) {
    if (e.label != EdgeLabel::Analogy) continue;
    const bool va = g.is_value(e.a), vb = g.is_value(e.b);
    if (va && vb) {
      if (!quadrangle_supported(g, e.a, e.b))
        out.push_back({ConstraintId::AnalogyQuadrangle, {e.a, e.b}, {e},
                       "analogous VALUE vertices " + vname(g, e.a) + " and " + vname(g, e.b) +
                           " have no analogous non-VALUE arguments"});
    } else if (!va && !vb) {
      // A non-VALUE analogy must itself be the non-VALUE side of a quadrangle.
      bool supported = false;
      for (auto v1 : g.neighbors(e.a, EdgeLabel::Fact)) {
        if (!fact_arg(g, v1, e.a)) continue;
        for (auto v2 : g.neighbors(v1, EdgeLabel::Analogy))
          if (g.is_value(v2) && fact_arg(g, v2, e.b)) supported = true;
      }
      if (!supported)
        out.push_back({ConstraintId::AnalogyQuadrangle, {e.a, e.b}, {e},
                       "ANALOGY between " + vname(g, e.a) + " and " + vname(g, e.b) +
                           " is not supported by analogous VALUE vertices"});
    }
  }
}

void run_check(const AnalogyGraph& g, ConstraintId id, std::vector<Violation>& out) {
  switch (id) {
    case ConstraintId::WellFormedOverlap: check_overlap(g, out); break;
    case ConstraintId::WellFormedConnected: check_connected(g, out); break;
    case ConstraintId::TypingFact: check_typing(g, out, true); break;
    case ConstraintId::TypingEquivAnalogy: check_typing(g, out, false); break;
    case ConstraintId::UniqueFacts: check_unique_facts(g, out); break;
    case ConstraintId::TransitivityEquiv: check_transitivity(g, out, EdgeLabel::Equivalence); break;
    case ConstraintId::TransitivityAnalogy: check_transitivity(g, out, EdgeLabel::Analogy); break;
    case ConstraintId::AnalogyValuePair: check_value_pair(g, out); break;
    case ConstraintId::AnalogyQuadrangle: check_quadrangle(g, out); break;
  }
}

void sort_unique(std::vector<Violation>& vs) {
  auto key = [](const Violation& v) { return std::tie(v.id, v.vertices, v.edges); };
  std::sort(vs.begin(), vs.end(), [&](const Violation& a, const Violation& b) { return key(a) < key(b); });
  vs.erase(std::unique(vs.begin(), vs.end(),
                       [&](const Violation& a, const Violation& b) { return key(a) == key(b); }),
           vs.end());
}

}  // namespace

std::vector<Violation> check(const AnalogyGraph& g, ConstraintId id) {
  std::vector<Violation> out;
  run_check(g, id, out);
  sort_unique(out);
  return out;
}

std::vector<Violation> validate(const AnalogyGraph& g) {
  std::vector<Violation> out;
  for (auto id : kAllConstraints) run_check(g, id, out);
  sort_unique(out);
  return out;
}

// ---------------------------------------------------------------------------
// Feasibility over (partial) assignments.
//
// "can" predicates over-approximate what a completion could make true; a
// refutation only ever uses decided variables, so pruning on them is sound.

namespace {

class Feasibility {
 public:
  Feasibility(std::span<const SpanRange> spans, const RoleInventory& inv, const Assignment& a)
      : spans_(spans), a_(a), n_(spans.size()), value_(static_cast<int>(inv.value_role())),
        none_(a.none_role()) {}

  bool run(const FeasibilityMode& mode) const {
    bool any_active = false;
    for (std::size_t s = 0; s < n_; ++s) {
      if (active(s)) any_active = true;
      if (active(s) && !connectable(s)) return false;
      for (std::size_t t = s + 1; t < n_; ++t)
        if (!pair_ok(s, t)) return false;
    }
    if ((any_active || !mode.allow_empty) && !value_pair_possible()) return false;
    if (!triangles_ok()) return false;
    if (!unique_facts_ok()) return false;
    if (!quadrangles_ok()) return false;
    return true;
  }

 private:
  int role(std::size_t s) const { return a_.role_of[s]; }
  int label(std::size_t s, std::size_t t) const { return a_.label(s, t); }
  bool decided(std::size_t s) const { return role(s) != Assignment::kUndecided; }
  bool active(std::size_t s) const { return decided(s) && role(s) != none_; }
  bool is_value(std::size_t s) const { return role(s) == value_; }
  bool can_active(std::size_t s) const { return role(s) != none_; }
  bool can_value(std::size_t s) const { return !decided(s) || role(s) == value_; }
  bool can_non_value(std::size_t s) const { return !decided(s) || (active(s) && role(s) != value_); }
  bool is_label(std::size_t s, std::size_t t, EdgeLabel l) const {
    return label(s, t) == static_cast<int>(l);
  }
  bool can_label(std::size_t s, std::size_t t, EdgeLabel l) const {
    return label(s, t) == Assignment::kUndecided || is_label(s, t, l);
  }

  // FACT from VALUE `v` to non-VALUE `w` is still possible.
  bool can_fact_arg(std::size_t v, std::size_t w) const {
    return v != w && can_label(v, w, EdgeLabel::Fact) && can_value(v) && can_non_value(w);
  }
  bool can_analogy(std::size_t s, std::size_t t) const {
    if (s == t || !can_label(s, t, EdgeLabel::Analogy)) return false;
    if (!can_active(s) || !can_active(t)) return false;
    return !(decided(s) && decided(t) && role(s) != role(t));
  }

  bool connectable(std::size_t s) const {
    for (std::size_t t = 0; t < n_; ++t) {
      if (t == s || !can_label(s, t, EdgeLabel::Fact) || !can_active(t)) continue;
      if (is_value(s) ? can_non_value(t) : can_value(t)) return true;
    }
    return false;
  }

  bool pair_ok(std::size_t s, std::size_t t) const {
    const int l = label(s, t);
    if (decided(s) && decided(t) && spans_[s].overlaps(spans_[t]) && active(s) && active(t))
      return false;
    if (l == Assignment::kUndecided || l == Assignment::kNoneLabel) return true;
    if (role(s) == none_ || role(t) == none_) return false;
    if (!decided(s) || !decided(t)) return true;
    if (l == static_cast<int>(EdgeLabel::Fact)) return is_value(s) != is_value(t);
    return role(s) == role(t);
  }

  bool value_pair_possible() const {
    for (std::size_t s = 0; s < n_; ++s) {
      if (!can_value(s)) continue;
      for (std::size_t t = s + 1; t < n_; ++t)
        if (can_value(t) && can_analogy(s, t)) return true;
    }
    return false;
  }

  bool triangles_ok() const {
    std::vector<std::size_t> nb;
    for (EdgeLabel l : {EdgeLabel::Equivalence, EdgeLabel::Analogy}) {
      for (std::size_t mid = 0; mid < n_; ++mid) {
        if (l == EdgeLabel::Analogy && !is_value(mid)) continue;
        nb.clear();
        for (std::size_t t = 0; t < n_; ++t)
          if (t != mid && is_label(mid, t, l) && (l != EdgeLabel::Analogy || is_value(t)))
            nb.push_back(t);
        for (std::size_t i = 0; i < nb.size(); ++i)
          for (std::size_t j = i + 1; j < nb.size(); ++j)
            if (!can_label(nb[i], nb[j], l)) return false;
      }
    }
    return true;
  }

  bool unique_facts_ok() const {
    std::vector<std::size_t> args;
    for (std::size_t v = 0; v < n_; ++v) {
      if (!is_value(v)) continue;
      args.clear();
      for (std::size_t w = 0; w < n_; ++w)
        if (w != v && is_label(v, w, EdgeLabel::Fact) && active(w) && !is_value(w))
          args.push_back(w);
      for (std::size_t i = 0; i < args.size(); ++i)
        for (std::size_t j = i + 1; j < args.size(); ++j)
          if (role(args[i]) == role(args[j]) &&
              !can_label(args[i], args[j], EdgeLabel::Equivalence))
            return false;
    }
    return true;
  }

  bool value_quadrangle_possible(std::size_t v1, std::size_t v2) const {
    for (std::size_t w1 = 0; w1 < n_; ++w1) {
      if (w1 == v1 || w1 == v2 || !can_fact_arg(v1, w1)) continue;
      for (std::size_t w2 = 0; w2 < n_; ++w2) {
        if (w2 == v1 || w2 == v2 || w2 == w1) continue;
        if (can_fact_arg(v2, w2) && can_analogy(w1, w2)) return true;
      }
    }
    return false;
  }

  bool argument_analogy_possible(std::size_t w1, std::size_t w2) const {
    for (std::size_t v1 = 0; v1 < n_; ++v1) {
      if (v1 == w1 || v1 == w2 || !can_fact_arg(v1, w1)) continue;
      for (std::size_t v2 = 0; v2 < n_; ++v2) {
        if (v2 == v1 || v2 == w1 || v2 == w2) continue;
        if (can_fact_arg(v2, w2) && can_value(v1) && can_value(v2) && can_analogy(v1, v2))
          return true;
      }
    }
    return false;
  }

  bool quadrangles_ok() const {
    for (std::size_t s = 0; s < n_; ++s)
      for (std::size_t t = s + 1; t < n_; ++t) {
        if (!is_label(s, t, EdgeLabel::Analogy) || !decided(s) || !decided(t)) continue;
        if (is_value(s) && is_value(t)) {
          if (!value_quadrangle_possible(s, t)) return false;
        } else if (active(s) && active(t) && !is_value(s) && !is_value(t)) {
          if (!argument_analogy_possible(s, t)) return false;
        }
      }
    return true;
  }

  std::span<const SpanRange> spans_;
  const Assignment& a_;
  std::size_t n_;
  int value_;
  int none_;
};

}  // namespace

bool feasible(std::span<const SpanRange> spans, const RoleInventory& inventory,
              const Assignment& assignment, FeasibilityMode mode) {
  const auto n = spans.size();
  if (assignment.role_of.size() != n || assignment.label_of.size() != pair_count(n) ||
      assignment.role_count != inventory.size())
    return false;
  for (int r : assignment.role_of)
    if (r < Assignment::kUndecided || r > assignment.none_role()) return false;
  for (int l : assignment.label_of)
    if (l < Assignment::kUndecided || l > Assignment::kNoneLabel) return false;
  if (!mode.allow_undecided && !assignment.complete()) return false;
  return Feasibility(spans, inventory, assignment).run(mode);
}

InducedAssignment induced_assignment(const AnalogyGraph& g) {
  const auto n = g.vertices().size();
  InducedAssignment out;
  out.assignment = Assignment::empty(n, g.inventory().size());
  for (VertexId v = 0; v < n; ++v) {
    out.spans.push_back({g.vertex(v).start, g.vertex(v).end});
    out.assignment.role_of[v] = static_cast<int>(g.vertex(v).role);
  }
  for (const auto& e : g.edges()) out.assignment.set_label(e.a, e.b, static_cast<int>(e.label));
  return out;
}

AnalogyGraph assignment_to_graph(std::span<const SpanRange> spans, const Assignment& a,
                                 const Sentence& sentence, const RoleInventory& inventory) {
  std::vector<Vertex> vertices;
  std::vector<std::size_t> vertex_of(spans.size(), 0);
  for (std::size_t s = 0; s < spans.size(); ++s) {
    if (a.role_of[s] < 0 || a.role_of[s] == a.none_role()) continue;
    vertex_of[s] = vertices.size();
    vertices.push_back({spans[s].start, spans[s].end, static_cast<RoleId>(a.role_of[s])});
  }
  std::vector<Edge> edges;
  for (std::size_t s = 0; s < spans.size(); ++s)
    for (std::size_t t = s + 1; t < spans.size(); ++t) {
      const int l = a.label(s, t);
      if (l < 0 || l == Assignment::kNoneLabel) continue;
      if (a.role_of[s] == a.none_role() || a.role_of[t] == a.none_role())
        throw Error(ErrorCode::InvalidGraph, "edge between spans " + std::to_string(s) + " and " +
                                                 std::to_string(t) + " has a NONE endpoint");
      edges.push_back({vertex_of[s], vertex_of[t], static_cast<EdgeLabel>(l)});
    }
  return build_graph(sentence, vertices, edges, inventory);
}

}  // namespace tap
