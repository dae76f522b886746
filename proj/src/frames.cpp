#include <algorithm>
#include <map>
#include <set>

#include "tap/constraints.hpp"
#include "tap/core.hpp"

namespace tap {

namespace {

// First vertex of the first non-empty slot; used to order compared entries.
Vertex first_vertex(const ComparedContent& c) {
  for (const auto& slot : c.slots)
    if (!slot.empty()) return slot.front();
  return {};
}

void canonicalize(TapFrame& f) {
  std::sort(f.facts.begin(), f.facts.end(),
            [](const Fact& a, const Fact& b) { return a.value < b.value; });
  for (auto& fact : f.facts)
    for (auto& [role, vs] : fact.arguments) std::sort(vs.begin(), vs.end());
  for (auto& s : f.shared) std::sort(s.cluster.begin(), s.cluster.end());
  std::sort(f.shared.begin(), f.shared.end(), [](const SharedContent& a, const SharedContent& b) {
    return std::tie(a.role, a.cluster) < std::tie(b.role, b.cluster);
  });
  for (auto& c : f.compared)
    for (auto& slot : c.slots) std::sort(slot.begin(), slot.end());
  std::sort(f.compared.begin(), f.compared.end(),
            [](const ComparedContent& a, const ComparedContent& b) {
              const auto fa = first_vertex(a), fb = first_vertex(b);
              return std::tie(a.role, fa) < std::tie(b.role, fb);
            });
}

}  // namespace

void canonicalize_frame(TapFrame& frame) { canonicalize(frame); }

std::vector<TapFrame> graph_to_frames(const AnalogyGraph& g) {
  if (const auto violations = validate(g); !violations.empty())
    throw Error(ErrorCode::InvalidGraph, std::to_string(violations.size()) +
                                             " constraint violation(s), first: " +
                                             violations.front().message);

  const auto n = g.vertices().size();
  UnionFind analogy(n);
  UnionFind equiv(n);
  for (const auto& e : g.edges()) {
    if (e.label == EdgeLabel::Analogy && g.is_value(e.a) && g.is_value(e.b)) analogy.unite(e.a, e.b);
    if (e.label == EdgeLabel::Equivalence) equiv.unite(e.a, e.b);
  }

  std::map<VertexId, std::vector<VertexId>> components;  // root -> VALUE vertices
  for (VertexId v = 0; v < n; ++v)
    if (g.is_value(v)) components[analogy.find(v)].push_back(v);

  std::vector<TapFrame> frames;
  for (const auto& [root, values] : components) {
    if (values.size() < 2) continue;
    TapFrame frame;

    // attached[w] = facts (positions in `values`) that w is an argument of.
    std::map<VertexId, std::set<std::size_t>> attached;
    for (std::size_t f = 0; f < values.size(); ++f) {
      Fact fact{g.vertex(values[f]), {}};
      for (auto w : g.neighbors(values[f], EdgeLabel::Fact)) {
        fact.arguments[g.vertex(w).role].push_back(g.vertex(w));
        attached[w].insert(f);
      }
      frame.facts.push_back(std::move(fact));
    }

    ComparedContent value_entry{g.inventory().value_role(), {}};
    for (auto v : values) value_entry.slots.push_back({g.vertex(v)});
    frame.compared.push_back(std::move(value_entry));

    // Group the attached arguments of each role: EQUIVALENCE classes first,
    // then classes joined by ANALOGY into compared groups.
    std::map<RoleId, std::vector<VertexId>> by_role;
    for (const auto& [w, facts] : attached) by_role[g.vertex(w).role].push_back(w);

    for (const auto& [role, members] : by_role) {
      std::map<VertexId, std::size_t> local;  // vertex -> index in members
      for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = i;
      UnionFind classes(members.size());
      UnionFind groups(members.size());
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t k = i + 1; k < members.size(); ++k) {
          if (equiv.find(members[i]) == equiv.find(members[k])) {
            classes.unite(i, k);
            groups.unite(i, k);
          }
        }
      }
      for (std::size_t i = 0; i < members.size(); ++i)
        for (auto other : g.neighbors(members[i], EdgeLabel::Analogy))
          if (auto it = local.find(other); it != local.end()) groups.unite(i, it->second);

      std::map<std::size_t, std::vector<std::size_t>> group_members;
      for (std::size_t i = 0; i < members.size(); ++i) group_members[groups.find(i)].push_back(i);

      for (const auto& [groot, idx] : group_members) {
        std::set<std::size_t> class_roots;
        std::set<std::size_t> facts;
        for (auto i : idx) {
          class_roots.insert(classes.find(i));
          facts.insert(attached[members[i]].begin(), attached[members[i]].end());
        }
        if (class_roots.size() >= 2) {
          ComparedContent entry{role, std::vector<std::vector<Vertex>>(values.size())};
          for (auto i : idx)
            for (auto f : attached[members[i]]) entry.slots[f].push_back(g.vertex(members[i]));
          frame.compared.push_back(std::move(entry));
        } else if (facts.size() >= 2) {
          SharedContent entry{role, {}};
          for (auto i : idx) entry.cluster.push_back(g.vertex(members[i]));
          frame.shared.push_back(std::move(entry));
        }
        // Otherwise the class belongs to a single fact and stays local to it.
      }
    }
    canonicalize(frame);
    frames.push_back(std::move(frame));
  }
  return frames;
}

AnalogyGraph frames_to_graph(std::span<const TapFrame> frames, const Sentence& sentence,
                             const RoleInventory& inventory) {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::map<Vertex, std::size_t> ids;
  auto id = [&](const Vertex& v) {
    auto [it, inserted] = ids.emplace(v, vertices.size());
    if (inserted) vertices.push_back(v);
    return it->second;
  };
  auto clique = [&](const std::vector<Vertex>& vs, EdgeLabel label) {
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t k = i + 1; k < vs.size(); ++k)
        if (vs[i] != vs[k]) edges.push_back({id(vs[i]), id(vs[k]), label});
  };
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InconsistentFrame, what); };

  for (std::size_t fi = 0; fi < frames.size(); ++fi) {
    const auto& frame = frames[fi];
    const auto where = "frame " + std::to_string(fi) + ": ";
    if (frame.facts.size() < 2) bad(where + "needs at least two facts");

    std::vector<std::set<Vertex>> args(frame.facts.size());
    std::vector<Vertex> values;
    for (std::size_t f = 0; f < frame.facts.size(); ++f) {
      const auto& fact = frame.facts[f];
      if (!inventory.is_value(fact.value.role)) bad(where + "fact value is not a VALUE vertex");
      values.push_back(fact.value);
      const auto v = id(fact.value);
      for (const auto& [role, vs] : fact.arguments) {
        for (const auto& w : vs) {
          if (w.role != role || inventory.is_value(w.role))
            bad(where + "argument role does not match its key or is VALUE");
          edges.push_back({v, id(w), EdgeLabel::Fact});
          args[f].insert(w);
        }
        // Same-role arguments of one fact are equivalent.
        clique(vs, EdgeLabel::Equivalence);
      }
    }
    clique(values, EdgeLabel::Analogy);

    std::set<Vertex> shared_vertices;
    for (const auto& sc : frame.shared) {
      for (const auto& w : sc.cluster) {
        if (w.role != sc.role) bad(where + "shared cluster member has the wrong role");
        bool any = false;
        for (const auto& a : args) any = any || a.count(w);
        if (!any) bad(where + "shared vertex is not an argument of any fact");
        shared_vertices.insert(w);
      }
      clique(sc.cluster, EdgeLabel::Equivalence);
    }

    bool has_value_entry = false;
    for (const auto& cc : frame.compared) {
      if (cc.slots.size() != frame.facts.size()) bad(where + "compared entry needs one slot per fact");
      std::size_t non_empty = 0;
      for (std::size_t f = 0; f < cc.slots.size(); ++f) {
        if (!cc.slots[f].empty()) ++non_empty;
        for (const auto& w : cc.slots[f]) {
          if (w.role != cc.role) bad(where + "compared slot member has the wrong role");
          if (shared_vertices.count(w)) bad(where + "vertex is both shared and compared");
          const bool ok = inventory.is_value(cc.role) ? w == frame.facts[f].value : args[f].count(w) > 0;
          if (!ok) bad(where + "compared slot member is not attached to its fact");
        }
      }
      if (non_empty < 2) bad(where + "compared entry has fewer than two filled slots");
      if (inventory.is_value(cc.role)) {
        has_value_entry = true;
        continue;
      }
      for (std::size_t f1 = 0; f1 < cc.slots.size(); ++f1)
        for (std::size_t f2 = f1 + 1; f2 < cc.slots.size(); ++f2)
          for (const auto& x : cc.slots[f1])
            for (const auto& y : cc.slots[f2]) {
              if (x == y) continue;
              // Members sharing a fact are equivalent, not analogous.
              bool same_fact = false;
              for (const auto& slot : cc.slots)
                same_fact = same_fact || (std::count(slot.begin(), slot.end(), x) &&
                                          std::count(slot.begin(), slot.end(), y));
              if (!same_fact) edges.push_back({id(x), id(y), EdgeLabel::Analogy});
            }
    }
    if (!has_value_entry) bad(where + "VALUE is missing from compared content");
  }
  return transitive_closure(build_graph(sentence, vertices, edges, inventory));
}

}  // namespace tap
