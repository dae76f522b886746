#include "doctest.h"
#include "fixtures.hpp"
#include "tap/eval.hpp"

using namespace tap;

namespace {

const RoleInventory kInv = RoleInventory::default_inventory();

std::vector<Vertex> spans(std::vector<std::pair<std::size_t, std::size_t>> rs) {
  std::vector<Vertex> out;
  for (auto [s, e] : rs) out.push_back({s, e, 0});
  return out;
}

AnalogyGraph relabel(const AnalogyGraph& g, VertexId v, RoleId role) {
  auto vs = g.vertices();
  vs[v].role = role;
  return build_graph(g.sentence(), vs, g.edges(), g.inventory());
}

}  // namespace

TEST_CASE("PRF") {
  const auto z = PRF::from_counts(0, 0, 0);
  CHECK(z.precision == 0.0);
  CHECK(z.f1 == 0.0);
  const auto p = PRF::from_counts(3, 1, 2);
  CHECK(p.precision == doctest::Approx(0.75));
  CHECK(p.recall == doctest::Approx(0.6));
  CHECK(p.f1 == doctest::Approx(2 * 0.75 * 0.6 / 1.35));
  auto m = PRF::from_counts(1, 0, 0);
  m += PRF::from_counts(0, 1, 1);
  CHECK(m.tp == 1);
  CHECK(m.precision == doctest::Approx(0.5));
  CHECK(m.recall == doctest::Approx(0.5));
}

TEST_CASE("overlap and matching") {
  CHECK(overlap({0, 4, 0}, {2, 6, 0}) == 2);
  CHECK(overlap({0, 2, 0}, {2, 6, 0}) == 0);

  SUBCASE("maximizes total overlap, not the single best pair") {
    const auto gold = spans({{0, 4}, {4, 6}});
    const auto pred = spans({{2, 6}, {0, 2}});
    const auto m = match_spans(gold, pred);
    CHECK(m.total_overlap() == 4);
    REQUIRE(m.pairs.size() == 2);
    CHECK(m.pairs[0] == MatchedSpan{0, 1, 2});
    CHECK(m.pairs[1] == MatchedSpan{1, 0, 2});
  }
  SUBCASE("zero overlap is never matched") {
    const auto m = match_spans(spans({{0, 1}, {5, 6}}), spans({{1, 2}, {5, 7}}));
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0] == MatchedSpan{1, 1, 1});
  }
  SUBCASE("unequal sides") {
    CHECK(match_spans(spans({{0, 3}}), spans({{0, 1}, {1, 3}, {3, 4}})).total_overlap() == 2);
    CHECK(match_spans(spans({{0, 1}, {1, 3}, {3, 4}}), spans({{0, 3}})).total_overlap() == 2);
    CHECK(match_spans({}, spans({{0, 3}})).pairs.empty());
  }
}

TEST_CASE("hungarian") {
  const std::vector<long long> square = {4, 1, 3, 2, 0, 5, 3, 2, 2};
  CHECK(hungarian_min_cost(square, 3, 3) == std::vector<std::size_t>{1, 0, 2});
  const std::vector<long long> wide = {5, 1, 9, 1, 4, 9};
  CHECK(hungarian_min_cost(wide, 2, 3) == std::vector<std::size_t>{1, 0});
  const std::vector<long long> negative = {-3, -1, -1, -2};
  CHECK(hungarian_min_cost(negative, 2, 2) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("graph metrics") {
  const auto g = fixtures::e1_graph();
  const auto empty = build_graph(g.sentence(), {}, {}, kInv);

  SUBCASE("self") {
    CHECK(frame_prf(g, g).f1 == doctest::Approx(1.0));
    CHECK(span_prf(g, g).f1 == doctest::Approx(1.0));
    CHECK(edge_prf(g, g).f1 == doctest::Approx(1.0));
    CHECK(span_prf(g, g).tp == 5);
  }
  SUBCASE("empty prediction") {
    const auto p = frame_prf(g, empty);
    CHECK(p.tp == 0);
    CHECK(p.fp == 0);
    CHECK(p.fn > 0);
    CHECK(p.f1 == 0.0);
    CHECK(frame_prf(empty, empty).f1 == 0.0);
  }
  SUBCASE("roles matter for frames and spans, not for edges") {
    const auto p = relabel(g, 2, kInv.at("THEME"));
    CHECK(edge_prf(g, p).f1 == doctest::Approx(1.0));
    CHECK(frame_prf(g, p).f1 < 1.0);
    const auto s = span_prf(g, p);
    CHECK(s.tp == 4);
    CHECK(s.fp == 1);
    CHECK(s.fn == 1);
  }
  SUBCASE("partial span boundaries still match") {
    auto vs = g.vertices();
    vs[0] = {4, 5, kInv.at("SOURCE")};  // "Census"
    vs[3] = {12, 13, kInv.at("QUANTITY")};  // "live"
    const auto p = build_graph(g.sentence(), vs, g.edges(), kInv);
    CHECK(frame_prf(g, p).f1 == doctest::Approx(1.0));
    CHECK(span_prf(g, p).f1 == doctest::Approx(1.0));
  }
  SUBCASE("closure") {
    const auto s = fixtures::stake_graph();
    std::vector<Edge> es;
    for (const auto& e : s.edges())
      if (!(e.label == EdgeLabel::Analogy && e.a == 3 && e.b == 6)) es.push_back(e);
    const auto open = with_edges(s, es);
    CHECK(edge_prf(s, open).fn == 1);
    CHECK(edge_prf(s, open, true).f1 == doctest::Approx(1.0));
    CHECK(frame_prf(s, open).f1 == doctest::Approx(1.0));
  }
}

TEST_CASE("token labels") {
  const auto t = token_labels(fixtures::e1_graph());
  REQUIRE(t.size() == 27);
  CHECK(t[0] == "O");
  CHECK(t[3] == "SOURCE");
  CHECK(t[4] == "SOURCE");
  CHECK(t[8] == "VALUE");
  CHECK(t[18] == "QUANTITY");
}

TEST_CASE("krippendorff alpha") {
  const auto fixture = krippendorff_alpha({{"A", "A", "B", "B"}, {"A", "B", "B", "B"}});
  CHECK(fixture.alpha == doctest::Approx(8.0 / 15).epsilon(1e-12));
  CHECK_FALSE(fixture.degenerate);

  const auto same = krippendorff_alpha({{"A", "B", "C"}, {"A", "B", "C"}, {"A", "B", "C"}});
  CHECK(same.alpha == 1.0);
  CHECK_FALSE(same.degenerate);

  const auto constant = krippendorff_alpha({{"O", "O"}, {"O", "O"}});
  CHECK(constant.alpha == 1.0);
  CHECK(constant.degenerate);

  // Total disagreement on two labels.
  CHECK(krippendorff_alpha({{"A", "B"}, {"B", "A"}}).alpha < 0.0);

  CHECK_THROWS_WITH_AS(krippendorff_alpha({{"A"}}), doctest::Contains("MalformedInput"), Error);
  CHECK_THROWS_AS(krippendorff_alpha({{"A", "B"}, {"A"}}), Error);
}
