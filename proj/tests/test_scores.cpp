#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "tap/gen.hpp"
#include "tap/scores.hpp"

using namespace tap;

namespace {

std::vector<double> one_hot(std::size_t n, std::size_t k) {
  std::vector<double> p(n, 0.0);
  p[k] = 1.0;
  return p;
}

}  // namespace

TEST_CASE("clamped log") {
  CHECK(clamped_log(1.0) == 0.0);
  CHECK(clamped_log(0.0) == doctest::Approx(std::log(1e-12)));
  CHECK(clamped_log(1e-20) == clamped_log(0.0));
  CHECK(clamped_log(0.5) == doctest::Approx(std::log(0.5)));
}

TEST_CASE("score JSON round trip") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GenParams p;
    p.seed = seed;
    const auto s = gen_scores(gen_graph(p).graph, 0.3, seed);
    const auto text = emit_scores(s);
    const auto back = parse_scores(text);
    CHECK(emit_scores(back) == text);
    REQUIRE(back.spans.size() == s.spans.size());
    for (std::size_t i = 0; i < s.spans.size(); ++i)
      for (std::size_t r = 0; r < s.role_options(); ++r)
        CHECK(back.spans[i].probs[r] == doctest::Approx(s.spans[i].probs[r]).epsilon(1e-8));
    CHECK(back.token_scores.has_value());
  }
}

TEST_CASE("score validation") {
  const std::string head = R"({"sentence":{"id":"x","tokens":["a","b"]},)";
  const std::string good_spans =
      R"("spans":[{"start":0,"end":1,"scores":{"VALUE":0.6,"NONE":0.4}},{"start":1,"end":2,"scores":{"TIME":1}}],)";

  CHECK(parse_scores(head + good_spans + R"("edges":[{"a":0,"b":1,"scores":{"FACT":0.5,"NONE":0.5}}]})")
            .spans.size() == 2);

  SUBCASE("unnormalized span") {
    try {
      parse_scores(head + R"("spans":[{"start":0,"end":1,"scores":{"VALUE":0.5,"NONE":0.3}}],"edges":[]})");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DistributionNotNormalized);
      CHECK(std::string(e.what()).find("0.8") != std::string::npos);
    }
  }
  SUBCASE("unnormalized edge") {
    CHECK_THROWS_WITH_AS(
        parse_scores(head + good_spans + R"("edges":[{"a":0,"b":1,"scores":{"FACT":0.5,"NONE":0.3}}]})"),
        doctest::Contains("DistributionNotNormalized"), Error);
  }
  SUBCASE("within tolerance") {
    CHECK_NOTHROW(parse_scores(head + good_spans +
                               R"("edges":[{"a":0,"b":1,"scores":{"FACT":0.5,"NONE":0.5000001}}]})"));
  }
  SUBCASE("missing pair") {
    CHECK_THROWS_WITH_AS(parse_scores(head + good_spans + R"("edges":[]})"), doctest::Contains("missing entry"),
                         Error);
  }
  SUBCASE("unknown role") {
    CHECK_THROWS_WITH_AS(
        parse_scores(head + R"("spans":[{"start":0,"end":1,"scores":{"MANNER":1}}],"edges":[]})"),
        doctest::Contains("UnknownRole"), Error);
  }
  SUBCASE("negative probability") {
    CHECK_THROWS_AS(
        parse_scores(head + R"("spans":[{"start":0,"end":1,"scores":{"VALUE":1.5,"NONE":-0.5}}],"edges":[]})"),
        Error);
  }
  SUBCASE("span out of bounds") {
    CHECK_THROWS_AS(parse_scores(head + R"("spans":[{"start":1,"end":3,"scores":{"NONE":1}}],"edges":[]})"),
                    Error);
  }
  SUBCASE("overlapping candidates need the raw flag") {
    const std::string spans =
        R"("spans":[{"start":0,"end":2,"scores":{"NONE":1}},{"start":1,"end":2,"scores":{"NONE":1}}],)"
        R"("edges":[{"a":0,"b":1,"scores":{"NONE":1}}]})";
    CHECK_THROWS_AS(parse_scores(head + spans), Error);
    CHECK(parse_scores(head + R"("raw":true,)" + spans).raw);
  }
  SUBCASE("token rows") {
    CHECK_THROWS_AS(parse_scores(head + R"("token_scores":[[1,0,0,0,0,0,0,0,0]],"spans":[],"edges":[]})"),
                    Error);
  }
}

TEST_CASE("extract_spans") {
  const std::size_t n = 9, O = 8;
  SUBCASE("runs of one label") {
    const std::vector<std::size_t> labels = {O, 0, 0, 1, O, 1, 1, O, 2};
    TokenScores ts;
    for (auto l : labels) ts.push_back(one_hot(n, l));
    const auto spans = extract_spans(ts);
    REQUIRE(spans.size() == 4);
    CHECK(spans[0] == Vertex{1, 3, 0});
    CHECK(spans[1] == Vertex{3, 4, 1});
    CHECK(spans[2] == Vertex{5, 7, 1});
    CHECK(spans[3] == Vertex{8, 9, 2});
    CHECK(extract_spans_from_labels(labels, O) == spans);
  }
  SUBCASE("ties go to the lower index, O last") {
    TokenScores ts = {{0.5, 0.5, 0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0.5, 0.5}};
    const auto spans = extract_spans(ts);
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].role == 0);
    CHECK(spans[1].role == 7);
  }
  SUBCASE("random rows against a direct argmax") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> q(0, 3);
    for (int trial = 0; trial < 500; ++trial) {
      TokenScores ts;
      std::vector<std::size_t> expect;
      for (int t = 0; t < 12; ++t) {
        // Coarse weights on three options make ties common.
        std::vector<double> row(n, 0.0);
        const std::size_t opts[] = {0, 1, O};
        for (auto k : opts) row[k] = q(rng) + 1;
        const double sum = std::accumulate(row.begin(), row.end(), 0.0);
        for (auto& x : row) x /= sum;
        std::size_t best = 0;
        for (std::size_t k = 1; k < n; ++k)
          if (row[k] > row[best]) best = k;
        expect.push_back(best);
        ts.push_back(row);
      }
      CHECK(extract_spans(ts) == extract_spans_from_labels(expect, O));
    }
  }
}

TEST_CASE("span distribution from tokens") {
  const std::size_t n = 9;
  TokenScores ts = {one_hot(n, 2), {0.5, 0, 0, 0, 0, 0, 0, 0, 0.5}, {0, 0, 0, 0, 0, 0, 0, 0, 1}};
  auto d = span_distribution_from_tokens(ts, {0, 2});
  CHECK(d[2] == doctest::Approx(0.5));
  CHECK(d[0] == doctest::Approx(0.25));
  CHECK(d[8] == doctest::Approx(0.25));
  d = span_distribution_from_tokens(ts, {2, 3});
  CHECK(d[8] == doctest::Approx(1.0));
  CHECK(std::accumulate(d.begin(), d.end(), 0.0) == doctest::Approx(1.0));
}
