#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "tap/chart.hpp"

using namespace tap;

namespace {

const RoleInventory kInv = RoleInventory::default_inventory();

ChartSpec chart_of(const AnalogyGraph& g, std::size_t frame = 0) {
  return frame_to_chart(graph_to_frames(g).at(frame), g.sentence(), g.inventory());
}

struct Bar {
  int series;
  double y, height;
};

std::vector<Bar> bars(const std::string& svg) {
  static const std::regex re(R"re(<rect class="bar" data-series="(\d+)" x="[-0-9.]+" y="([-0-9.]+)" width="[-0-9.]+" height="([-0-9.]+)")re");
  std::vector<Bar> out;
  for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it)
    out.push_back({std::stoi((*it)[1]), std::stod((*it)[2]), std::stod((*it)[3])});
  return out;
}

// With TAP_UPDATE_GOLDEN set, golden files are rewritten instead of compared.
void check_golden(const std::string& path, const std::string& actual) {
  if (std::getenv("TAP_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing golden file " << path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(actual == ss.str());
}

// Two-fact frame over a fresh sentence; VALUE tokens are given, the compared
// role is WHOLE.
struct Mini {
  Sentence s{"mini", {}, {}};
  TapFrame f;

  Mini(std::vector<std::string> values, std::vector<std::string> wholes) {
    ComparedContent c{kInv.at("WHOLE"), {}};
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto at = s.tokens.size();
      s.tokens.push_back(values[i]);
      s.tokens.push_back(wholes[i]);
      Fact fact{{at, at + 1, kInv.value_role()}, {}};
      const Vertex w{at + 1, at + 2, c.role};
      fact.arguments[c.role] = {w};
      f.facts.push_back(fact);
      c.slots.push_back({w});
    }
    f.compared.push_back(c);
  }
};

}  // namespace

TEST_CASE("parse_value") {
  CHECK(parse_value("10%") == QuantityValue{10, "%", "10%"});
  CHECK(parse_value("$1,250.5") == QuantityValue{1250.5, "$", "$1,250.5"});
  CHECK(parse_value("-$3") == QuantityValue{-3, "$", "-$3"});
  CHECK(parse_value("$-3").magnitude == -3);
  CHECK(parse_value("529 marks") == QuantityValue{529, "marks", "529 marks"});
  CHECK(parse_value("14.6 percent") == QuantityValue{14.6, "%", "14.6 percent"});
  CHECK(parse_value("about 435.5") == QuantityValue{435.5, "", "about 435.5"});
  CHECK(parse_value(".5%").magnitude == 0.5);
  CHECK(parse_value("€ 12 million").unit == "€");
  CHECK(parse_value("- $ 7").magnitude == -7);
  CHECK(parse_value("1,2").magnitude == 1);
  CHECK_THROWS_WITH_AS(parse_value("several"), doctest::Contains("NoNumberFound"), Error);
  CHECK_THROWS_AS(parse_value(""), Error);
}

TEST_CASE("census chart") {
  const auto c = chart_of(fixtures::e1_graph());
  CHECK(c.title == "live at or below the poverty line — U.S. Census — today");
  CHECK(c.x_role == "WHOLE");
  CHECK(c.categories == std::vector<std::string>{"White Americans", "African Americans"});
  REQUIRE(c.series.size() == 1);
  CHECK(c.series[0].unit == "%");
  CHECK(c.series[0].values == std::vector<std::optional<double>>{10.0, 28.0});

  const auto svg = emit_svg(c);
  const auto b = bars(svg);
  REQUIRE(b.size() == 2);
  CHECK(b[0].height / b[1].height == doctest::Approx(10.0 / 28.0).epsilon(1e-3));
  // Both bars stand on the same baseline.
  CHECK(b[0].y + b[0].height == doctest::Approx(b[1].y + b[1].height));
  CHECK(svg.find("class=\"title\"") != std::string::npos);
  CHECK(svg.find("class=\"legend\"") == std::string::npos);

  const auto json = emit_chart_json(c);
  CHECK(json.find("\"x_role\":\"WHOLE\"") != std::string::npos);
}

TEST_CASE("stake chart compares over time") {
  const auto c = chart_of(fixtures::stake_graph());
  CHECK(c.x_role == "TIME");
  CHECK(c.title == "Vicker's PLC — its stake in the company");
  CHECK(c.categories == std::vector<std::string>{"Friday", "Thursday", "the previous week"});
  REQUIRE(c.series.size() == 1);
  CHECK(c.series[0].values == std::vector<std::optional<double>>{15.02, 14.6, 13.6});
}

TEST_CASE("marks frames merge into one chart") {
  const auto g = fixtures::marks_graph();
  const auto frames = graph_to_frames(g);
  const auto charts = frames_to_charts(frames, g.sentence(), g.inventory());
  REQUIRE(charts.size() == 1);
  const auto& c = charts[0];
  CHECK(c.title == "the auto sector");
  CHECK(c.x_role == "THEME");
  CHECK(c.categories == std::vector<std::string>{"Bayerische Motoren Werke", "Daimler-Benz", "Volkswagen"});
  REQUIRE(c.series.size() == 2);
  CHECK(c.series[0].unit == "marks");
  CHECK(c.series[0].values == std::vector<std::optional<double>>{14.5, 10.5, 9.0});
  CHECK(c.series[1].values == std::vector<std::optional<double>>{529.0, 700.0, 435.5});
  const auto svg = emit_svg(c);
  CHECK(bars(svg).size() == 6);
  CHECK(svg.find("class=\"legend\"") != std::string::npos);
}

TEST_CASE("chart errors") {
  SUBCASE("unit mismatch") {
    Mini m({"17%", "$12"}, {"a", "b"});
    CHECK_THROWS_WITH_AS(frame_to_chart(m.f, m.s, kInv), doctest::Contains("UnitMismatchWithinSeries"), Error);
  }
  SUBCASE("empty unit agrees") {
    Mini m({"17%", "12"}, {"a", "b"});
    CHECK(frame_to_chart(m.f, m.s, kInv).series[0].unit == "%");
  }
  SUBCASE("no number") {
    Mini m({"17%", "many"}, {"a", "b"});
    CHECK_THROWS_WITH_AS(frame_to_chart(m.f, m.s, kInv), doctest::Contains("NoNumberFound"), Error);
  }
  SUBCASE("no compared role") {
    Mini m({"17%", "20%"}, {"a", "b"});
    m.f.compared.clear();
    CHECK_THROWS_WITH_AS(frame_to_chart(m.f, m.s, kInv), doctest::Contains("NoComparedRole"), Error);
    Mini n({"17%", "20%"}, {"a", "b"});
    CHECK_THROWS_WITH_AS(frame_to_chart(n.f, n.s, kInv, kInv.at("TIME")), doctest::Contains("NoComparedRole"),
                         Error);
  }
}

TEST_CASE("chart edge cases") {
  SUBCASE("missing filler") {
    Mini m({"17%", "20%"}, {"a", "b"});
    m.f.compared[0].slots[1].clear();
    m.f.facts[1].arguments.clear();
    const auto c = frame_to_chart(m.f, m.s, kInv);
    CHECK(c.categories[1] == kMissingCategory);
  }
  SUBCASE("no title") {
    Mini m({"17%", "20%"}, {"a", "b"});
    const auto c = frame_to_chart(m.f, m.s, kInv);
    CHECK(c.title.empty());
    CHECK(emit_svg(c).find("class=\"title\"") == std::string::npos);
  }
  SUBCASE("negative values hang below the axis") {
    Mini m({"-5%", "10%"}, {"a", "b"});
    const auto c = frame_to_chart(m.f, m.s, kInv);
    const auto b = bars(emit_svg(c));
    REQUIRE(b.size() == 2);
    // The zero line is the bottom of the positive bar and the top of the negative one.
    CHECK(b[0].y == doctest::Approx(b[1].y + b[1].height));
    CHECK(b[0].height / b[1].height == doctest::Approx(0.5).epsilon(1e-3));
  }
}

TEST_CASE("svg golden files") {
  const std::string dir = std::string(TAP_TEST_DATA_DIR) + "/golden/";
  const std::pair<const char*, AnalogyGraph> cases[] = {
      {"census.svg", fixtures::e1_graph()},
      {"stake.svg", fixtures::stake_graph()},
  };
  for (const auto& [name, g] : cases) {
    CAPTURE(name);
    check_golden(dir + name, emit_svg(chart_of(g)));
  }
  const auto m = fixtures::marks_graph();
  const auto frames = graph_to_frames(m);
  check_golden(dir + "marks.svg", emit_svg(frames_to_charts(frames, m.sentence(), m.inventory()).at(0)));
}

TEST_CASE("bar labels carry their unit") {
  ChartSpec c{"", "WHOLE", {"a", "b"}, {{"$", {12.0, -3.0}}}};
  auto svg = emit_svg(c);
  CHECK(svg.find(">$12<") != std::string::npos);
  CHECK(svg.find(">-$3<") != std::string::npos);
  c.series[0].unit = "marks";
  svg = emit_svg(c);
  CHECK(svg.find(">12 marks<") != std::string::npos);
  c.series[0].unit = "%";
  CHECK(emit_svg(c).find(">12%<") != std::string::npos);
}
