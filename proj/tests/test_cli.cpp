#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "tap/cli.hpp"
#include "tap/constraints.hpp"
#include "tap/io.hpp"

using namespace tap;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "tap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("tap-test-" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string path(const std::string& f) const { return (dir / f).string(); }
  std::string write(const std::string& f, const std::string& text) const {
    std::ofstream(dir / f) << text;
    return path(f);
  }
};

}  // namespace

TEST_CASE("cli: help and usage errors") {
  const auto h = run({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("decode") != std::string::npos);
  CHECK(h.out.find("TAP_INVENTORY") != std::string::npos);
  CHECK(run({"decode", "--mode", "fast"}).code == cli::kMalformed);
  CHECK(run({"frobnicate"}).code == cli::kMalformed);
}

TEST_CASE("cli: gen, decode, validate, frames, eval") {
  Scratch s("pipeline");
  const auto gen = run({"gen", "--seed", "3", "--count", "12", "--noise", "0.3", "--gold", s.path("gold.jsonl")});
  REQUIRE(gen.code == 0);
  CHECK(lines(gen.out).size() == 12);
  CHECK(lines(slurp(s.path("gold.jsonl"))).size() == 12);

  for (const std::string mode : {"greedy", "exact"}) {
    CAPTURE(mode);
    const auto dec = run({"decode", "--mode", mode}, gen.out);
    REQUIRE(dec.code == 0);
    const auto graphs = lines(dec.out);
    REQUIRE(graphs.size() == 12);
    for (const auto& l : graphs) CHECK(validate(parse_graph(l)).empty());

    const auto val = run({"validate"}, dec.out);
    CHECK(val.code == 0);
    for (const auto& l : lines(val.out)) CHECK(l.find("\"valid\":true") != std::string::npos);

    const auto frm = run({"frames"}, dec.out);
    CHECK(frm.code == 0);
    CHECK(lines(frm.out).size() == 12);

    const auto pred = s.write("pred.jsonl", dec.out);
    const auto ev = run({"eval", "--gold", s.path("gold.jsonl"), "--pred", pred});
    CHECK(ev.code == 0);
    CHECK(ev.out.find("\"id\":\"micro\"") != std::string::npos);
  }

  const auto self = run({"eval", "--gold", s.path("gold.jsonl"), "--pred", s.path("gold.jsonl"), "--report", "tsv",
                         "--min-f1", "1"});
  CHECK(self.code == 0);
  const auto rows = lines(self.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].rfind("frame\t1\t1\t1\t", 0) == 0);

  const auto empty = s.write("empty.jsonl", [&] {
    std::string out;
    for (const auto& l : lines(slurp(s.path("gold.jsonl")))) {
      const auto g = parse_graph(l);
      out += emit_graph(build_graph(g.sentence(), {}, {}, g.inventory())) + "\n";
    }
    return out;
  }());
  CHECK(run({"eval", "--gold", s.path("gold.jsonl"), "--pred", empty, "--min-f1", "0.5"}).code == cli::kFailure);
  const auto per = run({"eval", "--gold", s.path("gold.jsonl"), "--pred", empty, "--per-sentence"});
  CHECK(lines(per.out).size() == 13);
}

TEST_CASE("cli: output order is stable across jobs") {
  const auto gen = run({"gen", "--count", "150", "--noise", "0.5"});
  const auto one = run({"decode", "--mode", "exact", "--budget-nodes", "2000", "--jobs", "1"}, gen.out);
  const auto many = run({"decode", "--mode", "exact", "--budget-nodes", "2000", "--jobs", "4"}, gen.out);
  CHECK(one.code == 0);
  CHECK(many.code == 0);
  CHECK(one.out == many.out);
}

TEST_CASE("cli: malformed lines") {
  const auto gen = run({"gen", "--count", "3"});
  auto ls = lines(gen.out);
  SUBCASE("truncated json") {
    const auto r = run({"decode"}, ls[0] + "\n" + ls[1].substr(0, 40) + "\n" + ls[2] + "\n");
    CHECK(r.code == cli::kMalformed);
    CHECK(r.err.find("line 2:") != std::string::npos);
    CHECK(lines(r.out).size() == 1);
  }
  SUBCASE("unnormalized distribution") {
    auto bad = ls[2];
    std::smatch m;
    REQUIRE(std::regex_search(bad, m, std::regex(R"("NONE":([0-9.eE+-]+))")));
    bad.replace(static_cast<std::size_t>(m.position(1)), static_cast<std::size_t>(m.length(1)),
                std::to_string(std::stod(m[1].str()) + 0.5));
    const auto r = run({"decode"}, ls[0] + "\n" + bad + "\n");
    CHECK(r.code == cli::kMalformed);
    CHECK(r.err.find("line 2:") != std::string::npos);
    CHECK(r.err.find("DistributionNotNormalized") != std::string::npos);
  }
  SUBCASE("budget") {
    const auto r = run({"decode", "--mode", "exact", "--require-analogy", "--budget-nodes", "1"}, ls[0] + "\n");
    CHECK((r.code == 0 || r.code == cli::kBudget));
  }
}

TEST_CASE("cli: invalid graph fails validation") {
  const auto g = fixtures::e1_graph();
  std::vector<Edge> es;
  for (const auto& e : g.edges())
    if (e.label != EdgeLabel::Analogy) es.push_back(e);
  const auto text = emit_graph(g) + "\n" + emit_graph(with_edges(g, es)) + "\n";
  const auto r = run({"validate"}, text);
  CHECK(r.code == cli::kFailure);
  const auto out = lines(r.out);
  REQUIRE(out.size() == 2);
  CHECK(out[0].find("\"valid\":true") != std::string::npos);
  CHECK(out[1].find("ANALOGY_VALUE_PAIR") != std::string::npos);
  CHECK(run({"frames"}, text).code == cli::kFailure);
}

TEST_CASE("cli: charts") {
  Scratch s("charts");
  const auto frames = run({"frames"}, emit_graph(fixtures::e1_graph()) + "\n" + emit_graph(fixtures::marks_graph()) + "\n");
  REQUIRE(frames.code == 0);
  const auto svg = run({"chart", "--out-dir", s.path("svg")}, frames.out);
  REQUIRE(svg.code == 0);
  const auto paths = lines(svg.out);
  REQUIRE(paths.size() == 2);
  CHECK(fs::path(paths[0]).filename() == "E1-0.svg");
  CHECK(fs::path(paths[1]).filename() == "marks-0.svg");
  CHECK(slurp(paths[0]).rfind("<svg", 0) == 0);
  const auto json = run({"chart", "--format", "json", "--out-dir", s.path("json")}, frames.out);
  REQUIRE(json.code == 0);
  CHECK(slurp(lines(json.out)[0]).find("\"categories\":[\"White Americans\",\"African Americans\"]") !=
        std::string::npos);
}

TEST_CASE("cli: alpha") {
  Scratch s("alpha");
  const auto gen = run({"gen", "--count", "5", "--gold", s.path("a.jsonl")});
  REQUIRE(gen.code == 0);
  const auto same = run({"alpha", s.path("a.jsonl"), s.path("a.jsonl")});
  CHECK(same.code == 0);
  CHECK(same.out.find("\"alpha\":1") != std::string::npos);
  const auto dec = run({"decode", "--mode", "greedy"}, run({"gen", "--count", "5", "--noise", "0.9"}).out);
  const auto b = s.write("b.jsonl", dec.out);
  const auto diff = run({"alpha", s.path("a.jsonl"), b});
  CHECK(diff.code == 0);
  CHECK(diff.out.find("\"alpha\":1,") == std::string::npos);
  CHECK(run({"alpha", s.path("a.jsonl")}).code == cli::kMalformed);
}

TEST_CASE("cli: custom inventory") {
  Scratch s("inventory");
  const auto inv = s.write("inv.json", R"({"roles":["AMOUNT","HOLDER","DATE"],"value_role":"AMOUNT"})");
  setenv("TAP_INVENTORY", inv.c_str(), 1);
  const auto gen = run({"gen", "--count", "4"});
  unsetenv("TAP_INVENTORY");
  REQUIRE(gen.code == 0);
  CHECK(gen.out.find("HOLDER") != std::string::npos);
  CHECK(gen.out.find("WHOLE") == std::string::npos);
  CHECK(run({"decode"}, gen.out).code == 0);
}
