#include "tap/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json_util.hpp"
#include "tap/chart.hpp"
#include "tap/constraints.hpp"
#include "tap/decode.hpp"
#include "tap/eval.hpp"
#include "tap/gen.hpp"
#include "tap/io.hpp"

namespace tap::cli {

namespace {

using detail::json;

constexpr const char* kSchemas = R"(File formats (one JSON object per line):
  scores  {"sentence":{"id","tokens":[..],"meta"?},"inventory"?:{"roles":[..],"value_role"},
           "token_scores"?:[[p_role..,p_O]..],"raw"?:bool,
           "spans":[{"start","end","scores":{ROLE:p,..,"NONE":p}}],
           "edges":[{"a","b","scores":{"FACT","EQUIVALENCE","ANALOGY","NONE"}}]}
  graph   {"sentence":{..},"inventory"?:{..},"vertices":[{"id","start","end","role"}],
           "edges":[{"a","b","label":"FACT|EQUIVALENCE|ANALOGY"}]}
  frames  {"sentence":{..},"inventory"?:{..},"frames":[{"facts":[{"value":V,"arguments":[V..]}],
           "shared":[{"role","cluster":[V..]}],"compared":[{"role","slots":[[V..]..]}]}]}
          where V = {"start","end","role"}
Exit codes: 0 ok, 1 validation or metric failure, 2 decode budget failure, 3 malformed input.
Environment: TAP_INVENTORY names a role-inventory file {"roles":[..],"value_role":".."} used by gen.)";

struct LineResult {
  std::string output;  // written followed by a newline when non-empty
  int code = kOk;
  std::string message;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput:
    case ErrorCode::DistributionNotNormalized:
    case ErrorCode::UnknownRole:
    case ErrorCode::EdgeEndpointMissing:
    case ErrorCode::SelfLoop:
    case ErrorCode::SpanOutOfBounds:
    case ErrorCode::InconsistentFrame:
      return kMalformed;
    case ErrorCode::BudgetExhaustedWithNoIncumbent:
    case ErrorCode::InstanceTooLarge:
      return kBudget;
    default:
      return kFailure;
  }
}

LineResult guarded(const std::function<LineResult()>& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return {"", exit_code_for(e.code()), e.what()};
  } catch (const std::exception& e) {
    return {"", kMalformed, e.what()};
  }
}

// Applies `fn` to each non-blank line, in batches, with `jobs` workers.
// Outputs keep input order. Stops at the first malformed line.
int process_lines(std::istream& in, std::ostream& out, std::ostream& err, std::size_t jobs,
                  const std::function<LineResult(const std::string&)>& fn) {
  jobs = std::max<std::size_t>(jobs, 1);
  const std::size_t batch_size = 64 * jobs;
  int worst = kOk;
  std::size_t line_no = 0;
  std::vector<std::pair<std::size_t, std::string>> batch;
  std::vector<LineResult> results;
  std::string line;
  bool more = true;
  while (more) {
    batch.clear();
    while (batch.size() < batch_size && (more = static_cast<bool>(std::getline(in, line)))) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      batch.emplace_back(line_no, line);
    }
    results.assign(batch.size(), {});
    auto work = [&](std::size_t i) { results[i] = guarded([&] { return fn(batch[i].second); }); };
    if (jobs == 1 || batch.size() < 2) {
      for (std::size_t i = 0; i < batch.size(); ++i) work(i);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < std::min(jobs, batch.size()); ++t)
        pool.emplace_back([&] {
          for (std::size_t i; (i = next++) < batch.size();) work(i);
        });
      for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto& r = results[i];
      if (!r.output.empty()) out << r.output << '\n';
      if (r.code == kOk) continue;
      err << "line " << batch[i].first << ": " << r.message << '\n';
      if (r.code == kMalformed) return kMalformed;
      worst = std::max(worst, r.code);
    }
  }
  out.flush();
  return worst;
}

// Input file or stdin ("-" or empty).
class Input {
 public:
  Input(const std::string& path, std::istream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
    stream_ = &file_;
  }
  std::istream& get() { return *stream_; }

 private:
  std::ifstream file_;
  std::istream* stream_;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw Error(ErrorCode::MalformedInput, "cannot write " + path);
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

json prf_json(const PRF& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1},
          {"tp", p.tp},               {"fp", p.fp},         {"fn", p.fn}};
}

std::string prf_tsv(const std::string& prefix, const std::string& metric, const PRF& p) {
  std::ostringstream s;
  s << prefix << metric << '\t' << p.precision << '\t' << p.recall << '\t' << p.f1 << '\t' << p.tp
    << '\t' << p.fp << '\t' << p.fn;
  return s.str();
}

json violation_json(const Violation& v, const RoleInventory&) {
  json edges = json::array();
  for (const auto& e : v.edges) edges.push_back({{"a", e.a}, {"b", e.b}, {"label", std::string(to_string(e.label))}});
  return {{"constraint", std::string(to_string(v.id))},
          {"vertices", v.vertices},
          {"edges", edges},
          {"message", v.message}};
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Textual analogy parsing: decode, validate, evaluate and chart analogy graphs.\n\n" +
               std::string(kSchemas)};
  app.name("tap");
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate synthetic score files and gold graphs");
  std::uint64_t gen_seed = 0;
  std::size_t gen_count = 1, gen_distractors = 2;
  double gen_noise = 0.0;
  std::string gen_out, gen_gold;
  gen->add_option("--seed", gen_seed, "First seed; instance k uses seed + k");
  gen->add_option("--count", gen_count, "Number of sentences");
  gen->add_option("--noise", gen_noise, "Probability mass moved off the true option")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--distractors", gen_distractors, "Distractor candidate spans per sentence");
  gen->add_option("--out", gen_out, "Score ndjson (default stdout)");
  gen->add_option("--gold", gen_gold, "Gold graph ndjson");

  // decode
  auto* dec = app.add_subcommand("decode", "Decode score files into analogy graphs");
  std::string dec_scores = "-", dec_out, dec_mode = "exact";
  bool dec_require = false;
  std::uint64_t dec_nodes = DecodeOptions{}.budget_nodes;
  long long dec_ms = DecodeOptions{}.budget_time.count();
  std::size_t jobs = 1;
  dec->add_option("--scores", dec_scores, "Score ndjson (default stdin)");
  dec->add_option("--mode", dec_mode, "greedy or exact")->check(CLI::IsMember({"greedy", "exact"}));
  dec->add_flag("--require-analogy", dec_require, "Reject the empty graph");
  dec->add_option("--budget-nodes", dec_nodes, "Exact search node budget");
  dec->add_option("--budget-ms", dec_ms, "Exact search time budget per sentence");
  dec->add_option("--out", dec_out, "Graph ndjson (default stdout)");
  dec->add_option("--jobs", jobs, "Sentences decoded concurrently");

  // validate
  auto* val = app.add_subcommand("validate", "Check graphs against the structural constraints");
  std::string val_in = "-";
  val->add_option("graphs", val_in, "Graph ndjson (default stdin)");

  // frames
  auto* frm = app.add_subcommand("frames", "Convert graphs to frames");
  std::string frm_in = "-", frm_out;
  frm->add_option("graphs", frm_in, "Graph ndjson (default stdin)");
  frm->add_option("--out", frm_out, "Frames ndjson (default stdout)");

  // eval
  auto* ev = app.add_subcommand("eval", "Frame, span and edge precision/recall/F1");
  std::string ev_gold, ev_pred, ev_report = "json";
  bool ev_per_sentence = false, ev_close = false;
  std::optional<double> ev_min_f1;
  ev->add_option("--gold", ev_gold, "Gold graph ndjson")->required();
  ev->add_option("--pred", ev_pred, "Predicted graph ndjson")->required();
  ev->add_flag("--per-sentence", ev_per_sentence, "Also report every sentence");
  ev->add_flag("--close-edges", ev_close, "Close both graphs before edge scoring");
  ev->add_option("--report", ev_report, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
  ev->add_option("--min-f1", ev_min_f1, "Exit 1 when micro frame F1 falls below this");

  // alpha
  auto* al = app.add_subcommand("alpha", "Krippendorff's alpha over token role labels");
  std::vector<std::string> al_files;
  al->add_option("annotations", al_files, "Graph ndjson, one file per annotator")->required()->expected(2, -1);

  // chart
  auto* ch = app.add_subcommand("chart", "Render frames as bar charts");
  std::string ch_in = "-", ch_format = "svg", ch_dir = ".";
  ch->add_option("frames", ch_in, "Frames ndjson (default stdin)");
  ch->add_option("--format", ch_format, "svg or json")->check(CLI::IsMember({"svg", "json"}));
  ch->add_option("--out-dir", ch_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kMalformed;
  }

  try {
    if (gen->parsed()) {
      GenParams params;
      if (const char* path = std::getenv("TAP_INVENTORY")) params.inventory = parse_inventory(read_file(path));
      params.distractors = gen_distractors;
      Output scores_out(gen_out, out);
      std::optional<std::ofstream> gold_out;
      if (!gen_gold.empty()) {
        gold_out.emplace(gen_gold);
        if (!*gold_out) throw Error(ErrorCode::MalformedInput, "cannot write " + gen_gold);
      }
      for (std::size_t k = 0; k < gen_count; ++k) {
        params.seed = gen_seed + k;
        const auto result = gen_graph(params);
        scores_out.get() << emit_scores(gen_scores(result.graph, gen_noise, params.seed, gen_distractors)) << '\n';
        if (gold_out) *gold_out << emit_graph(result.graph) << '\n';
      }
      return kOk;
    }

    if (dec->parsed()) {
      DecodeOptions opts;
      opts.allow_empty = !dec_require;
      opts.budget_nodes = dec_nodes;
      opts.budget_time = std::chrono::milliseconds(dec_ms);
      const bool exact = dec_mode == "exact";
      Input input(dec_scores, in);
      Output output(dec_out, out);
      return process_lines(input.get(), output.get(), err, jobs, [&](const std::string& line) {
        const auto scores = parse_scores(line);
        const auto result = exact ? exact_decode(scores, opts) : greedy_decode(scores, opts);
        return LineResult{emit_graph(result.graph), kOk, {}};
      });
    }

    if (val->parsed()) {
      Input input(val_in, in);
      return process_lines(input.get(), out, err, 1, [](const std::string& line) {
        const auto g = parse_graph(line);
        const auto violations = validate(g);
        json list = json::array();
        for (const auto& v : violations) list.push_back(violation_json(v, g.inventory()));
        LineResult r{detail::dump({{"id", g.sentence().id}, {"valid", violations.empty()}, {"violations", list}}),
                     kOk, {}};
        if (!violations.empty()) {
          r.code = kFailure;
          r.message = std::to_string(violations.size()) + " violation(s) in '" + g.sentence().id + "'";
        }
        return r;
      });
    }

    if (frm->parsed()) {
      Input input(frm_in, in);
      Output output(frm_out, out);
      return process_lines(input.get(), output.get(), err, 1, [](const std::string& line) {
        const auto g = parse_graph(line);
        return LineResult{emit_frames({g.sentence(), g.inventory(), graph_to_frames(g)}), kOk, {}};
      });
    }

    if (ev->parsed()) {
      Input gold(ev_gold, in), pred(ev_pred, in);
      PRF frame, span, edge;
      std::string gl, pl;
      std::size_t line_no = 0;
      if (ev_report == "tsv")
        out << (ev_per_sentence ? "id\t" : "") << "metric\tprecision\trecall\tf1\ttp\tfp\tfn\n";
      while (true) {
        const bool g_ok = static_cast<bool>(std::getline(gold.get(), gl));
        const bool p_ok = static_cast<bool>(std::getline(pred.get(), pl));
        ++line_no;
        if (!g_ok && !p_ok) break;
        if (g_ok != p_ok) {
          err << "line " << line_no << ": gold and predicted files differ in length\n";
          return kMalformed;
        }
        std::optional<AnalogyGraph> g, p;
        try {
          g = parse_graph(gl);
          p = parse_graph(pl);
        } catch (const Error& e) {
          err << "line " << line_no << ": " << e.what() << '\n';
          return kMalformed;
        }
        if (g->sentence().tokens != p->sentence().tokens) {
          err << "line " << line_no << ": gold and predicted sentences differ\n";
          return kMalformed;
        }
        const auto f = frame_prf(*g, *p), s = span_prf(*g, *p), e = edge_prf(*g, *p, ev_close);
        frame += f;
        span += s;
        edge += e;
        if (!ev_per_sentence) continue;
        const auto& id = g->sentence().id;
        if (ev_report == "json") {
          out << detail::dump({{"id", id}, {"frame", prf_json(f)}, {"span", prf_json(s)}, {"edge", prf_json(e)}})
              << '\n';
        } else {
          out << prf_tsv(id + "\t", "frame", f) << '\n'
              << prf_tsv(id + "\t", "span", s) << '\n'
              << prf_tsv(id + "\t", "edge", e) << '\n';
        }
      }
      if (ev_report == "json") {
        out << detail::dump({{"id", "micro"}, {"frame", prf_json(frame)}, {"span", prf_json(span)}, {"edge", prf_json(edge)}})
            << '\n';
      } else {
        const std::string prefix = ev_per_sentence ? "micro\t" : "";
        out << prf_tsv(prefix, "frame", frame) << '\n'
            << prf_tsv(prefix, "span", span) << '\n'
            << prf_tsv(prefix, "edge", edge) << '\n';
      }
      return ev_min_f1 && frame.f1 < *ev_min_f1 ? kFailure : kOk;
    }

    if (al->parsed()) {
      std::vector<std::unique_ptr<std::ifstream>> files;
      for (const auto& path : al_files) {
        files.push_back(std::make_unique<std::ifstream>(path));
        if (!*files.back()) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
      }
      std::vector<std::vector<std::string>> labels(files.size());
      std::size_t line_no = 0;
      while (true) {
        ++line_no;
        std::vector<std::string> lines(files.size());
        std::size_t ended = 0;
        for (std::size_t a = 0; a < files.size(); ++a) ended += std::getline(*files[a], lines[a]) ? 0 : 1;
        if (ended == files.size()) break;
        if (ended != 0) {
          err << "line " << line_no << ": annotation files differ in length\n";
          return kMalformed;
        }
        std::optional<std::size_t> tokens;
        for (std::size_t a = 0; a < files.size(); ++a) {
          std::vector<std::string> t;
          try {
            t = token_labels(parse_graph(lines[a]));
          } catch (const Error& e) {
            err << "line " << line_no << ": " << e.what() << '\n';
            return kMalformed;
          }
          if (tokens && *tokens != t.size()) {
            err << "line " << line_no << ": annotators disagree on the token count\n";
            return kMalformed;
          }
          tokens = t.size();
          labels[a].insert(labels[a].end(), t.begin(), t.end());
        }
      }
      const auto r = krippendorff_alpha(labels);
      out << detail::dump({{"alpha", r.alpha}, {"degenerate", r.degenerate}, {"items", labels.front().size()}})
          << '\n';
      return kOk;
    }

    if (ch->parsed()) {
      Input input(ch_in, in);
      std::filesystem::create_directories(ch_dir);
      return process_lines(input.get(), out, err, 1, [&](const std::string& line) {
        const auto fs = parse_frames(line);
        const auto charts = frames_to_charts(fs.frames, fs.sentence, fs.inventory);
        std::string written;
        for (std::size_t i = 0; i < charts.size(); ++i) {
          const auto path = std::filesystem::path(ch_dir) /
                            (fs.sentence.id + "-" + std::to_string(i) + "." + ch_format);
          std::ofstream f(path);
          if (!f) throw Error(ErrorCode::MalformedInput, "cannot write " + path.string());
          f << (ch_format == "svg" ? emit_svg(charts[i]) : emit_chart_json(charts[i]) + "\n");
          if (!written.empty()) written += '\n';
          written += path.string();
        }
        return LineResult{written, kOk, {}};
      });
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kOk;
}

}  // namespace tap::cli
