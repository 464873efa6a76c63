// Command-line front end: analyze sentences end to end, validate grammars,
// check serialized interpretation graphs, extract and render dependencies.
//
// Exit codes: 0 success; 1 I/O or parse failure; 2 usage or unknown token;
// 3 no model found; 4 extraction errors; 5 validation failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "igdep/extract.hpp"
#include "igdep/grammar.hpp"
#include "igdep/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoModel = 3;
constexpr int kExitExtraction = 4;
constexpr int kExitInvalid = 5;

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string render(const igdep::DependencyGraph& deps, const std::string& format) {
  if (format == "tsv") return igdep::io::to_tsv(deps);
  if (format == "dot") return igdep::io::to_dot(deps);
  throw igdep::DomainError("unknown format: " + format);
}

int run_analyze(const std::string& sentence, const std::string& grammar_path,
                const std::string& format, int max_models, long timeout_ms, bool all_models) {
  auto tokens = igdep::tokenize(sentence);
  if (tokens.empty()) {
    std::cerr << "error: empty sentence\n";
    return kExitUsage;
  }
  auto text = slurp(grammar_path);
  if (!text) {
    std::cerr << "error: cannot read grammar " << grammar_path << "\n";
    return kExitIo;
  }
  igdep::Grammar grammar;
  try {
    grammar = igdep::load_grammar(*text);
  } catch (const igdep::Error& e) {
    std::cerr << "error: " << grammar_path << ": " << e.what() << "\n";
    return kExitIo;
  }

  std::vector<igdep::Dap> daps;
  try {
    daps = igdep::select_and_compose(tokens, grammar);
  } catch (const igdep::UnknownWordError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  igdep::SolverConfig cfg;
  cfg.max_models = max_models;
  cfg.timeout_millis = timeout_ms;
  std::vector<igdep::InterpretationGraph> models;
  bool timed_out = false;
  for (const auto& dap : daps) {
    if (int(models.size()) >= cfg.max_models) break;
    igdep::SolverConfig per = cfg;
    per.max_models = cfg.max_models - int(models.size());
    igdep::SolveResult r = igdep::find_models(dap, per);
    timed_out = timed_out || r.timed_out;
    for (auto& m : r.models) models.push_back(std::move(m));
  }
  if (models.empty()) {
    std::cerr << "error: no model within bounds" << (timed_out ? " (timed out)" : "") << "\n";
    return kExitNoModel;
  }

  bool any_clean = false;
  for (const auto& m : models)
    if (igdep::extract_dependencies(m).ok()) any_clean = true;

  size_t shown = all_models ? models.size() : 1;
  for (size_t i = 0; i < shown; ++i) {
    if (all_models && shown > 1) std::cout << "model " << i << "\n";
    if (format == "ig") {
      std::cout << igdep::io::serialize(models[i]);
      continue;
    }
    igdep::ExtractResult r = igdep::extract_dependencies(models[i]);
    std::cout << render(r.graph, format);
    for (const auto& e : r.errors)
      std::cerr << "extraction error at " << e.model_node << ": " << e.message << "\n";
  }
  if (format == "ig") return kExitOk;
  return any_clean ? kExitOk : kExitExtraction;
}

int run_check(const std::string& path) {
  auto text = slurp(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return kExitIo;
  }
  igdep::InterpretationGraph g;
  try {
    g = igdep::io::parse_interpretation_graph(*text);
  } catch (const igdep::Error& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return kExitIo;
  }
  igdep::ValidityReport report = igdep::check_interpretation(g);
  std::cout << report.to_text();
  if (report.ok()) {
    std::cout << "ok\n";
    return kExitOk;
  }
  return kExitInvalid;
}

int run_extract(const std::string& path, const std::string& format) {
  auto text = slurp(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return kExitIo;
  }
  igdep::InterpretationGraph g;
  try {
    g = igdep::io::parse_interpretation_graph(*text);
  } catch (const igdep::Error& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return kExitIo;
  }
  igdep::ValidityReport report = igdep::check_interpretation(g);
  if (!report.ok()) {
    std::cerr << report.to_text();
    return kExitInvalid;
  }
  if (format == "ig") {
    std::cout << igdep::io::serialize(g);
    return kExitOk;
  }
  igdep::ExtractResult r = igdep::extract_dependencies(g);
  std::cout << render(r.graph, format);
  for (const auto& e : r.errors)
    std::cerr << "extraction error at " << e.model_node << ": " << e.message << "\n";
  return r.ok() ? kExitOk : kExitExtraction;
}

int run_grammar_validate(const std::string& path) {
  auto text = slurp(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return kExitIo;
  }
  try {
    igdep::Grammar g = igdep::load_grammar(*text);
    size_t n = 0;
    for (const auto& [form, entries] : g.entries) {
      (void)form;
      n += entries.size();
    }
    std::cout << "grammar " << g.name << " " << g.version << ": " << n << " entries ok\n";
    return kExitOk;
  } catch (const igdep::ParseError& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return kExitIo;
  } catch (const igdep::GrammarError& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dependency extraction from interaction-grammar parses"};
  app.require_subcommand(1);

  std::string grammar_path = "grammars/toy-french.grm";
  std::string format = "tsv";
  std::string sentence;
  std::string ig_path;
  int max_models = 8;
  long timeout_ms = 10000;
  bool all_models = false;

  CLI::App* analyze = app.add_subcommand("analyze", "analyze a sentence end to end");
  analyze->add_option("sentence", sentence, "whitespace-tokenized sentence")->required();
  analyze->add_option("--grammar", grammar_path, "grammar file");
  analyze->add_option("--format", format, "tsv|dot|ig")->check(CLI::IsMember({"tsv", "dot", "ig"}));
  analyze->add_option("--max-models", max_models, "model cap")->check(CLI::PositiveNumber);
  analyze->add_option("--timeout-ms", timeout_ms, "solver timeout")->check(CLI::PositiveNumber);
  analyze->add_flag("--all-models", all_models, "render every model, not just the first");

  CLI::App* check = app.add_subcommand("check", "validate a serialized interpretation graph");
  check->add_option("graph", ig_path, "interpretation-graph file")->required();

  CLI::App* extract = app.add_subcommand("extract", "extract dependencies from a graph file");
  extract->add_option("graph", ig_path, "interpretation-graph file")->required();
  extract->add_option("--format", format, "tsv|dot|ig")->check(CLI::IsMember({"tsv", "dot", "ig"}));

  CLI::App* gval = app.add_subcommand("grammar-validate", "validate a grammar file");
  gval->add_option("grammar", grammar_path, "grammar file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(analyze))
      return run_analyze(sentence, grammar_path, format, max_models, timeout_ms, all_models);
    if (app.got_subcommand(check)) return run_check(ig_path);
    if (app.got_subcommand(extract)) return run_extract(ig_path, format);
    if (app.got_subcommand(gval)) return run_grammar_validate(grammar_path);
  } catch (const igdep::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
