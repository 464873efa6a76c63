// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.  Exits non-zero if any fails.

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>

#include "igdep/extract.hpp"
#include "igdep/solver.hpp"
#include "testutil.hpp"

using namespace igdep;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Analysis {
  DependencyGraph deps;
  std::vector<InterpretationGraph> models;
  double elapsed = 0;
  bool ok = false;
};

Analysis analyze(const std::string& sentence) {
  Analysis a;
  auto start = Clock::now();
  auto daps = select_and_compose(tokenize(sentence), testutil::toy_grammar());
  for (const auto& dap : daps) {
    auto r = find_models(dap);
    for (auto& m : r.models) a.models.push_back(std::move(m));
  }
  if (!a.models.empty()) {
    auto result = extract_dependencies(a.models.front());
    a.deps = result.graph;
    a.ok = result.ok();
  }
  a.elapsed = seconds_since(start);
  return a;
}

bool has_edge(const DependencyGraph& g, const std::string& label, const std::string& gov,
              const std::string& dep) {
  for (const auto& e : g.edges)
    if (e.label == label && e.governor.form == gov && e.dependent.form == dep) return true;
  return false;
}

// Edge sets keyed by positions, label and kind; the verb form at position 1
// necessarily differs between the control sentences, so forms are omitted.
std::set<std::string> edge_set(const DependencyGraph& g) {
  std::set<std::string> out;
  for (const auto& e : g.edges) {
    std::ostringstream os;
    os << e.label << " " << e.governor.position << " -> " << e.dependent.position << " "
       << to_string(e.kind);
    out.insert(os.str());
  }
  return out;
}

void criterion_1_worked_example() {
  auto a = analyze("Jean en apprécie le goût");
  bool ok = a.ok && a.deps.edges.size() == 4 && has_edge(a.deps, "subj", "apprécie", "Jean") &&
            has_edge(a.deps, "deobj", "goût", "en");
  int lc = 0;
  for (const auto& e : a.deps.edges)
    if (e.kind == DepKind::LinearCanonical && e.label != "subj") ++lc;
  // subj(apprécie->Jean) is itself linear-canonical; the other two
  // dependencies must be exactly the remaining linear-canonical ones.
  for (const auto& e : a.deps.edges) {
    if (e.label == "subj") ok = ok && e.kind == DepKind::LinearCanonical;
    if (e.label == "deobj") ok = ok && e.kind == DepKind::NonlinearNonCanonical;
  }
  ok = ok && lc == 2 && a.elapsed < 5.0;
  std::ostringstream os;
  os << a.deps.edges.size() << " edges, " << a.elapsed << " s";
  report(1, "worked example \"Jean en apprécie le goût\" yields the four expected dependencies",
         ok, os.str());
}

void criterion_2_control_contrast() {
  auto permet = analyze("Jean permet à Marie de venir");
  auto promet = analyze("Jean promet à Marie de venir");
  bool ok = permet.ok && promet.ok;
  ok = ok && has_edge(permet.deps, "subj", "venir", "Marie");
  ok = ok && has_edge(promet.deps, "subj", "venir", "Jean");
  ok = ok && permet.elapsed < 10.0 && promet.elapsed < 10.0;

  // The two outputs differ exactly in that edge's dependent.
  auto a = edge_set(permet.deps);
  auto b = edge_set(promet.deps);
  std::vector<std::string> only_a, only_b;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
  ok = ok && only_a == std::vector<std::string>{"subj 5 -> 3 nonlinear-noncanonical"} &&
       only_b == std::vector<std::string>{"subj 5 -> 0 nonlinear-noncanonical"};
  std::ostringstream os;
  os << permet.elapsed << " s / " << promet.elapsed << " s";
  report(2, "control contrast permet/promet places the infinitive subject correctly", ok, os.str());
}

void criterion_3_relative_clause() {
  auto a = analyze("la fille que Jean connaît");
  bool ok = a.ok && has_edge(a.deps, "obj", "connaît", "fille");
  ok = ok && a.deps.degree(Token{"que", 2}) == 0;
  ok = ok && a.deps.has_cycle();
  ok = ok && a.elapsed < 10.0;
  std::ostringstream os;
  os << a.elapsed << " s";
  report(3, "relative clause yields obj(connaît->fille), isolates \"que\" and contains a cycle",
         ok, os.str());
}

SaturationKind saturation_oracle(const std::vector<Polarity>& pols) {
  auto all_virtual = [](const std::vector<Polarity>& rest) {
    for (Polarity p : rest)
      if (p != Polarity::Virtual) return false;
    return true;
  };
  for (size_t i = 0; i < pols.size(); ++i) {
    if (pols[i] != Polarity::Saturated) continue;
    std::vector<Polarity> rest;
    for (size_t k = 0; k < pols.size(); ++k)
      if (k != i) rest.push_back(pols[k]);
    if (all_virtual(rest)) return SaturationKind::ValidNonlinear;
  }
  for (size_t i = 0; i < pols.size(); ++i)
    for (size_t j = 0; j < pols.size(); ++j) {
      if (i == j || pols[i] != Polarity::Positive || pols[j] != Polarity::Negative) continue;
      std::vector<Polarity> rest;
      for (size_t k = 0; k < pols.size(); ++k)
        if (k != i && k != j) rest.push_back(pols[k]);
      if (all_virtual(rest)) return SaturationKind::ValidLinear;
    }
  return SaturationKind::Invalid;
}

void criterion_4_saturation_oracle() {
  const Polarity all[] = {Polarity::Positive, Polarity::Negative, Polarity::Virtual,
                          Polarity::Saturated};
  int agree = 0, total = 0;
  std::set<std::vector<int>> multisets;
  for (int size = 1; size <= 4; ++size) {
    std::vector<int> idx(size, 0);
    while (true) {
      std::vector<Polarity> pols;
      for (int i : idx) pols.push_back(all[i]);
      ++total;
      if (check_polarity_multiset(pols).kind == saturation_oracle(pols)) ++agree;
      std::vector<int> counts(4, 0);
      for (int i : idx) ++counts[i];
      multisets.insert(counts);
      int k = size - 1;
      while (k >= 0 && idx[k] == 3) idx[k--] = 0;
      if (k < 0) break;
      ++idx[k];
    }
  }
  std::ostringstream os;
  os << agree << "/" << total << " tuples, " << multisets.size() << " distinct multisets of size 1-4";
  report(4, "saturation verdicts agree with brute-force enumeration", agree == total, os.str());
}

void criterion_5_matcher_oracle() {
  auto start = Clock::now();
  std::mt19937 rng(20240901);
  int graphs = 0, patterns = 0, agree = 0;
  while (graphs < 50) {
    auto g = testutil::random_graph(rng);
    ++graphs;
    for (int k = 0; k < 10; ++k) {
      auto p = testutil::random_pattern(rng);
      ++patterns;
      if (match_pattern(p, g) == testutil::naive_match(p, g)) ++agree;
    }
  }
  double elapsed = seconds_since(start);
  std::ostringstream os;
  os << graphs << " graphs x 10 patterns, " << agree << "/" << patterns << " agree, " << elapsed
     << " s";
  report(5, "pattern matcher agrees with the brute-force assignment filter",
         agree == patterns && elapsed < 60.0, os.str());
}

void criterion_6_dual_route() {
  bool ok = true;
  std::string detail;
  for (const auto& s : testutil::corpus()) {
    auto golden = testutil::load_golden(s.golden_file);
    std::vector<InterpretationGraph> graphs{golden};
    for (const auto& dap : select_and_compose(tokenize(s.sentence), testutil::toy_grammar()))
      for (auto& m : find_models(dap).models) graphs.push_back(std::move(m));
    for (const auto& g : graphs) {
      auto direct = extract_dependencies(g);
      auto via = extract_via_patterns(g);
      if (!(direct.graph == via.graph) || direct.errors.size() != via.errors.size()) {
        ok = false;
        detail = s.name;
      }
    }
  }
  report(6, "case-analysis extraction equals the four-pattern route on every corpus graph", ok,
         detail);
}

void criterion_7_checker_sensitivity() {
  int applied = 0, detected = 0;
  for (const auto& s : testutil::corpus()) {
    for (const auto& p : testutil::perturbations()) {
      auto g = testutil::load_golden(s.golden_file);
      if (!p.apply(g)) continue;
      ++applied;
      if (!check_interpretation(g).ok()) ++detected;
    }
  }
  std::ostringstream os;
  os << detected << "/" << applied << " single-edit perturbations detected, "
     << testutil::perturbations().size() << " edit kinds";
  report(7, "every perturbation of every golden graph is rejected by the checker",
         applied == detected && testutil::perturbations().size() >= 10 && applied >= 40, os.str());
}

void criterion_8_solver_soundness() {
  bool ok = true;
  std::ostringstream os;
  for (const auto& s : testutil::corpus()) {
    auto start = Clock::now();
    auto daps = select_and_compose(tokenize(s.sentence), testutil::toy_grammar());
    bool golden_found = false;
    std::string want = io::canonical_model_text(testutil::load_golden(s.golden_file).tree);
    for (const auto& dap : daps) {
      auto r = find_models(dap);
      for (const auto& m : r.models) {
        if (!check_interpretation(m).ok()) ok = false;
        if (io::canonical_model_text(m.tree) == want) golden_found = true;
      }
    }
    double elapsed = seconds_since(start);
    if (!golden_found || elapsed >= 30.0) ok = false;
    os << s.name << " " << elapsed << "s ";
  }
  report(8, "solver outputs all pass the checker and include the golden model", ok, os.str());
}

void criterion_9_determinism() {
  auto run_corpus = [] {
    std::ostringstream os;
    for (const auto& s : testutil::corpus()) {
      auto a = analyze(s.sentence);
      os << io::to_tsv(a.deps) << io::to_dot(a.deps);
      for (const auto& m : a.models) os << io::serialize(m);
    }
    return os.str();
  };
  std::string first = run_corpus();
  std::string second = run_corpus();
  std::ostringstream os;
  os << first.size() << " bytes";
  report(9, "two consecutive corpus runs produce byte-identical outputs", first == second,
         os.str());
}

}  // namespace

int main() {
  criterion_1_worked_example();
  criterion_2_control_contrast();
  criterion_3_relative_clause();
  criterion_4_saturation_oracle();
  criterion_5_matcher_oracle();
  criterion_6_dual_route();
  criterion_7_checker_sensitivity();
  criterion_8_solver_soundness();
  criterion_9_determinism();
  if (failures) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
