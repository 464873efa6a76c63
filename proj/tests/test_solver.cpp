#include <gtest/gtest.h>

#include "igdep/extract.hpp"
#include "igdep/solver.hpp"
#include "testutil.hpp"

using namespace igdep;

namespace {

Dap compose_sentence(const std::string& sentence) {
  auto daps = select_and_compose(tokenize(sentence), testutil::toy_grammar());
  EXPECT_EQ(daps.size(), 1u);
  return daps.at(0);
}

std::vector<std::string> canonical_models(const SolveResult& r) {
  std::vector<std::string> out;
  for (const auto& m : r.models) out.push_back(io::canonical_model_text(m.tree));
  return out;
}

}  // namespace

TEST(Solver, FullySaturatedSingleEntryHasIdentityModel) {
  const std::string text =
      "grammar t 1\n"
      "feature cat polarized x\n"
      "edap w\n"
      "  node Top phon=nonempty cat=x:sat\n"
      "  node A anchor cat=x:sat\n"
      "  child Top A\n";
  Grammar g = load_grammar(text);
  auto dap = select_and_compose(tokenize("w"), g).at(0);
  auto result = find_models(dap);
  EXPECT_TRUE(result.exhausted());
  ASSERT_EQ(result.models.size(), 1u);
  const auto& model = result.models[0];
  EXPECT_EQ(model.tree.nodes.size(), dap.nodes.size());
  for (const auto& [d, m] : model.interp) EXPECT_EQ(model.inverse_of(m).size(), 1u) << d;
  EXPECT_TRUE(check_interpretation(model).ok());
}

TEST(Solver, GloballyUnbalancedPolaritiesHaveNoModel) {
  const std::string text =
      "grammar t 1\n"
      "feature cat polarized x y\n"
      "edap a\n"
      "  node A anchor cat=x:sat\n"
      "  node Need phon=nonempty cat=y:pos\n"
      "  child Need A\n"
      "edap b\n"
      "  node B anchor cat=x:sat\n";
  Grammar g = load_grammar(text);
  auto dap = select_and_compose(tokenize("a b"), g).at(0);
  auto result = find_models(dap);
  EXPECT_TRUE(result.exhausted());
  EXPECT_TRUE(result.models.empty());
}

TEST(Solver, CorpusSentencesRecoverTheGoldenModel) {
  for (const auto& s : testutil::corpus()) {
    auto result = find_models(compose_sentence(s.sentence));
    EXPECT_TRUE(result.exhausted()) << s.name;
    ASSERT_FALSE(result.models.empty()) << s.name;

    auto golden = testutil::load_golden(s.golden_file);
    std::string want = io::canonical_model_text(golden.tree);
    auto got = canonical_models(result);
    EXPECT_TRUE(std::find(got.begin(), got.end(), want) != got.end())
        << s.name << "\nwanted:\n" << want << "\nmodels:\n"
        << [&] {
             std::string all;
             for (const auto& m : got) all += m + "\n";
             return all;
           }();
  }
}

TEST(Solver, CorpusSentencesAreUnambiguous) {
  for (const auto& s : testutil::corpus()) {
    auto result = find_models(compose_sentence(s.sentence));
    EXPECT_EQ(result.models.size(), 1u) << s.name;
  }
}

TEST(Solver, EveryOutputPassesTheChecker) {
  for (const auto& s : testutil::corpus()) {
    auto result = find_models(compose_sentence(s.sentence));
    for (const auto& m : result.models) {
      auto report = check_interpretation(m);
      EXPECT_TRUE(report.ok()) << s.name << "\n" << report.to_text();
    }
  }
}

TEST(Solver, FirstModelExtractionMatchesGolden) {
  for (const auto& s : testutil::corpus()) {
    auto result = find_models(compose_sentence(s.sentence));
    ASSERT_FALSE(result.models.empty()) << s.name;
    auto deps = extract_dependencies(result.models.front());
    EXPECT_TRUE(deps.ok()) << s.name;
    EXPECT_EQ(io::to_tsv(deps.graph), s.expected_tsv) << s.name;
  }
}

TEST(Solver, DeterministicAcrossRuns) {
  for (const auto& s : testutil::corpus()) {
    auto a = find_models(compose_sentence(s.sentence));
    auto b = find_models(compose_sentence(s.sentence));
    EXPECT_EQ(canonical_models(a), canonical_models(b)) << s.name;
    ASSERT_EQ(a.models.size(), b.models.size());
    for (size_t i = 0; i < a.models.size(); ++i)
      EXPECT_EQ(io::serialize(a.models[i]), io::serialize(b.models[i])) << s.name;
  }
}

TEST(Solver, BareNounPhraseFragmentParses) {
  auto result = find_models(compose_sentence("la fille"));
  ASSERT_EQ(result.models.size(), 1u);
  auto deps = extract_dependencies(result.models.front());
  ASSERT_EQ(deps.graph.edges.size(), 1u);
  EXPECT_EQ(deps.graph.edges[0].label, "det");
  EXPECT_EQ(deps.graph.edges[0].governor.form, "fille");
  EXPECT_EQ(deps.graph.edges[0].dependent.form, "la");
}

TEST(Solver, ScrambledSentenceHasNoModel) {
  auto result = find_models(compose_sentence("goût le en apprécie Jean"));
  EXPECT_TRUE(result.exhausted());
  EXPECT_TRUE(result.models.empty());
}

TEST(Solver, ModelCapIsHonored) {
  SolverConfig cfg;
  cfg.max_models = 1;
  auto result = find_models(compose_sentence("Jean en apprécie le goût"), cfg);
  EXPECT_EQ(result.models.size(), 1u);
}

TEST(Solver, DepthCapStopsSearch) {
  SolverConfig cfg;
  cfg.max_merge_depth = 1;
  auto result = find_models(compose_sentence("Jean en apprécie le goût"), cfg);
  EXPECT_TRUE(result.models.empty());
  EXPECT_TRUE(result.hit_depth_cap);
  EXPECT_FALSE(result.exhausted());
}

TEST(Solver, BoundsMustBePositive) {
  SolverConfig cfg;
  cfg.max_models = 0;
  EXPECT_THROW(find_models(Dap{}, cfg), DomainError);
}
