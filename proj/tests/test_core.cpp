#include <gtest/gtest.h>

#include <random>

#include "igdep/core.hpp"
#include "igdep/grammar.hpp"
#include "igdep/serialize.hpp"
#include "testutil.hpp"

using namespace igdep;

TEST(FeatureValue, UnificationIsIntersection) {
  auto subj = FeatureValue::atom("subj");
  auto obj = FeatureValue::atom("obj");
  auto both = FeatureValue({"subj", "obj"});

  EXPECT_EQ(unify_values(subj, subj), subj);
  EXPECT_EQ(unify_values(both, obj), obj);
  EXPECT_FALSE(unify_values(subj, obj).has_value());
}

TEST(FeatureValue, NeverEmpty) {
  EXPECT_THROW(FeatureValue(std::vector<std::string>{}), StructuralError);
  EXPECT_TRUE(FeatureValue({"b", "a", "a"}).atoms() == (std::vector<std::string>{"a", "b"}));
}

TEST(Principal, DefinitionOverPolarities) {
  DapNode n;
  n.id = "x";
  n.features["cat"] = {"cat", FeatureValue::atom("np"), Polarity::Positive, {}};
  EXPECT_TRUE(is_principal(n));
  n.features["cat"].marking = Polarity::Virtual;
  EXPECT_FALSE(is_principal(n));
  n.features["cat"].marking = Polarity::Negative;
  EXPECT_FALSE(is_principal(n));
  n.features["cat"].marking = Polarity::Saturated;
  EXPECT_TRUE(is_principal(n));
}

TEST(Principal, MissingCatIsStructuralError) {
  DapNode n;
  n.id = "x";
  EXPECT_THROW(is_principal(n), StructuralError);
}

TEST(Principal, ToyGrammarAnchorOfApprecie) {
  const Edap& e = testutil::toy_grammar().entries_for("apprécie").front();
  EXPECT_TRUE(is_principal(e.dap.node("V")));
  EXPECT_FALSE(is_principal(e.dap.node("Subj")));
}

// Every accepted entry: the non-empty principal nodes are exactly the
// maximal-projection-to-anchor path.
TEST(Principal, SpineEqualsNonEmptyPrincipalNodes) {
  for (const auto& [form, entries] : testutil::toy_grammar().entries) {
    (void)form;
    for (const Edap& e : entries) {
      std::vector<std::string> spine;
      for (const auto& [id, n] : e.dap.nodes)
        if (n.phon == PhonConstraint::NonEmpty && is_principal(n)) spine.push_back(id);
      std::sort(spine.begin(), spine.end());

      std::vector<std::string> path{e.anchor_id};
      std::string mp = max_projection(e);
      auto cur = e.dap.parent_of(e.anchor_id);
      while (path.back() != mp && cur) {
        path.push_back(*cur);
        cur = e.dap.parent_of(*cur);
      }
      std::sort(path.begin(), path.end());
      EXPECT_EQ(spine, path) << "entry " << e.word_form;
    }
  }
}

TEST(Coindex, ClitAndTraceShareAClass) {
  auto g = testutil::load_golden("s1-apprecie.ig");
  auto classes = coindex_classes(g);
  EXPECT_TRUE(classes.same_class({false, "1.Clit", "ref"}, {false, "1.DeObj", "ref"}));
  EXPECT_TRUE(classes.same_class({false, "1.Clit", "ref"}, {true, "Clit", "ref"}));
  EXPECT_TRUE(classes.same_class({true, "Clit", "ref"}, {true, "DeObj", "ref"}));
  EXPECT_FALSE(classes.same_class({false, "0.Np1", "ref"}, {false, "1.Clit", "ref"}));
}

TEST(Coindex, NoTagsMeansSingletonsUpToPropagation) {
  InterpretationGraph g;
  DapNode d;
  d.id = "d0";
  d.features["cat"] = {"cat", FeatureValue::atom("x"), Polarity::Saturated, {}};
  g.dap.nodes["d0"] = d;
  ModelNode m;
  m.id = "m0";
  m.features["cat"] = {"cat", FeatureValue::atom("x"), Polarity::Saturated, {}};
  m.empty = true;
  g.tree.nodes["m0"] = m;
  g.interp["d0"] = "m0";

  auto classes = coindex_classes(g);
  ASSERT_EQ(classes.classes().size(), 1u);  // the dap feature and its image
  EXPECT_TRUE(classes.same_class({false, "d0", "cat"}, {true, "m0", "cat"}));
}

TEST(Coindex, PropagatesThroughInterpretation) {
  auto g = testutil::load_golden("s2-permet.ig");
  auto classes = coindex_classes(g);
  // The control chain: Marie's filler node, the virtual argument of permet,
  // the trace of venir, and their model images all denote one entity.
  EXPECT_TRUE(classes.same_class({false, "3.Np", "ref"}, {false, "5.SubjT", "ref"}));
  EXPECT_TRUE(classes.same_class({false, "3.Np", "ref"}, {true, "SubjT", "ref"}));
  EXPECT_FALSE(classes.same_class({false, "0.Np1", "ref"}, {false, "5.SubjT", "ref"}));
}

TEST(Coindex, IsAPartition) {
  for (const auto& s : testutil::corpus()) {
    auto g = testutil::load_golden(s.golden_file);
    auto classes = coindex_classes(g);
    size_t occurrences = 0;
    for (const auto& [id, n] : g.dap.nodes) {
      (void)id;
      occurrences += n.features.size();
    }
    for (const auto& [id, n] : g.tree.nodes) {
      (void)id;
      occurrences += n.features.size();
    }
    size_t in_classes = 0;
    std::set<FeatureRef> seen;
    for (const auto& c : classes.classes()) {
      in_classes += c.size();
      for (const auto& r : c) EXPECT_TRUE(seen.insert(r).second) << "duplicate " << to_string(r);
    }
    EXPECT_EQ(occurrences, in_classes) << s.name;
  }
}

// ---------------------------------------------------------------------------
// Serialization round-trips

TEST(Serialize, GoldenGraphsRoundTrip) {
  for (const auto& s : testutil::corpus()) {
    auto g = testutil::load_golden(s.golden_file);
    auto text = io::serialize(g);
    auto re = io::parse_interpretation_graph(text);
    EXPECT_EQ(g, re) << s.name;
    EXPECT_EQ(text, io::serialize(re)) << s.name;
  }
}

TEST(Serialize, DapAndTreeRoundTrip) {
  for (const auto& s : testutil::corpus()) {
    auto g = testutil::load_golden(s.golden_file);
    EXPECT_EQ(g.dap, io::parse_dap(io::serialize(g.dap))) << s.name;
    EXPECT_EQ(g.tree, io::parse_syntax_tree(io::serialize(g.tree))) << s.name;
  }
}

TEST(Serialize, RandomGraphsRoundTrip) {
  std::mt19937 rng(7);
  for (int i = 0; i < 60; ++i) {
    auto g = testutil::random_graph(rng);
    auto re = io::parse_interpretation_graph(io::serialize(g));
    EXPECT_EQ(g, re) << "iteration " << i;
  }
}

TEST(Serialize, DependencyGraphRoundTrip) {
  std::mt19937 rng(11);
  for (int i = 0; i < 40; ++i) {
    DependencyGraph g;
    int n = 2 + int(rng() % 6);
    for (int k = 0; k < n; ++k) g.tokens.push_back({"w" + std::to_string(k), k});
    int edges = int(rng() % 7);
    const char* labels[] = {"subj", "obj", "mod"};
    for (int k = 0; k < edges; ++k)
      g.edges.push_back({g.tokens[rng() % n], g.tokens[rng() % n], labels[rng() % 3],
                         DepKind(rng() % 4)});
    std::sort(g.edges.begin(), g.edges.end(), dependency_less);
    EXPECT_EQ(g, io::parse_dependency_graph(io::serialize(g)));
  }
}

TEST(Serialize, RejectsMalformedInput) {
  EXPECT_THROW(io::parse_interpretation_graph("dap v1\n"), ParseError);
  EXPECT_THROW(io::parse_interpretation_graph("interpretation-graph v1\ntokens a\n"), ParseError);
  EXPECT_THROW(io::parse_dap("dap v1\ndap-node x\n"), ParseError);  // missing edap=
  EXPECT_THROW(io::parse_syntax_tree("syntax-tree v1\nmodel-node a phon=nonempty\n"
                                     "model-node b phon=nonempty\n"),
               ParseError);  // two roots
}

TEST(DependencyGraph, CycleAndDegree) {
  DependencyGraph g;
  g.tokens = {{"a", 0}, {"b", 1}, {"c", 2}};
  g.edges.push_back({g.tokens[0], g.tokens[1], "x", DepKind::LinearCanonical});
  EXPECT_FALSE(g.has_cycle());
  g.edges.push_back({g.tokens[1], g.tokens[0], "y", DepKind::LinearCanonical});
  EXPECT_TRUE(g.has_cycle());
  EXPECT_EQ(g.degree(g.tokens[2]), 0);
  EXPECT_EQ(g.degree(g.tokens[0]), 2);
}
