#include <gtest/gtest.h>

#include "igdep/heads.hpp"
#include "testutil.hpp"

using namespace igdep;

TEST(Antecedent, WorkedTableCases) {
  auto g = testutil::load_golden("s1-apprecie.ig");
  EXPECT_EQ(antecedent(g, "DeObj", "funct").id, "1.DeObj");
  EXPECT_EQ(antecedent(g, "Np2-Obj", "cat").id, "4.Np2");
  EXPECT_EQ(antecedent(g, "Np1-Subj", "funct").id, "2.Subj");
  EXPECT_EQ(antecedent(g, "Np1-Subj", "cat").id, "0.Np1");
}

TEST(Antecedent, SingletonSaturatedPreimage) {
  auto g = testutil::load_golden("s1-apprecie.ig");
  EXPECT_EQ(antecedent(g, "Clit", "cat").id, "1.Clit");
}

TEST(Antecedent, MissingFeatureIsDomainError) {
  auto g = testutil::load_golden("s1-apprecie.ig");
  EXPECT_THROW(antecedent(g, "S", "funct"), DomainError);
}

TEST(Antecedent, CorruptedGraphIsIntegrityError) {
  auto g = testutil::load_golden("s1-apprecie.ig");
  g.dap.nodes["0.Np1"].features["cat"].marking = Polarity::Negative;
  EXPECT_THROW(antecedent(g, "Np1-Subj", "cat"), IntegrityError);
}

TEST(Head, ProjectionsOfTheVerb) {
  auto g = testutil::load_golden("s1-apprecie.ig");
  EXPECT_EQ(head(g, "Vmax").id, "V");
  EXPECT_EQ(head(g, "S").id, "V");
  EXPECT_EQ(head(g, "V").id, "V");  // an anchor image is its own head
}

TEST(Head, EmptyNodeIsDomainError) {
  auto g = testutil::load_golden("s1-apprecie.ig");
  EXPECT_THROW(head(g, "DeObj"), DomainError);
  EXPECT_THROW(head_token(g, "DeObj"), DomainError);
}

TEST(Head, TokensOfTheWorkedExample) {
  auto g = testutil::load_golden("s1-apprecie.ig");
  EXPECT_EQ(head_token(g, "Vmax"), (Token{"apprécie", 2}));
  EXPECT_EQ(head_token(g, "Np1-Subj"), (Token{"Jean", 0}));
  EXPECT_EQ(head_token(g, "Clit"), (Token{"en", 1}));
  EXPECT_EQ(head_token(g, "Np2-Obj"), (Token{"goût", 4}));
}

// The existence/uniqueness ground of the antecedent: on a valid graph,
// every polarized feature of every model node has exactly one
// positive-or-saturated preimage.
TEST(Antecedent, UniquePositiveOrSaturatedPreimage) {
  for (const auto& s : testutil::corpus()) {
    auto g = testutil::load_golden(s.golden_file);
    for (const auto& [mid, n] : g.tree.nodes) {
      for (const auto& [fname, f] : n.features) {
        if (f.neutral()) continue;
        int hits = 0;
        for (const auto& d : g.inverse_of(mid)) {
          const Feature* df = g.dap.node(d).feature(fname);
          if (df && !df->neutral() &&
              (*df->marking == Polarity::Positive || *df->marking == Polarity::Saturated))
            ++hits;
        }
        EXPECT_EQ(hits, 1) << s.name << " " << mid << " " << fname;
      }
    }
  }
}

// head is total over non-empty nodes and idempotent on every corpus graph;
// the cat antecedent of a non-empty node is itself non-empty.
TEST(Head, TotalAndIdempotentOnCorpus) {
  for (const auto& s : testutil::corpus()) {
    auto g = testutil::load_golden(s.golden_file);
    for (const auto& [mid, n] : g.tree.nodes) {
      if (n.empty) continue;
      const ModelNode& h = head(g, mid);
      EXPECT_EQ(head(g, h.id).id, h.id) << s.name << " " << mid;
      EXPECT_FALSE(g.dap.node(antecedent(g, mid, "cat").id).phon == PhonConstraint::Empty)
          << s.name << " " << mid;
    }
  }
}
