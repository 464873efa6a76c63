// Dependency extraction from valid interpretation graphs.
//
// Every model node bearing a funct feature of value X yields one dependency
// labeled X between the head of the node it modifies or complements and its
// own realized head:
//   linear      the funct antecedent is positive: the governor side is the
//               antecedent's own description;
//   non-linear  the funct antecedent is saturated: the governor side is the
//               description heading the parent of the node;
//   canonical   the node is non-empty: the dependent is its own cat
//               antecedent's description;
//   non-canonical  the node is empty: the dependent is recovered through the
//               unique non-empty model node ref-coindexed with it.
//
// Two routes compute the same graph: a direct case analysis and the four
// built-in graph patterns.  Both are kept as a permanent cross-check.
#pragma once

#include "igdep/heads.hpp"
#include "igdep/patterns.hpp"

namespace igdep {

enum class Linearity { Linear, Nonlinear };
enum class Canonicity { Canonical, NonCanonical };

struct ExtractError {
  std::string model_node;
  std::string message;
  friend bool operator==(const ExtractError&, const ExtractError&) = default;
};

struct ExtractResult {
  DependencyGraph graph;
  std::vector<ExtractError> errors;
  bool ok() const { return errors.empty(); }
};

// ---------------------------------------------------------------------------
// Case analysis

// Linearity is read off the funct antecedent's polarity; canonicity off the
// node's emptiness.
inline std::pair<Linearity, Canonicity> classify(const InterpretationGraph& g,
                                                 const std::string& model_id) {
  const DapNode& ante = antecedent(g, model_id, "funct");
  Polarity p = *ante.feature("funct")->marking;
  Linearity lin = p == Polarity::Positive ? Linearity::Linear : Linearity::Nonlinear;
  Canonicity canon = g.tree.node(model_id).empty ? Canonicity::NonCanonical : Canonicity::Canonical;
  return {lin, canon};
}

class ExtractionError : public Error {
 public:
  using Error::Error;
};

// Description node identifying the governor side.
inline const DapNode& governor_dapnode(const InterpretationGraph& g, const std::string& model_id,
                                       Linearity lin) {
  if (lin == Linearity::Linear) {
    const DapNode& gnode = antecedent(g, model_id, "funct");
    // The grammar must give the positive funct node a unique principal
    // sibling in its own description; validated here rather than assumed.
    auto parent = g.dap.parent_of(gnode.id);
    int principal_siblings = 0;
    if (parent)
      for (const auto& sib : g.dap.children_of(*parent))
        if (sib != gnode.id && is_principal(g.dap.node(sib))) ++principal_siblings;
    if (principal_siblings != 1)
      throw ExtractionError("linear case: " + gnode.id + " must have exactly one principal sibling, found " +
                            std::to_string(principal_siblings));
    return gnode;
  }
  auto parent = g.tree.parent_of(model_id);
  if (!parent)
    throw ExtractionError("non-linear case: model node " + model_id + " has no parent");
  return antecedent(g, *parent, "cat");
}

// Description node identifying the dependent side.
inline const DapNode& dependent_dapnode(const InterpretationGraph& g, const std::string& model_id,
                                        Canonicity canon) {
  if (canon == Canonicity::Canonical) return antecedent(g, model_id, "cat");

  if (!g.tree.node(model_id).feature("ref"))
    throw ExtractionError("non-canonical case: model node " + model_id + " carries no ref feature");
  const CoindexPartition classes = coindex_classes(g);
  const auto& cls = classes.class_of({true, model_id, "ref"});
  std::vector<std::string> candidates;
  for (const auto& r : cls) {
    if (!r.model_side || r.node == model_id) continue;
    if (!g.tree.node(r.node).empty) candidates.push_back(r.node);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  if (candidates.size() != 1) {
    std::string members;
    for (const auto& r : cls) members += " " + to_string(r);
    throw ExtractionError("non-canonical case: ref class of " + model_id + " must contain exactly one "
                          "non-empty model node, found " + std::to_string(candidates.size()) + " in" +
                          members);
  }
  return antecedent(g, candidates.front(), "cat");
}

namespace detail {

inline DepKind dep_kind(Linearity lin, Canonicity canon) {
  if (lin == Linearity::Linear)
    return canon == Canonicity::Canonical ? DepKind::LinearCanonical : DepKind::LinearNonCanonical;
  return canon == Canonicity::Canonical ? DepKind::NonlinearCanonical
                                        : DepKind::NonlinearNonCanonical;
}

inline std::string dependency_label(const InterpretationGraph& g, const std::string& model_id) {
  const Feature* funct = g.tree.node(model_id).feature("funct");
  if (!funct) throw ExtractionError("model node " + model_id + " carries no funct feature");
  if (!funct->value.singleton())
    throw ExtractionError("funct value of " + model_id + " is not fully specified");
  return funct->value.only();
}

inline void finish(ExtractResult& r, const InterpretationGraph& g) {
  r.graph.tokens = g.tree.token_order();
  std::sort(r.graph.edges.begin(), r.graph.edges.end(), dependency_less);
}

}  // namespace detail

// One dependency attempt per funct-bearing model node; failures become
// error entries and the remaining edges are still returned.
inline ExtractResult extract_dependencies(const InterpretationGraph& g) {
  ExtractResult result;
  for (const auto& [mid, mnode] : g.tree.nodes) {
    if (!mnode.feature("funct")) continue;
    try {
      auto [lin, canon] = classify(g, mid);
      const DapNode& gov = governor_dapnode(g, mid, lin);
      const DapNode& dep = dependent_dapnode(g, mid, canon);
      result.graph.edges.push_back({g.anchor_token_of_edap(gov.id), g.anchor_token_of_edap(dep.id),
                                    detail::dependency_label(g, mid), detail::dep_kind(lin, canon)});
    } catch (const Error& e) {
      result.errors.push_back({mid, e.what()});
    }
  }
  detail::finish(result, g);
  return result;
}

// ---------------------------------------------------------------------------
// Pattern route

// The same graph computed by matching the four built-in patterns and feeding
// each match through anchor-token resolution.
inline ExtractResult extract_via_patterns(const InterpretationGraph& g) {
  ExtractResult result;
  for (const auto& pattern : builtin_patterns()) {
    const bool canonical = pattern.name == "linear-canonical" || pattern.name == "nonlinear-canonical";
    const bool linear = pattern.name == "linear-canonical" || pattern.name == "linear-noncanonical";
    DepKind kind = detail::dep_kind(linear ? Linearity::Linear : Linearity::Nonlinear,
                                    canonical ? Canonicity::Canonical : Canonicity::NonCanonical);
    for (const Match& m : match_pattern(pattern, g)) {
      const std::string& n = m.assignment.at("N");
      try {
        const std::string& gov_dap = m.assignment.at("G");
        std::string dep_dap;
        if (canonical) {
          dep_dap = m.assignment.at("D");
        } else {
          dep_dap = dependent_dapnode(g, n, Canonicity::NonCanonical).id;
        }
        result.graph.edges.push_back({g.anchor_token_of_edap(gov_dap),
                                      g.anchor_token_of_edap(dep_dap),
                                      detail::dependency_label(g, n), kind});
      } catch (const Error& e) {
        result.errors.push_back({n, e.what()});
      }
    }
  }
  detail::finish(result, g);
  return result;
}

}  // namespace igdep
