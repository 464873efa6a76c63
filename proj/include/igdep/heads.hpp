// Principal antecedents and head computation over valid interpretation
// graphs.
//
// For a model node m carrying a polarized feature f, the saturation
// conditions guarantee a unique antecedent: the description node among the
// preimages of m whose f feature is saturated (non-linear case) or positive
// (linear case).  The head of a non-empty model node is the image of the
// anchor of the elementary description containing its cat antecedent.
#pragma once

#include "igdep/core.hpp"

namespace igdep {

inline const DapNode& antecedent(const InterpretationGraph& g, const std::string& model_id,
                                 const std::string& feature_name) {
  if (!g.tree.node(model_id).feature(feature_name))
    throw DomainError("model node " + model_id + " carries no feature " + feature_name);
  std::vector<std::string> hits;
  for (const auto& d : g.inverse_of(model_id)) {
    const Feature* f = g.dap.node(d).feature(feature_name);
    if (!f || f->neutral()) continue;
    if (*f->marking == Polarity::Saturated || *f->marking == Polarity::Positive) hits.push_back(d);
  }
  if (hits.size() != 1)
    throw IntegrityError("antecedent of " + model_id + " for " + feature_name + " is not unique (" +
                         std::to_string(hits.size()) + " candidates); the graph is not valid");
  return g.dap.node(hits.front());
}

// Image of the anchor of the elementary description containing the cat
// antecedent of m.  Defined for non-empty nodes only.
inline const ModelNode& head(const InterpretationGraph& g, const std::string& model_id) {
  if (g.tree.node(model_id).empty)
    throw DomainError("head is defined for non-empty nodes only: " + model_id);
  const DapNode& ante = antecedent(g, model_id, "cat");
  int inst = ante.source_edap;
  for (const auto& [id, n] : g.dap.nodes)
    if (n.source_edap == inst && n.anchor) return g.tree.node(g.image(id));
  throw IntegrityError("elementary description " + std::to_string(inst) + " has no anchor");
}

// Word form and position of the anchor behind head(g, m).
inline Token head_token(const InterpretationGraph& g, const std::string& model_id) {
  if (g.tree.node(model_id).empty)
    throw DomainError("head is defined for non-empty nodes only: " + model_id);
  const DapNode& ante = antecedent(g, model_id, "cat");
  return g.anchor_token_of_edap(ante.id);
}

}  // namespace igdep
