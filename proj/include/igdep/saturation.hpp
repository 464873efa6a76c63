// Polarity saturation algebra and validity checking of interpretation
// graphs.
//
// A set of polarized features interpreted into the same model feature must
// saturate in one of two ways:
//   non-linear: exactly one saturated feature, all others virtual;
//   linear:     exactly one positive and one negative, all others virtual.
//
// check_interpretation verifies everything locally checkable about a triple
// (description, tree, interpretation): structure preservation (R1), value
// and polarity saturation (R2), coindexation preservation (R3), phonology
// (R4) and sourcedness of model material (R5).  Model minimality is not
// checked.
#pragma once

#include <sstream>

#include "igdep/core.hpp"

namespace igdep {

// ---------------------------------------------------------------------------
// Saturation verdicts

enum class SaturationKind { ValidLinear, ValidNonlinear, Invalid };

struct SaturationVerdict {
  SaturationKind kind = SaturationKind::Invalid;
  int positives = 0;
  int negatives = 0;
  int virtuals = 0;
  int saturateds = 0;

  bool valid() const { return kind != SaturationKind::Invalid; }
};

inline const char* to_string(SaturationKind k) {
  switch (k) {
    case SaturationKind::ValidLinear: return "valid-linear";
    case SaturationKind::ValidNonlinear: return "valid-nonlinear";
    case SaturationKind::Invalid: return "invalid";
  }
  return "?";
}

// Verdict for a multiset of polarities landing on one model feature.
inline SaturationVerdict check_polarity_multiset(const std::vector<Polarity>& pols) {
  if (pols.empty()) throw DomainError("polarity multiset must be non-empty");
  SaturationVerdict v;
  for (Polarity p : pols) {
    switch (p) {
      case Polarity::Positive: ++v.positives; break;
      case Polarity::Negative: ++v.negatives; break;
      case Polarity::Virtual: ++v.virtuals; break;
      case Polarity::Saturated: ++v.saturateds; break;
    }
  }
  if (v.saturateds == 1 && v.positives == 0 && v.negatives == 0)
    v.kind = SaturationKind::ValidNonlinear;
  else if (v.saturateds == 0 && v.positives == 1 && v.negatives == 1)
    v.kind = SaturationKind::ValidLinear;
  else
    v.kind = SaturationKind::Invalid;
  return v;
}

// ---------------------------------------------------------------------------
// Validity reports

struct Violation {
  std::string rule;                // e.g. "R2", or "P1" for grammar principles
  std::vector<std::string> nodes;  // offending node ids
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

inline bool violation_less(const Violation& a, const Violation& b) {
  return std::tie(a.rule, a.nodes, a.message) < std::tie(b.rule, b.nodes, b.message);
}

struct ValidityReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  void add(std::string rule, std::vector<std::string> nodes, std::string message) {
    violations.push_back({std::move(rule), std::move(nodes), std::move(message)});
  }

  void finish() { std::sort(violations.begin(), violations.end(), violation_less); }

  // One violation per line, sorted by rule id then node ids.
  std::string to_text() const {
    std::ostringstream os;
    for (const auto& v : violations) {
      os << v.rule;
      for (const auto& n : v.nodes) os << " " << n;
      os << ": " << v.message << "\n";
    }
    return os.str();
  }
};

// ---------------------------------------------------------------------------
// Interpretation checking

namespace detail {

inline std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

inline std::string value_text(const FeatureValue& v) { return join(v.atoms(), "|"); }

}  // namespace detail

// Full local validity check of an interpretation graph.  All failures are
// report entries; nothing throws on an invalid graph.
inline ValidityReport check_interpretation(const InterpretationGraph& g) {
  ValidityReport report;

  // R0: the interpretation must be a total function into the tree.
  for (const auto& [id, n] : g.dap.nodes) {
    (void)n;
    auto it = g.interp.find(id);
    if (it == g.interp.end())
      report.add("R0", {id}, "interpretation undefined on description node");
    else if (!g.tree.has_node(it->second))
      report.add("R0", {id}, "interpretation target " + it->second + " is not a model node");
  }
  for (const auto& [d, m] : g.interp) {
    if (!g.dap.has_node(d)) report.add("R0", {d}, "interpretation defined on unknown node");
    (void)m;
  }
  if (!report.ok()) {  // structure below assumes totality
    report.finish();
    return report;
  }

  // R1: dominance and precedence preservation.
  for (const auto& [x, y] : g.dap.imm_dom) {
    const std::string mx = g.image(x), my = g.image(y);
    auto p = g.tree.parent_of(my);
    if (!p || *p != mx)
      report.add("R1", {x, y}, "immediate dominance not preserved: parent of " + my + " is not " + mx);
  }
  for (const auto& [x, y] : g.dap.dom) {
    const std::string mx = g.image(x), my = g.image(y);
    if (!g.tree.is_ancestor(mx, my))
      report.add("R1", {x, y}, "dominance not preserved: " + mx + " is not a proper ancestor of " + my);
  }
  for (const auto& [x, y] : g.dap.imm_prec) {
    const std::string mx = g.image(x), my = g.image(y);
    if (!g.tree.immediately_precedes(mx, my))
      report.add("R1", {x, y}, "immediate precedence not preserved: " + mx + " not directly before " + my);
  }
  for (const auto& [x, y] : g.dap.prec) {
    const std::string mx = g.image(x), my = g.image(y);
    if (!g.tree.precedes(mx, my))
      report.add("R1", {x, y}, "precedence not preserved: " + mx + " not before " + my);
  }

  // R2 + R5: per model node and feature name, saturation, value preservation
  // and sourcedness.
  const auto inverse = g.inverse();
  for (const auto& [mid, mnode] : g.tree.nodes) {
    auto inv_it = inverse.find(mid);
    const std::vector<std::string> empty_inv;
    const std::vector<std::string>& pre = inv_it == inverse.end() ? empty_inv : inv_it->second;
    if (pre.empty()) {
      report.add("R5", {mid}, "model node has no antecedent in the description");
      continue;
    }
    std::set<std::string> names;
    for (const auto& [fname, f] : mnode.features) {
      (void)f;
      names.insert(fname);
    }
    for (const auto& d : pre)
      for (const auto& [fname, f] : g.dap.node(d).features) {
        (void)f;
        names.insert(fname);
      }

    for (const auto& fname : names) {
      const Feature* mf = mnode.feature(fname);
      std::vector<const Feature*> sources;
      std::vector<std::string> source_nodes;
      for (const auto& d : pre)
        if (const Feature* df = g.dap.node(d).feature(fname)) {
          sources.push_back(df);
          source_nodes.push_back(d);
        }

      if (!mf) {
        report.add("R2", {mid}, "model node lacks feature " + fname + " required by " +
                                    detail::join(source_nodes, ","));
        continue;
      }
      if (sources.empty()) {
        report.add("R5", {mid}, "model feature " + fname + " has no source in the description");
        continue;
      }
      if (!mf->value.singleton())
        report.add("R2", {mid}, "model feature " + fname + " is not fully specified: " +
                                    detail::value_text(mf->value));

      std::vector<Polarity> pols;
      for (size_t i = 0; i < sources.size(); ++i) {
        if (!sources[i]->value.contains(mf->value.atoms().front()))
          report.add("R2", {mid, source_nodes[i]},
                     "value of " + fname + " not preserved: model has " +
                         detail::value_text(mf->value) + ", source allows " +
                         detail::value_text(sources[i]->value));
        if (!sources[i]->neutral()) pols.push_back(*sources[i]->marking);
      }
      if (!pols.empty()) {
        if (mf->neutral() || *mf->marking != Polarity::Saturated)
          report.add("R2", {mid}, "model feature " + fname + " must be saturated");
        SaturationVerdict v = check_polarity_multiset(pols);
        if (!v.valid()) {
          std::ostringstream os;
          os << "polarities of " << fname << " do not saturate (pos=" << v.positives
             << " neg=" << v.negatives << " vrt=" << v.virtuals << " sat=" << v.saturateds << ")";
          report.add("R2", {mid}, os.str());
        }
      } else if (!mf->neutral()) {
        report.add("R2", {mid}, "model feature " + fname + " is polarized without polarized sources");
      }
    }
  }

  // R3: coindexation.  Classes generated by description tags must have
  // unifiable values, and their model images must be coindexed in the model;
  // conversely model tags must not link features beyond what propagation
  // from the description produces.
  const CoindexPartition source = detail::coindex_closure(g, /*dap*/ true, /*model*/ false, true);
  const CoindexPartition in_model = detail::coindex_closure(g, /*dap*/ false, /*model*/ true, false);
  for (const auto& cls : source.classes()) {
    std::optional<FeatureValue> merged;
    bool first = true;
    for (const auto& r : cls) {
      const Feature& f = deref(g, r);
      if (first) {
        merged = f.value;
        first = false;
      } else if (merged) {
        merged = unify_values(*merged, f.value);
      }
    }
    if (!merged) {
      std::vector<std::string> ids;
      for (const auto& r : cls) ids.push_back(to_string(r));
      report.add("R3", ids, "coindexed features have no unifiable value");
    }
    // All model-side occurrences of one source class must share a model tag
    // class.
    std::vector<FeatureRef> model_refs;
    for (const auto& r : cls)
      if (r.model_side) model_refs.push_back(r);
    for (size_t i = 1; i < model_refs.size(); ++i) {
      if (!in_model.same_class(model_refs[0], model_refs[i]))
        report.add("R3", {to_string(model_refs[0]), to_string(model_refs[i])},
                   "coindexation not carried into the model");
    }
  }
  // Converse direction: a model tag class must stay inside one source class.
  for (const auto& cls : in_model.classes()) {
    if (cls.size() < 2) continue;
    for (size_t i = 1; i < cls.size(); ++i) {
      if (!source.same_class(cls[0], cls[i]))
        report.add("R3", {to_string(cls[0]), to_string(cls[i])},
                   "model coindexation has no source in the description");
    }
  }

  // R4: phonology preservation.
  for (const auto& [id, n] : g.dap.nodes) {
    const ModelNode& m = g.tree.node(g.image(id));
    if (n.phon == PhonConstraint::Empty && !m.empty)
      report.add("R4", {id, m.id}, "empty description node maps to a non-empty model node");
    if (n.phon == PhonConstraint::NonEmpty && m.empty)
      report.add("R4", {id, m.id}, "non-empty description node maps to an empty model node");
  }

  report.finish();
  return report;
}

}  // namespace igdep
