// Declarative graph patterns over interpretation graphs.
//
// A pattern is a set of node patterns over both sorts (description and
// model) plus interpretation edges and immediate-dominance edges.  Matching
// builds every assignment of pattern nodes to graph nodes compatible with
// all constraints.  Assignments need not be injective.
//
// Pattern text syntax (see docs/formats.md):
//   pattern <name>
//   node <id> sort=dap|model [feat=name(:valset)(:pol=→|←|~|↔|=)]...
//        [phon=empty|nonempty] [capture=true|false]
//   interp <dap-node> <model-node>
//   child <parent> <child>
#pragma once

#include <array>

#include "igdep/serialize.hpp"

namespace igdep {

enum class PatternSort { Dap, Model };

// Allowed markings for a feature constraint.  `any` places no constraint;
// otherwise the feature's marking must be one of `pols`, or neutral if
// `neutral` is set.
struct PolaritySpec {
  bool any = true;
  bool neutral = false;
  std::set<Polarity> pols;

  bool admits(const std::optional<Polarity>& marking) const {
    if (any) return true;
    if (!marking) return neutral;
    return pols.count(*marking) != 0;
  }
};

struct FeatureConstraint {
  std::string name;
  std::optional<FeatureValue> values;  // value must intersect, when given
  PolaritySpec polarity;
};

struct NodePattern {
  std::string id;
  PatternSort sort = PatternSort::Dap;
  std::vector<FeatureConstraint> features;
  std::optional<bool> phon_empty;  // true: empty, false: non-empty
  bool captures = true;
};

struct GraphPattern {
  std::string name;
  std::vector<NodePattern> nodes;
  EdgeList interp_edges;  // (dap pattern id, model pattern id)
  EdgeList dom_edges;     // (parent, child), both of one sort

  const NodePattern* node(const std::string& id) const {
    for (const auto& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }
};

// An assignment of pattern node ids to graph node ids, restricted to the
// capturing pattern nodes.
struct Match {
  std::map<std::string, std::string> assignment;
  friend bool operator==(const Match&, const Match&) = default;
  friend auto operator<=>(const Match&, const Match&) = default;
};

// ---------------------------------------------------------------------------
// Validation

inline void validate_pattern(const GraphPattern& p) {
  std::set<std::string> ids;
  for (const auto& n : p.nodes)
    if (!ids.insert(n.id).second) throw StructuralError("duplicate pattern node " + n.id);
  for (const auto& [d, m] : p.interp_edges) {
    const NodePattern* dn = p.node(d);
    const NodePattern* mn = p.node(m);
    if (!dn || !mn) throw StructuralError("interp edge references undeclared pattern node");
    if (dn->sort != PatternSort::Dap || mn->sort != PatternSort::Model)
      throw StructuralError("interp edge must go from a dap pattern to a model pattern");
  }
  for (const auto& [a, b] : p.dom_edges) {
    const NodePattern* an = p.node(a);
    const NodePattern* bn = p.node(b);
    if (!an || !bn) throw StructuralError("child edge references undeclared pattern node");
    if (an->sort != bn->sort) throw StructuralError("child edge must stay within one sort");
  }
}

// ---------------------------------------------------------------------------
// Matching

namespace detail {

inline bool node_satisfies(const NodePattern& p, const InterpretationGraph& g,
                           const std::string& id) {
  if (p.sort == PatternSort::Dap) {
    const DapNode& n = g.dap.node(id);
    if (p.phon_empty) {
      if (*p.phon_empty && n.phon != PhonConstraint::Empty) return false;
      if (!*p.phon_empty && n.phon != PhonConstraint::NonEmpty) return false;
    }
    for (const auto& c : p.features) {
      const Feature* f = n.feature(c.name);
      if (!f) return false;
      if (c.values && !unify_values(f->value, *c.values)) return false;
      if (!c.polarity.admits(f->marking)) return false;
    }
  } else {
    const ModelNode& n = g.tree.node(id);
    if (p.phon_empty && *p.phon_empty != n.empty) return false;
    for (const auto& c : p.features) {
      const Feature* f = n.feature(c.name);
      if (!f) return false;
      if (c.values && !unify_values(f->value, *c.values)) return false;
      if (!c.polarity.admits(f->marking)) return false;
    }
  }
  return true;
}

}  // namespace detail

// All assignments satisfying the pattern, sorted by assigned node ids and
// free of duplicates (after restriction to capturing nodes).
inline std::vector<Match> match_pattern(const GraphPattern& pattern, const InterpretationGraph& g) {
  validate_pattern(pattern);

  // Candidate sets from unary constraints.
  std::map<std::string, std::vector<std::string>> candidates;
  for (const auto& np : pattern.nodes) {
    std::vector<std::string>& cs = candidates[np.id];
    if (np.sort == PatternSort::Dap) {
      for (const auto& [id, n] : g.dap.nodes) {
        (void)n;
        if (detail::node_satisfies(np, g, id)) cs.push_back(id);
      }
    } else {
      for (const auto& [id, n] : g.tree.nodes) {
        (void)n;
        if (detail::node_satisfies(np, g, id)) cs.push_back(id);
      }
    }
  }

  // Assign most constrained nodes first; ties broken by declaration order.
  std::vector<const NodePattern*> order;
  for (const auto& np : pattern.nodes) order.push_back(&np);
  std::stable_sort(order.begin(), order.end(), [&](const NodePattern* a, const NodePattern* b) {
    return candidates[a->id].size() < candidates[b->id].size();
  });

  std::map<std::string, std::string> assign;
  std::vector<Match> out;

  auto edges_ok = [&](const std::string& just_assigned) {
    for (const auto& [d, m] : pattern.interp_edges) {
      if (d != just_assigned && m != just_assigned) continue;
      auto di = assign.find(d);
      auto mi = assign.find(m);
      if (di == assign.end() || mi == assign.end()) continue;
      if (g.image(di->second) != mi->second) return false;
    }
    for (const auto& [p, c] : pattern.dom_edges) {
      if (p != just_assigned && c != just_assigned) continue;
      auto pi = assign.find(p);
      auto ci = assign.find(c);
      if (pi == assign.end() || ci == assign.end()) continue;
      const NodePattern* pn = pattern.node(p);
      if (pn->sort == PatternSort::Model) {
        auto par = g.tree.parent_of(ci->second);
        if (!par || *par != pi->second) return false;
      } else {
        auto par = g.dap.parent_of(ci->second);
        if (!par || *par != pi->second) return false;
      }
    }
    return true;
  };

  std::function<void(size_t)> go = [&](size_t k) {
    if (k == order.size()) {
      Match m;
      for (const auto& np : pattern.nodes)
        if (np.captures) m.assignment[np.id] = assign[np.id];
      out.push_back(std::move(m));
      return;
    }
    const NodePattern* np = order[k];
    for (const auto& cand : candidates[np->id]) {
      assign[np->id] = cand;
      if (edges_ok(np->id)) go(k + 1);
      assign.erase(np->id);
    }
  };
  go(0);

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Pattern text format

namespace detail {

inline PolaritySpec parse_polarity_spec(const std::string& text, int line) {
  PolaritySpec spec;
  spec.any = false;
  for (const auto& tok : io::detail::split_on(text, '|')) {
    if (tok == "=") {
      spec.neutral = true;
    } else if (auto p = io::detail::polarity_from_token(tok)) {
      spec.pols.insert(*p);
    } else {
      throw ParseError(line, 0, "bad polarity in pattern: " + tok);
    }
  }
  if (!spec.neutral && spec.pols.empty())
    throw ParseError(line, 0, "empty polarity set in pattern");
  return spec;
}

// feat=name(:valset)(:pol=...)
inline FeatureConstraint parse_feature_constraint(const std::string& text, int line) {
  FeatureConstraint c;
  auto parts = io::detail::split_on(text, ':');
  if (parts.empty() || parts[0].empty()) throw ParseError(line, 0, "bad feature constraint: " + text);
  c.name = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].rfind("pol=", 0) == 0) {
      c.polarity = parse_polarity_spec(parts[i].substr(4), line);
    } else if (!parts[i].empty()) {
      if (c.values) throw ParseError(line, 0, "two value sets in feature constraint: " + text);
      c.values = FeatureValue(io::detail::split_on(parts[i], '|'));
    } else {
      throw ParseError(line, 0, "bad feature constraint: " + text);
    }
  }
  return c;
}

}  // namespace detail

// Parses one or more patterns from text; returns them in file order.
inline std::vector<GraphPattern> parse_patterns(const std::string& text) {
  io::detail::Lines lines(text);
  std::vector<GraphPattern> out;
  GraphPattern* cur = nullptr;
  for (const auto& [line, w] : lines.items) {
    if (w[0] == "pattern") {
      if (w.size() != 2) throw ParseError(line, 0, "pattern needs a name");
      out.push_back(GraphPattern{w[1], {}, {}, {}});
      cur = &out.back();
    } else if (!cur) {
      throw ParseError(line, 0, "expected 'pattern <name>' before " + w[0]);
    } else if (w[0] == "node") {
      if (w.size() < 3) throw ParseError(line, 0, "node needs an id and a sort");
      NodePattern np;
      np.id = w[1];
      for (size_t i = 2; i < w.size(); ++i) {
        const std::string& t = w[i];
        if (t == "sort=dap") {
          np.sort = PatternSort::Dap;
        } else if (t == "sort=model") {
          np.sort = PatternSort::Model;
        } else if (t.rfind("feat=", 0) == 0) {
          np.features.push_back(detail::parse_feature_constraint(t.substr(5), line));
        } else if (t == "phon=empty") {
          np.phon_empty = true;
        } else if (t == "phon=nonempty") {
          np.phon_empty = false;
        } else if (t == "capture=true") {
          np.captures = true;
        } else if (t == "capture=false") {
          np.captures = false;
        } else {
          throw ParseError(line, 0, "unexpected token in node pattern: " + t);
        }
      }
      cur->nodes.push_back(std::move(np));
    } else if (w[0] == "interp") {
      if (w.size() != 3) throw ParseError(line, 0, "interp needs two pattern node ids");
      cur->interp_edges.push_back({w[1], w[2]});
    } else if (w[0] == "child") {
      if (w.size() != 3) throw ParseError(line, 0, "child needs two pattern node ids");
      cur->dom_edges.push_back({w[1], w[2]});
    } else {
      throw ParseError(line, 0, "unexpected line in pattern: " + w[0]);
    }
  }
  for (const auto& p : out) validate_pattern(p);
  return out;
}

inline GraphPattern parse_pattern(const std::string& text) {
  auto ps = parse_patterns(text);
  if (ps.size() != 1) throw ParseError(1, 0, "expected exactly one pattern");
  return std::move(ps.front());
}

// ---------------------------------------------------------------------------
// Built-in dependency patterns

// The four saturation contexts that realize a dependency, as patterns over
// the interpretation graph.  N is the funct-bearing model node; G identifies
// the governor side, D the dependent side; I is the saturated funct
// antecedent and P the parent of N in the non-linear cases.  In the
// non-canonical cases the dependent is recovered from N's ref coindexation
// class after matching (the pattern language has no coindexation edges).
inline const std::string& builtin_pattern_text() {
  static const std::string text = R"(
pattern linear-canonical
node N sort=model feat=funct phon=nonempty
node G sort=dap feat=funct:pol=->
node D sort=dap feat=cat:pol=->|<->
interp G N
interp D N

pattern nonlinear-canonical
node N sort=model feat=funct phon=nonempty
node I sort=dap feat=funct:pol=<->
node P sort=model
node G sort=dap feat=cat:pol=->|<->
node D sort=dap feat=cat:pol=->|<->
interp I N
interp D N
interp G P
child P N

pattern linear-noncanonical
node N sort=model feat=funct feat=ref phon=empty
node G sort=dap feat=funct:pol=->
interp G N

pattern nonlinear-noncanonical
node N sort=model feat=funct feat=ref phon=empty
node I sort=dap feat=funct:pol=<->
node P sort=model
node G sort=dap feat=cat:pol=->|<->
interp I N
interp G P
child P N
)";
  return text;
}

inline const std::array<GraphPattern, 4>& builtin_patterns() {
  static const std::array<GraphPattern, 4> patterns = [] {
    auto ps = parse_patterns(builtin_pattern_text());
    if (ps.size() != 4) throw StructuralError("expected four built-in patterns");
    return std::array<GraphPattern, 4>{ps[0], ps[1], ps[2], ps[3]};
  }();
  return patterns;
}

}  // namespace igdep
