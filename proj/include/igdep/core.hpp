// Core domain types for interaction-grammar dependency extraction:
// polarities, feature structures, polarized tree descriptions (DAPs),
// syntax trees, interpretation graphs and dependency graphs.
//
// All types are plain immutable-after-construction value types; every
// operation in this library is a pure function of its inputs, so everything
// here is safe to share across threads.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace igdep {

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text (grammar files, graph files, pattern files).
class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

// A structural invariant of a domain object does not hold.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its domain (e.g. head of an empty node).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An internal consistency guarantee failed; signals that an invalid graph
// slipped past the validity checker.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Polarities and features

enum class Polarity { Positive, Negative, Virtual, Saturated };

inline const char* to_string(Polarity p) {
  switch (p) {
    case Polarity::Positive: return "pos";
    case Polarity::Negative: return "neg";
    case Polarity::Virtual: return "vrt";
    case Polarity::Saturated: return "sat";
  }
  return "?";
}

// A feature value: a non-empty finite set of atoms.  A singleton is a fully
// specified value; a larger set is a disjunction.
class FeatureValue {
 public:
  FeatureValue() = default;
  explicit FeatureValue(std::vector<std::string> atoms) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    if (atoms.empty()) throw StructuralError("feature value must be non-empty");
    atoms_ = std::move(atoms);
  }
  static FeatureValue atom(std::string a) { return FeatureValue({std::move(a)}); }

  const std::vector<std::string>& atoms() const { return atoms_; }
  bool singleton() const { return atoms_.size() == 1; }
  const std::string& only() const {
    if (!singleton()) throw DomainError("feature value is not a singleton");
    return atoms_.front();
  }
  bool contains(const std::string& a) const {
    return std::binary_search(atoms_.begin(), atoms_.end(), a);
  }

  friend bool operator==(const FeatureValue&, const FeatureValue&) = default;
  friend auto operator<=>(const FeatureValue&, const FeatureValue&) = default;

 private:
  std::vector<std::string> atoms_;
};

// Unification of two values is set intersection; fails exactly when empty.
inline std::optional<FeatureValue> unify_values(const FeatureValue& a, const FeatureValue& b) {
  std::vector<std::string> out;
  std::set_intersection(a.atoms().begin(), a.atoms().end(), b.atoms().begin(), b.atoms().end(),
                        std::back_inserter(out));
  if (out.empty()) return std::nullopt;
  return FeatureValue(std::move(out));
}

// A named feature.  `marking` is absent for neutral features (ref and
// phonology-like features); cat and funct are polarizable.  Two features
// sharing a coindex tag denote the same entity.
struct Feature {
  std::string name;
  FeatureValue value;
  std::optional<Polarity> marking;
  std::optional<int> coindex;

  bool neutral() const { return !marking.has_value(); }
  friend bool operator==(const Feature&, const Feature&) = default;
};

enum class PhonConstraint { Empty, NonEmpty, Unconstrained };

inline const char* to_string(PhonConstraint p) {
  switch (p) {
    case PhonConstraint::Empty: return "empty";
    case PhonConstraint::NonEmpty: return "nonempty";
    case PhonConstraint::Unconstrained: return "unconstrained";
  }
  return "?";
}

// A surface token: word form plus position in the sentence.  Positions
// disambiguate repeated word forms.
struct Token {
  std::string form;
  int position = -1;
  friend bool operator==(const Token&, const Token&) = default;
  friend auto operator<=>(const Token&, const Token&) = default;
};

// ---------------------------------------------------------------------------
// DAP side

struct DapNode {
  std::string id;
  std::map<std::string, Feature> features;  // keyed by feature name
  PhonConstraint phon = PhonConstraint::Unconstrained;
  std::optional<Token> anchor;  // word form + position, for anchor nodes
  int source_edap = 0;          // instance id of the originating elementary description

  const Feature* feature(const std::string& name) const {
    auto it = features.find(name);
    return it == features.end() ? nullptr : &it->second;
  }
  friend bool operator==(const DapNode&, const DapNode&) = default;
};

using EdgeList = std::vector<std::pair<std::string, std::string>>;

// A polarized tree description: nodes plus immediate / underspecified
// dominance and precedence relations.  Relation edges never cross two
// distinct source_edap instances.
struct Dap {
  std::map<std::string, DapNode> nodes;
  EdgeList imm_dom;   // (parent, child)
  EdgeList dom;       // (ancestor, descendant), underspecified
  EdgeList imm_prec;  // (left, right), immediate
  EdgeList prec;      // (left, right), underspecified

  const DapNode& node(const std::string& id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw StructuralError("unknown DAP node: " + id);
    return it->second;
  }
  bool has_node(const std::string& id) const { return nodes.count(id) != 0; }

  // Immediate-dominance parent, if any.
  std::optional<std::string> parent_of(const std::string& id) const {
    for (const auto& [p, c] : imm_dom)
      if (c == id) return p;
    return std::nullopt;
  }
  std::vector<std::string> children_of(const std::string& id) const {
    std::vector<std::string> out;
    for (const auto& [p, c] : imm_dom)
      if (p == id) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
  }

  // Structural invariants shared by all descriptions: known endpoints, at
  // most one immediate parent, no cross-instance edges, acyclic dominance.
  void validate_structure() const {
    auto check_edge = [&](const std::pair<std::string, std::string>& e, const char* kind) {
      if (!has_node(e.first) || !has_node(e.second))
        throw StructuralError(std::string(kind) + " edge endpoint missing: " + e.first + " -> " + e.second);
      if (node(e.first).source_edap != node(e.second).source_edap)
        throw StructuralError(std::string(kind) + " edge crosses elementary descriptions: " + e.first +
                              " -> " + e.second);
      if (e.first == e.second) throw StructuralError(std::string(kind) + " self edge on " + e.first);
    };
    for (const auto& e : imm_dom) check_edge(e, "child");
    for (const auto& e : dom) check_edge(e, "dom");
    for (const auto& e : imm_prec) check_edge(e, "order");
    for (const auto& e : prec) check_edge(e, "prec");

    std::map<std::string, int> parent_count;
    for (const auto& [p, c] : imm_dom) {
      (void)p;
      if (++parent_count[c] > 1) throw StructuralError("node has two immediate parents: " + c);
    }
    // Acyclicity of immediate + underspecified dominance.
    std::map<std::string, std::vector<std::string>> down;
    for (const auto& [p, c] : imm_dom) down[p].push_back(c);
    for (const auto& [p, c] : dom) down[p].push_back(c);
    std::map<std::string, int> state;  // 0 unseen, 1 open, 2 done
    std::vector<std::string> stack;
    for (const auto& [id, n] : nodes) {
      (void)n;
      if (state[id]) continue;
      stack.push_back(id);
      std::vector<std::pair<std::string, size_t>> path{{id, 0}};
      state[id] = 1;
      while (!path.empty()) {
        auto& [cur, idx] = path.back();
        auto& kids = down[cur];
        if (idx < kids.size()) {
          const std::string& k = kids[idx++];
          if (state[k] == 1) throw StructuralError("dominance cycle through " + k);
          if (state[k] == 0) {
            state[k] = 1;
            path.push_back({k, 0});
          }
        } else {
          state[cur] = 2;
          path.pop_back();
        }
      }
    }
  }

  friend bool operator==(const Dap&, const Dap&) = default;
};

// An elementary description: a one-instance Dap anchored to a single word
// form.  The anchor is a non-empty leaf; the non-empty principal nodes form
// the spine, a contiguous path from the maximal projection down to the
// anchor.
struct Edap {
  Dap dap;
  std::string anchor_id;
  std::string word_form;

  const DapNode& anchor() const { return dap.node(anchor_id); }
  friend bool operator==(const Edap&, const Edap&) = default;
};

// ---------------------------------------------------------------------------
// Model side

struct ModelNode {
  std::string id;
  std::map<std::string, Feature> features;  // singleton values; polarized ones saturated
  bool empty = false;                       // phonologically empty
  std::optional<Token> word;                // for non-empty leaves

  const Feature* feature(const std::string& name) const {
    auto it = features.find(name);
    return it == features.end() ? nullptr : &it->second;
  }
  friend bool operator==(const ModelNode&, const ModelNode&) = default;
};

// A fully specified constituent tree: single root, ordered siblings.
struct SyntaxTree {
  std::map<std::string, ModelNode> nodes;
  std::map<std::string, std::string> parent;                // child -> parent
  std::map<std::string, std::vector<std::string>> children; // parent -> ordered children

  const ModelNode& node(const std::string& id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw StructuralError("unknown model node: " + id);
    return it->second;
  }
  bool has_node(const std::string& id) const { return nodes.count(id) != 0; }

  std::optional<std::string> parent_of(const std::string& id) const {
    auto it = parent.find(id);
    if (it == parent.end()) return std::nullopt;
    return it->second;
  }
  const std::vector<std::string>& children_of(const std::string& id) const {
    static const std::vector<std::string> none;
    auto it = children.find(id);
    return it == children.end() ? none : it->second;
  }
  bool is_leaf(const std::string& id) const { return children_of(id).empty(); }

  std::string root() const {
    std::vector<std::string> roots;
    for (const auto& [id, n] : nodes) {
      (void)n;
      if (!parent.count(id)) roots.push_back(id);
    }
    if (roots.size() != 1)
      throw StructuralError("model tree must have exactly one root, found " +
                            std::to_string(roots.size()));
    return roots.front();
  }

  bool is_ancestor(const std::string& anc, const std::string& desc) const {
    auto cur = parent_of(desc);
    while (cur) {
      if (*cur == anc) return true;
      cur = parent_of(*cur);
    }
    return false;
  }

  // DFS order over the ordered tree; used for precedence tests.
  std::vector<std::string> dfs_order() const {
    std::vector<std::string> out;
    std::vector<std::string> stack{root()};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      out.push_back(cur);
      const auto& kids = children_of(cur);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
    return out;
  }

  // x precedes y iff the subtrees are disjoint and x's branch comes first at
  // their deepest common ancestor.
  bool precedes(const std::string& x, const std::string& y) const {
    if (x == y || is_ancestor(x, y) || is_ancestor(y, x)) return false;
    auto chain = [&](std::string n) {
      std::vector<std::string> up{n};
      auto cur = parent_of(n);
      while (cur) {
        up.push_back(*cur);
        cur = parent_of(*cur);
      }
      std::reverse(up.begin(), up.end());
      return up;  // root .. n
    };
    auto cx = chain(x), cy = chain(y);
    size_t i = 0;
    while (i < cx.size() && i < cy.size() && cx[i] == cy[i]) ++i;
    // cx[i-1] is the common ancestor; cx[i], cy[i] the diverging branches.
    const auto& kids = children_of(cx[i - 1]);
    auto px = std::find(kids.begin(), kids.end(), cx[i]);
    auto py = std::find(kids.begin(), kids.end(), cy[i]);
    return px < py;
  }

  bool immediately_precedes(const std::string& x, const std::string& y) const {
    auto px = parent_of(x), py = parent_of(y);
    if (!px || !py || *px != *py) return false;
    const auto& kids = children_of(*px);
    auto ix = std::find(kids.begin(), kids.end(), x);
    auto iy = std::find(kids.begin(), kids.end(), y);
    return ix != kids.end() && iy != kids.end() && ix + 1 == iy;
  }

  // Non-empty leaves in left-to-right surface order.
  std::vector<Token> token_order() const {
    std::vector<Token> out;
    for (const auto& id : dfs_order()) {
      const ModelNode& n = node(id);
      if (is_leaf(id) && !n.empty && n.word) out.push_back(*n.word);
    }
    return out;
  }

  friend bool operator==(const SyntaxTree&, const SyntaxTree&) = default;
};

// ---------------------------------------------------------------------------
// Interpretation graphs

// The triple (description, model tree, total interpretation).  Validity is a
// separate predicate (see saturation.hpp), not a construction guarantee:
// invalid triples are representable so the checker has something to reject.
struct InterpretationGraph {
  Dap dap;
  SyntaxTree tree;
  std::map<std::string, std::string> interp;  // dap node id -> model node id

  const std::string& image(const std::string& dap_id) const {
    auto it = interp.find(dap_id);
    if (it == interp.end()) throw StructuralError("interpretation not defined on " + dap_id);
    return it->second;
  }

  // Derived inverse interpretation: model node -> sorted dap node ids.
  std::map<std::string, std::vector<std::string>> inverse() const {
    std::map<std::string, std::vector<std::string>> inv;
    for (const auto& [d, m] : interp) inv[m].push_back(d);
    return inv;
  }
  std::vector<std::string> inverse_of(const std::string& model_id) const {
    std::vector<std::string> out;
    for (const auto& [d, m] : interp)
      if (m == model_id) out.push_back(d);
    return out;
  }

  // Anchor token of the elementary description containing `dap_id`.
  Token anchor_token_of_edap(const std::string& dap_id) const {
    int inst = dap.node(dap_id).source_edap;
    for (const auto& [id, n] : dap.nodes)
      if (n.source_edap == inst && n.anchor) return *n.anchor;
    throw StructuralError("elementary description of " + dap_id + " has no anchor");
  }

  friend bool operator==(const InterpretationGraph&, const InterpretationGraph&) = default;
};

// ---------------------------------------------------------------------------
// Dependency graphs

enum class DepKind { LinearCanonical, LinearNonCanonical, NonlinearCanonical, NonlinearNonCanonical };

inline const char* to_string(DepKind k) {
  switch (k) {
    case DepKind::LinearCanonical: return "linear-canonical";
    case DepKind::LinearNonCanonical: return "linear-noncanonical";
    case DepKind::NonlinearCanonical: return "nonlinear-canonical";
    case DepKind::NonlinearNonCanonical: return "nonlinear-noncanonical";
  }
  return "?";
}

inline std::optional<DepKind> dep_kind_from_string(const std::string& s) {
  if (s == "linear-canonical") return DepKind::LinearCanonical;
  if (s == "linear-noncanonical") return DepKind::LinearNonCanonical;
  if (s == "nonlinear-canonical") return DepKind::NonlinearCanonical;
  if (s == "nonlinear-noncanonical") return DepKind::NonlinearNonCanonical;
  return std::nullopt;
}

struct Dependency {
  Token governor;
  Token dependent;
  std::string label;  // singleton funct value
  DepKind kind = DepKind::LinearCanonical;
  friend bool operator==(const Dependency&, const Dependency&) = default;
};

// Canonical edge order: dependent position, then label, then governor.
inline bool dependency_less(const Dependency& a, const Dependency& b) {
  auto ka = std::tuple(a.dependent.position, a.label, a.governor.position, a.dependent.form);
  auto kb = std::tuple(b.dependent.position, b.label, b.governor.position, b.dependent.form);
  return ka < kb;
}

// Word-to-word labeled edges over the sentence tokens.  May contain cycles,
// may be non-connected; tokens with no incident edge are permitted.
struct DependencyGraph {
  std::vector<Token> tokens;
  std::vector<Dependency> edges;

  int degree(const Token& t) const {
    int d = 0;
    for (const auto& e : edges) {
      if (e.governor == t) ++d;
      if (e.dependent == t) ++d;
    }
    return d;
  }

  // True iff the directed edge relation contains a cycle.
  bool has_cycle() const {
    std::map<int, std::vector<int>> adj;
    for (const auto& e : edges) adj[e.governor.position].push_back(e.dependent.position);
    std::map<int, int> state;
    for (const auto& [start, _] : adj) {
      (void)_;
      if (state[start]) continue;
      std::vector<std::pair<int, size_t>> path{{start, 0}};
      state[start] = 1;
      while (!path.empty()) {
        auto& [cur, idx] = path.back();
        auto& next = adj[cur];
        if (idx < next.size()) {
          int k = next[idx++];
          if (state[k] == 1) return true;
          if (state[k] == 0) {
            state[k] = 1;
            path.push_back({k, 0});
          }
        } else {
          state[cur] = 2;
          path.pop_back();
        }
      }
    }
    return false;
  }

  friend bool operator==(const DependencyGraph&, const DependencyGraph&) = default;
};

// ---------------------------------------------------------------------------
// Principal nodes

// A description node is principal iff its cat feature is positive or
// saturated.
inline bool is_principal(const DapNode& n) {
  const Feature* cat = n.feature("cat");
  if (!cat) throw StructuralError("node " + n.id + " has no cat feature");
  if (cat->neutral()) throw StructuralError("node " + n.id + " has a neutral cat feature");
  return *cat->marking == Polarity::Positive || *cat->marking == Polarity::Saturated;
}

// ---------------------------------------------------------------------------
// Coindexation classes

// A feature occurrence, on either sort of an interpretation graph.
struct FeatureRef {
  bool model_side = false;
  std::string node;
  std::string feature;
  friend bool operator==(const FeatureRef&, const FeatureRef&) = default;
  friend auto operator<=>(const FeatureRef&, const FeatureRef&) = default;
};

inline std::string to_string(const FeatureRef& r) {
  return std::string(r.model_side ? "model:" : "dap:") + r.node + "." + r.feature;
}

// A partition of feature occurrences into coindexation classes.
class CoindexPartition {
 public:
  explicit CoindexPartition(std::map<FeatureRef, FeatureRef> parent) : parent_(std::move(parent)) {
    std::map<FeatureRef, std::vector<FeatureRef>> groups;
    for (const auto& [r, p] : parent_) {
      (void)p;
      groups[find(r)].push_back(r);
    }
    for (auto& [root, members] : groups) {
      (void)root;
      std::sort(members.begin(), members.end());
      classes_.push_back(std::move(members));
    }
    std::sort(classes_.begin(), classes_.end());
  }

  const std::vector<std::vector<FeatureRef>>& classes() const { return classes_; }

  bool contains(const FeatureRef& r) const { return parent_.count(r) != 0; }

  // Members of the class containing r (throws if r is not an occurrence).
  const std::vector<FeatureRef>& class_of(const FeatureRef& r) const {
    for (const auto& c : classes_)
      if (std::binary_search(c.begin(), c.end(), r)) return c;
    throw DomainError("not a feature occurrence of this graph: " + to_string(r));
  }

  bool same_class(const FeatureRef& a, const FeatureRef& b) const {
    const auto& c = class_of(a);
    return std::binary_search(c.begin(), c.end(), b);
  }

 private:
  FeatureRef find(FeatureRef r) const {
    auto it = parent_.find(r);
    while (it != parent_.end() && !(it->second == r)) {
      r = it->second;
      it = parent_.find(r);
    }
    return r;
  }

  std::map<FeatureRef, FeatureRef> parent_;
  std::vector<std::vector<FeatureRef>> classes_;
};

namespace detail {

class UnionFind {
 public:
  void add(const FeatureRef& r) {
    if (!parent_.count(r)) parent_[r] = r;
  }
  FeatureRef find(FeatureRef r) {
    add(r);
    while (!(parent_[r] == r)) {
      parent_[r] = parent_[parent_[r]];
      r = parent_[r];
    }
    return r;
  }
  void unite(const FeatureRef& a, const FeatureRef& b) {
    FeatureRef ra = find(a), rb = find(b);
    if (ra == rb) return;
    // Deterministic: smaller ref becomes the root.
    if (rb < ra) std::swap(ra, rb);
    parent_[rb] = ra;
  }
  std::map<FeatureRef, FeatureRef> take() { return std::move(parent_); }

 private:
  std::map<FeatureRef, FeatureRef> parent_;
};

// Closure over (a) explicit tags on the description side, (b) explicit tags
// on the model side, (c) propagation through the interpretation.  The three
// ingredients are separable because the validity checker needs to compare
// the model's own tags against what propagation alone requires.
inline CoindexPartition coindex_closure(const InterpretationGraph& g, bool dap_tags,
                                        bool model_tags, bool propagate) {
  UnionFind uf;
  for (const auto& [id, n] : g.dap.nodes)
    for (const auto& [fname, f] : n.features) {
      (void)f;
      uf.add({false, id, fname});
    }
  for (const auto& [id, n] : g.tree.nodes)
    for (const auto& [fname, f] : n.features) {
      (void)f;
      uf.add({true, id, fname});
    }

  if (dap_tags) {
    std::map<int, FeatureRef> first;
    for (const auto& [id, n] : g.dap.nodes)
      for (const auto& [fname, f] : n.features)
        if (f.coindex) {
          FeatureRef r{false, id, fname};
          auto [it, fresh] = first.try_emplace(*f.coindex, r);
          if (!fresh) uf.unite(it->second, r);
        }
  }
  if (model_tags) {
    std::map<int, FeatureRef> first;
    for (const auto& [id, n] : g.tree.nodes)
      for (const auto& [fname, f] : n.features)
        if (f.coindex) {
          FeatureRef r{true, id, fname};
          auto [it, fresh] = first.try_emplace(*f.coindex, r);
          if (!fresh) uf.unite(it->second, r);
        }
  }
  if (propagate) {
    for (const auto& [d, m] : g.interp) {
      if (!g.dap.has_node(d) || !g.tree.has_node(m)) continue;
      for (const auto& [fname, f] : g.dap.node(d).features) {
        (void)f;
        if (g.tree.node(m).feature(fname)) uf.unite({false, d, fname}, {true, m, fname});
      }
    }
  }
  return CoindexPartition(uf.take());
}

}  // namespace detail

// Equivalence classes of feature occurrences, closed under explicit tags on
// both sorts and under propagation through the interpretation.
inline CoindexPartition coindex_classes(const InterpretationGraph& g) {
  return detail::coindex_closure(g, true, true, true);
}

// Value carried by a feature occurrence.
inline const Feature& deref(const InterpretationGraph& g, const FeatureRef& r) {
  const Feature* f = r.model_side ? g.tree.node(r.node).feature(r.feature)
                                  : g.dap.node(r.node).feature(r.feature);
  if (!f) throw StructuralError("no feature " + r.feature + " on " + r.node);
  return *f;
}

}  // namespace igdep
