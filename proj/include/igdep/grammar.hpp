// Grammar loading, validation and lexical selection.
//
// A grammar is a set of elementary descriptions (one per word form, possibly
// several for ambiguous forms) written in the text format documented in
// docs/formats.md.  Loading validates every entry against the construction
// principles:
//   P1  strict lexicalization: exactly one anchor, a non-empty leaf;
//   P2  empty nodes are leaves;
//   P3  every node carries cat, and the non-empty principal nodes form a
//       contiguous spine from the maximal projection down to the anchor;
//   P4  structural sanity: tree-shaped dominance with a single root.
#pragma once

#include <sstream>

#include "igdep/saturation.hpp"
#include "igdep/serialize.hpp"

namespace igdep {

// A word form missing from the grammar, reported with its position.
class UnknownWordError : public Error {
 public:
  UnknownWordError(std::string form, int position)
      : Error("no grammar entry for \"" + form + "\" at position " + std::to_string(position)),
        form_(std::move(form)),
        position_(position) {}
  const std::string& form() const { return form_; }
  int position() const { return position_; }

 private:
  std::string form_;
  int position_;
};

// An entry that violates the construction principles.
class GrammarError : public Error {
 public:
  using Error::Error;
};

struct FeatureDecl {
  std::string name;
  bool polarized = false;
  FeatureValue atoms;  // full inventory; `*` in entries expands to this
};

struct Grammar {
  std::string name;
  std::string version;
  std::map<std::string, FeatureDecl> features;
  std::map<std::string, std::vector<Edap>> entries;

  const std::vector<Edap>& entries_for(const std::string& form) const {
    static const std::vector<Edap> none;
    auto it = entries.find(form);
    return it == entries.end() ? none : it->second;
  }
};

// ---------------------------------------------------------------------------
// Entry validation

namespace detail {

// Root -> anchor path in the immediate-dominance forest, if the anchor is
// reachable from a root.
inline std::vector<std::string> anchor_path(const Edap& e) {
  std::vector<std::string> path{e.anchor_id};
  auto cur = e.dap.parent_of(e.anchor_id);
  while (cur) {
    path.push_back(*cur);
    cur = e.dap.parent_of(*cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace detail

// The maximal projection: top of the spine, i.e. the highest non-empty
// principal node on the path from the root to the anchor.
inline std::string max_projection(const Edap& e) {
  auto path = detail::anchor_path(e);
  for (const auto& id : path) {
    const DapNode& n = e.dap.node(id);
    if (n.phon == PhonConstraint::NonEmpty && is_principal(n)) return id;
  }
  throw StructuralError("description of \"" + e.word_form + "\" has no spine");
}

inline ValidityReport validate_edap(const Edap& e) {
  ValidityReport report;

  try {
    e.dap.validate_structure();
  } catch (const StructuralError& err) {
    report.add("P4", {}, err.what());
    report.finish();
    return report;
  }

  // P4: one description, one root, connected through dominance.
  std::set<std::string> dom_targets;
  for (const auto& [a, d] : e.dap.dom) {
    (void)a;
    dom_targets.insert(d);
  }
  std::vector<std::string> roots;
  for (const auto& [id, n] : e.dap.nodes) {
    (void)n;
    if (!e.dap.parent_of(id) && !dom_targets.count(id)) roots.push_back(id);
  }
  if (roots.size() != 1)
    report.add("P4", roots, "description must have exactly one root, found " +
                                std::to_string(roots.size()));

  // P1: exactly one anchor, a non-empty leaf carrying the word form.
  std::vector<std::string> anchors;
  for (const auto& [id, n] : e.dap.nodes)
    if (n.anchor) anchors.push_back(id);
  if (anchors.size() != 1 || !e.dap.has_node(e.anchor_id) || anchors.front() != e.anchor_id) {
    report.add("P1", anchors, "principle 1: an entry must have exactly one anchor");
  } else {
    const DapNode& a = e.dap.node(e.anchor_id);
    if (!e.dap.children_of(e.anchor_id).empty())
      report.add("P1", {e.anchor_id}, "principle 1: the anchor must be a leaf");
    if (a.phon != PhonConstraint::NonEmpty)
      report.add("P1", {e.anchor_id}, "principle 1: the anchor must be non-empty");
    if (a.anchor->form != e.word_form)
      report.add("P1", {e.anchor_id}, "principle 1: anchor word differs from the entry word form");
  }

  // P2: empty nodes are leaves.
  for (const auto& [id, n] : e.dap.nodes) {
    if (n.phon != PhonConstraint::Empty) continue;
    bool leaf = e.dap.children_of(id).empty();
    for (const auto& [anc, desc] : e.dap.dom) {
      (void)desc;
      if (anc == id) leaf = false;
    }
    if (!leaf) report.add("P2", {id}, "principle 2: empty nodes must be leaves");
  }

  // P3: cat everywhere; non-empty principal nodes form the spine, a
  // contiguous path ending at the anchor.
  bool cat_ok = true;
  for (const auto& [id, n] : e.dap.nodes) {
    const Feature* cat = n.feature("cat");
    if (!cat || cat->neutral()) {
      report.add("P3", {id}, "principle 3: every node must carry a polarized cat feature");
      cat_ok = false;
    }
  }
  if (cat_ok && anchors.size() == 1 && anchors.front() == e.anchor_id) {
    std::vector<std::string> spine;
    for (const auto& [id, n] : e.dap.nodes)
      if (n.phon == PhonConstraint::NonEmpty && is_principal(n)) spine.push_back(id);
    std::sort(spine.begin(), spine.end());
    if (!std::binary_search(spine.begin(), spine.end(), e.anchor_id)) {
      report.add("P3", {e.anchor_id}, "principle 3: the anchor must be a principal node");
    } else {
      auto path = detail::anchor_path(e);
      // The spine must be exactly a suffix of the root->anchor path.
      size_t first = path.size();
      for (size_t i = 0; i < path.size(); ++i) {
        if (std::binary_search(spine.begin(), spine.end(), path[i])) {
          first = i;
          break;
        }
      }
      std::vector<std::string> suffix(path.begin() + first, path.end());
      std::sort(suffix.begin(), suffix.end());
      if (suffix != spine)
        report.add("P3", spine,
                   "principle 3: non-empty principal nodes must form a contiguous path from the "
                   "maximal projection to the anchor");
    }
  }

  report.finish();
  return report;
}

// The unique immediate-dominance child of a projection that is itself a
// projection of the head.  Defined for projections other than the anchor.
inline std::string principal_child(const Edap& e, const std::string& node_id) {
  if (node_id == e.anchor_id) throw DomainError("the anchor has no principal child");
  auto path = detail::anchor_path(e);
  std::string mp = max_projection(e);
  auto on_spine = [&](const std::string& id) {
    auto it = std::find(path.begin(), path.end(), id);
    if (it == path.end()) return false;
    return std::find(path.begin(), path.end(), mp) - path.begin() <= it - path.begin();
  };
  if (!on_spine(node_id)) throw DomainError(node_id + " is not a projection of the anchor");
  auto it = std::find(path.begin(), path.end(), node_id);
  return *(it + 1);  // anchor is last, node_id != anchor
}

// ---------------------------------------------------------------------------
// Grammar text format

namespace detail {

// Entry feature syntax is the serialization syntax plus `*`, standing for
// the declared inventory of the feature.
inline Feature parse_grammar_feature(const std::string& text, const Grammar& g, int line) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError(line, 0, "bad feature: " + text);
  std::string name = text.substr(0, eq);
  auto decl = g.features.find(name);
  if (decl == g.features.end()) throw ParseError(line, 0, "undeclared feature: " + name);

  std::string expanded = text;
  auto star = text.find("=*", eq);
  if (star == eq) {
    std::string atoms;
    for (size_t i = 0; i < decl->second.atoms.atoms().size(); ++i) {
      if (i) atoms += "|";
      atoms += decl->second.atoms.atoms()[i];
    }
    expanded = name + "=" + atoms + text.substr(eq + 2);
  }
  Feature f = io::detail::parse_feature(expanded, line);

  for (const auto& a : f.value.atoms())
    if (!decl->second.atoms.contains(a))
      throw ParseError(line, 0, "value " + a + " not in the inventory of " + name);
  if (decl->second.polarized && f.neutral())
    throw ParseError(line, 0, name + " is polarized and needs a polarity");
  if (!decl->second.polarized && !f.neutral())
    throw ParseError(line, 0, name + " is neutral and cannot carry a polarity");
  return f;
}

}  // namespace detail

inline Grammar load_grammar(const std::string& text) {
  io::detail::Lines lines(text);
  Grammar g;
  bool header_seen = false;

  struct PendingEntry {
    std::string word;
    Dap dap;
    std::string anchor_id;
    int line = 0;
  };
  std::optional<PendingEntry> cur;

  auto flush = [&]() {
    if (!cur) return;
    if (cur->anchor_id.empty())
      throw GrammarError("entry \"" + cur->word + "\": principle 1: an entry must have exactly one anchor");
    Edap e{std::move(cur->dap), cur->anchor_id, cur->word};
    io::normalize(e.dap);
    ValidityReport report = validate_edap(e);
    if (!report.ok()) {
      std::ostringstream os;
      os << "entry \"" << cur->word << "\" violates the construction principles:\n"
         << report.to_text();
      throw GrammarError(os.str());
    }
    g.entries[cur->word].push_back(std::move(e));
    cur.reset();
  };

  for (const auto& [line, w] : lines.items) {
    if (w[0] == "grammar") {
      if (w.size() != 3) throw ParseError(line, 0, "grammar header needs a name and a version");
      g.name = w[1];
      g.version = w[2];
      header_seen = true;
    } else if (w[0] == "feature") {
      if (cur) throw ParseError(line, 0, "feature declarations must precede entries");
      if (w.size() < 4) throw ParseError(line, 0, "feature needs a name, a kind and atoms");
      FeatureDecl d;
      d.name = w[1];
      if (w[2] == "polarized")
        d.polarized = true;
      else if (w[2] == "neutral")
        d.polarized = false;
      else
        throw ParseError(line, 0, "feature kind must be polarized or neutral");
      d.atoms = FeatureValue(std::vector<std::string>(w.begin() + 3, w.end()));
      if (g.features.count(d.name)) throw ParseError(line, 0, "duplicate feature declaration: " + d.name);
      g.features[d.name] = std::move(d);
    } else if (w[0] == "edap") {
      flush();
      if (w.size() != 2) throw ParseError(line, 0, "edap needs exactly one word form");
      cur = PendingEntry{w[1], {}, "", line};
    } else if (!cur) {
      throw ParseError(line, 0, "unexpected line outside an entry: " + w[0]);
    } else if (w[0] == "node") {
      if (w.size() < 2) throw ParseError(line, 0, "node needs an id");
      DapNode n;
      n.id = w[1];
      for (size_t i = 2; i < w.size(); ++i) {
        const std::string& t = w[i];
        if (t == "anchor") {
          if (!cur->anchor_id.empty())
            throw GrammarError("entry \"" + cur->word +
                               "\": principle 1: an entry must have exactly one anchor");
          cur->anchor_id = n.id;
          n.anchor = Token{cur->word, -1};
          n.phon = PhonConstraint::NonEmpty;
        } else if (t == "phon=empty") {
          n.phon = PhonConstraint::Empty;
        } else if (t == "phon=nonempty") {
          n.phon = PhonConstraint::NonEmpty;
        } else {
          Feature f = detail::parse_grammar_feature(t, g, line);
          if (n.features.count(f.name)) throw ParseError(line, 0, "duplicate feature " + f.name);
          n.features[f.name] = std::move(f);
        }
      }
      if (cur->dap.nodes.count(n.id)) throw ParseError(line, 0, "duplicate node " + n.id);
      cur->dap.nodes[n.id] = std::move(n);
    } else if (w[0] == "child" || w[0] == "dom" || w[0] == "order" || w[0] == "prec") {
      if (w.size() != 3) throw ParseError(line, 0, w[0] + " needs two node ids");
      std::pair<std::string, std::string> e{w[1], w[2]};
      if (w[0] == "child")
        cur->dap.imm_dom.push_back(e);
      else if (w[0] == "dom")
        cur->dap.dom.push_back(e);
      else if (w[0] == "order")
        cur->dap.imm_prec.push_back(e);
      else
        cur->dap.prec.push_back(e);
    } else {
      throw ParseError(line, 0, "unexpected line in entry: " + w[0]);
    }
  }
  flush();
  if (!header_seen && !g.entries.empty())
    throw ParseError(1, 0, "missing 'grammar <name> <version>' header");
  return g;
}

// ---------------------------------------------------------------------------
// Lexical selection and composition

// One elementary description per token, instantiated with fresh node ids.
struct LexicalSelection {
  std::vector<Token> tokens;
  std::vector<int> entry_index;  // per token, index into the grammar entry list
};

namespace detail {

constexpr int kTagStride = 1000;

// Fresh instance: ids prefixed with the token position, coindex tags moved
// into a per-instance range, anchor bound to the token.
inline Dap instantiate(const Edap& tpl, const Token& token) {
  Dap out;
  auto rename = [&](const std::string& id) { return std::to_string(token.position) + "." + id; };
  for (const auto& [id, n] : tpl.dap.nodes) {
    DapNode copy = n;
    copy.id = rename(id);
    copy.source_edap = token.position;
    if (copy.anchor) copy.anchor = token;
    for (auto& [fname, f] : copy.features) {
      (void)fname;
      if (f.coindex) {
        if (*f.coindex < 0 || *f.coindex >= kTagStride)
          throw StructuralError("coindex tag out of range in entry \"" + tpl.word_form + "\"");
        f.coindex = token.position * kTagStride + *f.coindex;
      }
    }
    out.nodes[copy.id] = std::move(copy);
  }
  auto rename_edges = [&](const EdgeList& in, EdgeList& to) {
    for (const auto& [a, b] : in) to.push_back({rename(a), rename(b)});
  };
  rename_edges(tpl.dap.imm_dom, out.imm_dom);
  rename_edges(tpl.dap.dom, out.dom);
  rename_edges(tpl.dap.imm_prec, out.imm_prec);
  rename_edges(tpl.dap.prec, out.prec);
  return out;
}

}  // namespace detail

// Disjoint union of the instances named by a selection.
inline Dap compose(const Grammar& g, const LexicalSelection& sel) {
  Dap out;
  for (size_t i = 0; i < sel.tokens.size(); ++i) {
    const auto& list = g.entries_for(sel.tokens[i].form);
    if (sel.entry_index[i] < 0 || sel.entry_index[i] >= int(list.size()))
      throw DomainError("selection index out of range for \"" + sel.tokens[i].form + "\"");
    Dap inst = detail::instantiate(list[sel.entry_index[i]], sel.tokens[i]);
    out.nodes.merge(inst.nodes);
    auto app = [](EdgeList& to, const EdgeList& from) {
      to.insert(to.end(), from.begin(), from.end());
    };
    app(out.imm_dom, inst.imm_dom);
    app(out.dom, inst.dom);
    app(out.imm_prec, inst.imm_prec);
    app(out.prec, inst.prec);
  }
  io::normalize(out);
  return out;
}

// All lexical selections for a token sequence, in lexicographic order over
// entry indexes, capped at max_selections.
inline std::vector<LexicalSelection> enumerate_selections(const std::vector<Token>& tokens,
                                                          const Grammar& g,
                                                          size_t max_selections = 64) {
  for (const auto& t : tokens)
    if (g.entries_for(t.form).empty()) throw UnknownWordError(t.form, t.position);

  std::vector<LexicalSelection> out;
  if (tokens.empty()) return out;
  std::vector<int> idx(tokens.size(), 0);
  while (out.size() < max_selections) {
    out.push_back({tokens, idx});
    int i = int(tokens.size()) - 1;
    while (i >= 0) {
      if (++idx[i] < int(g.entries_for(tokens[i].form).size())) break;
      idx[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

// One composed description per combination of lexical choices.
inline std::vector<Dap> select_and_compose(const std::vector<Token>& tokens, const Grammar& g,
                                           size_t max_selections = 64) {
  std::vector<Dap> out;
  for (const auto& sel : enumerate_selections(tokens, g, max_selections))
    out.push_back(compose(g, sel));
  return out;
}

inline std::vector<Token> tokenize(const std::string& sentence) {
  std::vector<Token> out;
  std::istringstream is(sentence);
  std::string w;
  while (is >> w) out.push_back({w, int(out.size())});
  return out;
}

}  // namespace igdep
