// Canonical text serialization for descriptions, syntax trees,
// interpretation graphs and dependency graphs, plus the TSV and DOT render
// formats of the command-line tool.
//
// The grammar of each format is documented in docs/formats.md.  Serializers
// emit canonical (sorted, deterministic) text; parse(serialize(x)) is
// structurally equal to x.
#pragma once

#include <functional>
#include <sstream>

#include "igdep/core.hpp"

namespace igdep {
namespace io {

// ---------------------------------------------------------------------------
// Lexical helpers

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::optional<Polarity> polarity_from_token(const std::string& t) {
  if (t == "pos" || t == "->" || t == "→") return Polarity::Positive;
  if (t == "neg" || t == "<-" || t == "←") return Polarity::Negative;
  if (t == "vrt" || t == "~" || t == "∼" || t == "~") return Polarity::Virtual;
  if (t == "sat" || t == "<->" || t == "↔") return Polarity::Saturated;
  return std::nullopt;
}

// Feature syntax: name=atom|atom...[:pol][@tag]; no :pol means neutral.
inline Feature parse_feature(const std::string& text, int line) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError(line, 0, "bad feature: " + text);
  Feature f;
  f.name = text.substr(0, eq);
  std::string rest = text.substr(eq + 1);

  auto at = rest.rfind('@');
  if (at != std::string::npos) {
    try {
      f.coindex = std::stoi(rest.substr(at + 1));
    } catch (const std::exception&) {
      throw ParseError(line, 0, "bad coindex tag in feature: " + text);
    }
    rest = rest.substr(0, at);
  }
  auto colon = rest.find(':');
  if (colon != std::string::npos) {
    auto pol = polarity_from_token(rest.substr(colon + 1));
    if (!pol) throw ParseError(line, 0, "bad polarity in feature: " + text);
    f.marking = *pol;
    rest = rest.substr(0, colon);
  }
  if (rest.empty()) throw ParseError(line, 0, "empty value in feature: " + text);
  f.value = FeatureValue(split_on(rest, '|'));
  return f;
}

inline std::string feature_to_text(const Feature& f) {
  std::string out = f.name + "=";
  for (size_t i = 0; i < f.value.atoms().size(); ++i) {
    if (i) out += "|";
    out += f.value.atoms()[i];
  }
  if (f.marking) out += std::string(":") + to_string(*f.marking);
  if (f.coindex) out += "@" + std::to_string(*f.coindex);
  return out;
}

// word@position
inline Token parse_token_ref(const std::string& text, int line) {
  auto at = text.rfind('@');
  if (at == std::string::npos || at == 0) throw ParseError(line, 0, "bad token reference: " + text);
  Token t;
  t.form = text.substr(0, at);
  try {
    t.position = std::stoi(text.substr(at + 1));
  } catch (const std::exception&) {
    throw ParseError(line, 0, "bad token position: " + text);
  }
  return t;
}

struct Lines {
  std::vector<std::pair<int, std::vector<std::string>>> items;  // (line number, words)

  explicit Lines(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int no = 0;
    while (std::getline(is, line)) {
      ++no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      auto words = split_ws(line);
      if (!words.empty()) items.push_back({no, std::move(words)});
    }
  }
};

inline DapNode parse_dap_node_line(const std::vector<std::string>& w, int line) {
  if (w.size() < 3) throw ParseError(line, 0, "dap-node needs an id and an edap instance");
  DapNode n;
  n.id = w[1];
  bool have_edap = false;
  for (size_t i = 2; i < w.size(); ++i) {
    const std::string& t = w[i];
    if (t.rfind("edap=", 0) == 0) {
      try {
        n.source_edap = std::stoi(t.substr(5));
      } catch (const std::exception&) {
        throw ParseError(line, 0, "bad edap instance: " + t);
      }
      have_edap = true;
    } else if (t.rfind("anchor=", 0) == 0) {
      n.anchor = parse_token_ref(t.substr(7), line);
      n.phon = PhonConstraint::NonEmpty;
    } else if (t == "phon=empty") {
      n.phon = PhonConstraint::Empty;
    } else if (t == "phon=nonempty") {
      n.phon = PhonConstraint::NonEmpty;
    } else {
      Feature f = parse_feature(t, line);
      if (n.features.count(f.name)) throw ParseError(line, 0, "duplicate feature " + f.name);
      n.features[f.name] = std::move(f);
    }
  }
  if (!have_edap) throw ParseError(line, 0, "dap-node " + n.id + " lacks edap=");
  if (n.anchor && n.phon == PhonConstraint::Empty)
    throw ParseError(line, 0, "anchor node cannot be empty: " + n.id);
  return n;
}

inline std::string dap_node_to_text(const DapNode& n) {
  std::ostringstream os;
  os << "dap-node " << n.id << " edap=" << n.source_edap;
  if (n.anchor) {
    os << " anchor=" << n.anchor->form << "@" << n.anchor->position;
  } else if (n.phon != PhonConstraint::Unconstrained) {
    os << " phon=" << to_string(n.phon);
  }
  for (const auto& [name, f] : n.features) {
    (void)name;
    os << " " << feature_to_text(f);
  }
  return os.str();
}

inline ModelNode parse_model_node_line(const std::vector<std::string>& w, int line) {
  if (w.size() < 2) throw ParseError(line, 0, "model-node needs an id");
  ModelNode n;
  n.id = w[1];
  bool phon_seen = false;
  for (size_t i = 2; i < w.size(); ++i) {
    const std::string& t = w[i];
    if (t.rfind("word=", 0) == 0) {
      n.word = parse_token_ref(t.substr(5), line);
      n.empty = false;
      phon_seen = true;
    } else if (t == "phon=empty") {
      n.empty = true;
      phon_seen = true;
    } else if (t == "phon=nonempty") {
      n.empty = false;
      phon_seen = true;
    } else {
      Feature f = parse_feature(t, line);
      if (n.features.count(f.name)) throw ParseError(line, 0, "duplicate feature " + f.name);
      n.features[f.name] = std::move(f);
    }
  }
  if (!phon_seen)
    throw ParseError(line, 0, "model-node " + n.id + " needs word=, phon=empty or phon=nonempty");
  return n;
}

inline std::string model_node_to_text(const ModelNode& n) {
  std::ostringstream os;
  os << "model-node " << n.id;
  if (n.word) {
    os << " word=" << n.word->form << "@" << n.word->position;
  } else {
    os << " phon=" << (n.empty ? "empty" : "nonempty");
  }
  for (const auto& [name, f] : n.features) {
    (void)name;
    os << " " << feature_to_text(f);
  }
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Descriptions

inline void normalize(Dap& d) {
  std::sort(d.imm_dom.begin(), d.imm_dom.end());
  std::sort(d.dom.begin(), d.dom.end());
  std::sort(d.imm_prec.begin(), d.imm_prec.end());
  std::sort(d.prec.begin(), d.prec.end());
}

namespace detail {

inline void parse_dap_line(Dap& dap, const std::vector<std::string>& w, int line) {
  if (w[0] == "dap-node") {
    DapNode n = parse_dap_node_line(w, line);
    if (dap.nodes.count(n.id)) throw ParseError(line, 0, "duplicate dap node " + n.id);
    dap.nodes[n.id] = std::move(n);
  } else if (w[0] == "dap-edge") {
    if (w.size() != 4) throw ParseError(line, 0, "dap-edge needs a kind and two node ids");
    std::pair<std::string, std::string> e{w[2], w[3]};
    if (w[1] == "child")
      dap.imm_dom.push_back(e);
    else if (w[1] == "dom")
      dap.dom.push_back(e);
    else if (w[1] == "order")
      dap.imm_prec.push_back(e);
    else if (w[1] == "prec")
      dap.prec.push_back(e);
    else
      throw ParseError(line, 0, "unknown dap edge kind: " + w[1]);
  } else {
    throw ParseError(line, 0, "unexpected line in dap section: " + w[0]);
  }
}

inline std::string dap_to_text(const Dap& d) {
  std::ostringstream os;
  for (const auto& [id, n] : d.nodes) {
    (void)id;
    os << dap_node_to_text(n) << "\n";
  }
  auto dump = [&](const EdgeList& edges, const char* kind) {
    EdgeList sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [a, b] : sorted) os << "dap-edge " << kind << " " << a << " " << b << "\n";
  };
  dump(d.imm_dom, "child");
  dump(d.dom, "dom");
  dump(d.imm_prec, "order");
  dump(d.prec, "prec");
  return os.str();
}

}  // namespace detail

inline std::string serialize(const Dap& d) {
  return "dap v1\n" + detail::dap_to_text(d);
}

inline Dap parse_dap(const std::string& text) {
  detail::Lines lines(text);
  if (lines.items.empty() || lines.items[0].second[0] != "dap")
    throw ParseError(1, 0, "expected 'dap v1' header");
  Dap d;
  for (size_t i = 1; i < lines.items.size(); ++i)
    detail::parse_dap_line(d, lines.items[i].second, lines.items[i].first);
  d.validate_structure();
  normalize(d);
  return d;
}

// ---------------------------------------------------------------------------
// Syntax trees

namespace detail {

inline void parse_tree_line(SyntaxTree& tree, const std::vector<std::string>& w, int line) {
  if (w[0] == "model-node") {
    ModelNode n = parse_model_node_line(w, line);
    if (tree.nodes.count(n.id)) throw ParseError(line, 0, "duplicate model node " + n.id);
    tree.nodes[n.id] = std::move(n);
  } else if (w[0] == "model-edge") {
    if (w.size() != 3) throw ParseError(line, 0, "model-edge needs two node ids");
    if (tree.parent.count(w[2])) throw ParseError(line, 0, "model node has two parents: " + w[2]);
    tree.parent[w[2]] = w[1];
    tree.children[w[1]].push_back(w[2]);
  } else {
    throw ParseError(line, 0, "unexpected line in tree section: " + w[0]);
  }
}

inline void validate_tree(const SyntaxTree& tree, int line) {
  for (const auto& [c, p] : tree.parent) {
    if (!tree.has_node(c)) throw ParseError(line, 0, "model-edge child unknown: " + c);
    if (!tree.has_node(p)) throw ParseError(line, 0, "model-edge parent unknown: " + p);
  }
  if (tree.nodes.empty()) throw ParseError(line, 0, "empty model tree");
  std::string root;
  try {
    root = tree.root();
  } catch (const StructuralError& e) {
    throw ParseError(line, 0, e.what());
  }
  // Reachability from the root rules out cycles among the remaining nodes.
  size_t seen = tree.dfs_order().size();
  if (seen != tree.nodes.size()) throw ParseError(line, 0, "model tree is not connected");
  for (const auto& [id, n] : tree.nodes) {
    if (tree.is_leaf(id) && !n.empty && !n.word)
      throw ParseError(line, 0, "non-empty model leaf without a word: " + id);
    if (n.word && tree.children_of(id).size() > 0)
      throw ParseError(line, 0, "model node with a word must be a leaf: " + id);
  }
}

inline std::string tree_to_text(const SyntaxTree& t) {
  std::ostringstream os;
  for (const auto& [id, n] : t.nodes) {
    (void)id;
    os << model_node_to_text(n) << "\n";
  }
  for (const auto& [p, kids] : t.children)
    for (const auto& c : kids) os << "model-edge " << p << " " << c << "\n";
  return os.str();
}

}  // namespace detail

inline std::string serialize(const SyntaxTree& t) {
  return "syntax-tree v1\n" + detail::tree_to_text(t);
}

inline SyntaxTree parse_syntax_tree(const std::string& text) {
  detail::Lines lines(text);
  if (lines.items.empty() || lines.items[0].second[0] != "syntax-tree")
    throw ParseError(1, 0, "expected 'syntax-tree v1' header");
  SyntaxTree t;
  int last = 1;
  for (size_t i = 1; i < lines.items.size(); ++i) {
    detail::parse_tree_line(t, lines.items[i].second, lines.items[i].first);
    last = lines.items[i].first;
  }
  detail::validate_tree(t, last);
  return t;
}

// ---------------------------------------------------------------------------
// Interpretation graphs

inline std::string serialize(const InterpretationGraph& g) {
  std::ostringstream os;
  os << "interpretation-graph v1\n";
  os << "tokens";
  for (const auto& t : g.tree.token_order()) os << " " << t.form;
  os << "\n";
  os << detail::dap_to_text(g.dap);
  os << detail::tree_to_text(g.tree);
  for (const auto& [d, m] : g.interp) os << "interp " << d << " " << m << "\n";
  return os.str();
}

inline InterpretationGraph parse_interpretation_graph(const std::string& text) {
  detail::Lines lines(text);
  if (lines.items.empty() || lines.items[0].second[0] != "interpretation-graph")
    throw ParseError(1, 0, "expected 'interpretation-graph v1' header");
  InterpretationGraph g;
  std::vector<std::string> tokens;
  int last = 1;
  for (size_t i = 1; i < lines.items.size(); ++i) {
    const auto& [line, w] = lines.items[i];
    last = line;
    if (w[0] == "tokens") {
      tokens.assign(w.begin() + 1, w.end());
    } else if (w[0] == "dap-node" || w[0] == "dap-edge") {
      detail::parse_dap_line(g.dap, w, line);
    } else if (w[0] == "model-node" || w[0] == "model-edge") {
      detail::parse_tree_line(g.tree, w, line);
    } else if (w[0] == "interp") {
      if (w.size() != 3) throw ParseError(line, 0, "interp needs two node ids");
      if (g.interp.count(w[1])) throw ParseError(line, 0, "duplicate interpretation of " + w[1]);
      g.interp[w[1]] = w[2];
    } else {
      throw ParseError(line, 0, "unexpected line: " + w[0]);
    }
  }
  g.dap.validate_structure();
  normalize(g.dap);
  detail::validate_tree(g.tree, last);
  // Cross-check the tokens line against the model's surface order.
  auto order = g.tree.token_order();
  if (tokens.size() != order.size())
    throw ParseError(last, 0, "tokens line does not match the model's surface tokens");
  for (size_t i = 0; i < order.size(); ++i)
    if (tokens[i] != order[i].form)
      throw ParseError(last, 0, "token mismatch at position " + std::to_string(i) + ": " +
                                    tokens[i] + " vs " + order[i].form);
  return g;
}

// ---------------------------------------------------------------------------
// Dependency graphs

inline std::string serialize(const DependencyGraph& g) {
  std::ostringstream os;
  os << "dependency-graph v1\n";
  os << "tokens";
  for (const auto& t : g.tokens) os << " " << t.form;
  os << "\n";
  std::vector<Dependency> edges = g.edges;
  std::sort(edges.begin(), edges.end(), dependency_less);
  for (const auto& e : edges)
    os << "dep " << e.governor.position << " " << e.dependent.position << " " << e.label << " "
       << to_string(e.kind) << "\n";
  return os.str();
}

inline DependencyGraph parse_dependency_graph(const std::string& text) {
  detail::Lines lines(text);
  if (lines.items.empty() || lines.items[0].second[0] != "dependency-graph")
    throw ParseError(1, 0, "expected 'dependency-graph v1' header");
  DependencyGraph g;
  for (size_t i = 1; i < lines.items.size(); ++i) {
    const auto& [line, w] = lines.items[i];
    if (w[0] == "tokens") {
      for (size_t k = 1; k < w.size(); ++k) g.tokens.push_back({w[k], int(k - 1)});
    } else if (w[0] == "dep") {
      if (w.size() != 5) throw ParseError(line, 0, "dep needs gov, dep, label, kind");
      int gov = 0, dep = 0;
      try {
        gov = std::stoi(w[1]);
        dep = std::stoi(w[2]);
      } catch (const std::exception&) {
        throw ParseError(line, 0, "bad position in dep line");
      }
      if (gov < 0 || gov >= int(g.tokens.size()) || dep < 0 || dep >= int(g.tokens.size()))
        throw ParseError(line, 0, "dep position out of range");
      auto kind = dep_kind_from_string(w[4]);
      if (!kind) throw ParseError(line, 0, "unknown dependency kind: " + w[4]);
      g.edges.push_back({g.tokens[gov], g.tokens[dep], w[3], *kind});
    } else {
      throw ParseError(line, 0, "unexpected line: " + w[0]);
    }
  }
  std::sort(g.edges.begin(), g.edges.end(), dependency_less);
  return g;
}

// ---------------------------------------------------------------------------
// Render formats

// Columns: dep_position, dep_form, gov_position, gov_form, label, kind.
inline std::string to_tsv(const DependencyGraph& g) {
  std::vector<Dependency> edges = g.edges;
  std::sort(edges.begin(), edges.end(), dependency_less);
  std::ostringstream os;
  for (const auto& e : edges)
    os << e.dependent.position << "\t" << e.dependent.form << "\t" << e.governor.position << "\t"
       << e.governor.form << "\t" << e.label << "\t" << to_string(e.kind) << "\n";
  return os.str();
}

// Tokens as nodes in surface order; labeled directed edges governor -> dependent.
inline std::string to_dot(const DependencyGraph& g) {
  std::ostringstream os;
  os << "digraph dependencies {\n";
  os << "  rankdir=LR;\n";
  for (const auto& t : g.tokens)
    os << "  t" << t.position << " [label=\"" << t.form << "\"];\n";
  std::vector<Dependency> edges = g.edges;
  std::sort(edges.begin(), edges.end(), dependency_less);
  for (const auto& e : edges)
    os << "  t" << e.governor.position << " -> t" << e.dependent.position << " [label=\"" << e.label
       << "\"];\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Canonical model text

// Canonical, id-independent rendering of a syntax tree: features, words and
// structure in sibling order, with coindex tags renumbered in first-use
// order.  Two trees are isomorphic models exactly when their canonical texts
// coincide.
inline std::string canonical_model_text(const SyntaxTree& t) {
  std::map<int, int> tag_map;
  std::ostringstream os;
  auto canon_tag = [&](int tag) {
    auto [it, fresh] = tag_map.try_emplace(tag, int(tag_map.size()));
    (void)fresh;
    return it->second;
  };
  std::function<void(const std::string&)> walk = [&](const std::string& id) {
    const ModelNode& n = t.node(id);
    os << "(";
    if (n.word)
      os << n.word->form << "@" << n.word->position;
    else
      os << (n.empty ? "empty" : "nonempty");
    for (const auto& [name, f] : n.features) {
      (void)name;
      os << ";" << detail::feature_to_text(Feature{f.name, f.value, f.marking, std::nullopt});
      if (f.coindex) os << "@" << canon_tag(*f.coindex);
    }
    for (const auto& c : t.children_of(id)) walk(c);
    os << ")";
  };
  walk(t.root());
  return os.str();
}

}  // namespace io
}  // namespace igdep
