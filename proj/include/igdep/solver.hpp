// Desk-scale search for the valid interpretation graphs of a composed
// description: the constituent-parsing step.
//
// Models are built by superposition: description nodes are merged into
// classes, every model edge is the lift of an immediate-dominance edge, and
// sibling orders are completed deterministically.  The search is a complete
// backtracking enumeration driven by polarity deficiencies: a class whose
// polarized features cannot stand alone must merge, and all compatible
// partners are tried in canonical order.  Global per-feature polarity
// counting cuts configurations that can never balance.
//
// Every candidate that survives structural completion is validated with
// check_interpretation before being returned, so the solver is sound by
// construction.  Outputs are deduplicated up to model isomorphism and
// returned in canonical (merge-trace) order.
#pragma once

#include <chrono>

#include "igdep/saturation.hpp"
#include "igdep/serialize.hpp"

namespace igdep {

struct SolverConfig {
  int max_models = 8;
  int max_merge_depth = 64;
  long timeout_millis = 10000;
  bool deterministic_seed_order = true;  // fixed in v1
};

struct SolveResult {
  std::vector<InterpretationGraph> models;
  bool timed_out = false;
  bool hit_model_cap = false;
  bool hit_depth_cap = false;

  // True when the whole search space was explored.
  bool exhausted() const { return !timed_out && !hit_model_cap && !hit_depth_cap; }
};

namespace solver_detail {

using Clock = std::chrono::steady_clock;

struct ClassInfo {
  std::vector<std::string> members;
  std::map<std::string, std::vector<const Feature*>> features;  // per name
  int anchors = 0;
  std::optional<Token> anchor_token;
  bool must_be_empty = false;
  bool must_be_nonempty = false;
  bool has_children = false;
};

struct Search {
  const Dap& dap;
  const SolverConfig& cfg;
  Clock::time_point deadline;

  SolveResult result;
  std::set<std::string> visited;
  std::set<std::string> seen_models;  // canonical model texts
  bool stop = false;

  std::map<std::string, std::string> parent_edge;  // child -> parent (immediate dominance)

  Search(const Dap& d, const SolverConfig& c) : dap(d), cfg(c) {
    deadline = Clock::now() + std::chrono::milliseconds(c.timeout_millis);
    for (const auto& [p, ch] : d.imm_dom) parent_edge[ch] = p;
  }

  // ---- partition bookkeeping ------------------------------------------

  using Partition = std::map<std::string, std::string>;  // node -> class rep

  static std::string find(const Partition& part, const std::string& n) {
    std::string cur = n;
    auto it = part.find(cur);
    while (it != part.end() && it->second != cur) {
      cur = it->second;
      it = part.find(cur);
    }
    return cur;
  }

  std::map<std::string, ClassInfo> class_table(const Partition& part) const {
    std::map<std::string, ClassInfo> table;
    for (const auto& [id, node] : dap.nodes) {
      std::string rep = find(part, id);
      ClassInfo& c = table[rep];
      c.members.push_back(id);
      for (const auto& [fname, f] : node.features) c.features[fname].push_back(&f);
      if (node.anchor) {
        ++c.anchors;
        c.anchor_token = node.anchor;
      }
      if (node.phon == PhonConstraint::Empty) c.must_be_empty = true;
      if (node.phon == PhonConstraint::NonEmpty) c.must_be_nonempty = true;
      if (!dap.children_of(id).empty()) c.has_children = true;
    }
    return table;
  }

  // Lifted immediate-dominance parent of a class, if any member has one.
  std::optional<std::string> lifted_parent(const Partition& part, const std::string& rep,
                                           const std::map<std::string, ClassInfo>& table) const {
    for (const auto& m : table.at(rep).members) {
      auto it = parent_edge.find(m);
      if (it != parent_edge.end()) return find(part, it->second);
    }
    return std::nullopt;
  }

  static std::string signature(const Partition& part, const Dap& dap) {
    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& [id, n] : dap.nodes) {
      (void)n;
      groups[find(part, id)].push_back(id);
    }
    std::string sig;
    for (const auto& [rep, members] : groups) {
      (void)rep;
      for (const auto& m : members) sig += m + ",";
      sig += ";";
    }
    return sig;
  }

  // ---- merge feasibility ----------------------------------------------

  struct PolCounts {
    int pos = 0, neg = 0, vrt = 0, sat = 0;
  };

  static PolCounts count(const std::vector<const Feature*>& fs) {
    PolCounts c;
    for (const Feature* f : fs) {
      if (f->neutral()) continue;
      switch (*f->marking) {
        case Polarity::Positive: ++c.pos; break;
        case Polarity::Negative: ++c.neg; break;
        case Polarity::Virtual: ++c.vrt; break;
        case Polarity::Saturated: ++c.sat; break;
      }
    }
    return c;
  }

  static bool counts_feasible(const PolCounts& c) {
    if (c.pos > 1 || c.neg > 1 || c.sat > 1) return false;
    if (c.sat >= 1 && (c.pos >= 1 || c.neg >= 1)) return false;
    return true;
  }

  static bool counts_final(const PolCounts& c) {
    if (c.pos == 0 && c.neg == 0 && c.sat == 0) return c.vrt == 0;  // no polarized features at all
    return (c.sat == 1 && c.pos == 0 && c.neg == 0) || (c.sat == 0 && c.pos == 1 && c.neg == 1);
  }

  static std::optional<FeatureValue> joint_value(const std::vector<const Feature*>& fs) {
    std::optional<FeatureValue> v;
    for (const Feature* f : fs) {
      if (!v)
        v = f->value;
      else
        v = unify_values(*v, f->value);
      if (!v) return std::nullopt;
    }
    return v;
  }

  bool class_compatible(const ClassInfo& c) const {
    if (c.anchors > 1) return false;
    if (c.must_be_empty && (c.must_be_nonempty || c.anchors > 0 || c.has_children)) return false;
    for (const auto& [fname, fs] : c.features) {
      (void)fname;
      if (!counts_feasible(count(fs))) return false;
      if (!joint_value(fs)) return false;
    }
    return true;
  }

  // Merges the classes of a and b, cascading forced parent merges.  Returns
  // false on any conflict; part is left in an arbitrary state then.
  bool merge(Partition& part, const std::string& a, const std::string& b, int& merges) const {
    std::vector<std::pair<std::string, std::string>> queue{{a, b}};
    while (!queue.empty()) {
      auto [x, y] = queue.back();
      queue.pop_back();
      std::string rx = find(part, x), ry = find(part, y);
      if (rx == ry) continue;
      if (++merges > 64 * 1024) return false;  // safety stop
      if (ry < rx) std::swap(rx, ry);
      part[ry] = rx;

      // Recompute the merged class and test it.
      auto table = class_table(part);
      if (!class_compatible(table.at(rx))) return false;

      // A class must not become its own ancestor.
      std::set<std::string> up;
      std::string cur = rx;
      while (true) {
        auto p = lifted_parent(part, cur, table);
        if (!p) break;
        if (*p == rx || up.count(*p)) return false;
        up.insert(*p);
        cur = *p;
      }

      // Members with immediate parents in two distinct classes force those
      // classes together.
      std::set<std::string> parents;
      for (const auto& m : table.at(rx).members) {
        auto it = parent_edge.find(m);
        if (it != parent_edge.end()) parents.insert(find(part, it->second));
      }
      if (parents.size() > 1) {
        auto it = parents.begin();
        std::string first = *it;
        for (++it; it != parents.end(); ++it) queue.push_back({first, *it});
      }
    }
    // Underspecified dominance within one class is unsatisfiable.
    for (const auto& [anc, desc] : dap.dom)
      if (find(part, anc) == find(part, desc)) return false;
    return true;
  }

  // ---- finalization -----------------------------------------------------

  struct Lifted {
    std::vector<std::string> reps;                          // sorted class reps
    std::map<std::string, std::string> parent;              // rep -> rep
    std::map<std::string, std::vector<std::string>> kids;   // rep -> sorted reps
    std::map<std::string, std::vector<int>> positions;      // anchor positions in subtree
    std::string root;
  };

  bool lift(const Partition& part, const std::map<std::string, ClassInfo>& table,
            Lifted& out) const {
    for (const auto& [rep, c] : table) {
      (void)c;
      out.reps.push_back(rep);
    }
    std::vector<std::string> roots;
    for (const auto& rep : out.reps) {
      auto p = lifted_parent(part, rep, table);
      if (p) {
        out.parent[rep] = *p;
        out.kids[*p].push_back(rep);
      } else {
        roots.push_back(rep);
      }
    }
    if (roots.size() != 1) return false;  // not a single tree
    out.root = roots.front();

    // Anchor positions per subtree, bottom-up.
    std::function<bool(const std::string&, std::set<std::string>&)> walk =
        [&](const std::string& rep, std::set<std::string>& seen) {
          if (!seen.insert(rep).second) return false;  // cycle
          std::vector<int>& pos = out.positions[rep];
          const ClassInfo& c = table.at(rep);
          if (c.anchor_token) pos.push_back(c.anchor_token->position);
          for (const auto& k : out.kids[rep]) {
            if (!walk(k, seen)) return false;
            const auto& kp = out.positions[k];
            pos.insert(pos.end(), kp.begin(), kp.end());
          }
          std::sort(pos.begin(), pos.end());
          return true;
        };
    std::set<std::string> seen;
    if (!walk(out.root, seen)) return false;
    if (seen.size() != out.reps.size()) return false;  // disconnected
    return true;
  }

  // All sibling orders per parent: token-bearing children sorted by first
  // position, token-less children inserted at every slot.
  bool sibling_orders(const Lifted& lifted, const std::map<std::string, ClassInfo>& table,
                      std::map<std::string, std::vector<std::vector<std::string>>>& out) const {
    for (const auto& [rep, kids] : lifted.kids) {
      std::vector<std::string> tokenful, tokenless;
      for (const auto& k : kids)
        (lifted.positions.at(k).empty() ? tokenless : tokenful).push_back(k);
      std::sort(tokenful.begin(), tokenful.end(), [&](const std::string& a, const std::string& b) {
        return lifted.positions.at(a).front() < lifted.positions.at(b).front();
      });
      // Disjoint interval check between ordered token-bearing siblings.
      for (size_t i = 1; i < tokenful.size(); ++i)
        if (lifted.positions.at(tokenful[i - 1]).back() > lifted.positions.at(tokenful[i]).front())
          return false;
      std::sort(tokenless.begin(), tokenless.end());

      std::vector<std::vector<std::string>> orders;
      std::function<void(size_t, std::vector<std::string>)> place = [&](size_t i,
                                                                        std::vector<std::string> acc) {
        if (orders.size() >= 128) return;  // spurious only in degenerate inputs
        if (i == tokenless.size()) {
          orders.push_back(acc);
          return;
        }
        for (size_t slot = 0; slot <= acc.size(); ++slot) {
          std::vector<std::string> next = acc;
          next.insert(next.begin() + slot, tokenless[i]);
          place(i + 1, std::move(next));
        }
      };
      place(0, tokenful);
      std::sort(orders.begin(), orders.end());
      orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
      if (orders.empty()) return false;
      out[rep] = std::move(orders);
      (void)table;
    }
    return true;
  }

  // Model node ids join the sorted members.
  static std::string model_id_of(const ClassInfo& c) {
    std::string id;
    for (size_t i = 0; i < c.members.size(); ++i) {
      if (i) id += "+";
      id += c.members[i];
    }
    return id;
  }

  // Builds the interpretation graph for one completed sibling-order choice.
  std::optional<InterpretationGraph> build(const Partition& part,
                                           const std::map<std::string, ClassInfo>& table,
                                           const Lifted& lifted,
                                           const std::map<std::string, std::vector<std::string>>& order)
      const {
    std::map<std::string, std::string> model_id;
    for (const auto& [rep, c] : table) model_id[rep] = model_id_of(c);

    InterpretationGraph g;
    g.dap = dap;

    // Model coindexation: slots joined by description tags get fresh tags.
    struct Slot {
      std::string rep, name;
      auto operator<=>(const Slot&) const = default;
    };
    std::map<Slot, Slot> slot_parent;
    std::function<Slot(Slot)> sfind = [&](Slot s) {
      while (slot_parent.count(s) && !(slot_parent[s] == s)) s = slot_parent[s];
      return s;
    };
    auto sunite = [&](Slot a, Slot b) {
      Slot ra = sfind(a), rb = sfind(b);
      if (ra == rb) return;
      if (rb < ra) std::swap(ra, rb);
      slot_parent.try_emplace(ra, ra);
      slot_parent[rb] = ra;
    };
    std::map<int, Slot> tag_first;
    for (const auto& [id, node] : dap.nodes)
      for (const auto& [fname, f] : node.features) {
        Slot s{find(part, id), fname};
        slot_parent.try_emplace(s, s);
        if (f.coindex) {
          auto [it, fresh] = tag_first.try_emplace(*f.coindex, s);
          if (!fresh) sunite(it->second, s);
        }
      }
    std::map<Slot, std::vector<Slot>> slot_groups;
    for (const auto& [s, p] : slot_parent) {
      (void)p;
      slot_groups[sfind(s)].push_back(s);
    }
    std::map<Slot, int> model_tag;
    int next_tag = 1;
    for (auto& [root, members] : slot_groups) {
      (void)root;
      std::sort(members.begin(), members.end());
      if (members.size() < 2) continue;
      for (const auto& s : members) model_tag[s] = next_tag;
      ++next_tag;
    }

    // Model nodes.
    for (const auto& [rep, c] : table) {
      ModelNode n;
      n.id = model_id[rep];
      bool leaf = lifted.kids.count(rep) == 0 || lifted.kids.at(rep).empty();
      bool has_tokens = !lifted.positions.at(rep).empty();
      n.empty = !has_tokens;
      if (c.must_be_nonempty && !has_tokens) return std::nullopt;
      if (c.must_be_empty && has_tokens) return std::nullopt;
      if (leaf && has_tokens) {
        if (!c.anchor_token) return std::nullopt;
        n.word = c.anchor_token;
      }
      if (!leaf && c.anchor_token) return std::nullopt;  // anchors stay leaves
      for (const auto& [fname, fs] : c.features) {
        auto v = joint_value(fs);
        if (!v) return std::nullopt;
        Feature f;
        f.name = fname;
        f.value = FeatureValue::atom(v->atoms().front());  // canonical completion
        bool polarized = false;
        for (const Feature* src : fs)
          if (!src->neutral()) polarized = true;
        if (polarized) f.marking = Polarity::Saturated;
        auto mt = model_tag.find(Slot{rep, fname});
        if (mt != model_tag.end()) f.coindex = mt->second;
        n.features[fname] = std::move(f);
      }
      g.tree.nodes[n.id] = std::move(n);
    }

    // Edges in the chosen sibling order.
    for (const auto& [rep, kids] : order) {
      for (const auto& k : kids) {
        g.tree.parent[model_id[k]] = model_id[rep];
        g.tree.children[model_id[rep]].push_back(model_id[k]);
      }
    }

    for (const auto& [id, node] : dap.nodes) {
      (void)node;
      g.interp[id] = model_id[find(part, id)];
    }
    return g;
  }

  // Sentence-order requirement: the model realizes the anchors left to right
  // by token position.
  bool surface_order_ok(const InterpretationGraph& g) const {
    int anchors = 0;
    for (const auto& [id, n] : dap.nodes) {
      (void)id;
      if (n.anchor) ++anchors;
    }
    auto order = g.tree.token_order();
    if (int(order.size()) != anchors) return false;
    for (size_t i = 1; i < order.size(); ++i)
      if (order[i - 1].position >= order[i].position) return false;
    return true;
  }

  void finalize(const Partition& part) {
    auto table = class_table(part);
    Lifted lifted;
    if (!lift(part, table, lifted)) return;

    std::map<std::string, std::vector<std::vector<std::string>>> orders;
    if (!sibling_orders(lifted, table, orders)) return;

    // Cartesian product over per-parent order choices, in deterministic
    // order.  Each complete choice yields one candidate model.
    std::vector<std::string> parents;
    for (const auto& [rep, os] : orders) {
      (void)os;
      parents.push_back(rep);
    }
    std::map<std::string, std::vector<std::string>> choice;
    std::function<void(size_t)> go = [&](size_t i) {
      if (stop) return;
      if (i == parents.size()) {
        auto graph = build(part, table, lifted, choice);
        if (!graph) return;
        if (!surface_order_ok(*graph)) return;
        if (!check_interpretation(*graph).ok()) return;
        std::string canon = io::canonical_model_text(graph->tree);
        if (!seen_models.insert(canon).second) return;  // duplicate model
        result.models.push_back(std::move(*graph));
        if (int(result.models.size()) >= cfg.max_models) {
          result.hit_model_cap = true;
          stop = true;
        }
        return;
      }
      for (const auto& o : orders[parents[i]]) {
        choice[parents[i]] = o;
        go(i + 1);
        if (stop) return;
      }
    };
    go(0);
  }

  // ---- search -----------------------------------------------------------

  // First class, in rep order, whose polarized features cannot stand as a
  // final class.
  std::optional<std::string> first_deficient(const std::map<std::string, ClassInfo>& table) const {
    for (const auto& [rep, c] : table) {
      for (const auto& [fname, fs] : c.features) {
        (void)fname;
        if (!counts_final(count(fs))) return rep;
      }
    }
    return std::nullopt;
  }

  void dfs(const Partition& part, int merges) {
    if (stop) return;
    if (Clock::now() > deadline) {
      result.timed_out = true;
      stop = true;
      return;
    }
    std::string sig = signature(part, dap);
    if (!visited.insert(sig).second) return;

    auto table = class_table(part);
    auto deficient = first_deficient(table);
    if (!deficient) {
      finalize(part);
      return;
    }
    if (merges >= cfg.max_merge_depth) {
      result.hit_depth_cap = true;
      return;
    }
    for (const auto& [rep, c] : table) {
      (void)c;
      if (rep == *deficient) continue;
      Partition next = part;
      int next_merges = merges;
      bool merged = merge(next, *deficient, rep, next_merges);
      if (merged && next_merges <= cfg.max_merge_depth)
        dfs(next, next_merges);
      else if (merged)
        result.hit_depth_cap = true;
      if (stop) return;
    }
  }
};

}  // namespace solver_detail

inline SolveResult find_models(const Dap& dap, const SolverConfig& cfg = {}) {
  if (cfg.max_models <= 0 || cfg.max_merge_depth <= 0 || cfg.timeout_millis <= 0)
    throw DomainError("solver bounds must be positive");
  dap.validate_structure();

  solver_detail::Search search(dap, cfg);
  if (dap.nodes.empty()) return std::move(search.result);

  // Global polarity counting: a composed description whose positive and
  // negative counts differ for some feature, or whose virtual features have
  // nothing to saturate against, has no model at all.
  std::map<std::string, solver_detail::Search::PolCounts> totals;
  for (const auto& [id, n] : dap.nodes) {
    (void)id;
    for (const auto& [fname, f] : n.features) {
      if (f.neutral()) continue;
      auto& t = totals[fname];
      switch (*f.marking) {
        case Polarity::Positive: ++t.pos; break;
        case Polarity::Negative: ++t.neg; break;
        case Polarity::Virtual: ++t.vrt; break;
        case Polarity::Saturated: ++t.sat; break;
      }
    }
  }
  for (const auto& [fname, t] : totals) {
    (void)fname;
    if (t.pos != t.neg) return std::move(search.result);
    if (t.vrt > 0 && t.sat == 0 && t.pos == 0) return std::move(search.result);
  }

  solver_detail::Search::Partition part;
  for (const auto& [id, n] : dap.nodes) {
    (void)n;
    part[id] = id;
  }
  search.dfs(part, 0);
  return std::move(search.result);
}

}  // namespace igdep
