#include "locality/protocols.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "locality/ket.hpp"

namespace loc {

std::string leaf_rule_name(LeafRule r) {
  switch (r) {
    case LeafRule::identified: return "identified";
    case LeafRule::single_state: return "single-state";
    case LeafRule::two_orthogonal_states: return "two-orthogonal-states";
    case LeafRule::lemma1_2xn: return "lemma1-2xn";
    case LeafRule::three_product: return "three-product";
  }
  return "?";
}

LeafRule parse_leaf_rule(const std::string& s) {
  for (auto r : {LeafRule::identified, LeafRule::single_state, LeafRule::two_orthogonal_states,
                 LeafRule::lemma1_2xn, LeafRule::three_product})
    if (leaf_rule_name(r) == s) return r;
  throw std::invalid_argument("unknown leaf claim '" + s + "'");
}

ProtocolTree ProtocolTree::leaf(LeafRule r, std::string label) {
  ProtocolTree t;
  t.claim = r;
  t.label = std::move(label);
  return t;
}

std::size_t ProtocolTree::depth() const {
  if (is_leaf()) return 0;
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return d + 1;
}

std::size_t ProtocolTree::count_leaves() const {
  if (is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : children) n += c.count_leaves();
  return n;
}

std::string element_text(const Mat& projector, const std::vector<std::size_t>& dims) {
  std::string out;
  for (const auto& v : column_basis(projector)) {
    if (!out.empty()) out += ",";
    out += format_ket(v, dims);
  }
  return out;
}

std::string status_name(Status s) {
  switch (s) {
    case Status::distinguishable: return "distinguishable";
    case Status::indistinguishable: return "indistinguishable";
    case Status::unknown: return "unknown";
  }
  return "?";
}

namespace {

LocalPVM node_pvm(const StateSet& s, const ProtocolTree& node, const Partition& p, const std::string& path) {
  if (node.group.empty() || node.pvm.empty()) throw ProtocolError(path, "node has neither a claim nor a measurement");
  for (auto g : node.group)
    if (g >= s.spec.parties()) throw ProtocolError(path, "group names an unknown party");
  if (!p.block_containing(node.group))
    throw ProtocolError(path, "group " + s.spec.group_name(node.group) + " is not inside one block of " + p.str(s.spec));
  std::string joined;
  for (const auto& e : node.pvm) joined += (joined.empty() ? "" : ";") + e;
  try {
    auto elements = parse_pvm_elements(joined, s.spec.dims_of(node.group));
    if (elements.size() != node.pvm.size()) throw std::invalid_argument("element list contains ';'");
    return make_local_pvm(s.spec, node.group, p, std::move(elements));
  } catch (const std::invalid_argument& e) {
    throw ProtocolError(path, std::string("bad measurement: ") + e.what());
  }
}

std::string step_name(const StateSet& s, const ProtocolTree& node, std::size_t outcome) {
  return s.spec.group_name(node.group) + ":" + std::to_string(outcome);
}

void walk(const StateSet& cur, const ProtocolTree& node, const Partition& p, const std::string& path, Verdict& v);

void check_leaf(const StateSet& cur, const ProtocolTree& node, const Partition& p, const std::string& path,
                Verdict& v) {
  const LeafRule rule = *node.claim;
  auto fail = [&](const std::string& why) {
    throw ProtocolError(path, leaf_rule_name(rule) + " leaf: " + why);
  };
  switch (rule) {
    case LeafRule::identified:
      if (cur.size() != 1) fail(std::to_string(cur.size()) + " states remain");
      if (!node.label.empty() && cur.states[0].label != node.label)
        fail("remaining state is " + cur.states[0].label + ", not " + node.label);
      break;
    case LeafRule::single_state:
      if (cur.size() != 1) fail(std::to_string(cur.size()) + " states remain");
      break;
    case LeafRule::two_orthogonal_states:
      if (cur.size() != 2) fail(std::to_string(cur.size()) + " states remain");
      if (!inner(cur.vec(0), cur.vec(1)).is_zero()) fail("states are not orthogonal");
      break;
    case LeafRule::lemma1_2xn: {
      ProtocolTree sub = lemma1_protocol(cur, p);
      walk(cur, sub, p, path + "/lemma1", v);
      return;
    }
    case LeafRule::three_product: {
      if (cur.size() != 3) fail(std::to_string(cur.size()) + " states remain");
      ProtocolTree sub = three_product_protocol(cur, p);
      walk(cur, sub, p, path + "/three-product", v);
      return;
    }
  }
  v.trace.push_back({path, cur.labels(), leaf_rule_name(rule)});
}

void walk(const StateSet& cur, const ProtocolTree& node, const Partition& p, const std::string& path, Verdict& v) {
  if (node.is_leaf()) {
    check_leaf(cur, node, p, path, v);
    return;
  }
  LocalPVM lp = node_pvm(cur, node, p, path);
  if (auto w = preserves_orthogonality(cur, lp))
    throw ProtocolError(path, "outcome " + std::to_string(w->outcome) + " spoils orthogonality of " +
                                  cur.states[w->i].label + " and " + cur.states[w->j].label);
  auto branches = apply(cur, lp);
  std::set<std::size_t> live, given;
  for (const auto& b : branches) {
    if (b.states.size() + b.annihilated.size() != cur.size())
      throw ProtocolError(path, "branch lost track of a state");
    if (!b.states.empty()) live.insert(b.outcome);
  }
  for (const auto& c : node.children)
    if (!given.insert(c.outcome).second)
      throw ProtocolError(path, "outcome " + std::to_string(c.outcome) + " has two subtrees");
  if (live != given) {
    std::string want, got;
    for (auto o : live) want += " " + std::to_string(o);
    for (auto o : given) got += " " + std::to_string(o);
    throw ProtocolError(path, "children cover outcomes {" + got + " } but non-empty outcomes are {" + want + " }");
  }
  for (const auto& c : node.children)
    walk(branches[c.outcome].states, c, p, path + "/" + step_name(cur, node, c.outcome), v);
}

bool all_product(const StateSet& s, const Partition& p) {
  for (const auto& st : s.states)
    if (!is_product_across(st.amps, s.spec, p)) return false;
  return true;
}

ProtocolTree measurement_node(std::vector<std::size_t> group, std::vector<std::string> pvm) {
  ProtocolTree t;
  t.group = std::move(group);
  t.pvm = std::move(pvm);
  return t;
}

}  // namespace

Verdict execute_and_verify(const StateSet& s, const ProtocolTree& t, const Partition& p) {
  p.validate(s.spec.parties());
  Verdict v;
  walk(s, t, p, "root", v);
  v.status = Status::distinguishable;
  v.tree = t;
  return v;
}

std::optional<Lemma1Structure> lemma1_structure(const StateSet& s, const Partition& p) {
  if (s.empty() || !all_product(s, p)) return std::nullopt;
  Lemma1Structure st;
  std::vector<std::size_t> active, eff(p.size());
  for (std::size_t b = 0; b < p.size(); ++b) {
    eff[b] = local_support(s, p.blocks[b]).size();
    if (eff[b] > 1)
      active.push_back(b);
    else
      st.spectators.push_back(b);
  }
  if (active.size() > 2) return std::nullopt;
  if (active.empty()) {
    if (s.size() != 1) return std::nullopt;
    st.n_block = 0;
    st.classes.push_back({Vec(), {0}, {}});
    return st;
  }
  if (active.size() == 2) {
    std::size_t q = eff[active[0]] <= eff[active[1]] ? 0 : 1;
    if (eff[active[q]] > 2) return std::nullopt;
    st.q_block = active[q];
    st.n_block = active[1 - q];
  } else {
    st.n_block = active[0];
  }
  std::vector<Vec> eta;
  for (const auto& x : s.states) eta.push_back(local_factor(x.amps, s.spec, p.blocks[st.n_block]));

  std::vector<std::size_t> cls(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!st.q_block) {
      if (st.classes.empty()) st.classes.push_back({Vec(), {}, {}});
      st.classes[0].on_alpha.push_back(k);
      cls[k] = 0;
      continue;
    }
    Vec a = local_factor(s.vec(k), s.spec, p.blocks[*st.q_block]);
    bool placed = false;
    for (std::size_t c = 0; c < st.classes.size() && !placed; ++c) {
      auto& cl = st.classes[c];
      if (parallel(a, cl.alpha)) {
        cl.on_alpha.push_back(k);
      } else if (inner(a, cl.alpha).is_zero()) {
        cl.on_perp.push_back(k);
      } else {
        continue;
      }
      cls[k] = c;
      placed = true;
    }
    if (!placed) {
      cls[k] = st.classes.size();
      st.classes.push_back({a, {k}, {}});
    }
  }
  // N factors must separate different classes and states sharing a Q factor.
  auto same_side = [&](std::size_t k, std::size_t l) {
    const auto& c = st.classes[cls[k]];
    bool ka = std::find(c.on_alpha.begin(), c.on_alpha.end(), k) != c.on_alpha.end();
    bool la = std::find(c.on_alpha.begin(), c.on_alpha.end(), l) != c.on_alpha.end();
    return ka == la;
  };
  for (std::size_t k = 0; k < s.size(); ++k)
    for (std::size_t l = k + 1; l < s.size(); ++l) {
      bool must = cls[k] != cls[l] || same_side(k, l);
      if (must && !inner(eta[k], eta[l]).is_zero()) return std::nullopt;
    }
  return st;
}

ProtocolTree lemma1_protocol(const StateSet& s, const Partition& p) {
  auto st = lemma1_structure(s, p);
  if (!st) throw ProtocolError("lemma1", "set is not an orthogonal product set with a qubit-like side");
  const auto& nb = p.blocks[st->n_block];
  const auto ndims = s.spec.dims_of(nb);
  std::vector<Vec> eta;
  for (const auto& x : s.states) eta.push_back(local_factor(x.amps, s.spec, nb));

  auto identify = [&](const std::vector<std::size_t>& idx) {
    if (idx.size() == 1) return ProtocolTree::leaf(LeafRule::identified, s.states[idx[0]].label);
    std::vector<std::string> els;
    for (auto k : idx) els.push_back(format_ket(eta[k], ndims));
    ProtocolTree t = measurement_node(nb, els);
    for (std::size_t o = 0; o < idx.size(); ++o) {
      t.children.push_back(ProtocolTree::leaf(LeafRule::identified, s.states[idx[o]].label));
      t.children.back().outcome = o;
    }
    return t;
  };
  auto class_tree = [&](const Lemma1Structure::Class& c) {
    if (c.on_perp.empty()) return identify(c.on_alpha);
    const auto& qb = p.blocks[*st->q_block];
    ProtocolTree t = measurement_node(qb, {format_ket(c.alpha, s.spec.dims_of(qb))});
    t.children.push_back(identify(c.on_alpha));
    t.children.push_back(identify(c.on_perp));
    t.children[0].outcome = 0;
    t.children[1].outcome = 1;
    return t;
  };
  if (st->classes.size() == 1) return class_tree(st->classes[0]);
  std::vector<std::string> els;
  const std::size_t nd = s.spec.dim_of(nb);
  for (const auto& c : st->classes) {
    std::vector<Vec> span;
    for (auto k : c.on_alpha) span.push_back(eta[k]);
    for (auto k : c.on_perp) span.push_back(eta[k]);
    els.push_back(element_text(projector_onto_span(span, nd), ndims));
  }
  ProtocolTree root = measurement_node(nb, els);
  for (std::size_t c = 0; c < st->classes.size(); ++c) {
    root.children.push_back(class_tree(st->classes[c]));
    root.children.back().outcome = c;
  }
  return root;
}

ProtocolTree three_product_protocol(const StateSet& s, const Partition& p) {
  if (s.size() == 1) return ProtocolTree::leaf(LeafRule::single_state);
  if (s.size() == 2) return ProtocolTree::leaf(LeafRule::two_orthogonal_states);
  if (s.size() != 3) throw ProtocolError("three-product", "expected three states, got " + std::to_string(s.size()));
  if (!all_product(s, p)) throw ProtocolError("three-product", "states are not product across " + p.str(s.spec));
  for (const auto& block : p.blocks) {
    Vec a = local_factor(s.vec(0), s.spec, block);
    Vec b = local_factor(s.vec(1), s.spec, block);
    if (!inner(a, b).is_zero()) continue;
    ProtocolTree t = measurement_node(block, {format_ket(a, s.spec.dims_of(block))});
    LocalPVM lp = make_local_pvm(s.spec, block, p, std::vector<Mat>{projector_onto(a)});
    for (const auto& br : apply(s, lp)) {
      if (br.states.empty()) continue;
      ProtocolTree leaf = ProtocolTree::leaf(br.states.size() == 1 ? LeafRule::single_state
                                                                     : LeafRule::two_orthogonal_states);
      leaf.outcome = br.outcome;
      t.children.push_back(std::move(leaf));
    }
    return t;
  }
  throw ProtocolError("three-product", "no block separates the first two states; the set is not orthogonal");
}

std::optional<LeafRule> terminal_rule(const StateSet& s, const Partition& p) {
  if (s.size() == 1) return LeafRule::single_state;
  if (s.size() == 2 && inner(s.vec(0), s.vec(1)).is_zero()) return LeafRule::two_orthogonal_states;
  if (lemma1_structure(s, p)) return LeafRule::lemma1_2xn;
  if (s.size() == 3 && all_product(s, p) && !check_mutual_orthogonality(s)) return LeafRule::three_product;
  return std::nullopt;
}

namespace {

class Searcher {
 public:
  Searcher(const Partition& p, const SearchConfig& cfg) : p_(p), cfg_(cfg) {}

  std::optional<ProtocolTree> solve(const StateSet& cur, std::size_t depth) {
    if (auto r = terminal_rule(cur, p_)) return ProtocolTree::leaf(*r);
    if (depth == 0) return std::nullopt;
    std::string key = set_key(cur) + "#" + std::to_string(depth);
    if (failed_.count(key)) return std::nullopt;
    if (certified_irreducible(cur)) {
      failed_.insert(key);
      return std::nullopt;
    }
    std::vector<LocalPVM> pvms;
    for (const auto& block : p_.blocks) {
      auto found = enumerate_op_pvms(cur, block, p_, cfg_.enumeration);
      pvms.insert(pvms.end(), found.begin(), found.end());
    }
    // Finer measurements first; ties keep the canonical order.
    std::stable_sort(pvms.begin(), pvms.end(),
                     [](const LocalPVM& a, const LocalPVM& b) { return a.pvm.size() > b.pvm.size(); });
    if (pvms.size() > cfg_.max_pvms_per_node) pvms.resize(cfg_.max_pvms_per_node);
    ++explored_;
    for (const auto& lp : pvms) {
      const auto dims = cur.spec.dims_of(lp.group);
      std::vector<std::string> text;
      for (const auto& e : lp.pvm.elements) text.push_back(element_text(e, dims));
      ProtocolTree node = measurement_node(lp.group, text);
      bool ok = true;
      for (const auto& br : apply(cur, lp)) {
        if (br.states.empty()) continue;
        auto sub = solve(br.states, depth - 1);
        if (!sub) {
          ok = false;
          break;
        }
        sub->outcome = br.outcome;
        node.children.push_back(std::move(*sub));
      }
      if (ok) return node;
    }
    failed_.insert(key);
    return std::nullopt;
  }

  std::size_t explored() const { return explored_; }

 private:
  static std::string set_key(const StateSet& s) {
    std::vector<std::string> parts;
    for (const auto& st : s.states) parts.push_back(canonical_direction(st.amps).str());
    std::sort(parts.begin(), parts.end());
    std::string k;
    for (const auto& x : parts) k += x + "|";
    return k;
  }

  bool certified_irreducible(const StateSet& s) const {
    for (const auto& b : p_.blocks) {
      std::size_t r = local_support(s, b).size();
      if (r <= 1) continue;
      if (r > cfg_.enumeration.solver.max_support || lifted_dimension(s, b) != 1) return false;
    }
    return true;
  }

  const Partition& p_;
  SearchConfig cfg_;
  std::set<std::string> failed_;
  std::size_t explored_ = 0;
};

}  // namespace

Verdict lpcc_search(const StateSet& s, const Partition& p, const SearchConfig& cfg) {
  p.validate(s.spec.parties());
  if (auto r = terminal_rule(s, p)) {
    Verdict v = execute_and_verify(s, ProtocolTree::leaf(*r), p);
    v.reason = "terminal rule " + leaf_rule_name(*r);
    return v;
  }
  auto irr = is_pvm_irreducible(s, p, cfg.enumeration);
  if (irr.verdict == Irreducibility::irreducible) {
    Verdict v;
    v.status = Status::indistinguishable;
    v.certificate = irr;
    v.reason = "no nontrivial orthogonality-preserving PVM in any block";
    return v;
  }
  Searcher search(p, cfg);
  if (auto tree = search.solve(s, cfg.depth)) {
    Verdict v = execute_and_verify(s, *tree, p);
    v.reason = "protocol found and re-verified";
    return v;
  }
  Verdict v;
  v.status = Status::unknown;
  v.certificate = irr;
  v.reason = "no protocol within depth " + std::to_string(cfg.depth) + " (" + std::to_string(search.explored()) +
             " nodes expanded)";
  return v;
}

}  // namespace loc
