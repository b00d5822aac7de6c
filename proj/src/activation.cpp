#include "locality/activation.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <set>

#include "locality/ket.hpp"
#include "locality/named_sets.hpp"

namespace loc {

namespace {

// Support masks (bit i: coefficient on basis vector i) of the domino states,
// in the order of domino_reference().
constexpr std::array<std::pair<unsigned, unsigned>, 9> kDominoMasks = {{
    {1, 3}, {1, 3}, {3, 4}, {3, 4}, {6, 1}, {6, 1}, {4, 6}, {4, 6}, {2, 2},
}};

struct SideFit {
  std::array<std::size_t, 3> dirs;
  std::vector<unsigned> masks;  // per state
};

// Ordered orthogonal triples of factor directions in which every factor has
// one or two nonzero coordinates of equal weight, with the mask multiset the
// domino side needs.
std::vector<SideFit> side_fits(const std::vector<Vec>& factors, const std::vector<Vec>& dirs, bool side_a) {
  std::multiset<unsigned> want;
  for (const auto& m : kDominoMasks) want.insert(side_a ? m.first : m.second);
  std::vector<SideFit> out;
  const std::size_t n = dirs.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        if (x == y || y == z || x == z) continue;
        const std::array<std::size_t, 3> idx{x, y, z};
        bool orth = inner(dirs[x], dirs[y]).is_zero() && inner(dirs[y], dirs[z]).is_zero() &&
                    inner(dirs[x], dirs[z]).is_zero();
        if (!orth) continue;
        std::array<mpq_class, 3> norm;
        for (int i = 0; i < 3; ++i) norm[i] = inner(dirs[idx[i]], dirs[idx[i]]).re();
        SideFit fit{idx, {}};
        bool ok = true;
        for (const auto& f : factors) {
          unsigned mask = 0;
          std::array<mpq_class, 3> w;
          for (int i = 0; i < 3; ++i) {
            Scalar c = inner(dirs[idx[i]], f);
            w[i] = c.norm2() / norm[i];
            if (!c.is_zero()) mask |= 1u << i;
          }
          int bits = std::popcount(mask);
          if (bits == 0 || bits == 3) {
            ok = false;
            break;
          }
          if (bits == 2) {
            std::vector<mpq_class> nz;
            for (int i = 0; i < 3; ++i)
              if (mask >> i & 1) nz.push_back(w[i]);
            if (nz[0] != nz[1]) {
              ok = false;
              break;
            }
          }
          fit.masks.push_back(mask);
        }
        if (!ok) continue;
        if (std::multiset<unsigned>(fit.masks.begin(), fit.masks.end()) != want) continue;
        out.push_back(std::move(fit));
      }
  return out;
}

std::vector<Vec> distinct_directions(const std::vector<Vec>& vs) {
  std::vector<Vec> out;
  for (const auto& v : vs) {
    bool dup = false;
    for (const auto& u : out) dup = dup || parallel(u, v);
    if (!dup) out.push_back(canonical_direction(v));
  }
  return out;
}

bool branch_distinguishable(const StateSet& s, const Partition& p, const EnumerationConfig& cfg) {
  if (s.size() <= 2) return true;
  SearchConfig sc;
  sc.enumeration = cfg;
  sc.depth = 3;
  return lpcc_search(s, p, sc).status == Status::distinguishable;
}

// Two-block partitions obtained by merging blocks of p.
std::vector<Partition> two_block_coarsenings(const Partition& p) {
  std::vector<Partition> out;
  if (p.size() == 2) return {p};
  if (p.size() < 2) return out;
  for (const auto& q : partitions_with_blocks(p.size(), 2)) {
    Partition c;
    for (const auto& qb : q.blocks) {
      std::vector<std::size_t> merged;
      for (auto b : qb) merged.insert(merged.end(), p.blocks[b].begin(), p.blocks[b].end());
      c.blocks.push_back(merged);
    }
    out.push_back(std::move(c));
  }
  // A lone first block first, so A|BC is tried before AB|C.
  std::stable_sort(out.begin(), out.end(),
                   [](const Partition& a, const Partition& b) { return a.blocks[0].size() < b.blocks[0].size(); });
  return out;
}

}  // namespace

StateSet domino_reference() {
  return set_from_kets(PartySpec({3, 3}),
                       {{"d1", "|0>|0+1>"},
                        {"d2", "|0>|0-1>"},
                        {"d3", "|0+1>|2>"},
                        {"d4", "|0-1>|2>"},
                        {"d5", "|1+2>|0>"},
                        {"d6", "|1-2>|0>"},
                        {"d7", "|2>|1+2>"},
                        {"d8", "|2>|1-2>"},
                        {"d9", "|1>|1>"}},
                       "domino");
}

std::string DominoWitness::str(const PartySpec& spec) const {
  std::string out;
  const std::vector<Vec>* bases[2] = {&basis_a, &basis_b};
  for (int side = 0; side < 2; ++side) {
    const auto dims = spec.dims_of(partition.blocks.at(side));
    out += (side ? "; " : "") + spec.group_name(partition.blocks[side]) + " {";
    for (std::size_t i = 0; i < bases[side]->size(); ++i)
      out += (i ? ", " : "") + format_ket((*bases[side])[i], dims) + "->" + std::to_string(i);
    out += "}";
  }
  return out;
}

std::optional<DominoWitness> domino_match(const StateSet& s) {
  if (s.spec.parties() != 2 || s.size() != 9) return std::nullopt;
  Partition fine = Partition::finest(2);
  for (const auto& st : s.states)
    if (!is_product_across(st.amps, s.spec, fine)) return std::nullopt;
  if (local_support(s, {0}).size() != 3 || local_support(s, {1}).size() != 3) return std::nullopt;
  std::vector<Vec> fa, fb;
  for (const auto& st : s.states) {
    fa.push_back(local_factor(st.amps, s.spec, {0}));
    fb.push_back(local_factor(st.amps, s.spec, {1}));
  }
  auto da = distinct_directions(fa), db = distinct_directions(fb);
  auto fits_a = side_fits(fa, da, true);
  if (fits_a.empty()) return std::nullopt;
  auto fits_b = side_fits(fb, db, false);
  for (const auto& a : fits_a)
    for (const auto& b : fits_b) {
      std::vector<std::size_t> perm(9);
      std::array<bool, 9> used{};
      bool ok = true;
      for (std::size_t k = 0; k < 9 && ok; ++k) {
        ok = false;
        for (std::size_t d = 0; d < 9; ++d) {
          if (used[d] || kDominoMasks[d] != std::make_pair(a.masks[k], b.masks[k])) continue;
          used[d] = true;
          perm[k] = d;
          ok = true;
          break;
        }
      }
      if (!ok) continue;
      DominoWitness w;
      w.partition = fine;
      for (auto i : a.dirs) w.basis_a.push_back(da[i]);
      for (auto i : b.dirs) w.basis_b.push_back(db[i]);
      w.permutation = perm;
      return w;
    }
  return std::nullopt;
}

std::optional<DominoWitness> domino_match(const StateSet& s, const Partition& p) {
  if (p.size() != 2) return std::nullopt;
  auto w = domino_match(merge_parties(s, p));
  if (w) w->partition = p;
  return w;
}

ActivationReport verify_activation(const StateSet& s, const LocalPVM& first, const Partition& p,
                                   const EnumerationConfig& cfg) {
  p.validate(s.spec.parties());
  if (!p.block_containing(first.group))
    throw std::invalid_argument("first round group is not inside one block of " + p.str(s.spec));
  if (is_trivial(first.pvm) || is_trivial_on(s, first))
    throw std::invalid_argument("first round is trivial on the set");
  if (auto w = preserves_orthogonality(s, first))
    throw std::invalid_argument("first round spoils orthogonality: outcome " + std::to_string(w->outcome) + " on " +
                                s.states[w->i].label + ", " + s.states[w->j].label);
  ActivationReport rep;
  rep.first = first;
  rep.partition = p;
  rep.redundancy = is_locally_redundant(s);
  bool all = true;
  std::string failed;
  for (auto& b : apply(s, first)) {
    if (b.states.empty()) continue;
    ActivationBranch br;
    br.outcome = b.outcome;
    br.certificate = is_pvm_irreducible(b.states, p, cfg);
    br.certified = b.states.size() >= 2 && br.certificate.verdict == Irreducibility::irreducible;
    for (const auto& q : two_block_coarsenings(p)) {
      if (auto w = domino_match(b.states, q)) {
        auto merged = merge_parties(b.states, q);
        if (is_pvm_irreducible(merged, Partition::finest(2), cfg).verdict != Irreducibility::irreducible)
          throw std::logic_error("domino match on a set not certified irreducible");
        br.domino = std::move(w);
        break;
      }
    }
    if (br.certified)
      br.status = Status::indistinguishable;
    else if (branch_distinguishable(b.states, p, cfg))
      br.status = Status::distinguishable;
    if (!br.certified) {
      all = false;
      if (failed.empty())
        failed = "outcome " + std::to_string(b.outcome) + " is " +
                 (br.status == Status::distinguishable ? "distinguishable" : "not certified");
    }
    br.states = std::move(b.states);
    rep.branches.push_back(std::move(br));
  }
  if (rep.branches.empty()) all = false;
  if (!all)
    rep.reason = failed;
  else if (rep.redundancy.redundant)
    rep.reason = "every branch is indistinguishable but the set is locally redundant";
  else
    rep.reason = "every branch is certified PVM-irreducible";
  rep.activated = all && !rep.redundancy.redundant;
  return rep;
}

std::string locality_class_name(LocalityClass c) {
  switch (c) {
    case LocalityClass::strong_local_evidence: return "strong-local-evidence";
    case LocalityClass::type_i: return "TYPE-I";
    case LocalityClass::type_ii: return "TYPE-II";
    case LocalityClass::indistinguishable_already: return "indistinguishable-already";
    case LocalityClass::unknown: return "unknown";
  }
  return "?";
}

bool enumeration_is_complete(const StateSet& s, const std::vector<std::size_t>& group, const SolverConfig& cfg) {
  const std::size_t r = local_support(s, group).size();
  if (r <= 1) return true;
  if (r != s.spec.dim_of(group) || r > 3) return false;
  SolverConfig exact = cfg;
  exact.exact_only = true;
  auto rep = rank1_op_directions(s, group, exact);
  return rep.complete && rep.families.empty();
}

namespace {

std::optional<std::string> structural_strong_local(const StateSet& s) {
  if (s.size() <= 2) return "at most two orthogonal states";
  const auto fine = Partition::finest(s.spec.parties());
  bool product = true;
  for (const auto& st : s.states) product = product && is_product_across(st.amps, s.spec, fine);
  if (!product) return std::nullopt;
  if (s.size() == 3) return "three orthogonal product states";
  if (s.spec.parties() == 2)
    for (std::size_t k = 0; k < 2; ++k)
      if (local_support(s, {k}).size() <= 2) return "orthogonal product set with a two-dimensional side";
  return std::nullopt;
}

bool same_parties(std::vector<std::size_t> a, std::vector<std::size_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

Partition pair_partition(std::size_t n, const std::vector<std::size_t>& pair) {
  Partition p;
  p.blocks.push_back(pair);
  for (std::size_t k = 0; k < n; ++k)
    if (std::find(pair.begin(), pair.end(), k) == pair.end()) p.blocks.push_back({k});
  return p;
}

}  // namespace

ClassifyResult classify(const StateSet& s, const std::vector<std::vector<std::size_t>>& joint_pairs,
                        const ClassifyConfig& cfg) {
  ClassifyResult res;
  if (auto why = structural_strong_local(s)) {
    res.cls = LocalityClass::strong_local_evidence;
    res.exact = true;
    res.exhaustive = true;
    res.trace.push_back("structural: " + *why);
    return res;
  }
  const std::size_t n = s.spec.parties();
  const Partition fine = Partition::finest(n);
  EnumerationConfig ecfg = cfg.search.enumeration;
  ecfg.solver.exact_only = true;
  SearchConfig scfg = cfg.search;
  scfg.enumeration = ecfg;
  Verdict base = lpcc_search(s, fine, scfg);
  res.trace.push_back("lpcc search: " + status_name(base.status) + " (" + base.reason + ")");
  if (base.status == Status::indistinguishable) {
    res.cls = LocalityClass::indistinguishable_already;
    res.exact = true;
    return res;
  }
  bool exhaustive = true;
  for (std::size_t k = 0; k < n; ++k) {
    auto pvms = enumerate_op_pvms(s, {k}, fine, ecfg);
    bool complete = enumeration_is_complete(s, {k}, ecfg.solver);
    exhaustive = exhaustive && complete;
    res.trace.push_back("party " + s.spec.labels[k] + ": " + std::to_string(pvms.size()) + " OP PVMs" +
                        (complete ? " (complete)" : " (partial)"));
    for (const auto& lp : pvms) {
      auto rep = verify_activation(s, lp, fine, ecfg);
      if (rep.activated) {
        res.cls = LocalityClass::type_i;
        res.witness = std::move(rep);
        res.exhaustive = exhaustive;
        return res;
      }
    }
  }
  for (const auto& pair : joint_pairs) {
    Partition p = pair_partition(n, pair);
    std::vector<LocalPVM> cands;
    for (const auto& c : cfg.joint_candidates)
      if (same_parties(c.group, pair)) cands.push_back({c.pvm, c.group, p});
    bool enumerated = s.spec.dim_of(pair) <= cfg.max_joint_dim;
    if (enumerated) {
      auto more = enumerate_op_pvms(s, pair, p, ecfg);
      cands.insert(cands.end(), more.begin(), more.end());
    }
    exhaustive = false;  // joint groups are never listed completely
    res.trace.push_back("joint " + s.spec.group_name(pair) + ": " + std::to_string(cands.size()) + " candidates" +
                        (enumerated ? "" : " (verification only)"));
    for (const auto& lp : cands) {
      if (is_trivial(lp.pvm) || is_trivial_on(s, lp) || preserves_orthogonality(s, lp)) continue;
      auto rep = verify_activation(s, lp, p, ecfg);
      if (rep.activated) {
        res.cls = LocalityClass::type_ii;
        res.witness = std::move(rep);
        res.exhaustive = exhaustive;
        return res;
      }
    }
  }
  res.cls = LocalityClass::strong_local_evidence;
  res.exhaustive = exhaustive;
  return res;
}

Dim2NoGo check_dim2_nogo(const StateSet& s, const SolverConfig& cfg) {
  if (s.spec.parties() != 3 || s.spec.dims[1] != 2 || s.spec.dims[2] != 2)
    throw std::invalid_argument("expected an n x 2 x 2 system, got " + s.spec.str());
  const Partition a_bc{{{0}, {1, 2}}};
  for (const auto& st : s.states)
    if (!is_product_across(st.amps, s.spec, a_bc))
      throw std::invalid_argument("state " + st.label + " is entangled across A|BC");
  if (check_mutual_orthogonality(s)) throw std::invalid_argument("set is not orthogonal");
  Dim2NoGo out;
  const Partition fine = Partition::finest(3);
  EnumerationConfig ecfg;
  ecfg.solver = cfg;
  ecfg.solver.exact_only = true;
  out.confirmed = true;
  for (std::size_t k : {1, 2}) {
    auto pvms = enumerate_op_pvms(s, {k}, fine, ecfg);
    // Fixed bases as well, OP or not: the reduction is structural.
    for (const char* text : {"0;1", "0+1;0-1"}) pvms.push_back(make_local_pvm(s.spec, {k}, fine, text));
    for (const auto& lp : pvms) {
      Dim2Step step{{k}, lp, {}, true};
      for (const auto& b : apply(s, lp)) {
        step.branch_sizes.push_back(b.states.size());
        if (b.states.empty()) continue;
        for (const auto& st : b.states.states)
          step.reduced = step.reduced && is_product_across(st.amps, s.spec, fine);
        step.reduced = step.reduced && local_support(b.states, {k}).size() <= 1;
      }
      out.confirmed = out.confirmed && step.reduced;
      out.steps.push_back(std::move(step));
    }
  }
  out.alice_candidates = enumerate_op_pvms(s, {0}, fine, ecfg);
  out.reason = out.confirmed ? "every qubit-party round leaves product sets with one qubit party fixed"
                             : "a qubit-party round left a non-product branch";
  return out;
}

std::string tri_name(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    case Tri::unknown: return "unknown";
  }
  return "?";
}

MActivation is_m_activable(const StateSet& s, std::size_t m, bool strong, const MActivationConfig& cfg) {
  const std::size_t n = s.spec.parties();
  if (m < 2 || m > n) throw std::invalid_argument("m must lie in [2, " + std::to_string(n) + "]");
  MActivation out;
  EnumerationConfig ecfg = cfg.enumeration;
  ecfg.solver.exact_only = true;
  bool settled_no = true;
  for (const auto& p : partitions_with_blocks(n, m)) {
    std::vector<LocalPVM> cands;
    bool complete = true;
    for (const auto& c : cfg.candidates)
      if (p.block_containing(c.group)) cands.push_back({c.pvm, c.group, p});
    for (const auto& block : p.blocks) {
      for (auto k : block) {
        auto pvms = enumerate_op_pvms(s, {k}, p, ecfg);
        cands.insert(cands.end(), pvms.begin(), pvms.end());
        complete = complete && enumeration_is_complete(s, {k}, ecfg.solver);
      }
      if (block.size() > 1) {
        complete = complete && local_support(s, block).size() <= 1;
        if (s.spec.dim_of(block) <= cfg.max_joint_dim) {
          auto pvms = enumerate_op_pvms(s, block, p, ecfg);
          cands.insert(cands.end(), pvms.begin(), pvms.end());
        }
      }
    }
    bool refuted_all = true;
    for (const auto& lp : cands) {
      if (is_trivial(lp.pvm) || is_trivial_on(s, lp) || preserves_orthogonality(s, lp)) continue;
      auto rep = verify_activation(s, lp, p, ecfg);
      if (rep.activated) {
        if (!strong) {
          out.verdict = Tri::yes;
          out.trace.push_back(p.str(s.spec) + ": activated by " + s.spec.group_name(lp.group));
          out.witness = std::move(rep);
          return out;
        }
        for (const auto& q : partitions_with_blocks(n, m - 1)) {
          bool ok = true;
          for (const auto& b : rep.branches)
            ok = ok && b.states.size() >= 2 &&
                 is_pvm_irreducible(b.states, q, ecfg).verdict == Irreducibility::irreducible;
          if (ok) {
            out.verdict = Tri::yes;
            out.trace.push_back(p.str(s.spec) + ": activated by " + s.spec.group_name(lp.group) +
                                ", branches irreducible in " + q.str(s.spec));
            out.witness = std::move(rep);
            out.coarser = q;
            return out;
          }
        }
        refuted_all = false;
        continue;
      }
      bool refuted = std::any_of(rep.branches.begin(), rep.branches.end(),
                                 [](const ActivationBranch& b) { return b.status == Status::distinguishable; });
      refuted_all = refuted_all && (refuted || rep.redundancy.redundant);
    }
    out.trace.push_back(p.str(s.spec) + ": " + std::to_string(cands.size()) + " candidates, " +
                        (complete && refuted_all ? "none activates (exhaustive)" : "none activates (partial)"));
    settled_no = settled_no && complete && refuted_all;
  }
  out.verdict = settled_no ? Tri::no : Tri::unknown;
  return out;
}

}  // namespace loc
