#include "locality/stateset.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace loc {

namespace {

std::vector<std::size_t> digits_of(std::size_t flat, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> idx(dims.size());
  for (std::size_t p = dims.size(); p-- > 0;) {
    idx[p] = flat % dims[p];
    flat /= dims[p];
  }
  return idx;
}

}  // namespace

PartySpec::PartySpec(std::vector<std::size_t> d, std::vector<std::string> l)
    : dims(std::move(d)), labels(std::move(l)) {
  if (dims.empty()) throw std::invalid_argument("party spec needs at least one party");
  for (auto x : dims)
    if (x == 0) throw std::invalid_argument("local dimension must be positive");
  if (labels.empty())
    for (std::size_t k = 0; k < dims.size(); ++k)
      labels.push_back(std::string(1, static_cast<char>('A' + k)));
  if (labels.size() != dims.size()) throw std::invalid_argument("label count mismatch");
}

std::size_t PartySpec::total() const {
  std::size_t t = 1;
  for (auto d : dims) t *= d;
  return t;
}

std::size_t PartySpec::dim_of(const std::vector<std::size_t>& group) const {
  std::size_t t = 1;
  for (auto p : group) t *= dims.at(p);
  return t;
}

std::vector<std::size_t> PartySpec::dims_of(const std::vector<std::size_t>& group) const {
  std::vector<std::size_t> out;
  for (auto p : group) out.push_back(dims.at(p));
  return out;
}

std::size_t PartySpec::index_of(const std::string& label) const {
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k] == label) return k;
  throw std::invalid_argument("unknown party label '" + label + "'");
}

std::string PartySpec::group_name(const std::vector<std::size_t>& group) const {
  std::string s;
  bool long_labels = false;
  for (auto p : group) long_labels |= labels.at(p).size() > 1;
  for (std::size_t k = 0; k < group.size(); ++k) {
    if (k && long_labels) s += ",";
    s += labels.at(group[k]);
  }
  return s;
}

std::string PartySpec::str() const {
  std::string s;
  for (std::size_t k = 0; k < dims.size(); ++k) s += (k ? "x" : "") + std::to_string(dims[k]);
  return s;
}

Partition Partition::finest(std::size_t parties) {
  Partition p;
  for (std::size_t k = 0; k < parties; ++k) p.blocks.push_back({k});
  return p;
}

Partition Partition::whole(std::size_t parties) {
  Partition p;
  p.blocks.emplace_back();
  for (std::size_t k = 0; k < parties; ++k) p.blocks[0].push_back(k);
  return p;
}

Partition Partition::parse(const std::string& text, const PartySpec& spec) {
  Partition p;
  std::stringstream ss(text);
  std::string block;
  while (std::getline(ss, block, '|')) {
    std::vector<std::size_t> b;
    if (block.find(',') != std::string::npos) {
      std::stringstream bs(block);
      std::string lab;
      while (std::getline(bs, lab, ',')) b.push_back(spec.index_of(lab));
    } else {
      for (char c : block) b.push_back(spec.index_of(std::string(1, c)));
    }
    p.blocks.push_back(std::move(b));
  }
  p.validate(spec.parties());
  return p;
}

void Partition::validate(std::size_t parties) const {
  std::vector<int> seen(parties, 0);
  for (const auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("empty partition block");
    for (auto k : b) {
      if (k >= parties) throw std::invalid_argument("partition names an unknown party");
      if (seen[k]++) throw std::invalid_argument("partition blocks overlap");
    }
  }
  for (auto c : seen)
    if (c == 0) throw std::invalid_argument("partition does not cover every party");
}

std::optional<std::size_t> Partition::block_containing(
    const std::vector<std::size_t>& group) const {
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    bool all = true;
    for (auto k : group)
      all = all && std::find(blocks[b].begin(), blocks[b].end(), k) != blocks[b].end();
    if (all) return b;
  }
  return std::nullopt;
}

std::string Partition::str(const PartySpec& spec) const {
  std::string s;
  for (std::size_t b = 0; b < blocks.size(); ++b) s += (b ? "|" : "") + spec.group_name(blocks[b]);
  return s;
}

std::vector<Partition> all_partitions(std::size_t n) {
  std::vector<Partition> out;
  if (n == 0) return out;
  std::vector<std::size_t> rgs(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t maxb) {
    if (k == n) {
      Partition p;
      p.blocks.resize(maxb + 1);
      for (std::size_t i = 0; i < n; ++i) p.blocks[rgs[i]].push_back(i);
      out.push_back(std::move(p));
      return;
    }
    for (std::size_t b = 0; b <= maxb + 1; ++b) {
      rgs[k] = b;
      rec(k + 1, std::max(maxb, b));
    }
  };
  rgs[0] = 0;
  rec(1, 0);
  return out;
}

std::vector<Partition> partitions_with_blocks(std::size_t n, std::size_t m) {
  std::vector<Partition> out;
  for (auto& p : all_partitions(n))
    if (p.size() == m) out.push_back(std::move(p));
  return out;
}

std::vector<std::string> StateSet::labels() const {
  std::vector<std::string> out;
  for (const auto& st : states) out.push_back(st.label);
  return out;
}

void StateSet::add(std::string label, Vec v) { states.push_back({std::move(label), std::move(v)}); }

void StateSet::validate() const {
  for (const auto& st : states) {
    if (st.amps.dim() != spec.total())
      throw std::invalid_argument("state '" + st.label + "' has the wrong dimension");
    if (st.amps.is_zero()) throw std::invalid_argument("state '" + st.label + "' is zero");
  }
}

LocalLayout::LocalLayout(const PartySpec& spec, std::vector<std::size_t> group)
    : group_(std::move(group)) {
  std::vector<bool> in(spec.parties(), false);
  for (auto k : group_) {
    if (k >= spec.parties() || in[k]) throw std::invalid_argument("invalid party group");
    in[k] = true;
  }
  for (std::size_t k = 0; k < spec.parties(); ++k)
    if (!in[k]) rest_.push_back(k);
  gdim_ = spec.dim_of(group_);
  rdim_ = spec.dim_of(rest_);
  const std::size_t total = spec.total();
  gidx_.resize(total);
  ridx_.resize(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    auto idx = digits_of(flat, spec.dims);
    std::size_t g = 0, r = 0;
    for (auto k : group_) g = g * spec.dims[k] + idx[k];
    for (auto k : rest_) r = r * spec.dims[k] + idx[k];
    gidx_[flat] = g;
    ridx_[flat] = r;
  }
}

Mat LocalLayout::split(const Vec& psi) const {
  if (psi.dim() != gidx_.size()) throw std::invalid_argument("state dimension mismatch");
  Mat m(gdim_, rdim_);
  for (std::size_t f = 0; f < gidx_.size(); ++f)
    if (!psi[f].is_zero()) m(gidx_[f], ridx_[f]) = psi[f];
  return m;
}

Vec LocalLayout::join(const Mat& m) const {
  Vec v(gidx_.size());
  for (std::size_t f = 0; f < gidx_.size(); ++f) v[f] = m(gidx_[f], ridx_[f]);
  return v;
}

Vec LocalLayout::act(const Mat& op, const Vec& psi) const {
  if (op.rows() != gdim_ || op.cols() != gdim_)
    throw std::invalid_argument("operator does not match group dimension");
  return join(op * split(psi));
}

std::optional<OrthogonalityWitness> check_mutual_orthogonality(const StateSet& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      Scalar v = inner(s.vec(i), s.vec(j));
      if (!v.is_zero()) return OrthogonalityWitness{i, j, v};
    }
  return std::nullopt;
}

RedundancyVerdict is_locally_redundant(const StateSet& s) {
  const std::size_t n = s.spec.parties();
  RedundancyVerdict out;
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> kept, discarded;
    for (std::size_t k = 0; k < n; ++k) ((mask >> k) & 1 ? discarded : kept).push_back(k);
    LocalLayout lay(s.spec, kept);
    std::vector<Mat> parts;
    for (const auto& st : s.states) parts.push_back(lay.split(st.amps));
    // Tr(rho_i rho_j) = ||Psi_i^dag Psi_j||^2, so trace-orthogonality means Psi_i^dag Psi_j = 0.
    bool all = true;
    for (std::size_t i = 0; i < parts.size() && all; ++i)
      for (std::size_t j = i + 1; j < parts.size() && all; ++j) {
        const Mat& a = parts[i];
        const Mat& b = parts[j];
        for (std::size_t x = 0; x < a.cols() && all; ++x)
          for (std::size_t y = 0; y < b.cols() && all; ++y) {
            Scalar acc;
            for (std::size_t k = 0; k < a.rows(); ++k) acc.add_conj_product(a(k, x), b(k, y));
            if (!acc.is_zero()) all = false;
          }
      }
    if (all) {
      out.redundant = true;
      out.discarded = discarded;
      return out;
    }
  }
  return out;
}

StateSet merge_parties(const StateSet& s, const Partition& p) {
  p.validate(s.spec.parties());
  std::vector<std::size_t> dims;
  std::vector<std::string> labels;
  for (const auto& b : p.blocks) {
    dims.push_back(s.spec.dim_of(b));
    labels.push_back(s.spec.group_name(b));
  }
  StateSet out;
  out.spec = PartySpec(dims, labels);
  out.provenance = s.provenance;
  const std::size_t total = s.spec.total();
  std::vector<std::size_t> target(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    auto idx = digits_of(flat, s.spec.dims);
    std::size_t t = 0;
    for (const auto& b : p.blocks)
      for (auto k : b) t = t * s.spec.dims[k] + idx[k];
    target[flat] = t;
  }
  for (const auto& st : s.states) {
    Vec v(total);
    for (std::size_t f = 0; f < total; ++f) v[target[f]] = st.amps[f];
    out.add(st.label, std::move(v));
  }
  return out;
}

bool is_product_across(const Vec& state, const PartySpec& spec, const Partition& p) {
  if (p.size() <= 1) return true;
  for (const auto& b : p.blocks)
    if (rank(LocalLayout(spec, b).split(state)) != 1) return false;
  return true;
}

SeparabilityResult separability_degree(const Vec& state, const PartySpec& spec) {
  if (state.is_zero()) throw std::invalid_argument("separability of zero vector");
  auto parts = all_partitions(spec.parties());
  std::stable_sort(parts.begin(), parts.end(),
                   [](const Partition& a, const Partition& b) { return a.size() > b.size(); });
  for (const auto& p : parts)
    if (is_product_across(state, spec, p)) return {p.size(), p};
  return {1, Partition::whole(spec.parties())};
}

Vec local_factor(const Vec& state, const PartySpec& spec, const std::vector<std::size_t>& group) {
  Mat m = LocalLayout(spec, group).split(state);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Vec col = m.col(c);
    if (!col.is_zero()) return col;
  }
  throw std::invalid_argument("local factor of zero vector");
}

std::vector<Vec> local_support(const StateSet& s, const std::vector<std::size_t>& group) {
  LocalLayout lay(s.spec, group);
  std::vector<Vec> cols;
  for (const auto& st : s.states) {
    Mat m = lay.split(st.amps);
    for (std::size_t c = 0; c < m.cols(); ++c) {
      Vec col = m.col(c);
      if (!col.is_zero()) cols.push_back(std::move(col));
    }
  }
  return span_basis(cols, lay.group_dim());
}

bool equal_up_to_scalars(const StateSet& a, const StateSet& b) {
  if (a.spec.dims != b.spec.dims || a.size() != b.size()) return false;
  auto canon = [](const StateSet& s) {
    std::vector<Vec> out;
    for (const auto& st : s.states) out.push_back(canonical_direction(st.amps));
    std::sort(out.begin(), out.end(), [](const Vec& x, const Vec& y) { return lex_less(x, y); });
    return out;
  };
  return canon(a) == canon(b);
}

StateSet embed_parties(const StateSet& s, const PartySpec& target,
                       const std::vector<std::size_t>& target_of,
                       const std::vector<std::size_t>& offset) {
  const std::size_t n = s.spec.parties();
  if (target_of.size() != n || offset.size() != n || target.parties() != n)
    throw std::invalid_argument("embedding needs one target party per source party");
  for (std::size_t k = 0; k < n; ++k)
    if (s.spec.dims[k] + offset[k] > target.dims.at(target_of[k]))
      throw std::invalid_argument("embedding exceeds target dimension");
  StateSet out;
  out.spec = target;
  out.provenance = s.provenance;
  for (const auto& st : s.states) {
    Vec v(target.total());
    for (std::size_t f = 0; f < st.amps.dim(); ++f) {
      if (st.amps[f].is_zero()) continue;
      auto idx = digits_of(f, s.spec.dims);
      std::vector<std::size_t> t(n);
      for (std::size_t k = 0; k < n; ++k) t[target_of[k]] = idx[k] + offset[k];
      std::size_t flat = 0;
      for (std::size_t k = 0; k < n; ++k) flat = flat * target.dims[k] + t[k];
      v[flat] = st.amps[f];
    }
    out.add(st.label, std::move(v));
  }
  return out;
}

}  // namespace loc
