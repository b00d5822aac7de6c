#include "locality/measurement.hpp"

#include <algorithm>
#include <stdexcept>

#include "locality/ket.hpp"

namespace loc {

bool is_projector(const Mat& m) { return m.is_square() && m.is_hermitian() && m.is_idempotent(); }

PVM PVM::from_elements(std::vector<Mat> elements, bool complete) {
  if (elements.empty()) throw std::invalid_argument("PVM needs at least one element");
  PVM p;
  p.dim = elements[0].rows();
  p.elements = std::move(elements);
  if (complete) {
    Mat rest = Mat::identity(p.dim);
    for (const auto& e : p.elements) rest -= e;
    if (!rest.is_zero()) p.elements.push_back(std::move(rest));
  }
  p.validate();
  return p;
}

void PVM::validate() const {
  if (elements.empty()) throw std::invalid_argument("PVM needs at least one element");
  Mat sum(dim, dim);
  for (std::size_t a = 0; a < elements.size(); ++a) {
    const Mat& e = elements[a];
    if (e.rows() != dim || e.cols() != dim)
      throw std::invalid_argument("PVM element has the wrong shape");
    if (!is_projector(e))
      throw std::invalid_argument("PVM element " + std::to_string(a) + " is not a projector");
    for (std::size_t b = a + 1; b < elements.size(); ++b)
      if (!(e * elements[b]).is_zero())
        throw std::invalid_argument("PVM elements " + std::to_string(a) + " and " +
                                    std::to_string(b) + " are not orthogonal");
    sum += e;
  }
  if (sum != Mat::identity(dim)) throw std::invalid_argument("PVM elements do not sum to I");
}

bool is_trivial(const PVM& p) {
  const Mat id = Mat::identity(p.dim);
  for (const auto& e : p.elements)
    if (!e.is_zero() && e != id) return false;
  return true;
}

void check_compatible(const LocalPVM& lp, const PartySpec& spec) {
  lp.partition.validate(spec.parties());
  if (!lp.partition.block_containing(lp.group))
    throw std::invalid_argument("measured group is not inside a partition block");
  if (lp.pvm.dim != spec.dim_of(lp.group))
    throw std::invalid_argument("PVM dimension " + std::to_string(lp.pvm.dim) +
                                " does not match group dimension " +
                                std::to_string(spec.dim_of(lp.group)));
}

LocalPVM make_local_pvm(const PartySpec& spec, const std::vector<std::size_t>& group,
                        const Partition& partition, std::vector<Mat> elements) {
  LocalPVM lp{PVM::from_elements(std::move(elements), true), group, partition};
  check_compatible(lp, spec);
  return lp;
}

LocalPVM make_local_pvm(const PartySpec& spec, const std::vector<std::size_t>& group,
                        const Partition& partition, const std::string& pvm_text) {
  return make_local_pvm(spec, group, partition, parse_pvm_elements(pvm_text, spec.dims_of(group)));
}

std::vector<Mat> embed(const LocalPVM& lp, const PartySpec& spec) {
  check_compatible(lp, spec);
  LocalLayout lay(spec, lp.group);
  const std::size_t total = spec.total();
  std::vector<Mat> out;
  for (const auto& e : lp.pvm.elements) {
    Mat g(total, total);
    for (std::size_t f1 = 0; f1 < total; ++f1)
      for (std::size_t f2 = 0; f2 < total; ++f2)
        if (lay.rest_index(f1) == lay.rest_index(f2))
          g(f1, f2) = e(lay.group_index(f1), lay.group_index(f2));
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<Branch> apply(const StateSet& s, const LocalPVM& lp) {
  check_compatible(lp, s.spec);
  LocalLayout lay(s.spec, lp.group);
  std::vector<Mat> parts;
  for (const auto& st : s.states) parts.push_back(lay.split(st.amps));
  std::vector<Branch> out;
  for (std::size_t k = 0; k < lp.pvm.size(); ++k) {
    Branch b;
    b.outcome = k;
    b.states.spec = s.spec;
    b.states.provenance = s.provenance;
    for (std::size_t i = 0; i < s.size(); ++i) {
      Mat img = lp.pvm.elements[k] * parts[i];
      if (img.is_zero()) {
        b.annihilated.push_back(s.states[i].label);
      } else {
        b.states.add(s.states[i].label, lay.join(img));
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::optional<OPWitness> preserves_orthogonality(const StateSet& s, const LocalPVM& lp) {
  check_compatible(lp, s.spec);
  LocalLayout lay(s.spec, lp.group);
  std::vector<Mat> parts;
  for (const auto& st : s.states) parts.push_back(lay.split(st.amps));
  for (std::size_t k = 0; k < lp.pvm.size(); ++k) {
    const Mat& e = lp.pvm.elements[k];
    std::vector<Mat> imgs;
    for (const auto& m : parts) imgs.push_back(e * m);
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (std::size_t j = i + 1; j < parts.size(); ++j) {
        Scalar v;
        const Mat& a = parts[i];
        const Mat& b = imgs[j];
        for (std::size_t r = 0; r < a.rows(); ++r)
          for (std::size_t c = 0; c < a.cols(); ++c) v.add_conj_product(a(r, c), b(r, c));
        if (!v.is_zero()) return OPWitness{k, i, j, v};
      }
  }
  return std::nullopt;
}

bool is_trivial_on(const StateSet& s, const LocalPVM& lp) {
  check_compatible(lp, s.spec);
  auto support = local_support(s, lp.group);
  if (support.size() <= 1) return true;
  Mat b = Mat::from_columns(support, lp.pvm.dim);
  Mat bd = b.adjoint();
  Mat gram = bd * b;
  for (const auto& e : lp.pvm.elements) {
    Mat c = bd * e * b;
    Scalar ratio = c(0, 0) / gram(0, 0);
    if (c != ratio * gram) return false;
  }
  return true;
}

std::string pvm_key(const PVM& p) {
  std::vector<std::string> parts;
  for (const auto& e : p.elements) parts.push_back(e.str());
  std::sort(parts.begin(), parts.end());
  std::string key = std::to_string(p.dim) + ":";
  for (const auto& s : parts) key += s + "|";
  return key;
}

}  // namespace loc
