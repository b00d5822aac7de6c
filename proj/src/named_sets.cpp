#include "locality/named_sets.hpp"

#include <stdexcept>

#include "locality/ket.hpp"

namespace loc {

namespace {

Vec e(std::size_t d, std::size_t k) { return Vec::basis(d, k); }

Vec t3(const Vec& a, const Vec& b, const Vec& c) { return tensor({a, b, c}); }

std::string idx(std::size_t i, std::size_t k) {
  return std::to_string(i) + "," + std::to_string(k);
}

StateSet s1() {
  return set_from_kets(PartySpec({3, 2, 3}),
                       {{"phi1_1", "0(00+01+10-11)"},
                        {"phi1_2", "0(00-01-10-11)"},
                        {"phi1_3", "1(01-11)"},
                        {"phi1_4", "2(01+02+11-12)"},
                        {"phi1_5", "2(01-02-11-12)"},
                        {"phi1_6/phi1_7", "(0\xC2\xB1" "1)(02-12)"},
                        {"phi1_8/phi1_9", "(1\xC2\xB1" "2)(00-10)"}},
                       "S1");
}

StateSet s2() {
  return set_from_kets(PartySpec({3, 2, 3}),
                       {{"phi2_1", "0(00+01+02-12)"},
                        {"phi2_2", "0(00-01-02-12)"},
                        {"phi2_3", "1(02-12)"},
                        {"phi2_4", "2(10+11+12-02)"},
                        {"phi2_5", "2(10-11-12-02)"},
                        {"phi2_6/phi2_7", "(0\xC2\xB1" "1)(10-11)"},
                        {"phi2_8/phi2_9", "(1\xC2\xB1" "2)(00-01)"}},
                       "S2");
}

StateSet relabel(StateSet s, const std::string& prefix, const std::string& provenance) {
  for (std::size_t k = 0; k < s.size(); ++k) s.states[k].label = prefix + std::to_string(k + 1);
  s.provenance = provenance;
  return s;
}

// S2 with A->B, B->C, C->A.
StateSet s2_prime() {
  return relabel(embed_parties(s2(), PartySpec({3, 3, 2}), {1, 2, 0}, {0, 0, 0}), "psi2_",
                 "S2prime");
}

// S2 with A->C, B->A, C->B.
StateSet s2_doubleprime() {
  return relabel(embed_parties(s2(), PartySpec({2, 3, 3}), {2, 0, 1}, {0, 0, 0}), "eta2_",
                 "S2doubleprime");
}

StateSet domino() {
  return set_from_kets(PartySpec({3, 3}),
                       {{"d1/d2", "0(0\xC2\xB1" "1)"},
                        {"d3/d4", "(0\xC2\xB1" "1)2"},
                        {"d5/d6", "(1\xC2\xB1" "2)0"},
                        {"d7/d8", "2(1\xC2\xB1" "2)"},
                        {"d9", "11"}},
                       "Domino");
}

StateSet s1m(std::size_t m) {
  const std::size_t D = 2 * m + 1;
  StateSet s;
  s.spec = PartySpec({D, 2, D});
  s.provenance = "S1m(m=" + std::to_string(m) + ")";
  const Vec p = e(2, 0) + e(2, 1), q = e(2, 0) - e(2, 1);
  s.add("xi1", t3(e(D, m), q, e(D, m)));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k + i < m; ++k) {
      const std::size_t a = i + 2 * k;
      s.add("xi1_" + idx(i, k), tensor(e(D, i), tensor(p, e(D, a)) + tensor(q, e(D, a + 1))));
      s.add("xi2_" + idx(i, k), tensor(e(D, i), tensor(q, e(D, a)) - tensor(p, e(D, a + 1))));
      s.add("xi3_" + idx(i, k),
            tensor(e(D, 2 * m - i), tensor(p, e(D, a + 1)) + tensor(q, e(D, a + 2))));
      s.add("xi4_" + idx(i, k),
            tensor(e(D, 2 * m - i), tensor(q, e(D, a + 1)) - tensor(p, e(D, a + 2))));
      s.add("xi5+_" + idx(i, k), t3(e(D, a + 1) + e(D, a + 2), q, e(D, i)));
      s.add("xi5-_" + idx(i, k), t3(e(D, a + 1) - e(D, a + 2), q, e(D, i)));
      // Charlie index 2m-i: the mirror of xi5's index i, as in S1 (m=1).
      s.add("xi6+_" + idx(i, k), t3(e(D, a) + e(D, a + 1), q, e(D, 2 * m - i)));
      s.add("xi6-_" + idx(i, k), t3(e(D, a) - e(D, a + 1), q, e(D, 2 * m - i)));
    }
  return s;
}

StateSet s2m(std::size_t m) {
  const std::size_t D = 2 * m + 1;
  StateSet s;
  s.spec = PartySpec({D, 2, D});
  s.provenance = "S2m(m=" + std::to_string(m) + ")";
  auto b = [](std::size_t j) { return e(2, j); };
  s.add("zeta1", t3(e(D, m), b(0) - b(1), e(D, 2 * m)));
  for (std::size_t i = 0; i < m; ++i) {
    const bool odd = (m + i) % 2 == 1;
    const Vec u = odd ? b(0) : b(1), ubar = odd ? b(1) : b(0);
    const Vec tp = e(D, 2 * m - 2) + e(D, 2 * m - 1) + e(D, 2 * m);
    const Vec tm = e(D, 2 * m - 2) - e(D, 2 * m - 1) - e(D, 2 * m);
    const Vec last = e(D, 2 * m);
    s.add("zeta1_" + idx(i, 1), tensor(e(D, i), tensor(u, tp) - tensor(ubar, last)));
    s.add("zeta1_" + idx(i, 2), tensor(e(D, i), tensor(u, tm) - tensor(ubar, last)));
    s.add("zeta1_" + idx(i, 3), tensor(e(D, 2 * m - i), tensor(ubar, tp) - tensor(u, last)));
    s.add("zeta1_" + idx(i, 4), tensor(e(D, 2 * m - i), tensor(ubar, tm) - tensor(u, last)));
    for (std::size_t k = 0; k < 2 * m - 2 * i; ++k) {
      const Vec v = k % 2 == 1 ? b(0) : b(1);
      const Vec c = e(D, 2 * i) - e(D, 2 * i + 1);
      s.add("zeta1+_" + idx(i, 4 + k), t3(e(D, i + k) + e(D, i + k + 1), v, c));
      s.add("zeta1-_" + idx(i, 4 + k), t3(e(D, i + k) - e(D, i + k + 1), v, c));
    }
    auto block = [&](std::size_t c, const std::string& tag, const Vec& bob_lo, const Vec& bob_hi) {
      const Vec pp = e(D, c) + e(D, c + 1) + e(D, c + 2) - e(D, c + 3);
      const Vec qq = e(D, c) - e(D, c + 1) - e(D, c + 2) - e(D, c + 3);
      s.add("zeta" + tag + "a", t3(e(D, i), bob_lo, pp));
      s.add("zeta" + tag + "b", t3(e(D, i), bob_lo, qq));
      s.add("zeta" + tag + "c", t3(e(D, 2 * m - i), bob_hi, pp));
      s.add("zeta" + tag + "d", t3(e(D, 2 * m - i), bob_hi, qq));
    };
    // The bracket bounds are floors; both blocks are empty for m = 1.
    if (m >= 2)
      for (std::size_t k1 = 0; k1 < (m - i) / 2; ++k1)
        block(2 * i + 4 * k1, "2-5_" + idx(i, k1), b(0), b(1));
    if (m >= 3)
      for (std::size_t k2 = 0; k2 + 1 <= (m - i - 1) / 2; ++k2)
        block(2 * i + 4 * k2 + 2, "6-9_" + idx(i, k2), b(1), b(0));
  }
  return s;
}

StateSet union_s() {
  PartySpec spec({8, 8, 8});
  StateSet out;
  out.spec = spec;
  out.provenance = "UnionS";
  for (const auto& part : {embed_parties(s2(), spec, {0, 1, 2}, {0, 0, 0}),
                           embed_parties(s2_prime(), spec, {0, 1, 2}, {3, 2, 3}),
                           embed_parties(s2_doubleprime(), spec, {0, 1, 2}, {6, 5, 5})})
    for (const auto& st : part.states) out.states.push_back(st);
  return out;
}

}  // namespace

NamedSet parse_set_name(const std::string& name) {
  if (name == "S1") return NamedSet::S1;
  if (name == "S2") return NamedSet::S2;
  if (name == "S2prime" || name == "S2'") return NamedSet::S2prime;
  if (name == "S2doubleprime" || name == "S2''") return NamedSet::S2doubleprime;
  if (name == "S1m") return NamedSet::S1m;
  if (name == "S2m") return NamedSet::S2m;
  if (name == "Domino" || name == "domino") return NamedSet::Domino;
  if (name == "UnionS" || name == "union") return NamedSet::UnionS;
  throw std::invalid_argument("unknown set name '" + name + "'");
}

std::string set_name(NamedSet n) {
  switch (n) {
    case NamedSet::S1: return "S1";
    case NamedSet::S2: return "S2";
    case NamedSet::S2prime: return "S2prime";
    case NamedSet::S2doubleprime: return "S2doubleprime";
    case NamedSet::S1m: return "S1m";
    case NamedSet::S2m: return "S2m";
    case NamedSet::Domino: return "Domino";
    case NamedSet::UnionS: return "UnionS";
  }
  return "?";
}

std::vector<std::string> named_set_names() {
  return {"S1", "S2", "S2prime", "S2doubleprime", "S1m", "S2m", "Domino", "UnionS"};
}

StateSet build_named_set(NamedSet name, std::optional<std::size_t> m) {
  const bool needs_m = name == NamedSet::S1m || name == NamedSet::S2m;
  if (needs_m && (!m || *m == 0)) throw std::invalid_argument("S1m/S2m need m >= 1");
  switch (name) {
    case NamedSet::S1: return s1();
    case NamedSet::S2: return s2();
    case NamedSet::S2prime: return s2_prime();
    case NamedSet::S2doubleprime: return s2_doubleprime();
    case NamedSet::S1m: return s1m(*m);
    case NamedSet::S2m: return s2m(*m);
    case NamedSet::Domino: return domino();
    case NamedSet::UnionS: return union_s();
  }
  throw std::invalid_argument("unknown set");
}

StateSet set_from_kets(const PartySpec& spec,
                       const std::vector<std::pair<std::string, std::string>>& kets,
                       std::string provenance) {
  StateSet s;
  s.spec = spec;
  s.provenance = std::move(provenance);
  for (const auto& [label, text] : kets) {
    auto variants = expand_pm(text);
    if (variants.size() == 1) {
      s.add(label, ket(text, spec.dims));
    } else {
      std::size_t slash = label.find('/');
      const bool named = slash != std::string::npos;
      s.add(named ? label.substr(0, slash) : label + "+", ket(variants[0], spec.dims));
      s.add(named ? label.substr(slash + 1) : label + "-", ket(variants[1], spec.dims));
    }
  }
  s.validate();
  return s;
}

std::vector<UnionEmbedding> union_embeddings() {
  return {{"S2", {{0, 1, 2}, {0, 1}, {0, 1, 2}}},
          {"S2prime", {{3, 4, 5}, {2, 3, 4}, {3, 4}}},
          {"S2doubleprime", {{6, 7}, {5, 6, 7}, {5, 6, 7}}}};
}

}  // namespace loc
