#include "locality/random_sets.hpp"

#include <algorithm>

namespace loc {

Scalar random_scalar(std::mt19937_64& rng, bool complex) {
  std::uniform_int_distribution<int> d(-3, 3);
  return complex ? Scalar(mpq_class(d(rng)), mpq_class(d(rng))) : Scalar(d(rng));
}

Vec random_vec(std::mt19937_64& rng, std::size_t dim, bool complex) {
  Vec v(dim);
  do {
    for (std::size_t i = 0; i < dim; ++i) v[i] = random_scalar(rng, complex);
  } while (v.is_zero());
  return v;
}

Mat random_mat(std::mt19937_64& rng, std::size_t r, std::size_t c, bool sparse) {
  std::uniform_int_distribution<int> keep(0, 2);
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (!sparse || keep(rng) == 0) m(i, j) = random_scalar(rng);
  return m;
}

namespace {

std::vector<Vec> random_basis(std::mt19937_64& rng, std::size_t d, bool complex) {
  std::vector<Vec> raw;
  for (std::size_t k = 0; k < d; ++k) raw.push_back(random_vec(rng, d, complex));
  for (std::size_t k = 0; k < d; ++k) raw.push_back(Vec::basis(d, k));
  return gram_schmidt(raw);
}

Vec perp2(const Vec& a) { return Vec{-a[1].conj(), a[0].conj()}; }

}  // namespace

StateSet random_product_set(std::mt19937_64& rng, const std::vector<std::size_t>& dims, std::size_t count) {
  StateSet s;
  s.spec = PartySpec(dims);
  std::vector<std::vector<Vec>> pool;
  for (auto d : dims) pool.push_back(random_basis(rng, d, false));
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t n = 0; n < count && n < total; ++n) {
    std::size_t flat = order[n];
    std::vector<Vec> factors(dims.size());
    for (std::size_t p = dims.size(); p-- > 0;) {
      factors[p] = pool[p][flat % dims[p]];
      flat /= dims[p];
    }
    s.add("s" + std::to_string(n), tensor(factors));
  }
  return s;
}

StateSet structured_2xn(std::mt19937_64& rng, std::size_t n, bool q_first) {
  auto basis = random_basis(rng, n, true);
  std::uniform_int_distribution<std::size_t> chunk(1, n);
  std::uniform_int_distribution<int> coin(0, 2);
  StateSet s;
  s.spec = q_first ? PartySpec({2, n}) : PartySpec({n, 2});
  std::size_t next = 0, id = 0;
  while (next < n) {
    std::size_t len = std::min(chunk(rng), n - next);
    std::vector<Vec> span(basis.begin() + next, basis.begin() + next + len);
    next += len;
    Vec alpha = random_vec(rng, 2);
    auto emit = [&](const Vec& q, const std::vector<Vec>& etas) {
      for (const auto& e : etas) s.add("t" + std::to_string(id++), q_first ? tensor(q, e) : tensor(e, q));
    };
    emit(alpha, span);
    if (coin(rng)) {
      std::vector<Vec> mixed;
      for (std::size_t k = 0; k < len; ++k) {
        Vec v(n);
        for (const auto& b : span) v += random_scalar(rng) * b;
        mixed.push_back(v);
      }
      for (const auto& b : span) mixed.push_back(b);
      emit(perp2(alpha), gram_schmidt(mixed));
    }
  }
  return s;
}

PlantedSet planted_set(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<std::size_t> dims{static_cast<std::size_t>(2 + coin(rng)), static_cast<std::size_t>(2 + coin(rng))};
  if (coin(rng)) dims.push_back(2);
  const std::size_t n = dims.size();
  std::size_t at = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  const std::size_t d = dims[at];

  Vec theta = random_vec(rng, d);
  std::vector<Vec> raw{theta};
  for (std::size_t k = 0; k < d; ++k) raw.push_back(random_vec(rng, d));
  for (std::size_t k = 0; k < d; ++k) raw.push_back(Vec::basis(d, k));
  auto local = gram_schmidt(raw);  // local[0] == theta

  std::vector<std::size_t> rest_dims;
  for (std::size_t p = 0; p < n; ++p)
    if (p != at) rest_dims.push_back(dims[p]);
  auto rest_basis = [&] {
    auto rs = random_product_set(rng, rest_dims, 1u << 10);
    std::vector<Vec> out;
    for (const auto& st : rs.states) out.push_back(st.amps);
    return out;
  };
  // Rest vectors are flattened in ascending party order.
  PartySpec spec(dims);
  LocalLayout lay(spec, {at});
  auto place = [&](const Vec& a, const Vec& r) {
    Mat m(d, lay.rest_dim());
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < r.dim(); ++j) m(i, j) = a[i] * r[j];
    return lay.join(m);
  };

  StateSet s;
  s.spec = spec;
  auto r1 = rest_basis();
  std::size_t k1 = 1 + std::uniform_int_distribution<std::size_t>(0, r1.size() - 1)(rng);
  for (std::size_t m = 0; m < k1; ++m) s.add("t" + std::to_string(m), place(theta, r1[m]));

  auto r2 = rest_basis();
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t a = 1; a < local.size(); ++a)
    for (std::size_t b = 0; b < r2.size(); ++b) cells.push_back({a, b});
  std::shuffle(cells.begin(), cells.end(), rng);
  std::size_t take = std::uniform_int_distribution<std::size_t>(1, cells.size())(rng);
  std::size_t label = 0;
  for (std::size_t c = 0; c < take; ++c) {
    Vec x = place(local[cells[c].first], r2[cells[c].second]);
    if (c + 1 < take && coin(rng)) {
      Vec y = place(local[cells[c + 1].first], r2[cells[c + 1].second]);
      Scalar nx = inner(x, x), ny = inner(y, y);
      s.add("e" + std::to_string(label++), x + y);
      s.add("e" + std::to_string(label++), ny * x - nx * y);
      ++c;
    } else {
      s.add("p" + std::to_string(label++), x);
    }
  }
  return {s, at, theta};
}

StateSet random_biseparable(std::mt19937_64& rng, std::size_t n, std::size_t count) {
  auto a = random_basis(rng, n, false);
  auto bc = random_basis(rng, 4, true);
  std::vector<std::size_t> order(4 * n);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  StateSet s;
  s.spec = PartySpec({n, 2, 2});
  for (std::size_t k = 0; k < count && k < order.size(); ++k)
    s.add("s" + std::to_string(k), tensor(a[order[k] / 4], bc[order[k] % 4]));
  return s;
}

}  // namespace loc
