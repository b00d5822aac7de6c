#include "locality/opsolve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace loc {

namespace {

using cd = std::complex<double>;

// ---------------------------------------------------------------------------
// Local data: states as group x rest matrices, the support basis B and the
// support coordinates Z_i = B^dag Psi_i.

struct LocalData {
  std::vector<Mat> psi;
  std::vector<Vec> basis;  // orthogonal, unnormalized
  std::vector<Mat> z;
};

LocalData local_data(const StateSet& s, const std::vector<std::size_t>& group) {
  LocalLayout lay(s.spec, group);
  LocalData d;
  for (const auto& st : s.states) d.psi.push_back(lay.split(st.amps));
  d.basis = gram_schmidt(local_support(s, group));
  if (!d.basis.empty()) {
    Mat bd = Mat::from_columns(d.basis, lay.group_dim()).adjoint();
    for (const auto& p : d.psi) d.z.push_back(bd * p);
  }
  return d;
}

std::string mat_key(const Mat& m) {
  std::size_t r = 0, c = 0;
  for (r = 0; r < m.rows(); ++r) {
    for (c = 0; c < m.cols(); ++c)
      if (!m(r, c).is_zero()) break;
    if (c < m.cols()) break;
  }
  Mat n = m;
  if (r < m.rows()) n *= Scalar(1) / m(r, c);
  return n.str();
}

// G_ij = Z_j Z_i^dag for every pair with a nonzero matrix, up to scalar duplicates.
std::vector<Mat> pair_constraints(const std::vector<Mat>& z) {
  std::vector<Mat> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      Mat g = z[j] * z[i].adjoint();
      if (g.is_zero()) continue;
      if (seen.insert(mat_key(g)).second) out.push_back(std::move(g));
    }
  return out;
}

// Hermitian matrices as real vectors: diagonal, then (Re, Im) of the upper triangle.
Vec herm_to_real(const Mat& h) {
  const std::size_t k = h.rows();
  Vec v(k * k);
  std::size_t n = 0;
  for (std::size_t a = 0; a < k; ++a) v[n++] = Scalar(h(a, a).re());
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      v[n++] = Scalar(h(a, b).re());
      v[n++] = Scalar(h(a, b).im());
    }
  return v;
}

Mat real_to_herm(const Vec& v, std::size_t k) {
  Mat h(k, k);
  std::size_t n = 0;
  for (std::size_t a = 0; a < k; ++a) h(a, a) = v[n++];
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      mpq_class x = v[n++].re();
      mpq_class y = v[n++].re();
      h(a, b) = Scalar(x, y);
      h(b, a) = Scalar(x, -y);
    }
  return h;
}

// Basis of the real span of the Hermitian and anti-Hermitian parts of gs.
std::vector<Mat> hermitian_span(const std::vector<Mat>& gs, std::size_t k) {
  std::vector<Vec> rows;
  const Scalar half(mpq_class(1, 2));
  const Scalar minus_half_i(mpq_class(0), mpq_class(-1, 2));
  for (const auto& g : gs) {
    Mat gd = g.adjoint();
    rows.push_back(herm_to_real(half * (g + gd)));
    rows.push_back(herm_to_real(minus_half_i * (g - gd)));
  }
  std::vector<Mat> out;
  for (const auto& v : span_basis(rows, k * k)) out.push_back(real_to_herm(v, k));
  return out;
}

// {F Hermitian : Tr(F H) = 0 for all H in hs}.
std::vector<Mat> lifted_space(const std::vector<Mat>& hs, std::size_t k) {
  Mat a(hs.size(), k * k);
  for (std::size_t l = 0; l < hs.size(); ++l) {
    const Mat& h = hs[l];
    std::size_t n = 0;
    for (std::size_t p = 0; p < k; ++p) a(l, n++) = Scalar(h(p, p).re());
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t q = p + 1; q < k; ++q) {
        a(l, n++) = Scalar(mpq_class(2 * h(q, p).re()));
        a(l, n++) = Scalar(mpq_class(-2 * h(q, p).im()));
      }
  }
  std::vector<Mat> out;
  if (hs.empty()) {
    for (std::size_t n = 0; n < k * k; ++n) out.push_back(real_to_herm(Vec::basis(k * k, n), k));
    return out;
  }
  for (const auto& v : nullspace(a)) out.push_back(real_to_herm(v, k));
  return out;
}

// +1 when h is positive semidefinite, -1 when negative semidefinite, else 0.
int semidefinite_sign(Mat h) {
  const std::size_t k = h.rows();
  std::vector<bool> done(k, false);
  int sign = 0;
  for (;;) {
    std::size_t p = k;
    for (std::size_t a = 0; a < k; ++a)
      if (!done[a] && !h(a, a).is_zero()) {
        p = a;
        break;
      }
    if (p == k) {
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
          if (!done[a] && !done[b] && !h(a, b).is_zero()) return 0;
      return sign;
    }
    int s = sgn(h(p, p).re());
    if (sign == 0) sign = s;
    if (s != sign) return 0;
    done[p] = true;
    Scalar inv = Scalar(1) / h(p, p);
    for (std::size_t a = 0; a < k; ++a) {
      if (done[a] || h(a, p).is_zero()) continue;
      Scalar f = h(a, p) * inv;
      for (std::size_t b = 0; b < k; ++b)
        if (!done[b] && !h(p, b).is_zero()) h(a, b) -= f * h(p, b);
    }
  }
}

// Polynomials in one real variable with rational coefficients, low degree first.
using Poly = std::vector<mpq_class>;

void trim(Poly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

Poly poly_sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), mpq_class(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

Poly poly_add(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), mpq_class(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  trim(a);
  return a;
}

Poly poly_mod(Poly a, const Poly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    mpq_class f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    mpq_class lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

// Real roots of a polynomial of degree <= 2: rational ones, or p +- q sqrt(d).
struct Root {
  mpq_class p, q, d;  // root = p + q sqrt(d); q = 0 for rational roots
};

std::optional<std::vector<Root>> real_roots(const Poly& f) {
  if (f.size() <= 1) return std::vector<Root>{};
  if (f.size() == 2) return std::vector<Root>{{-f[0] / f[1], 0, 0}};
  if (f.size() > 3) return std::nullopt;
  const mpq_class &c = f[0], &b = f[1], &a = f[2];
  mpq_class disc = b * b - 4 * a * c;
  if (sgn(disc) < 0) return std::vector<Root>{};
  mpq_class p = -b / (2 * a);
  if (sgn(disc) == 0) return std::vector<Root>{{p, 0, 0}};
  mpq_class root;
  if (rational_sqrt(disc, &root)) {
    mpq_class q = root / (2 * a);
    return std::vector<Root>{{p + q, 0, 0}, {p - q, 0, 0}};
  }
  mpq_class q = mpq_class(1) / (2 * a);
  return std::vector<Root>{{p, q, disc}, {p, -q, disc}};
}

std::vector<cd> to_double(const Vec& v) {
  std::vector<cd> out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = cd(v[i].real_double(), v[i].imag_double());
  return out;
}

void normalize(std::vector<cd>& v) {
  double n = 0;
  for (auto x : v) n += std::norm(x);
  n = std::sqrt(n);
  if (n == 0) return;
  std::size_t k = 0;
  while (k < v.size() && std::abs(v[k]) < 1e-12 * n) ++k;
  cd phase = k < v.size() ? std::abs(v[k]) / v[k] : cd(1);
  for (auto& x : v) x *= phase / n;
}

bool approx_parallel(const std::vector<cd>& a, const std::vector<cd>& b, double tol) {
  if (a.size() != b.size()) return false;
  cd ip = 0;
  double na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ip += std::conj(a[i]) * b[i];
    na += std::norm(a[i]);
    nb += std::norm(b[i]);
  }
  if (na == 0 || nb == 0) return false;
  return 1.0 - std::abs(ip) / std::sqrt(na * nb) < tol;
}

// ---------------------------------------------------------------------------
// Recursive case split over linear subspaces of the support.

struct SqrtDir {
  Vec a, b;
  mpq_class d;
};

struct Curve {
  Vec e0, e1;  // support coordinates
  std::vector<mpq_class> conic;
};

class Search {
 public:
  Search(const std::vector<Mat>& gs, std::size_t r, const SolverConfig& cfg)
      : gs_(gs), r_(r), cfg_(cfg) {}

  void run() {
    std::vector<Vec> all;
    for (std::size_t k = 0; k < r_; ++k) all.push_back(Vec::basis(r_, k));
    visit(all);
  }

  std::vector<Vec> exact;
  std::vector<SqrtDir> sqrt_dirs;
  std::vector<std::vector<Vec>> subspaces;
  std::vector<Curve> curves;
  std::vector<Mat> stuck;
  std::vector<std::string> trace;
  bool complete = true;

 private:
  void note(std::string s) {
    if (trace.size() < 200) trace.push_back(std::move(s));
  }

  static Mat basis_after(const Mat& km, const std::vector<Vec>& ns) {
    std::vector<Vec> cols;
    for (const auto& n : ns) cols.push_back(km * n);
    return Mat::from_columns(cols, km.rows());
  }

  void visit_mat(const Mat& km) {
    std::vector<Vec> cols;
    for (std::size_t c = 0; c < km.cols(); ++c) cols.push_back(km.col(c));
    visit(cols);
  }

  void visit(const std::vector<Vec>& raw) {
    std::vector<Vec> kb = span_basis(raw, r_);
    const std::size_t k = kb.size();
    if (k == 0) return;
    std::string key;
    for (const auto& v : kb) key += v.str() + ";";
    if (!visited_.insert(key).second) return;
    if (++nodes_ > cfg_.max_nodes) {
      if (complete) note("node budget exhausted");
      complete = false;
      return;
    }
    Mat km = Mat::from_columns(kb, r_);
    Mat kd = km.adjoint();
    std::vector<Mat> gw;
    std::set<std::string> seen;
    for (const auto& g : gs_) {
      Mat h = kd * g * km;
      if (h.is_zero()) continue;
      if (seen.insert(mat_key(h)).second) gw.push_back(std::move(h));
    }
    if (gw.empty()) {
      if (k == 1)
        exact.push_back(kb[0]);
      else
        subspaces.push_back(kb);
      return;
    }
    if (k == 1) return;
    auto hs = hermitian_span(gw, k);

    for (const auto& h : hs) {
      if (semidefinite_sign(h) == 0) continue;
      visit_mat(basis_after(km, nullspace(h)));
      return;
    }

    for (const auto& g : gw) {
      if (rank(g) != 1) continue;
      std::size_t q = 0;
      while (g.col(q).is_zero()) ++q;
      Vec w = g.col(q);
      std::size_t p = w.first_nonzero();
      // g = w v^dag with v^dag = row p / w[p].
      Vec vd = g.row(p);
      vd *= Scalar(1) / w[p];
      visit_mat(basis_after(km, nullspace(Mat::from_rows({vd}, k))));
      visit_mat(basis_after(km, nullspace(Mat::from_rows({w.conj()}, k))));
      return;
    }

    if (k == 2) {
      solve_plane(km, hs);
      return;
    }

    auto lifted = lifted_space(hs, k);
    if (lifted.empty()) return;
    if (lifted.size() == 1) {
      if (rank(lifted[0]) == 1) emit_from_rank1(km, lifted[0]);
      return;
    }
    if (lifted.size() == 2 && solve_pencil(km, lifted[0], lifted[1])) return;

    complete = false;
    stuck.push_back(km);
    note("unresolved subspace of dimension " + std::to_string(k) + " (lifted dimension " +
         std::to_string(lifted.size()) + ")");
  }

  void emit_from_rank1(const Mat& km, const Mat& f) {
    for (std::size_t c = 0; c < f.cols(); ++c)
      if (!f.col(c).is_zero()) {
        exact.push_back(km * f.col(c));
        return;
      }
  }

  // Directions x = t e0 + e1 (plus x = e0) in a plane; each Hermitian
  // constraint is linear in (|t|^2, Re t, Im t).
  void solve_plane(const Mat& km, const std::vector<Mat>& hs) {
    Vec e0 = km.col(0), e1 = km.col(1);
    bool e0_ok = true;
    for (const auto& h : hs) e0_ok = e0_ok && h(0, 0).is_zero();
    if (e0_ok) exact.push_back(e0);

    Mat m(hs.size(), 4);
    for (std::size_t l = 0; l < hs.size(); ++l) {
      m(l, 0) = Scalar(hs[l](0, 0).re());
      m(l, 1) = Scalar(mpq_class(2 * hs[l](0, 1).re()));
      m(l, 2) = Scalar(mpq_class(2 * hs[l](0, 1).im()));
      m(l, 3) = Scalar(hs[l](1, 1).re());
    }
    Echelon e = rref(m);
    if (!e.pivots.empty() && e.pivots.back() == 3) return;
    const std::size_t rho = e.pivots.size();
    auto val = [&](std::size_t row, std::size_t col) { return e.m(row, col).re(); };
    auto emit_t = [&](const mpq_class& u, const mpq_class& v) {
      exact.push_back(Scalar(u, v) * e0 + e1);
    };

    if (rho == 3) {
      mpq_class w = -val(0, 3), u = -val(1, 3), v = -val(2, 3);
      if (w == u * u + v * v) emit_t(u, v);
      return;
    }
    if (rho == 2) {
      std::size_t f = 0;
      while (std::find(e.pivots.begin(), e.pivots.end(), f) != e.pivots.end()) ++f;
      mpq_class P[3], D[3];
      P[f] = 0;
      D[f] = 1;
      for (std::size_t row = 0; row < 2; ++row) {
        P[e.pivots[row]] = -val(row, 3);
        D[e.pivots[row]] = -val(row, f);
      }
      // (w, u, v) = P + s D on w = u^2 + v^2.
      mpq_class A = D[1] * D[1] + D[2] * D[2];
      mpq_class B = 2 * P[1] * D[1] + 2 * P[2] * D[2] - D[0];
      mpq_class C = P[1] * P[1] + P[2] * P[2] - P[0];
      auto roots = real_roots(sgn(A) ? Poly{C, B, A} : Poly{C, B});
      for (const auto& rt : *roots) {
        mpq_class u = P[1] + rt.p * D[1], v = P[2] + rt.p * D[2];
        if (sgn(rt.q) == 0) {
          emit_t(u, v);
        } else {
          sqrt_dirs.push_back(
              {Scalar(u, v) * e0 + e1, Scalar(mpq_class(rt.q * D[1]), mpq_class(rt.q * D[2])) * e0, rt.d});
        }
      }
      return;
    }
    // One equation left.
    std::vector<mpq_class> row{val(0, 0), val(0, 1), val(0, 2), val(0, 3)};
    if (sgn(row[0]) != 0) {
      mpq_class cu = -row[1] / 2, cv = -row[2] / 2;
      mpq_class r2 = cu * cu + cv * cv - row[3];
      if (sgn(r2) < 0) return;
      if (sgn(r2) == 0) {
        emit_t(cu, cv);
        return;
      }
    }
    curves.push_back({e0, e1, row});
  }

  // Rank-one members of the real pencil X1 + t X2 (and X2 itself).
  bool solve_pencil(const Mat& km, const Mat& x1, const Mat& x2) {
    const std::size_t k = x1.rows();
    if (rank(x2) == 1) emit_from_rank1(km, x2);
    struct CPoly {
      Poly re, im;
    };
    auto entry = [&](std::size_t a, std::size_t b) {
      CPoly c{{x1(a, b).re(), x2(a, b).re()}, {x1(a, b).im(), x2(a, b).im()}};
      trim(c.re);
      trim(c.im);
      return c;
    };
    auto mul = [](const CPoly& a, const CPoly& b) {
      return CPoly{poly_sub(poly_mul(a.re, b.re), poly_mul(a.im, b.im)),
                   poly_add(poly_mul(a.re, b.im), poly_mul(a.im, b.re))};
    };
    Poly g;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b)
        for (std::size_t c = 0; c < k; ++c)
          for (std::size_t d = c + 1; d < k; ++d) {
            CPoly l = mul(entry(a, c), entry(b, d));
            CPoly r = mul(entry(a, d), entry(b, c));
            g = poly_gcd(g, poly_sub(l.re, r.re));
            g = poly_gcd(g, poly_sub(l.im, r.im));
            if (g.size() == 1) return true;
          }
    if (g.empty()) return false;
    auto roots = real_roots(g);
    if (!roots) return false;
    for (const auto& rt : *roots) {
      for (std::size_t c = 0; c < k; ++c) {
        Vec a = x1.col(c) + Scalar(rt.p) * x2.col(c);
        Vec b = Scalar(rt.q) * x2.col(c);
        if (a.is_zero() && b.is_zero()) continue;
        if (sgn(rt.q) == 0)
          exact.push_back(km * a);
        else
          sqrt_dirs.push_back({km * a, km * b, rt.d});
        break;
      }
    }
    return true;
  }

  const std::vector<Mat>& gs_;
  std::size_t r_;
  SolverConfig cfg_;
  std::set<std::string> visited_;
  std::size_t nodes_ = 0;
};

// Multistart descent on sum |x^dag G x|^2 over unit x.
std::vector<std::vector<cd>> multistart(const std::vector<Mat>& gs, const Mat& km, std::mt19937_64& rng,
                                        const SolverConfig& cfg) {
  const std::size_t k = km.cols();
  Mat kd = km.adjoint();
  std::vector<std::vector<cd>> cg;
  for (const auto& g : gs) {
    Mat h = kd * g * km;
    if (h.is_zero()) continue;
    std::vector<cd> m(k * k);
    double mx = 0;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        m[a * k + b] = cd(h(a, b).real_double(), h(a, b).imag_double());
        mx = std::max(mx, std::abs(m[a * k + b]));
      }
    for (auto& x : m) x /= mx;
    cg.push_back(std::move(m));
  }
  auto value = [&](const std::vector<cd>& x, std::vector<cd>* grad) {
    double f = 0;
    if (grad) std::fill(grad->begin(), grad->end(), cd(0));
    std::vector<cd> gx(k), gdx(k);
    for (const auto& m : cg) {
      cd q = 0;
      for (std::size_t a = 0; a < k; ++a) {
        gx[a] = 0;
        gdx[a] = 0;
        for (std::size_t b = 0; b < k; ++b) {
          gx[a] += m[a * k + b] * x[b];
          gdx[a] += std::conj(m[b * k + a]) * x[b];
        }
        q += std::conj(x[a]) * gx[a];
      }
      f += std::norm(q);
      if (grad)
        for (std::size_t a = 0; a < k; ++a) (*grad)[a] += std::conj(q) * gx[a] + q * gdx[a];
    }
    return f;
  };
  std::normal_distribution<double> nd;
  std::vector<std::vector<cd>> found;
  for (int start = 0; start < cfg.starts; ++start) {
    std::vector<cd> x(k);
    for (auto& c : x) c = cd(nd(rng), nd(rng));
    normalize(x);
    std::vector<cd> grad(k), trial(k);
    double f = value(x, &grad), step = 0.5;
    for (int it = 0; it < 4000 && f > cfg.tolerance * cfg.tolerance * 1e-4; ++it) {
      for (std::size_t a = 0; a < k; ++a) trial[a] = x[a] - step * grad[a];
      normalize(trial);
      double ft = value(trial, nullptr);
      if (ft < f) {
        x = trial;
        f = value(x, &grad);
        step *= 1.3;
      } else {
        step *= 0.5;
        if (step < 1e-14) break;
      }
    }
    if (std::sqrt(f) > cfg.tolerance) continue;
    bool dup = false;
    for (const auto& y : found) dup = dup || approx_parallel(x, y, 1e-6);
    if (!dup) found.push_back(x);
  }
  return found;
}

// Independent re-check through the original states: <psi_i|P (x) I|psi_j>
// for P = |theta><theta| equals <Psi_j^dag theta, Psi_i^dag theta>.
std::vector<Vec> pullbacks(const std::vector<Mat>& psi, const Vec& theta) {
  std::vector<Vec> out;
  for (const auto& p : psi) out.push_back(p.adjoint() * theta);
  return out;
}

bool verify_exact(const std::vector<Mat>& psi, const Vec& theta) {
  auto s = pullbacks(psi, theta);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (!inner(s[i], s[j]).is_zero()) return false;
  return true;
}

bool verify_sqrt(const std::vector<Mat>& psi, const SqrtDir& dir) {
  auto a = pullbacks(psi, dir.a), b = pullbacks(psi, dir.b);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      Scalar rational = inner(a[i], a[j]) + Scalar(dir.d) * inner(b[i], b[j]);
      Scalar irrational = inner(a[i], b[j]) + inner(b[i], a[j]);
      if (!rational.is_zero() || !irrational.is_zero()) return false;
    }
  return true;
}

bool verify_subspace(const std::vector<Mat>& psi, const std::vector<Vec>& basis) {
  std::vector<std::vector<Vec>> s;
  for (const auto& v : basis) s.push_back(pullbacks(psi, v));
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = 0; j < psi.size(); ++j) {
      if (i == j) continue;
      for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = 0; b < basis.size(); ++b)
          if (!inner(s[a][j], s[b][i]).is_zero()) return false;
    }
  return true;
}

// Every pair's equation in (|t|^2, Re t, Im t, 1) must be a multiple of the conic.
bool verify_curve(const std::vector<Mat>& psi, const DirectionFamily& fam) {
  auto s0 = pullbacks(psi, fam.basis[0]), s1 = pullbacks(psi, fam.basis[1]);
  Vec conic(4);
  for (std::size_t n = 0; n < 4; ++n) conic[n] = Scalar(fam.conic[n]);
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = i + 1; j < psi.size(); ++j) {
      // x^dag G x with x = t e0 + e1; entries e_a^dag G e_b = <s_a[j], s_b[i]>.
      Scalar g00 = inner(s0[j], s0[i]), g01 = inner(s0[j], s1[i]);
      Scalar g10 = inner(s1[j], s0[i]), g11 = inner(s1[j], s1[i]);
      // conj(t) g01 + t g10 = u (g01 + g10) + i v (g10 - g01)
      Scalar cu = g01 + g10, cv = Scalar::imag_unit() * (g10 - g01);
      Vec re{Scalar(g00.re()), Scalar(cu.re()), Scalar(cv.re()), Scalar(g11.re())};
      Vec im{Scalar(g00.im()), Scalar(cu.im()), Scalar(cv.im()), Scalar(g11.im())};
      if (!in_span(re, {conic}) || !in_span(im, {conic})) return false;
    }
  return true;
}

Vec project_onto(const std::vector<Vec>& basis, const Vec& v) {
  Vec out(v.dim());
  for (const auto& b : basis) {
    Scalar c = inner(b, v);
    if (!c.is_zero()) out += (c / inner(b, b)) * b;
  }
  return out;
}

std::string vec_str(const std::vector<cd>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i].real();
    if (v[i].imag() != 0) os << (v[i].imag() < 0 ? "-" : "+") << std::abs(v[i].imag()) << "i";
  }
  os << ")";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<ConstraintMatrix> constraint_matrices(const StateSet& s, const std::vector<std::size_t>& group) {
  LocalLayout lay(s.spec, group);
  std::vector<Mat> psi;
  for (const auto& st : s.states) psi.push_back(lay.split(st.amps));
  std::vector<ConstraintMatrix> out;
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = i + 1; j < psi.size(); ++j) {
      // C[a][b] = sum_r conj(Psi_i[a][r]) Psi_j[b][r]
      out.push_back({group, i, j, (psi[j] * psi[i].adjoint()).transpose()});
    }
  return out;
}

std::string exactness_name(Exactness e) {
  switch (e) {
    case Exactness::exact: return "exact";
    case Exactness::exact_sqrt: return "exact-sqrt";
    case Exactness::numeric: return "numeric";
  }
  return "?";
}

std::string Direction::str() const {
  switch (exactness) {
    case Exactness::exact: return theta.str();
    case Exactness::exact_sqrt: return theta.str() + " + sqrt(" + sqrt_d.get_str() + ")*" + theta_sqrt.str();
    case Exactness::numeric: return "~" + vec_str(approx);
  }
  return "";
}

std::string DirectionFamily::str() const {
  std::string out = kind + " span{";
  for (std::size_t i = 0; i < basis.size(); ++i) out += (i ? ", " : "") + basis[i].str();
  out += "}";
  if (kind == "curve") {
    out += " t*e0+e1 with " + conic[0].get_str() + "|t|^2 + " + conic[1].get_str() + "Re t + " +
           conic[2].get_str() + "Im t + " + conic[3].get_str() + " = 0";
  }
  return out;
}

std::vector<Vec> SolutionReport::exact_directions() const {
  std::vector<Vec> out;
  for (const auto& d : solutions)
    if (d.exactness == Exactness::exact) out.push_back(d.theta);
  return out;
}

bool SolutionReport::covers(const Vec& theta, double tol) const {
  Vec t = support.empty() ? theta : project_onto(support, theta);
  if (t.is_zero()) return false;
  auto td = to_double(t);
  for (const auto& d : solutions) {
    if (d.exactness == Exactness::exact) {
      if (parallel(d.theta, t)) return true;
    } else if (approx_parallel(d.approx, td, tol)) {
      return true;
    }
  }
  for (const auto& f : families) {
    if (f.kind == "subspace") {
      if (in_span(t, f.basis)) return true;
      continue;
    }
    // t = alpha e0 + beta e1 with alpha/beta on the conic.
    Mat m = Mat::from_columns({f.basis[0], f.basis[1], t}, t.dim());
    Echelon e = rref(m);
    if (e.pivots.size() != 2 || e.pivots[1] != 1) continue;
    Scalar alpha = e.m(0, 2), beta = e.m(1, 2);
    if (beta.is_zero()) continue;
    Scalar z = alpha / beta;
    mpq_class w = z.norm2();
    mpq_class lhs = f.conic[0] * w + f.conic[1] * z.re() + f.conic[2] * z.im() + f.conic[3];
    if (sgn(lhs) == 0) return true;
  }
  return false;
}

Partition isolating_partition(std::size_t parties, const std::vector<std::size_t>& group) {
  Partition p;
  p.blocks.push_back(group);
  for (std::size_t k = 0; k < parties; ++k)
    if (std::find(group.begin(), group.end(), k) == group.end()) p.blocks.push_back({k});
  return p;
}

SolutionReport rank1_op_directions(const StateSet& s, const std::vector<std::size_t>& group,
                                   const SolverConfig& cfg) {
  SolutionReport rep;
  rep.group = group;
  rep.group_dim = s.spec.dim_of(group);
  LocalData ld = local_data(s, group);
  const std::size_t r = ld.basis.size();
  rep.support_dim = r;
  rep.support = ld.basis;
  if (r <= 1) {
    rep.complete = true;
    rep.none_found = NoneFound{"exact-case-split", 0, 0};
    rep.trace.push_back("local support has dimension " + std::to_string(r) +
                        "; every projector acts trivially on the set");
    return rep;
  }
  if (r > cfg.max_support) {
    rep.trace.push_back("local support dimension " + std::to_string(r) + " exceeds the search limit " +
                        std::to_string(cfg.max_support));
    return rep;
  }
  auto gs = pair_constraints(ld.z);
  Search search(gs, r, cfg);
  search.run();
  rep.complete = search.complete;
  rep.trace = search.trace;

  Mat bm = Mat::from_columns(ld.basis, rep.group_dim);
  std::set<std::string> seen;
  for (const auto& x : search.exact) {
    Vec theta = canonical_direction(bm * x);
    if (!seen.insert(theta.str()).second) continue;
    if (!verify_exact(ld.psi, theta)) throw std::logic_error("rank-1 direction failed re-verification");
    Direction d;
    d.theta = theta;
    d.approx = to_double(theta);
    normalize(d.approx);
    rep.solutions.push_back(std::move(d));
  }
  std::vector<Direction> extra;
  for (const auto& sd : search.sqrt_dirs) {
    SqrtDir g{bm * sd.a, bm * sd.b, sd.d};
    if (!verify_sqrt(ld.psi, g)) throw std::logic_error("quadratic direction failed re-verification");
    Direction d;
    d.exactness = Exactness::exact_sqrt;
    d.theta = g.a;
    d.theta_sqrt = g.b;
    d.sqrt_d = g.d;
    double root = std::sqrt(g.d.get_d());
    auto a = to_double(g.a), b = to_double(g.b);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += root * b[i];
    normalize(a);
    d.approx = a;
    extra.push_back(std::move(d));
  }
  for (const auto& sub : search.subspaces) {
    DirectionFamily f;
    f.kind = "subspace";
    for (const auto& v : sub) f.basis.push_back(bm * v);
    f.basis = span_basis(f.basis, rep.group_dim);
    if (!verify_subspace(ld.psi, f.basis)) throw std::logic_error("direction family failed re-verification");
    rep.families.push_back(std::move(f));
  }
  for (const auto& c : search.curves) {
    DirectionFamily f{"curve", {bm * c.e0, bm * c.e1}, c.conic};
    if (!verify_curve(ld.psi, f)) throw std::logic_error("direction curve failed re-verification");
    rep.families.push_back(std::move(f));
  }

  bool ran_numeric = false;
  if (!search.stuck.empty() && !cfg.exact_only) {
    ran_numeric = true;
    std::mt19937_64 rng(cfg.seed);
    std::vector<cd> bd;
    for (const auto& km : search.stuck) {
      for (auto x : multistart(gs, km, rng, cfg)) {
        // support coordinates -> group coordinates
        std::vector<cd> v(rep.group_dim, cd(0));
        for (std::size_t c = 0; c < km.cols(); ++c)
          for (std::size_t a = 0; a < r; ++a) {
            cd kac(km(a, c).real_double(), km(a, c).imag_double());
            for (std::size_t g = 0; g < rep.group_dim; ++g)
              v[g] += cd(bm(g, a).real_double(), bm(g, a).imag_double()) * kac * x[c];
          }
        normalize(v);
        Direction d;
        d.exactness = Exactness::numeric;
        d.approx = v;
        extra.push_back(std::move(d));
      }
    }
    rep.trace.push_back("numeric multistart on " + std::to_string(search.stuck.size()) +
                        " unresolved subspaces (seed " + std::to_string(cfg.seed) + ")");
  }
  for (auto& d : extra) {
    bool dup = false;
    for (const auto& e : rep.solutions) dup = dup || approx_parallel(e.approx, d.approx, 1e-9);
    if (!dup) rep.solutions.push_back(std::move(d));
  }

  std::sort(rep.solutions.begin(), rep.solutions.end(), [](const Direction& a, const Direction& b) {
    if (a.exactness != b.exactness) return a.exactness < b.exactness;
    if (a.exactness == Exactness::exact) return lex_less(a.theta, b.theta);
    for (std::size_t i = 0; i < a.approx.size(); ++i) {
      if (a.approx[i].real() != b.approx[i].real()) return a.approx[i].real() < b.approx[i].real();
      if (a.approx[i].imag() != b.approx[i].imag()) return a.approx[i].imag() < b.approx[i].imag();
    }
    return false;
  });
  std::sort(rep.families.begin(), rep.families.end(),
            [](const DirectionFamily& a, const DirectionFamily& b) { return a.str() < b.str(); });

  if (rep.solutions.empty() && rep.families.empty()) {
    if (rep.complete)
      rep.none_found = NoneFound{"exact-case-split", 0, 0};
    else if (ran_numeric)
      rep.none_found = NoneFound{"heuristic", cfg.seed, cfg.tolerance};
  }
  return rep;
}

std::size_t lifted_dimension(const StateSet& s, const std::vector<std::size_t>& group) {
  LocalData ld = local_data(s, group);
  const std::size_t r = ld.basis.size();
  if (r == 0) return 0;
  return lifted_space(hermitian_span(pair_constraints(ld.z), r), r).size();
}

// ---------------------------------------------------------------------------

namespace {

void cliques(const std::vector<std::vector<bool>>& adj, std::vector<std::size_t>& cur, std::size_t from,
             std::size_t limit, std::vector<std::vector<std::size_t>>& out) {
  if (out.size() >= limit) return;
  if (!cur.empty()) out.push_back(cur);
  for (std::size_t v = from; v < adj.size(); ++v) {
    bool ok = true;
    for (auto u : cur) ok = ok && adj[u][v];
    if (!ok) continue;
    cur.push_back(v);
    cliques(adj, cur, v + 1, limit, out);
    cur.pop_back();
  }
}

}  // namespace

// A few rational points of a curve family: small parameters on a line, the
// axis points of a circle whose radius is rational. Every sample is checked
// again by the caller.
static std::vector<Vec> curve_samples(const DirectionFamily& f) {
  std::vector<Vec> out;
  const mpq_class &a = f.conic[0], &b = f.conic[1], &c = f.conic[2], &e = f.conic[3];
  auto point = [&](const mpq_class& u, const mpq_class& v) { out.push_back(Scalar(u, v) * f.basis[0] + f.basis[1]); };
  const std::vector<mpq_class> ts = {0, 1, -1, 2, -2, mpq_class(1, 2)};
  if (sgn(a) == 0) {
    out.push_back(f.basis[0]);
    for (const auto& t : ts) {
      if (sgn(c) != 0)
        point(t, -(e + b * t) / c);
      else if (sgn(b) != 0)
        point(-e / b, t);
    }
    return out;
  }
  mpq_class cu = -b / (2 * a), cv = -c / (2 * a);
  mpq_class r2 = cu * cu + cv * cv - e / a, r;
  if (sgn(r2) < 0 || !rational_sqrt(r2, &r)) return out;
  if (sgn(r) == 0) {
    point(cu, cv);
    return out;
  }
  point(cu + r, cv);
  point(cu - r, cv);
  point(cu, cv + r);
  point(cu, cv - r);
  return out;
}

std::vector<LocalPVM> enumerate_op_pvms(const StateSet& s, const std::vector<std::size_t>& group,
                                        const Partition& partition, const EnumerationConfig& cfg) {
  std::map<std::string, LocalPVM> found;
  const std::size_t gdim = s.spec.dim_of(group);
  auto consider = [&](std::vector<Mat> elements) {
    if (found.size() >= cfg.max_results) return;
    LocalPVM lp;
    try {
      lp = make_local_pvm(s.spec, group, partition, std::move(elements));
    } catch (const std::invalid_argument&) {
      return;
    }
    if (cfg.max_outcomes && lp.pvm.size() > cfg.max_outcomes) return;
    if (is_trivial(lp.pvm) || is_trivial_on(s, lp)) return;
    if (preserves_orthogonality(s, lp)) return;
    found.emplace(pvm_key(lp.pvm), std::move(lp));
  };
  for (const auto& c : cfg.candidates)
    if (c.group == group) consider(c.pvm.elements);

  const std::size_t r = local_support(s, group).size();
  if (r >= 2 && r <= cfg.max_support) {
    auto rep = rank1_op_directions(s, group, cfg.solver);
    std::vector<Vec> pool = rep.exact_directions();
    for (const auto& f : rep.families) {
      if (f.kind == "curve") {
        for (const auto& v : curve_samples(f)) pool.push_back(v);
        continue;
      }
      consider({projector_onto_span(f.basis, gdim)});
      for (const auto& v : gram_schmidt(f.basis)) pool.push_back(v);
    }
    std::vector<Vec> uniq;
    for (const auto& v : pool) {
      bool dup = false;
      for (const auto& u : uniq) dup = dup || parallel(u, v);
      if (!dup) uniq.push_back(v);
    }
    std::vector<std::vector<bool>> adj(uniq.size(), std::vector<bool>(uniq.size(), false));
    for (std::size_t a = 0; a < uniq.size(); ++a)
      for (std::size_t b = 0; b < uniq.size(); ++b) adj[a][b] = a != b && inner(uniq[a], uniq[b]).is_zero();
    std::vector<std::vector<std::size_t>> cl;
    std::vector<std::size_t> cur;
    cliques(adj, cur, 0, 20000, cl);
    for (const auto& c : cl) {
      std::vector<Mat> singles;
      Mat sum(gdim, gdim);
      for (auto v : c) {
        singles.push_back(projector_onto(uniq[v]));
        sum += singles.back();
      }
      consider({sum});
      if (c.size() > 1) consider(singles);
    }
  }
  std::vector<LocalPVM> out;
  for (auto& [k, v] : found) out.push_back(std::move(v));
  return out;
}

std::string irreducibility_name(Irreducibility v) {
  switch (v) {
    case Irreducibility::irreducible: return "irreducible";
    case Irreducibility::reducible: return "reducible";
    case Irreducibility::unknown: return "unknown";
  }
  return "?";
}

IrreducibilityReport is_pvm_irreducible(const StateSet& s, const Partition& p, const EnumerationConfig& cfg) {
  p.validate(s.spec.parties());
  IrreducibilityReport rep;
  bool all = true;
  for (const auto& block : p.blocks) {
    BlockVerdict bv;
    bv.group = block;
    const std::size_t r = local_support(s, block).size();
    const std::size_t g = s.spec.dim_of(block);
    if (r <= 1) {
      bv.verdict = Irreducibility::irreducible;
      bv.certificate = "local support dimension " + std::to_string(r);
    } else if (r <= cfg.solver.max_support && lifted_dimension(s, block) == 1) {
      bv.verdict = Irreducibility::irreducible;
      bv.certificate = "lifted constraint space is one-dimensional";
    } else {
      if (r == g && g <= 3) {
        auto rep1 = rank1_op_directions(s, block, cfg.solver);
        if (rep1.none_found && rep1.none_found->method == "exact-case-split") {
          bv.verdict = Irreducibility::irreducible;
          bv.certificate = "no rank-1 OP direction in dimension " + std::to_string(g);
        }
      }
      if (bv.verdict == Irreducibility::unknown) {
        auto pvms = enumerate_op_pvms(s, block, p, cfg);
        if (!pvms.empty()) {
          bv.verdict = Irreducibility::reducible;
          bv.certificate = std::to_string(pvms.size()) + " OP PVMs found";
          bv.witness = *std::min_element(pvms.begin(), pvms.end(), [](const LocalPVM& a, const LocalPVM& b) {
            return a.pvm.size() < b.pvm.size();
          });
        }
      }
    }
    if (bv.verdict == Irreducibility::reducible && !rep.witness) rep.witness = bv.witness;
    all = all && bv.verdict == Irreducibility::irreducible;
    rep.blocks.push_back(std::move(bv));
  }
  rep.verdict = rep.witness ? Irreducibility::reducible : all ? Irreducibility::irreducible : Irreducibility::unknown;
  return rep;
}

}  // namespace loc
