#include "locality/linalg.hpp"

#include <sstream>
#include <stdexcept>

namespace loc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Vec Vec::basis(std::size_t dim, std::size_t k) {
  require(k < dim, "basis index out of range");
  Vec v(dim);
  v[k] = 1;
  return v;
}

bool Vec::is_zero() const {
  for (const auto& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

std::size_t Vec::first_nonzero() const {
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (!e_[i].is_zero()) return i;
  return e_.size();
}

Vec Vec::conj() const {
  Vec r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = e_[i].conj();
  return r;
}

Vec& Vec::operator+=(const Vec& o) {
  require(dim() == o.dim(), "vector dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i)
    if (!o.e_[i].is_zero()) e_[i] += o.e_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  require(dim() == o.dim(), "vector dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i)
    if (!o.e_[i].is_zero()) e_[i] -= o.e_[i];
  return *this;
}

Vec& Vec::operator*=(const Scalar& c) {
  for (auto& x : e_)
    if (!x.is_zero()) x *= c;
  return *this;
}

std::string Vec::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < dim(); ++i) os << (i ? ", " : "") << e_[i];
  os << ")";
  return os.str();
}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
    : rows_(rows), cols_(cols), e_(std::move(entries)) {
  require(e_.size() == rows * cols, "matrix entry count mismatch");
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::from_columns(const std::vector<Vec>& cols, std::size_t dim) {
  Mat m(dim, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    require(cols[c].dim() == dim, "column dimension mismatch");
    for (std::size_t r = 0; r < dim; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows, std::size_t dim) {
  Mat m(rows.size(), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].dim() == dim, "row dimension mismatch");
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Vec Mat::row(std::size_t r) const {
  Vec v(cols_);
  for (std::size_t c = 0; c < cols_; ++c) v[c] = (*this)(r, c);
  return v;
}

Vec Mat::col(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Mat Mat::adjoint() const {
  Mat m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c).conj();
  return m;
}

Mat Mat::transpose() const {
  Mat m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  return m;
}

Scalar Mat::trace() const {
  require(is_square(), "trace of non-square matrix");
  Scalar t;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

bool Mat::is_zero() const {
  for (const auto& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

bool Mat::is_hermitian() const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      if ((*this)(r, c) != (*this)(c, r).conj()) return false;
  return true;
}

bool Mat::is_idempotent() const { return is_square() && (*this) * (*this) == *this; }

bool Mat::is_scalar_multiple_of_identity() const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) {
      if (r == c) {
        if ((*this)(r, c) != (*this)(0, 0)) return false;
      } else if (!(*this)(r, c).is_zero()) {
        return false;
      }
    }
  return true;
}

Mat& Mat::operator+=(const Mat& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "matrix shape mismatch");
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (!o.e_[i].is_zero()) e_[i] += o.e_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "matrix shape mismatch");
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (!o.e_[i].is_zero()) e_[i] -= o.e_[i];
  return *this;
}

Mat& Mat::operator*=(const Scalar& c) {
  for (auto& x : e_)
    if (!x.is_zero()) x *= c;
  return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
  require(a.cols_ == b.rows_, "matrix product shape mismatch");
  Mat m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) m(i, j).add_product(x, b(k, j));
    }
  return m;
}

Vec operator*(const Mat& a, const Vec& v) {
  require(a.cols_ == v.dim(), "matrix-vector shape mismatch");
  Vec r(a.rows_);
  for (std::size_t k = 0; k < a.cols_; ++k) {
    if (v[k].is_zero()) continue;
    for (std::size_t i = 0; i < a.rows_; ++i) r[i].add_product(a(i, k), v[k]);
  }
  return r;
}

std::string Mat::str() const {
  std::ostringstream os;
  for (std::size_t r = 0; r < rows_; ++r) {
    os << "[";
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? " " : "") << (*this)(r, c);
    os << "]\n";
  }
  return os.str();
}

Scalar inner(const Vec& u, const Vec& v) {
  require(u.dim() == v.dim(), "inner product dimension mismatch");
  Scalar s;
  for (std::size_t i = 0; i < u.dim(); ++i) s.add_conj_product(u[i], v[i]);
  return s;
}

Vec tensor(const Vec& u, const Vec& v) {
  Vec r(u.dim() * v.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) {
    if (u[i].is_zero()) continue;
    for (std::size_t j = 0; j < v.dim(); ++j)
      if (!v[j].is_zero()) r[i * v.dim() + j] = u[i] * v[j];
  }
  return r;
}

Vec tensor(const std::vector<Vec>& factors) {
  require(!factors.empty(), "tensor of no factors");
  Vec r = factors[0];
  for (std::size_t k = 1; k < factors.size(); ++k) r = tensor(r, factors[k]);
  return r;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).is_zero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          if (!b(k, l).is_zero()) m(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return m;
}

Mat outer(const Vec& u, const Vec& v) {
  Mat m(u.dim(), v.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) {
    if (u[i].is_zero()) continue;
    for (std::size_t j = 0; j < v.dim(); ++j)
      if (!v[j].is_zero()) m(i, j) = u[i] * v[j].conj();
  }
  return m;
}

Mat projector_onto(const Vec& v) {
  Scalar n = inner(v, v);
  require(!n.is_zero(), "projector onto zero vector");
  Mat p = outer(v, v);
  p *= Scalar(1) / n;
  return p;
}

Mat projector_onto_span(const std::vector<Vec>& vs, std::size_t dim) {
  Mat p(dim, dim);
  for (const auto& u : gram_schmidt(vs)) p += projector_onto(u);
  return p;
}

Echelon rref(Mat a) {
  Echelon out;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a(p, c).is_zero()) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t k = 0; k < cols; ++k) std::swap(a(p, k), a(r, k));
    Scalar inv = Scalar(1) / a(r, c);
    for (std::size_t k = c; k < cols; ++k)
      if (!a(r, k).is_zero()) a(r, k) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      Scalar f = a(i, c);
      for (std::size_t k = c; k < cols; ++k)
        if (!a(r, k).is_zero()) a(i, k) -= f * a(r, k);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.m = std::move(a);
  return out;
}

std::size_t rank(const Mat& a) { return rref(a).pivots.size(); }

std::vector<Vec> nullspace(const Mat& a) {
  Echelon e = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec x(a.cols());
    x[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = -e.m(r, f);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::vector<Vec> column_basis(const Mat& a) {
  Echelon e = rref(a.transpose());
  std::vector<Vec> basis;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) basis.push_back(e.m.row(r));
  return basis;
}

std::vector<Vec> span_basis(const std::vector<Vec>& vs, std::size_t dim) {
  if (vs.empty()) return {};
  Echelon e = rref(Mat::from_rows(vs, dim));
  std::vector<Vec> basis;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) basis.push_back(e.m.row(r));
  return basis;
}

std::vector<Vec> gram_schmidt(const std::vector<Vec>& vs) {
  std::vector<Vec> out;
  std::vector<Scalar> norms;
  for (const auto& v : vs) {
    Vec w = v;
    for (std::size_t k = 0; k < out.size(); ++k) {
      Scalar c = inner(out[k], w);
      if (c.is_zero()) continue;
      w -= (c / norms[k]) * out[k];
    }
    if (w.is_zero()) continue;
    norms.push_back(inner(w, w));
    out.push_back(std::move(w));
  }
  return out;
}

Mat reshape(const Vec& v, std::size_t rows, std::size_t cols) {
  require(rows * cols == v.dim(), "reshape size mismatch");
  return Mat(rows, cols, v.entries());
}

Vec flatten(const Mat& m) {
  Vec v(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) v[r * m.cols() + c] = m(r, c);
  return v;
}

Vec canonical_direction(const Vec& v) {
  std::size_t k = v.first_nonzero();
  require(k < v.dim(), "direction of zero vector");
  Vec r = v;
  if (!v[k].is_one()) r *= Scalar(1) / v[k];
  return r;
}

bool parallel(const Vec& u, const Vec& v) {
  if (u.dim() != v.dim() || u.is_zero() || v.is_zero()) return false;
  return canonical_direction(u) == canonical_direction(v);
}

bool in_span(const Vec& v, const std::vector<Vec>& basis) {
  if (v.is_zero()) return true;
  if (basis.empty()) return false;
  std::vector<Vec> all = basis;
  all.push_back(v);
  return rank(Mat::from_rows(all, v.dim())) == rank(Mat::from_rows(basis, v.dim()));
}

bool lex_less(const Vec& a, const Vec& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a[i] == b[i]) continue;
    return lex_less(a[i], b[i]);
  }
  return false;
}

}  // namespace loc
