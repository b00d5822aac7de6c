#pragma once

// Dense exact vectors and matrices over the Gaussian rationals.
// Tensor index convention: leftmost factor varies slowest.

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "locality/scalar.hpp"

namespace loc {

class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t dim) : e_(dim) {}
  Vec(std::initializer_list<Scalar> xs) : e_(xs) {}
  explicit Vec(std::vector<Scalar> xs) : e_(std::move(xs)) {}

  static Vec basis(std::size_t dim, std::size_t k);

  std::size_t dim() const { return e_.size(); }
  Scalar& operator[](std::size_t i) { return e_[i]; }
  const Scalar& operator[](std::size_t i) const { return e_[i]; }
  auto begin() const { return e_.begin(); }
  auto end() const { return e_.end(); }
  const std::vector<Scalar>& entries() const { return e_; }

  bool is_zero() const;
  // Index of the first nonzero entry, or dim() if none.
  std::size_t first_nonzero() const;
  Vec conj() const;

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(const Scalar& c);
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(const Scalar& c, Vec v) { return v *= c; }
  friend bool operator==(const Vec& a, const Vec& b) { return a.e_ == b.e_; }
  friend bool operator!=(const Vec& a, const Vec& b) { return !(a == b); }

  std::string str() const;

 private:
  std::vector<Scalar> e_;
};

class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}
  Mat(std::size_t rows, std::size_t cols, std::vector<Scalar> entries);

  static Mat identity(std::size_t n);
  static Mat from_columns(const std::vector<Vec>& cols, std::size_t dim);
  static Mat from_rows(const std::vector<Vec>& rows, std::size_t dim);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar& operator()(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

  Vec row(std::size_t r) const;
  Vec col(std::size_t c) const;
  Mat adjoint() const;
  Mat transpose() const;
  Scalar trace() const;

  bool is_zero() const;
  bool is_square() const { return rows_ == cols_; }
  bool is_hermitian() const;
  bool is_idempotent() const;
  // True when the matrix equals c*I for some scalar c.
  bool is_scalar_multiple_of_identity() const;

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(const Scalar& c);
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(const Scalar& c, Mat m) { return m *= c; }
  friend Mat operator*(const Mat& a, const Mat& b);
  friend Vec operator*(const Mat& a, const Vec& v);
  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }
  friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

  std::string str() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> e_;
};

// <u|v>, conjugate-linear in u.
Scalar inner(const Vec& u, const Vec& v);
Vec tensor(const Vec& u, const Vec& v);
Vec tensor(const std::vector<Vec>& factors);
Mat kron(const Mat& a, const Mat& b);
// |u><v|
Mat outer(const Vec& u, const Vec& v);
// |v><v| / <v|v>
Mat projector_onto(const Vec& v);
// Orthogonal projector onto span(vs); vs may be dependent.
Mat projector_onto_span(const std::vector<Vec>& vs, std::size_t dim);

struct Echelon {
  Mat m;                              // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column per nonzero row
};
Echelon rref(Mat a);
std::size_t rank(const Mat& a);
// Basis of {x : A x = 0}.
std::vector<Vec> nullspace(const Mat& a);
// Canonical basis of the column space (rows of rref(A^T)).
std::vector<Vec> column_basis(const Mat& a);
// Canonical basis of span(vs).
std::vector<Vec> span_basis(const std::vector<Vec>& vs, std::size_t dim);
// Orthogonal (unnormalized) basis of span(vs), processing vs in order.
std::vector<Vec> gram_schmidt(const std::vector<Vec>& vs);

Mat reshape(const Vec& v, std::size_t rows, std::size_t cols);
Vec flatten(const Mat& m);

// Scales v so that its first nonzero entry is 1.
Vec canonical_direction(const Vec& v);
// True when u = c v for some nonzero c.
bool parallel(const Vec& u, const Vec& v);
// True when v lies in span(basis).
bool in_span(const Vec& v, const std::vector<Vec>& basis);
bool lex_less(const Vec& a, const Vec& b);

}  // namespace loc
