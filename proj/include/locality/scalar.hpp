#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <ostream>
#include <string>

namespace loc {

// Gaussian rational re + i*im. Equality is exact.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(int v) : re_(v) {}   // NOLINT(google-explicit-constructor)
  Scalar(mpq_class re) : re_(std::move(re)) {}  // NOLINT
  Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

  static Scalar imag_unit() { return Scalar(mpq_class(0), mpq_class(1)); }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }
  // |z|^2, always rational.
  mpq_class norm2() const { return re_ * re_ + im_ * im_; }

  Scalar operator-() const { return Scalar(-re_, -im_); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  // Adds a*b without building a temporary Scalar.
  void add_product(const Scalar& a, const Scalar& b);
  // Adds conj(a)*b.
  void add_conj_product(const Scalar& a, const Scalar& b);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // Total order on (re, im); only used for canonical sorting.
  friend bool lex_less(const Scalar& a, const Scalar& b) {
    int c = cmp(a.re_, b.re_);
    if (c != 0) return c < 0;
    return cmp(a.im_, b.im_) < 0;
  }

  double real_double() const { return re_.get_d(); }
  double imag_double() const { return im_.get_d(); }

  std::string str() const;
  std::size_t hash() const;

 private:
  mpq_class re_;
  mpq_class im_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

// Exact square root of a nonnegative rational, if it is a perfect square.
bool rational_sqrt(const mpq_class& q, mpq_class* root);

}  // namespace loc
