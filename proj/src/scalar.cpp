#include "locality/scalar.hpp"

#include <stdexcept>

namespace loc {

Scalar& Scalar::operator+=(const Scalar& o) {
  re_ += o.re_;
  if (sgn(o.im_) != 0) im_ += o.im_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  re_ -= o.re_;
  if (sgn(o.im_) != 0) im_ -= o.im_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw std::domain_error("Scalar division by zero");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    if (sgn(im_) != 0) im_ /= o.re_;
    return *this;
  }
  mpq_class n = o.norm2();
  *this *= o.conj();
  re_ /= n;
  im_ /= n;
  return *this;
}

void Scalar::add_product(const Scalar& a, const Scalar& b) {
  if (a.is_zero() || b.is_zero()) return;
  if (sgn(a.im_) == 0 && sgn(b.im_) == 0) {
    re_ += a.re_ * b.re_;
    return;
  }
  re_ += a.re_ * b.re_ - a.im_ * b.im_;
  im_ += a.re_ * b.im_ + a.im_ * b.re_;
}

void Scalar::add_conj_product(const Scalar& a, const Scalar& b) {
  if (a.is_zero() || b.is_zero()) return;
  if (sgn(a.im_) == 0 && sgn(b.im_) == 0) {
    re_ += a.re_ * b.re_;
    return;
  }
  re_ += a.re_ * b.re_ + a.im_ * b.im_;
  im_ += a.re_ * b.im_ - a.im_ * b.re_;
}

std::string Scalar::str() const {
  if (sgn(im_) == 0) return re_.get_str();
  if (sgn(re_) == 0) return im_.get_str() + "i";
  std::string s = re_.get_str();
  if (sgn(im_) > 0) s += "+";
  return s + im_.get_str() + "i";
}

std::size_t Scalar::hash() const {
  std::hash<std::string> h;
  return h(re_.get_str()) * 31u + h(im_.get_str());
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

bool rational_sqrt(const mpq_class& q, mpq_class* root) {
  if (sgn(q) < 0) return false;
  mpz_class n = q.get_num(), d = q.get_den();
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0 || mpz_perfect_square_p(d.get_mpz_t()) == 0) {
    return false;
  }
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  *root = mpq_class(rn, rd);
  root->canonicalize();
  return true;
}

}  // namespace loc
