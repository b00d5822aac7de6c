#include "locality/ket.hpp"

#include <stdexcept>

namespace loc {

namespace {

std::string normalize(std::string_view in) {
  std::string out;
  for (std::size_t i = 0; i < in.size();) {
    unsigned char c = static_cast<unsigned char>(in[i]);
    if (in.substr(i, 3) == "\xE2\x88\x92") {  // U+2212 minus
      out += '-';
      i += 3;
    } else if (in.substr(i, 3) == "\xE2\x9F\xA9") {  // U+27E9 ket bracket
      out += ')';
      i += 3;
    } else if (c == '|' || c == '>') {
      // A ket |...> groups like a parenthesis, so |0>|00-01> is a product.
      out += c == '|' ? '(' : ')';
      ++i;
    } else if (c == ' ' || c == '\t') {
      ++i;
    } else {
      out += static_cast<char>(c);
      ++i;
    }
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string s) : s_(std::move(s)) {}

  KetExpr parse() {
    KetExpr e = expr();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("ket '" + s_ + "': " + why + " at position " +
                                std::to_string(pos_));
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }

  static void add_into(KetExpr* acc, const KetExpr& t, const Scalar& sign) {
    if (acc->terms.empty() && acc->slots == 0) acc->slots = t.slots;
    for (const auto& [idx, amp] : t.terms) {
      Scalar& slot = acc->terms[idx];
      slot += sign * amp;
      if (slot.is_zero()) acc->terms.erase(idx);
    }
  }

  KetExpr expr() {
    KetExpr acc;
    bool first = true;
    std::size_t slots = 0;
    while (true) {
      Scalar sign = 1;
      if (peek() == '+' || peek() == '-') {
        if (peek() == '-') sign = -1;
        ++pos_;
      } else if (!first) {
        break;
      }
      KetExpr t = term();
      if (first) {
        slots = t.slots;
      } else if (t.slots != slots) {
        fail("terms with different party counts");
      }
      add_into(&acc, t, sign);
      acc.slots = slots;
      first = false;
      if (at_end() || peek() == ')') break;
    }
    return acc;
  }

  Scalar scalar_token() {
    if (peek() == 'i') {
      ++pos_;
      return Scalar::imag_unit();
    }
    ++pos_;  // '['
    std::size_t close = s_.find(']', pos_);
    if (close == std::string::npos) fail("unterminated '['");
    std::string body = s_.substr(pos_, close - pos_);
    pos_ = close + 1;
    mpq_class q;
    if (q.set_str(body, 10) != 0) fail("bad rational '" + body + "'");
    q.canonicalize();
    return Scalar(q);
  }

  KetExpr term() {
    Scalar coef = 1;
    KetExpr prod;
    prod.terms[{}] = 1;
    bool any_factor = false;
    while (!at_end()) {
      char c = peek();
      if (c == 'i' || c == '[') {
        coef *= scalar_token();
        continue;
      }
      KetExpr f;
      if (c >= '0' && c <= '9') {
        f.slots = 1;
        f.terms[{static_cast<std::size_t>(c - '0')}] = 1;
        ++pos_;
      } else if (c == '{') {
        std::size_t close = s_.find('}', pos_);
        if (close == std::string::npos) fail("unterminated '{'");
        std::size_t idx = std::stoul(s_.substr(pos_ + 1, close - pos_ - 1));
        pos_ = close + 1;
        f.slots = 1;
        f.terms[{idx}] = 1;
      } else if (c == '(') {
        ++pos_;
        f = expr();
        if (peek() != ')') fail("expected ')'");
        ++pos_;
      } else {
        break;
      }
      prod = times(prod, f);
      any_factor = true;
    }
    if (!any_factor) fail("expected a basis factor");
    for (auto& [idx, amp] : prod.terms) amp *= coef;
    return prod;
  }

  static KetExpr times(const KetExpr& a, const KetExpr& b) {
    KetExpr r;
    r.slots = a.slots + b.slots;
    for (const auto& [ia, xa] : a.terms)
      for (const auto& [ib, xb] : b.terms) {
        std::vector<std::size_t> idx = ia;
        idx.insert(idx.end(), ib.begin(), ib.end());
        Scalar& slot = r.terms[idx];
        slot.add_product(xa, xb);
        if (slot.is_zero()) r.terms.erase(idx);
      }
    return r;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

std::string index_token(std::size_t k, std::size_t dim) {
  if (dim <= 10) return std::string(1, static_cast<char>('0' + k));
  return "{" + std::to_string(k) + "}";
}

std::string coef_prefix(const mpq_class& q, bool first, bool imag) {
  std::string out;
  mpq_class a = abs(q);
  if (sgn(q) < 0) {
    out += "-";
  } else if (!first) {
    out += "+";
  }
  if (a != 1) out += "[" + a.get_str() + "]";
  if (imag) out += "i";
  return out;
}

}  // namespace

KetExpr parse_ket(std::string_view text) {
  std::string s = normalize(text);
  if (s.empty()) throw std::invalid_argument("empty ket");
  return Parser(s).parse();
}

Vec elaborate(const KetExpr& k, const std::vector<std::size_t>& dims) {
  if (k.slots != dims.size() && !k.terms.empty())
    throw std::invalid_argument("ket has " + std::to_string(k.slots) + " parties, expected " +
                                std::to_string(dims.size()));
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  Vec v(total);
  for (const auto& [idx, amp] : k.terms) {
    std::size_t flat = 0;
    for (std::size_t p = 0; p < dims.size(); ++p) {
      if (idx[p] >= dims[p])
        throw std::invalid_argument("basis index " + std::to_string(idx[p]) +
                                    " out of range for dimension " + std::to_string(dims[p]));
      flat = flat * dims[p] + idx[p];
    }
    v[flat] += amp;
  }
  return v;
}

Vec ket(std::string_view text, const std::vector<std::size_t>& dims) {
  return elaborate(parse_ket(text), dims);
}

std::vector<std::string> expand_pm(std::string_view text) {
  const std::string pm = "\xC2\xB1";
  std::string s(text);
  if (s.find(pm) == std::string::npos) return {s};
  std::string plus, minus;
  for (std::size_t i = 0; i < s.size();) {
    if (s.compare(i, pm.size(), pm) == 0) {
      plus += '+';
      minus += '-';
      i += pm.size();
    } else {
      plus += s[i];
      minus += s[i];
      ++i;
    }
  }
  return {plus, minus};
}

std::string format_ket(const Vec& v, const std::vector<std::size_t>& dims) {
  std::string out;
  bool first = true;
  for (std::size_t flat = 0; flat < v.dim(); ++flat) {
    if (v[flat].is_zero()) continue;
    std::string digits;
    std::size_t rem = flat;
    std::vector<std::size_t> idx(dims.size());
    for (std::size_t p = dims.size(); p-- > 0;) {
      idx[p] = rem % dims[p];
      rem /= dims[p];
    }
    for (std::size_t p = 0; p < dims.size(); ++p) digits += index_token(idx[p], dims[p]);
    if (sgn(v[flat].re()) != 0) {
      out += coef_prefix(v[flat].re(), first, false) + digits;
      first = false;
    }
    if (sgn(v[flat].im()) != 0) {
      out += coef_prefix(v[flat].im(), first, true) + digits;
      first = false;
    }
  }
  return first ? "0" : out;
}

std::vector<Mat> parse_pvm_elements(std::string_view text, const std::vector<std::size_t>& dims) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  std::vector<Mat> elements;
  std::string s(text);
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(';', start);
    if (end == std::string::npos) end = s.size();
    std::string elem = s.substr(start, end - start);
    std::vector<Vec> kets;
    std::size_t ks = 0;
    while (ks <= elem.size()) {
      std::size_t ke = elem.find(',', ks);
      if (ke == std::string::npos) ke = elem.size();
      kets.push_back(ket(elem.substr(ks, ke - ks), dims));
      ks = ke + 1;
    }
    elements.push_back(projector_onto_span(kets, total));
    start = end + 1;
  }
  return elements;
}

}  // namespace loc
