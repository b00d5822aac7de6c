#pragma once

// Ket-string notation used by fixtures and the command line.
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := (scalar | factor)+          at least one factor
//   factor := digit | '{' number '}' | '(' expr ')'
//   scalar := 'i' | '[' rational ']'      e.g. [2], [-1/3]
//
// Each digit is one party's basis index; juxtaposed factors are tensored.
// "0(00+01+10-11)" is |0>(|00>+|01>+|10>-|11>). A ket |...> (ASCII '>' or
// the Unicode bracket) groups like parentheses, so |0>|00-01> is a product.
// Spaces are ignored; U+2212 is read as '-'.
// A '±' yields two kets (all '±' take the same sign).
//
// PVM strings: ';' separates elements, ',' separates kets within an element;
// each element is the projector onto the span of its kets.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "locality/linalg.hpp"

namespace loc {

struct KetExpr {
  std::size_t slots = 0;
  std::map<std::vector<std::size_t>, Scalar> terms;  // basis tuple -> amplitude
};

KetExpr parse_ket(std::string_view text);
Vec elaborate(const KetExpr& k, const std::vector<std::size_t>& dims);
Vec ket(std::string_view text, const std::vector<std::size_t>& dims);

// Expands '±' into '+' and '-' variants; returns {text} when absent.
std::vector<std::string> expand_pm(std::string_view text);

// Renders v in the same notation; parse_ket(format_ket(v)) reproduces v.
std::string format_ket(const Vec& v, const std::vector<std::size_t>& dims);

// Parses a PVM string into element projectors on a group of the given dims.
std::vector<Mat> parse_pvm_elements(std::string_view text, const std::vector<std::size_t>& dims);

}  // namespace loc
