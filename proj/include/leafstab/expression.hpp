#pragma once

// Text form of rational functions over a chart.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | atom ('^' int)?
//   atom   := rational | ident | '(' expr ')'
//   rational := int ('/' int)?
//
// Identifiers must be chart variables or parameters. Whitespace is ignored.

#include <string_view>

#include "leafstab/poly.hpp"

namespace leafstab {

/// Throws ParseError carrying the byte offset of the problem.
RationalFunction parse_expression(std::string_view text, const Chart& chart);

/// Inverse of parse_expression up to canonical form.
std::string print_expression(const RationalFunction& f, const Chart& chart);

}  // namespace leafstab
