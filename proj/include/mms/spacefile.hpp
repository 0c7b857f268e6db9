#pragma once

#include <string>
#include <variant>

#include "mms/space.hpp"

namespace mms {

// Parse error with 1-based position information.
struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& what, int l, int c)
      : std::runtime_error(what + " at line " + std::to_string(l) + ", column " +
                           std::to_string(c)),
        line(l),
        column(c) {}
};

using ParsedSpace = std::variant<FiniteMmSpace, ExtendedMmSpace>;

// Space definition text: either an explicit block
//
//   labels: [a b c]
//   dist: [[0 1 2] [1 0 1] [2 1 0]]
//   weight: [0.5 0.3 0.2]
//
// or a generator expression
//
//   expr: gapped_sum([(two_point(1, 0.5), 0, 0.5) (point(), 0, 0.5)], 5)
//
// Generators: point(), two_point(l, p), cycle(m, circumference),
// dissipation(n), scale(e, t), restrict(e, [i ...]), lp_product(e1, e2, p),
// lp_power(e, p, n), direct_sum([(e, a) ...]), gapped_sum([(e, base, a) ...], r),
// wedge(e1, b1, e2, b2, alpha). p may be inf.
ParsedSpace parse_space_text(const std::string& text);

// A bare expression (no "expr:" prefix) is also accepted; used by the CLI to
// take inline space arguments.
ParsedSpace parse_space_expression(const std::string& expr);

// Canonical explicit-form serialization; reparses to an mm-isomorphic space.
std::string serialize_space(const FiniteMmSpace& x);
std::string serialize_space(const ExtendedMmSpace& x);

}  // namespace mms
