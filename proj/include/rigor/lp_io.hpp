#pragma once

// Text formats for LP problems and dual vectors.
//
// Problem file (keywords are case-sensitive; '#' starts a comment):
//
//   VARS 2
//   OBJ
//   0 1            # column value
//   1 1
//   INEQ 1         # row count; entries "row column value" or "rhs row value"
//   0 0 1
//   0 1 1
//   rhs 0 1
//   EQ 0
//   BOUNDS
//   0 0..1         # column interval-literal
//   1 0..1
//   END
//
// Omitted matrix entries and right-hand sides are 0; every variable needs a
// finite bound. Values are decimal numerals (enclosed by from_decimal_string)
// or finite interval literals "lo..hi".
//
// Dual file: a line "y v..." and a line "z v..." (either may be empty).

#include <iosfwd>
#include <string>

#include "rigor/lp.hpp"

namespace rigor {

/// Throws ParseError carrying the 1-based line number.
LpProblem read_lp_problem(std::istream& in);
LpProblem read_lp_problem_file(const std::string& path);
/// Entries are written as interval literals (bare numerals when
/// degenerate); reading them back yields enclosures of the same entries.
void write_lp_problem(std::ostream& out, const LpProblem& p);

struct RawDual {
  std::vector<double> y;
  std::vector<double> z;
};

RawDual read_dual(std::istream& in);
RawDual read_dual_file(const std::string& path);
void write_dual(std::ostream& out, const std::vector<double>& y, const std::vector<double>& z);

}  // namespace rigor
