#pragma once

// Inequality task files (.ineq).
//
//   arity 2
//   f x0*x0 + x1*x1 - 3
//   domain 0..1 -1..1        # one interval literal per variable
//   margin 0
//   strict yes               # optional, default yes
//   constraint 1 - x0        # optional, repeatable: φ(x) ≥ 0
//
// '#' starts a comment. The claim is f < −margin (f ≤ −margin when not
// strict) on the domain.

#include <iosfwd>
#include <string>

#include "rigor/prover.hpp"

namespace rigor {

/// Throws ParseError carrying the 1-based line number.
ProofTask read_task(std::istream& in);
ProofTask read_task_file(const std::string& path);
void write_task(std::ostream& out, const ProofTask& t);
/// FNV-1a digest of the canonical written task.
std::string task_digest(const ProofTask& t);

}  // namespace rigor
