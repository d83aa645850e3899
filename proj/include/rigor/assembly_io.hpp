#pragma once

// Text format for assembly problems and JSON certificates.
//
// Problem file ('#' starts a comment):
//
//   domain D                     # one block per local domain
//     vars x y
//     box x 0..1                 # interval literal per variable
//     box y -1..1
//     phi x - x*x + y            # φ ≥ 0, written over the variable names
//   end
//   objective D.x 1 D.y -0.5     # omitted globals have coefficient 0
//   row D.x 1 E.u -1 <= 0        # also >= and = (stored as ≤ rows)
//
// Globals are the domain variables in block order.

#include <iosfwd>
#include <string>

#include "rigor/assembly.hpp"

namespace rigor {

/// Throws ParseError carrying the 1-based line number.
AssemblyProblem read_assembly_problem(std::istream& in);
AssemblyProblem read_assembly_problem_file(const std::string& path);
void write_assembly_problem(std::ostream& out, const AssemblyProblem& p);

/// Digest of the canonical written form.
std::string assembly_digest(const AssemblyProblem& p);

struct StoredCertificate {
  DualityCertificate certificate;
  std::string problem_digest;
};

inline constexpr const char* kCertificateSchema = "rigor.duality-certificate/1";

void write_certificate(std::ostream& out, const AssemblyProblem& p, const DualityCertificate& cert);
/// Throws ParseError on malformed JSON or a schema mismatch.
StoredCertificate read_certificate(std::istream& in);
StoredCertificate read_certificate_file(const std::string& path);

}  // namespace rigor
