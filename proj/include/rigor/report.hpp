#pragma once

// JSON run reports. Every report is
//
//   { "schema": "rigor.report/1",
//     "manifest": { "subcommand", "version", "inputs": {name: digest},
//                   "config": {...}, "seed", "wall_time_s" },
//     "result": {...} }
//
// Doubles are written as strings in shortest round-trip form and intervals as
// "lo..hi" literals, so reading a report back recovers the exact binary64
// values. Keys are sorted, which makes the text a function of the content.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rigor/assembly.hpp"
#include "rigor/geom.hpp"
#include "rigor/graphgen.hpp"
#include "rigor/lp.hpp"
#include "rigor/prover.hpp"

namespace rigor {

inline constexpr const char* kReportSchema = "rigor.report/1";
inline constexpr const char* kToolkitVersion = "0.1.0";

using Json = nlohmann::json;

struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> inputs;  // name -> digest
  Json config = Json::object();
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  std::string version = kToolkitVersion;
};

/// Pretty-printed report text, newline-terminated.
std::string render_report(const RunManifest& m, const Json& result);
/// Throws ParseError when the text is not a well-formed report.
Json parse_report(std::string_view text);
RunManifest read_manifest(const Json& report);
/// The report with the wall-time field removed, for reproducibility checks.
std::string without_wall_time(std::string_view report_text);

Json encode(const ProofReport& r, std::size_t max_cells_listed = 10000);
ProofReport decode_proof(const Json& result);

Json encode(const BoundCertificate& c);
BoundCertificate decode_bound(const Json& result);

Json encode(const DualityVerdict& v);
Json encode(const BranchResult& r);

Json encode(const GenerationResult& r);

Json encode(const GeomVerdict& v);
GeomVerdict decode_geom(const Json& result);

}  // namespace rigor
