#include "rigor/report.hpp"

namespace rigor {

namespace {

Json num(double x) { return format_double(x); }

double get_num(const Json& j, const char* key) { return read_binary64(j.at(key).get<std::string>()); }

Json box_json(const Box& b) {
  Json out = Json::array();
  for (const auto& d : b.dims()) out.push_back(format_interval(d));
  return out;
}

Box box_from(const Json& j) {
  std::vector<Interval> dims;
  for (const auto& s : j) dims.push_back(read_binary64_interval(s.get<std::string>()));
  return Box(dims);
}

Json boxes_json(const std::vector<Box>& boxes, std::size_t cap) {
  Json out = Json::array();
  for (std::size_t i = 0; i < boxes.size() && i < cap; ++i) out.push_back(box_json(boxes[i]));
  return out;
}

ProofStatus status_from(const std::string& s) {
  for (auto st : {ProofStatus::Proven, ProofStatus::Undecided, ProofStatus::EvaluationFailure}) {
    if (s == to_string(st)) return st;
  }
  throw Error("unknown proof status " + s);
}

}  // namespace

std::string render_report(const RunManifest& m, const Json& result) {
  Json doc;
  doc["schema"] = kReportSchema;
  Json man;
  man["subcommand"] = m.subcommand;
  man["version"] = m.version;
  man["inputs"] = Json::object();
  for (const auto& [k, v] : m.inputs) man["inputs"][k] = v;
  man["config"] = m.config;
  man["seed"] = std::to_string(m.seed);
  man["wall_time_s"] = num(m.wall_time_s);
  doc["manifest"] = man;
  doc["result"] = result;
  return doc.dump(2) + "\n";
}

Json parse_report(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("report is not JSON: ") + e.what(), e.byte);
  }
  if (!doc.is_object() || doc.value("schema", "") != kReportSchema) throw ParseError("unknown report schema", 0);
  if (!doc.contains("manifest") || !doc.contains("result")) throw ParseError("report lacks manifest or result", 0);
  try {
    read_manifest(doc);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad manifest: ") + e.what(), 0);
  }
  return doc;
}

RunManifest read_manifest(const Json& report) {
  const Json& man = report.at("manifest");
  RunManifest m;
  m.subcommand = man.at("subcommand").get<std::string>();
  m.version = man.at("version").get<std::string>();
  for (const auto& [k, v] : man.at("inputs").items()) m.inputs[k] = v.get<std::string>();
  m.config = man.at("config");
  m.seed = std::stoull(man.at("seed").get<std::string>());
  m.wall_time_s = get_num(man, "wall_time_s");
  return m;
}

std::string without_wall_time(std::string_view report_text) {
  Json doc = parse_report(report_text);
  doc["manifest"].erase("wall_time_s");
  return doc.dump(2);
}

Json encode(const ProofReport& r, std::size_t max_cells_listed) {
  Json j;
  j["status"] = to_string(r.status);
  j["cells_processed"] = r.cells_processed;
  j["max_depth_reached"] = r.max_depth_reached;
  j["best_upper_bound_seen"] = num(r.best_upper_bound_seen);
  j["undecided_total"] = r.undecided.size();
  j["failures_total"] = r.failures.size();
  j["undecided"] = boxes_json(r.undecided, max_cells_listed);
  j["failures"] = boxes_json(r.failures, max_cells_listed);
  return j;
}

ProofReport decode_proof(const Json& j) {
  ProofReport r;
  r.status = status_from(j.at("status").get<std::string>());
  r.cells_processed = j.at("cells_processed").get<std::size_t>();
  r.max_depth_reached = j.at("max_depth_reached").get<int>();
  r.best_upper_bound_seen = get_num(j, "best_upper_bound_seen");
  for (const auto& b : j.at("undecided")) r.undecided.push_back(box_from(b));
  for (const auto& b : j.at("failures")) r.failures.push_back(box_from(b));
  return r;
}

Json encode(const BoundCertificate& c) {
  Json j;
  j["bound"] = num(c.bound);
  j["D"] = num(c.D);
  j["residual_max_norm"] = num(c.residual_max_norm);
  j["input_digest"] = c.digest;
  Json res = Json::array();
  for (const auto& d : c.residual) res.push_back(format_interval(d));
  j["residual"] = res;
  return j;
}

BoundCertificate decode_bound(const Json& j) {
  BoundCertificate c;
  c.bound = get_num(j, "bound");
  c.D = get_num(j, "D");
  c.residual_max_norm = get_num(j, "residual_max_norm");
  c.digest = j.at("input_digest").get<std::string>();
  for (const auto& s : j.at("residual")) c.residual.push_back(read_binary64_interval(s.get<std::string>()));
  return c;
}

Json encode(const DualityVerdict& v) {
  Json j;
  j["certified"] = v.certified;
  j["global_check"] = v.global_check;
  j["reason"] = v.reason;
  Json doms = Json::array();
  for (const auto& d : v.domains) {
    Json dj;
    dj["domain"] = d.domain;
    dj["proof"] = encode(d.report, 100);
    doms.push_back(dj);
  }
  j["domains"] = doms;
  return j;
}

Json encode(const BranchResult& r) {
  Json j;
  j["certified"] = r.certified;
  Json leaves = Json::array();
  for (const auto& l : r.leaves) {
    Json lj;
    lj["certified"] = l.certified;
    lj["reason"] = l.reason;
    lj["boxes"] = boxes_json(l.boxes, l.boxes.size());
    if (l.certificate) lj["t0"] = l.certificate->t0;
    leaves.push_back(lj);
  }
  j["leaves"] = leaves;
  return j;
}

Json encode(const GenerationResult& r) {
  Json j;
  j["complete"] = r.complete;
  j["expanded"] = r.expanded;
  j["terminal_classes"] = r.terminals.size();
  Json classes = Json::array();
  for (std::size_t i = 0; i < r.terminals.size(); ++i) {
    Json c;
    c["canonical"] = r.canonical[i];
    c["vertices"] = r.terminals[i].vertices;
    c["faces"] = r.terminals[i].faces.size();
    c["seed"] = r.terminals[i].seed_size;
    Json path = Json::array();
    for (const auto& step : r.terminals[i].path) path.push_back(step);
    c["path"] = path;
    classes.push_back(c);
  }
  j["classes"] = classes;
  return j;
}

Json encode(const GeomVerdict& v) {
  Json j;
  j["verdict"] = to_string(v.kind);
  j["reason"] = v.reason;
  if (v.witness) j["witness"] = format_interval(*v.witness);
  if (v.config) {
    Json pts = Json::array();
    for (std::size_t i = 0; i < v.config->labels.size(); ++i) {
      Json c = Json::array();
      for (const auto& x : v.config->coords[i]) c.push_back(format_interval(x));
      pts.push_back({{"label", v.config->labels[i]}, {"coords", c}});
    }
    j["configuration"] = pts;
  }
  return j;
}

GeomVerdict decode_geom(const Json& j) {
  GeomVerdict v;
  const std::string kind = j.at("verdict").get<std::string>();
  if (kind == to_string(VerdictKind::NoSuchConfiguration)) {
    v.kind = VerdictKind::NoSuchConfiguration;
  } else if (kind == to_string(VerdictKind::Inconclusive)) {
    v.kind = VerdictKind::Inconclusive;
  } else {
    throw Error("unknown verdict " + kind);
  }
  v.reason = j.at("reason").get<std::string>();
  if (j.contains("witness")) v.witness = read_binary64_interval(j["witness"].get<std::string>());
  if (j.contains("configuration")) {
    PointConfig c;
    for (const auto& pt : j["configuration"]) {
      c.labels.push_back(pt.at("label").get<std::string>());
      const Json& coords = pt.at("coords");
      Vec3 p;
      for (std::size_t k = 0; k < 3; ++k) p[k] = read_binary64_interval(coords.at(k).get<std::string>());
      c.coords.push_back(p);
    }
    v.config = c;
  }
  return v;
}

}  // namespace rigor
