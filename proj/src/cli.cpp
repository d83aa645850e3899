#include "rigor/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rigor/assembly_io.hpp"
#include "rigor/digest.hpp"
#include "rigor/lp_io.hpp"
#include "rigor/report.hpp"
#include "rigor/task_io.hpp"

namespace rigor {

namespace {

struct Globals {
  unsigned threads = 1;
  std::uint64_t seed = 1;
  std::string report;
};

/// Bound values: interval literals plus "sqrt(x)" for the enclosure of √x.
Interval bound_value(const std::string& text) {
  if (text.rfind("sqrt(", 0) == 0 && text.back() == ')') {
    return sqrt_interval(from_decimal_string(text.substr(5, text.size() - 6))).value;
  }
  return parse_interval_literal(text);
}

std::string digest_of(const std::string& text) { return fnv1a_hex(text); }

class Runner {
 public:
  Runner(const Globals& g, std::ostream& out) : g_(g), out_(out), start_(std::chrono::steady_clock::now()) {}

  int finish(RunManifest m, const Json& result, int code) {
    m.seed = g_.seed;
    m.config["threads"] = g_.threads;
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (!g_.report.empty()) {
      std::ofstream f(g_.report, std::ios::binary);
      if (!f) throw Error("cannot write " + g_.report);
      f << render_report(m, result);
    }
    return code;
  }

  const Globals& g_;
  std::ostream& out_;

 private:
  std::chrono::steady_clock::time_point start_;
};

struct ProveArgs {
  std::string task;
  std::size_t max_cells = ProverConfig{}.max_cells;
  int max_depth = ProverConfig{}.max_depth;
  double min_width = ProverConfig{}.min_width;
  bool no_early_stop = false;
};

int cmd_prove(Runner& run, const ProveArgs& a) {
  const ProofTask task = read_task_file(a.task);
  ProverConfig cfg;
  cfg.max_cells = a.max_cells;
  cfg.max_depth = a.max_depth;
  cfg.min_width = a.min_width;
  cfg.stop_at_counterexample = !a.no_early_stop;
  cfg.threads = run.g_.threads;
  const ProofReport r = prove_negative(task, cfg);
  run.out_ << to_string(r.status) << ": " << r.cells_processed << " cells, " << r.undecided.size()
           << " undecided\n";
  RunManifest m;
  m.subcommand = "prove";
  m.inputs["task"] = task_digest(task);
  m.config = {{"max_cells", a.max_cells},
              {"max_depth", a.max_depth},
              {"min_width", format_double(a.min_width)},
              {"stop_at_counterexample", cfg.stop_at_counterexample}};
  return run.finish(m, encode(r), r.status == ProofStatus::Proven ? 0 : 1);
}

struct LpArgs {
  std::string problem, dual;
  bool solve = false;
};

int cmd_lp(Runner& run, const LpArgs& a) {
  const LpProblem p = read_lp_problem_file(a.problem);
  RunManifest m;
  m.subcommand = "lp-certify";
  m.inputs["problem"] = input_digest(p);
  m.config = {{"solve", a.solve}, {"dual_file", !a.dual.empty()}};
  RawDual raw;
  std::string source;
  if (!a.dual.empty()) {
    raw = read_dual_file(a.dual);
    std::ostringstream s;
    write_dual(s, raw.y, raw.z);
    m.inputs["dual"] = digest_of(s.str());
    source = "file";
  }
  if (a.solve) {
    try {
      const ApproxSolution sol = solve_approx(p);
      raw.y = sol.y;
      raw.z = sol.z;
      source = "solve_approx";
    } catch (const NoProgress& e) {
      if (a.dual.empty()) {
        run.out_ << "no dual available: " << e.what() << '\n';
        return run.finish(m, {{"certified", false}, {"reason", e.what()}}, 1);
      }
      run.out_ << "solve_approx failed (" << e.what() << "), using the dual file\n";
    }
  }
  if (source.empty()) throw Error("lp-certify needs --dual or --solve");
  const BoundCertificate c = certify_upper_bound(p, clamp_dual(p, raw.y, raw.z));
  run.out_ << "certified upper bound " << format_double(c.bound) << '\n';
  Json result = encode(c);
  result["certified"] = true;
  result["dual_source"] = source;
  return run.finish(m, result, 0);
}

struct AsmArgs {
  std::string problem, certificate;
  std::vector<std::string> x_star;
  std::string M;
  std::size_t random_points = FitOptions{}.random_points;
  std::size_t max_cells = ProverConfig{}.max_cells;
  int max_depth = 6;
};

ProverConfig asm_prover(const Runner& run, const AsmArgs& a) {
  ProverConfig cfg;
  cfg.stop_at_counterexample = true;
  cfg.max_cells = a.max_cells;
  cfg.threads = run.g_.threads;
  return cfg;
}

int cmd_assemble(Runner& run, const std::string& mode, const AsmArgs& a) {
  const AssemblyProblem p = read_assembly_problem_file(a.problem);
  RunManifest m;
  m.subcommand = "assemble " + mode;
  m.inputs["problem"] = assembly_digest(p);
  m.config = {{"max_cells", a.max_cells}};
  const ProverConfig cfg = asm_prover(run, a);
  if (mode == "verify") {
    if (a.certificate.empty()) throw Error("assemble verify needs --certificate");
    std::ifstream f(a.certificate, std::ios::binary);
    if (!f) throw Error("cannot open " + a.certificate);
    std::stringstream text;
    text << f.rdbuf();
    m.inputs["certificate"] = digest_of(text.str());
    const StoredCertificate stored = read_certificate(text);
    if (stored.problem_digest != assembly_digest(p)) {
      throw Error("certificate was written for problem " + stored.problem_digest + ", not " + assembly_digest(p));
    }
    const DualityVerdict v = verify_duality(p, stored.certificate, cfg);
    run.out_ << (v.certified ? "Certified" : "Refuted") << ": M = " << stored.certificate.M
             << (v.reason.empty() ? "" : " (" + v.reason + ")") << '\n';
    Json result = encode(v);
    result["M"] = stored.certificate.M;
    return run.finish(m, result, v.certified ? 0 : 1);
  }
  if (a.M.empty() || a.x_star.empty()) throw Error("assemble " + mode + " needs --x-star and --M");
  from_decimal_string(a.M);
  for (const auto& x : a.x_star) from_decimal_string(x);
  if (a.x_star.size() != p.num_globals()) {
    throw Error("--x-star has " + std::to_string(a.x_star.size()) + " values, the problem has " +
                std::to_string(p.num_globals()) + " variables");
  }
  FitOptions fit;
  fit.seed = run.g_.seed;
  fit.random_points = a.random_points;
  m.config["M"] = a.M;
  m.config["x_star"] = a.x_star;
  m.config["random_points"] = a.random_points;
  if (mode == "fit") {
    DualityCertificate cert;
    try {
      cert = fit_dual(p, a.x_star, a.M, default_test_points(p, fit), fit);
    } catch (const NoCandidate& e) {
      run.out_ << "no candidate certificate: " << e.what() << '\n';
      return run.finish(m, {{"certified", false}, {"reason", e.what()}}, 1);
    }
    const DualityVerdict v = verify_duality(p, cert, cfg);
    if (!a.certificate.empty()) {
      std::ofstream f(a.certificate, std::ios::binary);
      if (!f) throw Error("cannot write " + a.certificate);
      write_certificate(f, p, cert);
    }
    run.out_ << (v.certified ? "Certified" : "Refuted") << ": M = " << a.M << ", t0 = " << cert.t0 << '\n';
    Json result = encode(v);
    result["t0"] = cert.t0;
    return run.finish(m, result, v.certified ? 0 : 1);
  }
  m.config["max_depth"] = a.max_depth;
  const BranchResult r = certify_by_branching(p, a.x_star, a.M, fit, cfg, a.max_depth);
  const auto good = std::count_if(r.leaves.begin(), r.leaves.end(), [](const BranchLeaf& l) { return l.certified; });
  run.out_ << (r.certified ? "Certified" : "Refuted") << ": " << good << " of " << r.leaves.size()
           << " leaves certified\n";
  return run.finish(m, encode(r), r.certified ? 0 : 1);
}

struct GraphArgs {
  int max_vertices = 0;
  std::string prune = "none";
  std::string out;
  std::size_t budget = GeneratorConfig{}.budget;
};

int cmd_graphs(Runner& run, const GraphArgs& a) {
  if (a.max_vertices < 3) throw Error("--max-vertices must be at least 3");
  const PruneSpec spec = PruneSpec::parse(a.prune);
  GeneratorConfig cfg;
  cfg.N = a.max_vertices;
  cfg.prune = spec.predicate();
  cfg.budget = a.budget;
  cfg.threads = run.g_.threads;
  const GenerationResult r = generate(cfg);
  if (!a.out.empty()) {
    std::filesystem::create_directories(a.out);
    for (std::size_t i = 0; i < r.terminals.size(); ++i) {
      std::ostringstream name;
      name << "class_" << std::setw(4) << std::setfill('0') << i << ".graph";
      std::ofstream f(std::filesystem::path(a.out) / name.str(), std::ios::binary);
      if (!f) throw Error("cannot write into " + a.out);
      write_graph(f, r.terminals[i]);
    }
  }
  run.out_ << r.terminals.size() << " terminal classes, " << r.expanded << " graphs expanded"
           << (r.complete ? "" : " (budget exhausted, incomplete)") << '\n';
  RunManifest m;
  m.subcommand = "graphs";
  m.config = {{"max_vertices", a.max_vertices}, {"prune", spec.to_string()}, {"budget", a.budget}};
  return run.finish(m, encode(r), r.complete ? 0 : 1);
}

struct GeomArgs {
  std::vector<std::string> edges;
  std::string r = "2", r1, r2, r3, spec;
  std::size_t max_cells = SweepOptions{}.max_cells;
  double min_width = SweepOptions{}.min_width;
};

int cmd_geom(Runner& run, const std::string& mode, const GeomArgs& a) {
  RunManifest m;
  m.subcommand = "geom " + mode;
  GeomVerdict v;
  if (mode == "simplex") {
    if (a.edges.size() != 6) throw Error("--edges needs six values");
    std::array<Interval, 6> e;
    for (std::size_t i = 0; i < 6; ++i) e[i] = bound_value(a.edges[i]);
    m.config = {{"edges", a.edges}, {"r", a.r}};
    v = check_simplex_interior_point(e, bound_value(a.r));
  } else if (mode == "face") {
    if (a.edges.size() != 3) throw Error("--edges needs three values");
    m.config = {{"edges", a.edges}, {"r", a.r}};
    v = check_face_escape({bound_value(a.edges[0]), bound_value(a.edges[1]), bound_value(a.edges[2])},
                          bound_value(a.r));
  } else if (mode == "segment") {
    if (a.r1.empty() || a.r2.empty() || a.r3.empty()) throw Error("geom segment needs --r1, --r2 and --r3");
    m.config = {{"r1", a.r1}, {"r2", a.r2}, {"r3", a.r3}};
    v = check_segment_through_triangle(bound_value(a.r1), bound_value(a.r2), bound_value(a.r3));
  } else {
    if (a.spec.empty()) throw Error("geom linked needs --spec");
    const DistanceSpec s = read_distance_spec_file(a.spec);
    std::ostringstream text;
    write_distance_spec(text, s);
    m.inputs["spec"] = digest_of(text.str());
    m.config = {{"max_cells", a.max_cells}, {"min_width", format_double(a.min_width)}};
    v = check_linked_line(s, {a.max_cells, a.min_width});
  }
  run.out_ << to_string(v.kind) << ": " << v.reason;
  if (v.witness) run.out_ << " [witness " << format_interval(*v.witness) << "]";
  run.out_ << '\n';
  return run.finish(m, encode(v), v.kind == VerdictKind::NoSuchConfiguration ? 0 : 1);
}

struct PlanArgs {
  std::string task, expr;
  int arity = 0;
};

int cmd_plan(Runner& run, const PlanArgs& a) {
  Expr e;
  int arity = a.arity;
  RunManifest m;
  m.subcommand = "plan-dump";
  if (!a.task.empty()) {
    const ProofTask t = read_task_file(a.task);
    e = t.expr;
    arity = static_cast<int>(t.domain.size());
    m.inputs["task"] = task_digest(t);
  } else {
    if (a.expr.empty() || arity < 1) throw Error("plan-dump needs --task or --expr with --arity");
    e = parse_expr(a.expr, arity);
    m.inputs["expr"] = digest_of(e.to_string());
  }
  const Evaluator ev = compile(e, arity);
  const std::string listing = ev.dump();
  run.out_ << listing;
  return run.finish(m, {{"instructions", ev.instruction_count()}, {"listing", listing}}, 0);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rigorous numerics toolkit: inequality proofs, LP and duality certificates, graph enumeration, "
               "point-configuration checks.",
               "rigor"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", g.seed, "seed for every random choice");
  app.add_option("--report", g.report, "write a JSON report here");

  ProveArgs prove;
  auto* p = app.add_subcommand("prove", "prove f < -margin over a box");
  p->add_option("--task", prove.task, ".ineq task file")->required();
  p->add_option("--max-cells", prove.max_cells);
  p->add_option("--max-depth", prove.max_depth);
  p->add_option("--min-width", prove.min_width);
  p->add_flag("--no-early-stop", prove.no_early_stop, "keep going after a counterexample cell");

  LpArgs lp;
  auto* l = app.add_subcommand("lp-certify", "rigorous upper bound for an LP from a dual");
  l->add_option("--problem", lp.problem, "LP problem file")->required();
  l->add_option("--dual", lp.dual, "dual file");
  l->add_flag("--solve", lp.solve, "compute duals with the approximate simplex");

  AsmArgs as;
  auto* asmb = app.add_subcommand("assemble", "linear assembly problems");
  asmb->require_subcommand(1);
  std::string asm_mode;
  for (const char* mode : {"fit", "verify", "branch"}) {
    auto* s = asmb->add_subcommand(mode);
    s->add_option("--problem", as.problem, ".asm problem file")->required();
    s->add_option("--certificate", as.certificate, "certificate file");
    s->add_option("--max-cells", as.max_cells, "prover cells per domain");
    if (std::string(mode) != "verify") {
      s->add_option("--x-star", as.x_star, "reference point, comma separated")->delimiter(',');
      s->add_option("--M", as.M, "claimed bound");
      s->add_option("--random-points", as.random_points);
    }
    if (std::string(mode) == "branch") s->add_option("--max-depth", as.max_depth);
    s->callback([&asm_mode, mode] { asm_mode = mode; });
  }

  GraphArgs gr;
  auto* gs = app.add_subcommand("graphs", "enumerate decorated plane graphs");
  gs->add_option("--max-vertices", gr.max_vertices)->required();
  gs->add_option("--prune", gr.prune, "none, all-triangles or key=value,...");
  gs->add_option("--out", gr.out, "directory for one file per class");
  gs->add_option("--budget", gr.budget, "graphs expanded before giving up");

  GeomArgs ge;
  auto* geo = app.add_subcommand("geom", "point-configuration nonexistence checks");
  geo->require_subcommand(1);
  std::string geom_mode;
  auto* gsx = geo->add_subcommand("simplex");
  gsx->add_option("--edges", ge.edges, "d01,d02,d03,d12,d13,d23")->delimiter(',')->required();
  gsx->add_option("--r", ge.r);
  auto* gf = geo->add_subcommand("face");
  gf->add_option("--edges", ge.edges, "d01,d02,d12")->delimiter(',')->required();
  gf->add_option("--r", ge.r);
  auto* gse = geo->add_subcommand("segment");
  gse->add_option("--r1", ge.r1)->required();
  gse->add_option("--r2", ge.r2)->required();
  gse->add_option("--r3", ge.r3)->required();
  auto* gl = geo->add_subcommand("linked");
  gl->add_option("--spec", ge.spec, ".dspec file")->required();
  gl->add_option("--max-cells", ge.max_cells);
  gl->add_option("--min-width", ge.min_width);
  for (auto* s : {gsx, gf, gse, gl}) {
    s->callback([&geom_mode, s] { geom_mode = s->get_name(); });
  }

  PlanArgs plan;
  auto* pd = app.add_subcommand("plan-dump", "print the compiled evaluation plan");
  pd->add_option("--task", plan.task);
  pd->add_option("--expr", plan.expr);
  pd->add_option("--arity", plan.arity);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return 0;
    err << app.help();
    return 2;
  }

  try {
    Runner run(g, out);
    if (p->parsed()) return cmd_prove(run, prove);
    if (l->parsed()) return cmd_lp(run, lp);
    if (asmb->parsed()) return cmd_assemble(run, asm_mode, as);
    if (gs->parsed()) return cmd_graphs(run, gr);
    if (geo->parsed()) return cmd_geom(run, geom_mode, ge);
    return cmd_plan(run, plan);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace rigor
