#include "rigor/prover.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace rigor {

namespace {

constexpr std::size_t kBatch = 32;

struct WorkItem {
  Box cell;
  int depth = 0;
};

enum class Verdict { Certified, Infeasible, Split, Undecided, Failure };

struct Outcome {
  Verdict verdict = Verdict::Undecided;
  std::optional<double> upper;
  int split_index = -1;
};

bool certified(double upper, const ProofTask& task) {
  return task.strict ? upper < -task.margin : upper <= -task.margin;
}

Outcome process(const ProofTask& task, const ProverConfig& cfg, const Evaluator& ev,
                const std::vector<Evaluator>& cons, const WorkItem& item) {
  Outcome out;
  for (const Evaluator& c : cons) {
    if (auto u = cell_upper_bound(c, item.cell); u && *u < 0.0) {
      out.verdict = Verdict::Infeasible;
      return out;
    }
  }
  const Box active = cons.empty() ? reduce_cell(ev, item.cell) : item.cell;
  out.upper = cell_upper_bound(ev, active);
  if (out.upper && certified(*out.upper, task)) {
    out.verdict = Verdict::Certified;
    return out;
  }
  if (cfg.stop_at_counterexample && cons.empty()) {
    try {
      std::vector<Interval> c;
      for (double x : active.center()) c.emplace_back(x);
      const Interval fc = ev.value(c);
      if (task.strict ? fc.lo() >= -task.margin : fc.lo() > -task.margin) {
        out.verdict = Verdict::Undecided;
        return out;
      }
    } catch (const Error&) {
    }
  }
  const Verdict stuck = out.upper ? Verdict::Undecided : Verdict::Failure;
  const int i = active.widest();
  if (i < 0 || item.depth >= cfg.max_depth) {
    out.verdict = stuck;
    return out;
  }
  bool wide = false;
  for (const Interval& d : active.dims()) {
    if (!d.is_point() && d.hi() - d.lo() >= cfg.min_width) wide = true;
  }
  if (!wide) {
    out.verdict = stuck;
    return out;
  }
  out.verdict = Verdict::Split;
  out.split_index = i;
  return out;
}

void validate(const ProofTask& task, const ProverConfig& cfg) {
  if (!(task.margin >= 0.0) || !std::isfinite(task.margin)) throw Error("margin must be finite and ≥ 0");
  if (cfg.max_cells < 1) throw Error("max_cells must be ≥ 1");
  if (!(cfg.min_width > 0.0)) throw Error("min_width must be > 0");
  if (cfg.max_depth < 0) throw Error("max_depth must be ≥ 0");
  if (task.domain.size() == 0) throw DimensionMismatch("empty domain");
}

}  // namespace

const char* to_string(ProofStatus s) {
  switch (s) {
    case ProofStatus::Proven: return "Proven";
    case ProofStatus::Undecided: return "Undecided";
    case ProofStatus::EvaluationFailure: return "EvaluationFailure";
  }
  return "?";
}

std::optional<double> cell_upper_bound(const Evaluator& ev, const Box& box) {
  std::optional<double> best;
  if (auto tb = taylor_upper_bound(ev, box)) best = tb->upper;
  try {
    const double hi = ev.value(box.span()).hi();
    if (!best || hi < *best) best = hi;
  } catch (const Error&) {
  }
  return best;
}

Box reduce_cell(const Evaluator& ev, const Box& cell) {
  const auto encl = partial_enclosures(ev, cell);
  Box out = cell;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if (!encl[i] || cell[i].is_point()) continue;
    if (encl[i]->lo() >= 0.0) {
      out = out.with(i, Interval(cell[i].hi()));
    } else if (encl[i]->hi() <= 0.0) {
      out = out.with(i, Interval(cell[i].lo()));
    }
  }
  return out;
}

ProofReport prove_negative(const ProofTask& task, const ProverConfig& cfg) {
  validate(task, cfg);
  const int n = static_cast<int>(task.domain.size());
  const Evaluator ev = compile(task.expr, n);
  std::vector<Evaluator> cons;
  for (const Expr& c : task.constraints) cons.push_back(compile(c, n));

  ProofReport rep;
  std::vector<WorkItem> stack{{task.domain, 0}};
  std::vector<WorkItem> batch;
  std::vector<Outcome> results;
  const unsigned threads = std::max(1u, cfg.threads);

  while (!stack.empty()) {
    const std::size_t budget = cfg.max_cells - rep.cells_processed;
    if (budget == 0) break;
    const std::size_t take = std::min({kBatch, budget, stack.size()});
    batch.clear();
    for (std::size_t k = 0; k < take; ++k) {
      batch.push_back(std::move(stack.back()));
      stack.pop_back();
    }
    results.assign(batch.size(), Outcome{});
    if (threads == 1 || batch.size() == 1) {
      for (std::size_t k = 0; k < batch.size(); ++k) results[k] = process(task, cfg, ev, cons, batch[k]);
    } else {
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < batch.size();) {
          results[k] = process(task, cfg, ev, cons, batch[k]);
        }
      };
      std::vector<std::thread> pool;
      const unsigned extra = std::min<unsigned>(threads, batch.size()) - 1;
      for (unsigned t = 0; t < extra; ++t) pool.emplace_back(worker);
      worker();
      for (auto& t : pool) t.join();
    }

    // Merge in batch order; children are pushed so that, within the batch,
    // earlier items' children are explored first.
    std::vector<WorkItem> pushed;
    for (std::size_t k = 0; k < batch.size(); ++k) {
      WorkItem& item = batch[k];
      const Outcome& o = results[k];
      ++rep.cells_processed;
      rep.max_depth_reached = std::max(rep.max_depth_reached, item.depth);
      if (o.verdict != Verdict::Split && o.verdict != Verdict::Infeasible) {
        const double u = o.upper.value_or(std::numeric_limits<double>::infinity());
        rep.best_upper_bound_seen = std::max(rep.best_upper_bound_seen, u);
      }
      switch (o.verdict) {
        case Verdict::Split: {
          auto [left, right] = item.cell.bisect(static_cast<std::size_t>(o.split_index));
          pushed.push_back({std::move(right), item.depth + 1});
          pushed.push_back({std::move(left), item.depth + 1});
          continue;
        }
        case Verdict::Undecided: rep.undecided.push_back(item.cell); break;
        case Verdict::Failure: rep.failures.push_back(item.cell); break;
        case Verdict::Certified:
        case Verdict::Infeasible: break;
      }
      if (cfg.record_leaves) rep.leaves.push_back(std::move(item.cell));
    }
    // pushed holds (right, left) pairs in batch order; the first item's left
    // child must end on top of the stack.
    for (std::size_t k = pushed.size(); k >= 2; k -= 2) {
      stack.push_back(std::move(pushed[k - 2]));
      stack.push_back(std::move(pushed[k - 1]));
    }
  }

  for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
    rep.undecided.push_back(it->cell);
    if (cfg.record_leaves) rep.leaves.push_back(it->cell);
  }
  if (!rep.undecided.empty()) {
    rep.status = ProofStatus::Undecided;
  } else if (!rep.failures.empty()) {
    rep.status = ProofStatus::EvaluationFailure;
  } else {
    rep.status = ProofStatus::Proven;
  }
  return rep;
}

}  // namespace rigor
