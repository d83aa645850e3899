#include "rigor/evaluator.hpp"

#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace rigor {

namespace {

const char* op_name(NodeKind k) {
  switch (k) {
    case NodeKind::Constant: return "const";
    case NodeKind::Var: return "var";
    case NodeKind::Neg: return "neg";
    case NodeKind::Add: return "add";
    case NodeKind::Sub: return "sub";
    case NodeKind::Mul: return "mul";
    case NodeKind::Div: return "div";
    case NodeKind::Pow: return "pow";
    case NodeKind::Sqrt: return "sqrt";
    case NodeKind::Atan: return "atan";
  }
  return "?";
}

class PlanBuilder {
 public:
  explicit PlanBuilder(std::vector<Evaluator::Instr>& code) : code_(code) {}

  int emit(const Expr& e) {
    if (auto it = by_node_.find(e.id()); it != by_node_.end()) return it->second.second;
    int a = -1;
    int b = -1;
    const auto& kids = e.children();
    if (!kids.empty()) a = emit(kids[0]);
    if (kids.size() > 1) b = emit(kids[1]);
    int k = 0;
    if (e.kind() == NodeKind::Var) k = e.var_index();
    if (e.kind() == NodeKind::Pow) k = e.exponent();
    const std::string text = e.kind() == NodeKind::Constant ? e.constant_text() : std::string();
    const auto key = std::make_tuple(static_cast<int>(e.kind()), a, b, k, text);
    int slot = 0;
    if (auto it = by_structure_.find(key); it != by_structure_.end()) {
      slot = it->second;
    } else {
      Evaluator::Instr in;
      in.op = e.kind();
      in.a = a;
      in.b = b;
      in.k = k;
      if (e.kind() == NodeKind::Constant) {
        in.text = text;
        in.constant = from_decimal_string(text);
      }
      slot = static_cast<int>(code_.size());
      code_.push_back(std::move(in));
      by_structure_.emplace(key, slot);
    }
    by_node_.emplace(e.id(), std::make_pair(e, slot));
    return slot;
  }

 private:
  std::vector<Evaluator::Instr>& code_;
  // Holds the expression so its address cannot be reused by a later node.
  std::unordered_map<const Expr::Node*, std::pair<Expr, int>> by_node_;
  std::map<std::tuple<int, int, int, int, std::string>, int> by_structure_;
};

// Instructions needed for the given outputs, in execution order.
std::vector<int> program_for(const std::vector<Evaluator::Instr>& code, const std::vector<int>& outputs) {
  std::vector<char> need(code.size(), 0);
  for (int o : outputs) need[o] = 1;
  for (int i = static_cast<int>(code.size()) - 1; i >= 0; --i) {
    if (!need[i]) continue;
    if (code[i].a >= 0) need[code[i].a] = 1;
    if (code[i].b >= 0) need[code[i].b] = 1;
  }
  std::vector<int> prog;
  for (int i = 0; i < static_cast<int>(code.size()); ++i) {
    if (need[i]) prog.push_back(i);
  }
  return prog;
}

Interval apply(const Evaluator::Instr& in, const std::vector<Interval>& s, std::span<const Interval> box) {
  switch (in.op) {
    case NodeKind::Constant: return in.constant;
    case NodeKind::Var: return box[in.k];
    case NodeKind::Neg: return -s[in.a];
    case NodeKind::Add: return s[in.a] + s[in.b];
    case NodeKind::Sub: return s[in.a] - s[in.b];
    case NodeKind::Mul: return in.a == in.b ? sqr(s[in.a]) : s[in.a] * s[in.b];
    case NodeKind::Div: return s[in.a] / s[in.b];
    case NodeKind::Pow: return pow_int(s[in.a], in.k);
    case NodeKind::Sqrt: return sqrt_interval(s[in.a]).value;
    case NodeKind::Atan: return atan_interval(s[in.a] / s[in.b]);
  }
  return Interval();
}

}  // namespace

Evaluator compile(const Expr& e, int arity, const CompileOptions& opts) {
  if (arity < 0) throw CompileError("negative arity");
  if (e.depth() > opts.max_depth) {
    throw CompileError("expression depth " + std::to_string(e.depth()) + " exceeds limit " +
                       std::to_string(opts.max_depth));
  }
  if (e.max_var_index() >= arity) {
    throw CompileError("expression uses x" + std::to_string(e.max_var_index()) + " but arity is " +
                       std::to_string(arity));
  }
  Evaluator ev;
  ev.expr_ = e;
  ev.arity_ = arity;
  PlanBuilder pb(ev.code_);
  ev.f_slot_ = pb.emit(e);
  std::vector<Expr> d1;
  d1.reserve(arity);
  for (int i = 0; i < arity; ++i) {
    d1.push_back(differentiate(e, i));
    ev.d1_slots_.push_back(pb.emit(d1.back()));
  }
  ev.d2_slots_.assign(static_cast<std::size_t>(arity) * arity, -1);
  for (int i = 0; i < arity; ++i) {
    for (int j = i; j < arity; ++j) {
      const int slot = pb.emit(differentiate(d1[i], j));
      ev.d2_slots_[i * arity + j] = slot;
      ev.d2_slots_[j * arity + i] = slot;
    }
  }
  ev.value_program_ = program_for(ev.code_, {ev.f_slot_});
  for (int i = 0; i < arity; ++i) ev.partial_programs_.push_back(program_for(ev.code_, {ev.d1_slots_[i]}));
  ev.hessian_program_ = program_for(ev.code_, ev.d2_slots_);
  return ev;
}

void Evaluator::check_box(std::span<const Interval> box) const {
  if (static_cast<int>(box.size()) != arity_) {
    throw DimensionMismatch("box has " + std::to_string(box.size()) + " components, evaluator arity " +
                            std::to_string(arity_));
  }
}

void Evaluator::run(const std::vector<int>& program, std::span<const Interval> box,
                    std::vector<Interval>& slots) const {
  slots.resize(code_.size());
  for (int i : program) slots[i] = apply(code_[i], slots, box);
}

Interval Evaluator::value(std::span<const Interval> box) const {
  check_box(box);
  std::vector<Interval> slots;
  run(value_program_, box, slots);
  return slots[f_slot_];
}

Interval Evaluator::partial(std::span<const Interval> box, int i) const {
  check_box(box);
  if (i < 0 || i >= arity_) throw DimensionMismatch("partial index out of range");
  std::vector<Interval> slots;
  run(partial_programs_[i], box, slots);
  return slots[d1_slots_[i]];
}

std::vector<Interval> Evaluator::hessian(std::span<const Interval> box) const {
  check_box(box);
  std::vector<Interval> slots;
  run(hessian_program_, box, slots);
  std::vector<Interval> h(d2_slots_.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = slots[d2_slots_[i]];
  return h;
}

TaylorGerm Evaluator::germ(std::span<const Interval> box) const {
  check_box(box);
  const std::size_t n = static_cast<std::size_t>(arity_);
  std::vector<Interval> f(code_.size());
  std::vector<Interval> D(code_.size() * n);
  const Interval zero(0.0);
  const Interval one(1.0);
  for (int idx : value_program_) {
    const Instr& in = code_[idx];
    Interval* d = &D[idx * n];
    const Interval* da = in.a >= 0 ? &D[in.a * n] : nullptr;
    const Interval* db = in.b >= 0 ? &D[in.b * n] : nullptr;
    switch (in.op) {
      case NodeKind::Constant:
        f[idx] = in.constant;
        for (std::size_t i = 0; i < n; ++i) d[i] = zero;
        break;
      case NodeKind::Var:
        f[idx] = box[in.k];
        for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<int>(i) == in.k ? one : zero;
        break;
      case NodeKind::Neg:
        f[idx] = -f[in.a];
        for (std::size_t i = 0; i < n; ++i) d[i] = -da[i];
        break;
      case NodeKind::Add:
        f[idx] = f[in.a] + f[in.b];
        for (std::size_t i = 0; i < n; ++i) d[i] = da[i] + db[i];
        break;
      case NodeKind::Sub:
        f[idx] = f[in.a] - f[in.b];
        for (std::size_t i = 0; i < n; ++i) d[i] = da[i] - db[i];
        break;
      case NodeKind::Mul: {
        const Interval a = f[in.a];
        const Interval b = f[in.b];
        f[idx] = in.a == in.b ? sqr(a) : a * b;
        for (std::size_t i = 0; i < n; ++i) d[i] = da[i] * b + db[i] * a;
        break;
      }
      case NodeKind::Div: {
        const Interval a = f[in.a];
        const Interval b = f[in.b];
        f[idx] = a / b;
        const Interval b2 = sqr(b);
        for (std::size_t i = 0; i < n; ++i) d[i] = (da[i] * b - db[i] * a) / b2;
        break;
      }
      case NodeKind::Pow: {
        const Interval a = f[in.a];
        f[idx] = pow_int(a, in.k);
        const Interval scale = Interval(static_cast<double>(in.k)) * pow_int(a, in.k - 1);
        for (std::size_t i = 0; i < n; ++i) d[i] = scale * da[i];
        break;
      }
      case NodeKind::Sqrt: {
        f[idx] = sqrt_interval(f[in.a]).value;
        const Interval twice = Interval(2.0) * f[idx];
        for (std::size_t i = 0; i < n; ++i) d[i] = da[i] / twice;
        break;
      }
      case NodeKind::Atan: {
        const Interval a = f[in.a];
        const Interval b = f[in.b];
        f[idx] = atan_interval(a / b);
        const Interval rden = one / (sqr(a) + sqr(b));
        for (std::size_t i = 0; i < n; ++i) d[i] = rden * (da[i] * b - db[i] * a);
        break;
      }
    }
  }
  TaylorGerm g;
  g.f = f[f_slot_];
  g.Df.assign(D.begin() + f_slot_ * n, D.begin() + (f_slot_ + 1) * n);
  return g;
}

std::string Evaluator::dump() const {
  std::ostringstream os;
  os << "# arity " << arity_ << ", " << code_.size() << " instructions\n";
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& in = code_[i];
    os << "t" << i << " = " << op_name(in.op);
    switch (in.op) {
      case NodeKind::Constant: os << " " << in.text; break;
      case NodeKind::Var: os << " x" << in.k; break;
      case NodeKind::Pow: os << " t" << in.a << " " << in.k; break;
      default:
        if (in.a >= 0) os << " t" << in.a;
        if (in.b >= 0) os << " t" << in.b;
    }
    os << "\n";
  }
  os << "f = t" << f_slot_ << "\n";
  for (int i = 0; i < arity_; ++i) os << "d" << i << " = t" << d1_slots_[i] << "\n";
  for (int i = 0; i < arity_; ++i) {
    for (int j = i; j < arity_; ++j) os << "d" << i << "d" << j << " = t" << d2_slots_[i * arity_ + j] << "\n";
  }
  return os.str();
}

}  // namespace rigor
