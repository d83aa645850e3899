#include "rigor/taylor.hpp"

#include <cmath>

namespace rigor {

Box::Box(std::vector<Interval> dims) : dims_(std::move(dims)) {
  for (const auto& d : dims_) {
    if (!d.is_finite()) throw IntervalError("box components must be finite");
  }
}

std::vector<double> Box::center() const {
  std::vector<double> c;
  c.reserve(dims_.size());
  for (const auto& d : dims_) c.push_back(d.mid());
  return c;
}

int Box::widest() const {
  int best = -1;
  double best_width = 0.0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const double w = dims_[i].hi() - dims_[i].lo();
    if (w > best_width) {
      best_width = w;
      best = static_cast<int>(i);
    }
  }
  return best;
}

Box Box::with(std::size_t i, const Interval& v) const {
  Box b = *this;
  b.dims_.at(i) = v;
  return b;
}

std::pair<Box, Box> Box::bisect(std::size_t i) const {
  const Interval& d = dims_.at(i);
  const double m = d.mid();
  return {with(i, Interval(d.lo(), m)), with(i, Interval(m, d.hi()))};
}

double Box::volume() const {
  double v = 1.0;
  for (const auto& d : dims_) {
    if (!d.is_point()) v *= d.hi() - d.lo();
  }
  return v;
}

bool Box::contains(std::span<const double> point) const {
  if (point.size() != dims_.size()) return false;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (!dims_[i].contains(point[i])) return false;
  }
  return true;
}

namespace {

std::vector<double> half_widths(const Box& box, const std::vector<double>& c) {
  std::vector<double> w(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    w[i] = std::max(round::sub_up(c[i], box[i].lo()), round::sub_up(box[i].hi(), c[i]));
  }
  return w;
}

std::vector<Interval> point_box(const std::vector<double>& c) {
  std::vector<Interval> p;
  p.reserve(c.size());
  for (double x : c) p.emplace_back(x);
  return p;
}

}  // namespace

std::optional<TaylorBound> taylor_upper_bound(const Evaluator& ev, const Box& box) {
  if (static_cast<int>(box.size()) != ev.arity()) {
    throw DimensionMismatch("box dimension does not match evaluator arity");
  }
  const std::size_t n = box.size();
  const std::vector<double> c = box.center();
  const std::vector<double> w = half_widths(box, c);
  try {
    const std::vector<Interval> pc = point_box(c);
    TaylorGerm g = ev.germ(pc);
    double linear = 0.0;
    for (std::size_t i = 0; i < n; ++i) linear = round::add_up(linear, round::mul_up(g.Df[i].mag(), w[i]));
    double quad = 0.0;
    if (n > 0) {
      const std::vector<Interval> h = ev.hessian(box.span());
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          quad = round::add_up(quad, round::mul_up(round::mul_up(h[i * n + j].mag(), w[i]), w[j]));
        }
      }
    }
    quad = round::mul_up(0.5, quad);
    TaylorBound tb;
    tb.center_value = g.f;
    tb.gradient_at_center = std::move(g.Df);
    tb.hessian_norm_bound = quad;
    tb.upper = round::add_up(round::add_up(g.f.hi(), linear), quad);
    if (std::isnan(tb.upper)) return std::nullopt;
    return tb;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<std::optional<Interval>> partial_enclosures(const Evaluator& ev, const Box& box) {
  const std::size_t n = box.size();
  std::vector<std::optional<Interval>> out(n);
  auto narrow = [&](std::size_t i, const Interval& v) {
    if (!out[i]) {
      out[i] = v;
    } else if (auto x = intersect(*out[i], v)) {
      out[i] = *x;
    }
  };
  try {
    const TaylorGerm g = ev.germ(box.span());
    for (std::size_t i = 0; i < n; ++i) narrow(i, g.Df[i]);
  } catch (const Error&) {
  }
  for (std::size_t i = 0; i < n; ++i) {
    try {
      narrow(i, ev.partial(box.span(), static_cast<int>(i)));
    } catch (const Error&) {
    }
  }
  // ∂_i f(x) ∈ ∂_i f(c) + Σ_j H_ij [-w_j, w_j]
  try {
    const std::vector<double> c = box.center();
    const std::vector<double> w = half_widths(box, c);
    const TaylorGerm gc = ev.germ(point_box(c));
    const std::vector<Interval> h = ev.hessian(box.span());
    for (std::size_t i = 0; i < n; ++i) {
      Interval acc = gc.Df[i];
      for (std::size_t j = 0; j < n; ++j) acc = acc + h[i * n + j] * Interval(-w[j], w[j]);
      narrow(i, acc);
    }
  } catch (const Error&) {
  }
  return out;
}

Sign partial_sign(const Evaluator& ev, const Box& box, int i) {
  const auto encl = partial_enclosures(ev, box);
  const auto& e = encl.at(i);
  if (!e) return Sign::Unknown;
  if (e->lo() > 0.0) return Sign::StrictlyPositive;
  if (e->hi() < 0.0) return Sign::StrictlyNegative;
  return Sign::Unknown;
}

}  // namespace rigor
