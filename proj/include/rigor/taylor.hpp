#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rigor/evaluator.hpp"
#include "rigor/interval.hpp"

namespace rigor {

/// Axis-aligned box with finite interval components.
class Box {
 public:
  Box() = default;
  /// Throws IntervalError when a component is not finite.
  explicit Box(std::vector<Interval> dims);

  std::size_t size() const { return dims_.size(); }
  const Interval& operator[](std::size_t i) const { return dims_[i]; }
  const std::vector<Interval>& dims() const { return dims_; }
  std::span<const Interval> span() const { return dims_; }

  /// Representable center point, one coordinate per component.
  std::vector<double> center() const;
  /// Widest non-degenerate component (lowest index on ties), or -1 when
  /// every component is a point.
  int widest() const;
  /// Copy with component i replaced.
  Box with(std::size_t i, const Interval& v) const;
  std::pair<Box, Box> bisect(std::size_t i) const;
  /// Product of the widths of the non-degenerate components (nearest
  /// rounding; accounting use only).
  double volume() const;
  bool contains(std::span<const double> point) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Interval> dims_;
};

struct TaylorBound {
  double upper = 0.0;
  Interval center_value;
  std::vector<Interval> gradient_at_center;
  /// ½ Σ sup|H_ij| w_i w_j, rounded up.
  double hessian_norm_bound = 0.0;
};

/// Upper bound of f over the box from a first-order expansion at the center
/// with an interval-Hessian remainder. std::nullopt means the bound is
/// unavailable (some enclosure could not be evaluated on this box); callers
/// treat that as +∞.
std::optional<TaylorBound> taylor_upper_bound(const Evaluator& ev, const Box& box);

enum class Sign { StrictlyPositive, StrictlyNegative, Unknown };

/// Certified sign of ∂f/∂x_i over the whole box, or Unknown.
Sign partial_sign(const Evaluator& ev, const Box& box, int i);

/// Enclosures of every ∂f/∂x_i over the box: the intersection of the germ
/// component, the symbolic partial and a Hessian-based expansion of the
/// partial around the center. An entry is std::nullopt when none of the three
/// can be evaluated.
std::vector<std::optional<Interval>> partial_enclosures(const Evaluator& ev, const Box& box);

}  // namespace rigor
