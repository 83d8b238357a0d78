#ifndef MIXNORM_MIXED_NORM_HPP
#define MIXNORM_MIXED_NORM_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "mixnorm/measure_space.hpp"

namespace mixnorm {

/// Sequence in which axes are reduced, innermost first.
class NormOrder {
 public:
  NormOrder(std::vector<std::size_t> order);

  static NormOrder identity(std::size_t dims);

  const std::vector<std::size_t>& indices() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }

 private:
  std::vector<std::size_t> order_;
};

/// One reduction step: axis (by its index in the original function) and
/// the exponent applied along it.
struct AxisReduction {
  std::size_t axis;
  double p;
};

/// (sum_i w_i |f_i|^p)^(1/p) along one axis; the result lives on the
/// remaining axes, so f must have at least two.
GridFunction axis_norm(const GridFunction& f, std::size_t axis_index, double p);

/// Reduces the listed axes in sequence and returns the function on the
/// axes that remain (in their original relative order). At least one axis
/// must remain.
GridFunction reduce_axes(const GridFunction& f, std::span<const AxisReduction> steps);

/// Iterated norm reducing every axis in the given sequence.
double iterated_norm(const GridFunction& f, std::span<const AxisReduction> steps);

/// Iterated norm of raw row-major values on a space without building a
/// GridFunction. steps must cover every axis exactly once.
double iterated_norm(std::span<const double> values, const ProductSpace& space,
                     std::span<const AxisReduction> steps);

/// Axis 0 innermost through axis l-1 outermost.
double mixed_norm(const GridFunction& f, const ExponentVector& p);
double mixed_norm(std::span<const double> values, const ProductSpace& space,
                  const ExponentVector& p);

/// Exponents travel with their axes: axis order[j] is reduced with p[order[j]].
double mixed_norm_ordered(const GridFunction& f, const ExponentVector& p, const NormOrder& order);

/// prod_k ||g_k||_{p_k, X_k}.
double factorable_norm(const ProductSpace& space, const std::vector<std::vector<double>>& factors,
                       const ExponentVector& p);

struct PermutationGap {
  double lhs = 0.0;  // X-axes reduced first (exponents p), then Z-axes (exponent r)
  double rhs = 0.0;  // Z-axes first, then X-axes
  bool hypothesis_met = true;  // r >= max_k p_k

  bool holds(double rel_tol = 1e-10) const noexcept { return lhs <= rhs * (1.0 + rel_tol); }
};

/// Both sides of ||phi||_{p,X; r,Z} <= ||phi||_{r,Z; p,X}. x_axes and
/// z_axes must partition the axes of phi; x_axes is also the reduction
/// order within X and p is aligned with it. A violated r >= max p is
/// reported through hypothesis_met, not an exception.
PermutationGap permutation_gap(const GridFunction& phi, std::span<const std::size_t> x_axes,
                               std::span<const std::size_t> z_axes, const ExponentVector& p,
                               double r);

}  // namespace mixnorm

#endif  // MIXNORM_MIXED_NORM_HPP
