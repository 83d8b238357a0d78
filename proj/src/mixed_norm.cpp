#include "mixnorm/mixed_norm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixnorm/error.hpp"
#include "mixnorm/summation.hpp"

namespace mixnorm {

namespace {

void check_exponent(double p) {
  if (!std::isfinite(p) || p < 1.0 || p > kMaxExponent) {
    throw ValidationError(ErrorCode::exponent_out_of_range,
                          "exponent " + std::to_string(p) + " outside [1, 512]");
  }
}

// Working tensor during an iterated reduction: the axes still alive, in
// their original relative order, and the row-major values over them.
struct Slab {
  std::vector<const Axis*> axes;
  std::vector<std::size_t> ids;
  std::vector<double> values;
};

Slab make_slab(std::span<const double> values, const ProductSpace& space) {
  Slab s;
  for (std::size_t k = 0; k < space.dims(); ++k) {
    s.axes.push_back(&space.axis(k));
    s.ids.push_back(k);
  }
  s.values.assign(values.begin(), values.end());
  return s;
}

void reduce_in_place(Slab& s, std::size_t original_axis, double p) {
  const auto it = std::find(s.ids.begin(), s.ids.end(), original_axis);
  if (it == s.ids.end()) {
    throw ValidationError(ErrorCode::invalid_axis,
                          "axis " + std::to_string(original_axis) + " is not available");
  }
  check_exponent(p);
  const auto pos = static_cast<std::size_t>(it - s.ids.begin());
  std::size_t outer = 1, inner = 1;
  for (std::size_t k = 0; k < pos; ++k) outer *= s.axes[k]->size();
  for (std::size_t k = pos + 1; k < s.axes.size(); ++k) inner *= s.axes[k]->size();
  const Axis& axis = *s.axes[pos];
  const std::size_t len = axis.size();
  const std::span<const double> weights = axis.weights();

  std::vector<double> out(outer * inner);
  std::vector<double> slice(len);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* base = s.values.data() + o * len * inner;
    for (std::size_t i = 0; i < inner; ++i) {
      for (std::size_t j = 0; j < len; ++j) slice[j] = base[j * inner + i];
      out[o * inner + i] = weighted_power_norm(slice, weights, p);
    }
  }
  s.values = std::move(out);
  s.axes.erase(s.axes.begin() + static_cast<std::ptrdiff_t>(pos));
  s.ids.erase(s.ids.begin() + static_cast<std::ptrdiff_t>(pos));
}

void check_steps(std::span<const AxisReduction> steps, std::size_t dims, bool complete) {
  std::vector<bool> seen(dims, false);
  for (const auto& step : steps) {
    if (step.axis >= dims) {
      throw ValidationError(ErrorCode::invalid_axis, "axis index out of range");
    }
    if (seen[step.axis]) {
      throw ValidationError(ErrorCode::invalid_permutation, "axis reduced twice");
    }
    seen[step.axis] = true;
  }
  if (complete && steps.size() != dims) {
    throw ValidationError(ErrorCode::invalid_permutation, "reduction does not cover every axis");
  }
}

std::vector<AxisReduction> identity_steps(const ExponentVector& p, std::size_t dims) {
  if (p.size() != dims) {
    throw ValidationError(ErrorCode::exponent_count_mismatch,
                          "expected " + std::to_string(dims) + " exponents, got " +
                              std::to_string(p.size()));
  }
  std::vector<AxisReduction> steps;
  for (std::size_t k = 0; k < dims; ++k) steps.push_back({k, p[k]});
  return steps;
}

}  // namespace

NormOrder::NormOrder(std::vector<std::size_t> order) : order_(std::move(order)) {
  std::vector<bool> seen(order_.size(), false);
  for (auto k : order_) {
    if (k >= order_.size() || seen[k]) {
      throw ValidationError(ErrorCode::invalid_permutation, "norm order is not a permutation");
    }
    seen[k] = true;
  }
}

NormOrder NormOrder::identity(std::size_t dims) {
  std::vector<std::size_t> order(dims);
  for (std::size_t k = 0; k < dims; ++k) order[k] = k;
  return NormOrder(std::move(order));
}

GridFunction axis_norm(const GridFunction& f, std::size_t axis_index, double p) {
  if (axis_index >= f.dims()) {
    throw ValidationError(ErrorCode::invalid_axis, "axis index out of range");
  }
  if (f.dims() < 2) {
    throw ValidationError(ErrorCode::invalid_axis,
                          "axis_norm needs two or more axes; use mixed_norm for one");
  }
  const AxisReduction step{axis_index, p};
  return reduce_axes(f, std::span(&step, 1));
}

GridFunction reduce_axes(const GridFunction& f, std::span<const AxisReduction> steps) {
  check_steps(steps, f.dims(), false);
  if (steps.size() >= f.dims()) {
    throw ValidationError(ErrorCode::invalid_axis, "reduce_axes must leave one axis");
  }
  Slab s = make_slab(f.values(), f.space());
  for (const auto& step : steps) reduce_in_place(s, step.axis, step.p);
  std::vector<Axis> remaining;
  for (const Axis* a : s.axes) remaining.push_back(*a);
  return GridFunction(ProductSpace(std::move(remaining)), std::move(s.values));
}

double iterated_norm(std::span<const double> values, const ProductSpace& space,
                     std::span<const AxisReduction> steps) {
  if (values.size() != space.size()) {
    throw ValidationError(ErrorCode::shape_mismatch, "values do not match the space");
  }
  check_steps(steps, space.dims(), true);
  Slab s = make_slab(values, space);
  for (const auto& step : steps) reduce_in_place(s, step.axis, step.p);
  return s.values.front();
}

double iterated_norm(const GridFunction& f, std::span<const AxisReduction> steps) {
  return iterated_norm(f.values(), f.space(), steps);
}

double mixed_norm(std::span<const double> values, const ProductSpace& space,
                  const ExponentVector& p) {
  const auto steps = identity_steps(p, space.dims());
  return iterated_norm(values, space, steps);
}

double mixed_norm(const GridFunction& f, const ExponentVector& p) {
  return mixed_norm(f.values(), f.space(), p);
}

double mixed_norm_ordered(const GridFunction& f, const ExponentVector& p,
                          const NormOrder& order) {
  if (order.size() != f.dims()) {
    throw ValidationError(ErrorCode::invalid_permutation, "norm order has the wrong length");
  }
  if (p.size() != f.dims()) {
    throw ValidationError(ErrorCode::exponent_count_mismatch, "one exponent per axis required");
  }
  std::vector<AxisReduction> steps;
  for (auto k : order.indices()) steps.push_back({k, p[k]});
  return iterated_norm(f, steps);
}

double factorable_norm(const ProductSpace& space, const std::vector<std::vector<double>>& factors,
                       const ExponentVector& p) {
  if (factors.size() != space.dims()) {
    throw ValidationError(ErrorCode::length_mismatch, "one factor per axis required");
  }
  if (p.size() != space.dims()) {
    throw ValidationError(ErrorCode::exponent_count_mismatch, "one exponent per axis required");
  }
  double product = 1.0;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const Axis& axis = space.axis(k);
    if (factors[k].size() != axis.size()) {
      throw ValidationError(ErrorCode::length_mismatch,
                            "factor " + std::to_string(k) + " does not match its axis length");
    }
    check_exponent(p[k]);
    product *= weighted_power_norm(factors[k], axis.weights(), p[k]);
  }
  return product;
}

PermutationGap permutation_gap(const GridFunction& phi, std::span<const std::size_t> x_axes,
                               std::span<const std::size_t> z_axes, const ExponentVector& p,
                               double r) {
  const std::size_t dims = phi.dims();
  if (x_axes.empty() || z_axes.empty() || x_axes.size() + z_axes.size() != dims) {
    throw ValidationError(ErrorCode::invalid_partition, "x_axes and z_axes must partition the axes");
  }
  std::vector<bool> seen(dims, false);
  for (auto list : {x_axes, z_axes}) {
    for (auto k : list) {
      if (k >= dims || seen[k]) {
        throw ValidationError(ErrorCode::invalid_partition,
                              "x_axes and z_axes must partition the axes");
      }
      seen[k] = true;
    }
  }
  if (p.size() != x_axes.size()) {
    throw ValidationError(ErrorCode::exponent_count_mismatch, "p must have one entry per X-axis");
  }
  check_exponent(r);

  std::vector<AxisReduction> x_steps, z_steps;
  for (std::size_t j = 0; j < x_axes.size(); ++j) x_steps.push_back({x_axes[j], p[j]});
  for (auto k : z_axes) z_steps.push_back({k, r});

  std::vector<AxisReduction> lhs_steps(x_steps);
  lhs_steps.insert(lhs_steps.end(), z_steps.begin(), z_steps.end());
  std::vector<AxisReduction> rhs_steps(z_steps);
  rhs_steps.insert(rhs_steps.end(), x_steps.begin(), x_steps.end());

  PermutationGap gap;
  gap.lhs = iterated_norm(phi, lhs_steps);
  gap.rhs = iterated_norm(phi, rhs_steps);
  gap.hypothesis_met = r >= p.max();
  return gap;
}

}  // namespace mixnorm
