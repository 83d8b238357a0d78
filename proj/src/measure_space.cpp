#include "mixnorm/measure_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mixnorm/error.hpp"

namespace mixnorm {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::length_mismatch: return "length mismatch";
    case ErrorCode::negative_weight: return "negative weight";
    case ErrorCode::zero_mass: return "zero total mass";
    case ErrorCode::non_finite: return "non-finite value";
    case ErrorCode::empty_axis: return "empty axis";
    case ErrorCode::too_many_axes: return "too many axes";
    case ErrorCode::duplicate_axis_name: return "duplicate axis name";
    case ErrorCode::shape_mismatch: return "shape mismatch";
    case ErrorCode::invalid_axis: return "invalid axis";
    case ErrorCode::exponent_out_of_range: return "exponent out of range";
    case ErrorCode::exponent_count_mismatch: return "exponent count mismatch";
    case ErrorCode::invalid_permutation: return "invalid permutation";
    case ErrorCode::invalid_partition: return "invalid partition";
    case ErrorCode::invalid_model: return "invalid model";
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::grid_mismatch: return "grid mismatch";
    case ErrorCode::empty_table: return "empty table";
    case ErrorCode::insufficient_data: return "insufficient data";
    case ErrorCode::io_error: return "i/o error";
  }
  return "unknown";
}

Axis::Axis(std::vector<double> points, std::vector<double> weights, std::string name)
    : points_(std::move(points)), weights_(std::move(weights)), name_(std::move(name)) {
  if (weights_.empty()) {
    throw ValidationError(ErrorCode::empty_axis, "axis '" + name_ + "' has no cells");
  }
  if (points_.size() != weights_.size()) {
    throw ValidationError(ErrorCode::length_mismatch,
                          "axis '" + name_ + "': points and weights differ in length");
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) {
      throw ValidationError(ErrorCode::non_finite, "axis '" + name_ + "': non-finite weight");
    }
    if (w < 0.0) {
      throw ValidationError(ErrorCode::negative_weight, "axis '" + name_ + "': negative weight");
    }
    mass_ += w;
  }
  if (!(mass_ > 0.0)) {
    throw ValidationError(ErrorCode::zero_mass, "axis '" + name_ + "': zero total mass");
  }
}

bool Axis::same_measure(const Axis& other) const noexcept {
  return weights_ == other.weights_;
}

Axis make_axis(std::vector<double> points, std::vector<double> weights, std::string name) {
  return Axis(std::move(points), std::move(weights), std::move(name));
}

Axis uniform_axis(std::size_t n, double total_mass, std::string name) {
  if (n == 0) {
    throw ValidationError(ErrorCode::empty_axis, "uniform axis needs n >= 1");
  }
  if (!(total_mass > 0.0) || !std::isfinite(total_mass)) {
    throw ValidationError(ErrorCode::zero_mass, "uniform axis needs a positive finite mass");
  }
  std::vector<double> points(n);
  std::vector<double> weights(n, total_mass / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    points[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  }
  return Axis(std::move(points), std::move(weights), std::move(name));
}

ProductSpace::ProductSpace(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) {
    throw ValidationError(ErrorCode::invalid_axis, "product space needs at least one axis");
  }
  if (axes_.size() > kMaxAxes) {
    throw ValidationError(ErrorCode::too_many_axes,
                          "product space supports at most 8 axes");
  }
  std::set<std::string> names;
  for (const auto& a : axes_) {
    if (!names.insert(a.name()).second) {
      throw ValidationError(ErrorCode::duplicate_axis_name,
                            "duplicate axis name '" + a.name() + "'");
    }
    size_ *= a.size();
  }
}

std::vector<std::size_t> ProductSpace::shape() const {
  std::vector<std::size_t> s;
  s.reserve(axes_.size());
  for (const auto& a : axes_) s.push_back(a.size());
  return s;
}

ProductSpace ProductSpace::slice(std::size_t first, std::size_t count) const {
  if (first + count > axes_.size() || count == 0) {
    throw ValidationError(ErrorCode::invalid_axis, "axis slice out of range");
  }
  return ProductSpace(std::vector<Axis>(axes_.begin() + static_cast<std::ptrdiff_t>(first),
                                        axes_.begin() + static_cast<std::ptrdiff_t>(first + count)));
}

ProductSpace ProductSpace::concat(const ProductSpace& a, const ProductSpace& b) {
  std::vector<Axis> axes = a.axes_;
  axes.insert(axes.end(), b.axes_.begin(), b.axes_.end());
  return ProductSpace(std::move(axes));
}

double ProductSpace::cell_weight(std::size_t flat_index) const {
  double w = 1.0;
  for (std::size_t k = axes_.size(); k-- > 0;) {
    const auto n = axes_[k].size();
    w *= axes_[k].weights()[flat_index % n];
    flat_index /= n;
  }
  return w;
}

GridFunction::GridFunction(ProductSpace space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_.size()) {
    throw ValidationError(ErrorCode::shape_mismatch,
                          "grid function has " + std::to_string(values_.size()) +
                              " values, space has " + std::to_string(space_.size()) + " cells");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw ValidationError(ErrorCode::non_finite, "grid function holds a non-finite value");
    }
  }
}

std::size_t GridFunction::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != space_.dims()) {
    throw ValidationError(ErrorCode::shape_mismatch, "multi-index has wrong arity");
  }
  std::size_t flat = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    const auto n = space_.axis(k).size();
    if (index[k] >= n) {
      throw ValidationError(ErrorCode::invalid_axis, "multi-index out of range");
    }
    flat = flat * n + index[k];
  }
  return flat;
}

double GridFunction::at(std::span<const std::size_t> index) const {
  return values_[flat_index(index)];
}

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> v(values_);
  for (auto& x : v) x *= c;
  return GridFunction(space_, std::move(v));
}

GridFunction grid_function(const ProductSpace& space, std::vector<double> values) {
  return GridFunction(space, std::move(values));
}

GridFunction grid_function(const ProductSpace& space, std::span<const std::size_t> shape,
                           std::vector<double> values) {
  const auto expected = space.shape();
  if (!std::equal(shape.begin(), shape.end(), expected.begin(), expected.end())) {
    throw ValidationError(ErrorCode::shape_mismatch, "tensor shape does not match the space");
  }
  return GridFunction(space, std::move(values));
}

GridFunction outer_product(const ProductSpace& space,
                           const std::vector<std::vector<double>>& factors) {
  if (factors.size() != space.dims()) {
    throw ValidationError(ErrorCode::length_mismatch, "one factor per axis required");
  }
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (factors[k].size() != space.axis(k).size()) {
      throw ValidationError(ErrorCode::length_mismatch,
                            "factor " + std::to_string(k) + " does not match its axis length");
    }
  }
  std::vector<double> values{1.0};
  for (const auto& factor : factors) {
    std::vector<double> next;
    next.reserve(values.size() * factor.size());
    for (double v : values) {
      for (double g : factor) next.push_back(v * g);
    }
    values = std::move(next);
  }
  return GridFunction(space, std::move(values));
}

ExponentVector::ExponentVector(std::vector<double> exponents) : exponents_(std::move(exponents)) {
  if (exponents_.empty()) {
    throw ValidationError(ErrorCode::exponent_count_mismatch, "exponent vector is empty");
  }
  for (double p : exponents_) {
    if (!std::isfinite(p) || p < 1.0) {
      throw ValidationError(ErrorCode::exponent_out_of_range,
                            "exponents must lie in [1, inf), got " + std::to_string(p));
    }
  }
  max_ = *std::max_element(exponents_.begin(), exponents_.end());
}

ExponentVector ExponentVector::uniform(std::size_t n, double p) {
  return ExponentVector(std::vector<double>(n, p));
}

}  // namespace mixnorm
