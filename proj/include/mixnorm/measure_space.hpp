#ifndef MIXNORM_MEASURE_SPACE_HPP
#define MIXNORM_MEASURE_SPACE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mixnorm {

/// Largest number of axes a product space may carry.
inline constexpr std::size_t kMaxAxes = 8;

/// A finite discrete measure space: grid points (labels only) with
/// nonnegative cell masses.
class Axis {
 public:
  Axis(std::vector<double> points, std::vector<double> weights, std::string name);

  const std::vector<double>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double mass() const noexcept { return mass_; }

  bool same_measure(const Axis& other) const noexcept;

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
  std::string name_;
  double mass_ = 0.0;
};

Axis make_axis(std::vector<double> points, std::vector<double> weights, std::string name);

/// n equal cells of mass total_mass/n, points at the cell midpoints of [0,1].
Axis uniform_axis(std::size_t n, double total_mass, std::string name);

/// Ordered product X_1 x ... x X_l of axes, 1 <= l <= kMaxAxes.
class ProductSpace {
 public:
  explicit ProductSpace(std::vector<Axis> axes);

  const std::vector<Axis>& axes() const noexcept { return axes_; }
  const Axis& axis(std::size_t k) const { return axes_.at(k); }
  std::size_t dims() const noexcept { return axes_.size(); }
  std::vector<std::size_t> shape() const;
  /// Number of grid cells.
  std::size_t size() const noexcept { return size_; }

  /// Sub-space formed by axes [first, first + count).
  ProductSpace slice(std::size_t first, std::size_t count) const;
  /// Concatenation of two spaces (axis names must stay unique).
  static ProductSpace concat(const ProductSpace& a, const ProductSpace& b);

  /// Mass of one cell under the product measure (row-major flat index).
  double cell_weight(std::size_t flat_index) const;

 private:
  std::vector<Axis> axes_;
  std::size_t size_ = 1;
};

/// Real-valued function on a product space, stored row-major (the last axis
/// varies fastest).
class GridFunction {
 public:
  GridFunction(ProductSpace space, std::vector<double> values);

  const ProductSpace& space() const noexcept { return space_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t dims() const noexcept { return space_.dims(); }

  double at(std::span<const std::size_t> index) const;
  std::size_t flat_index(std::span<const std::size_t> index) const;

  /// Pointwise c * f.
  GridFunction scaled(double c) const;

 private:
  ProductSpace space_;
  std::vector<double> values_;
};

GridFunction grid_function(const ProductSpace& space, std::vector<double> values);
/// Same, for a tensor that carries its own shape.
GridFunction grid_function(const ProductSpace& space, std::span<const std::size_t> shape,
                           std::vector<double> values);

/// Outer product g_1 (x) ... (x) g_l; factor k must have axis k's length.
GridFunction outer_product(const ProductSpace& space,
                           const std::vector<std::vector<double>>& factors);

/// Per-axis exponents p_k in [1, inf).
class ExponentVector {
 public:
  ExponentVector(std::vector<double> exponents);
  ExponentVector(std::initializer_list<double> exponents)
      : ExponentVector(std::vector<double>(exponents)) {}

  const std::vector<double>& values() const noexcept { return exponents_; }
  double operator[](std::size_t k) const { return exponents_.at(k); }
  std::size_t size() const noexcept { return exponents_.size(); }
  /// max_k p_k
  double max() const noexcept { return max_; }

  static ExponentVector uniform(std::size_t n, double p);

 private:
  std::vector<double> exponents_;
  double max_ = 1.0;
};

}  // namespace mixnorm

#endif  // MIXNORM_MEASURE_SPACE_HPP
