#ifndef MIXNORM_SUMMATION_HPP
#define MIXNORM_SUMMATION_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace mixnorm {

/// Largest exponent the norm engine accepts.
inline constexpr double kMaxExponent = 512.0;

/// Fixed left-to-right pairwise (tree) summation; the result depends only on
/// the order of the input.
double pairwise_sum(std::span<const double> terms) noexcept;

/// (sum_i w_i |v_i|^p)^(1/p), evaluated as m * (sum_i w_i (|v_i|/m)^p)^(1/p)
/// with m the largest |v_i| over cells of positive weight.
/// Requires weights.size() == values.size(); p is not range-checked here.
double weighted_power_norm(std::span<const double> values, std::span<const double> weights,
                           double p);

/// (n^-1 sum_i |v_i|^r)^(1/r) with the same max factoring.
double power_mean(std::span<const double> values, double r);

/// Power mean of a multiset given by multiplicities (bootstrap resamples).
double power_mean_counts(std::span<const double> values, std::span<const unsigned> counts,
                         double r);

}  // namespace mixnorm

#endif  // MIXNORM_SUMMATION_HPP
