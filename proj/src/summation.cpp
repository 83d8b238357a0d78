#include "mixnorm/summation.hpp"

#include <cmath>

namespace mixnorm {

namespace {

constexpr std::size_t kLeafSize = 8;

double pairwise_sum_impl(const double* x, std::size_t n) noexcept {
  if (n <= kLeafSize) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(x, half) + pairwise_sum_impl(x + half, n - half);
}

// Scratch buffer per thread; norms are evaluated millions of times.
std::vector<double>& scratch(std::size_t n) {
  thread_local std::vector<double> buffer;
  buffer.resize(n);
  return buffer;
}

}  // namespace

double pairwise_sum(std::span<const double> terms) noexcept {
  return pairwise_sum_impl(terms.data(), terms.size());
}

double weighted_power_norm(std::span<const double> values, std::span<const double> weights,
                           double p) {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] > 0.0) m = std::max(m, std::fabs(values[i]));
  }
  if (m == 0.0) return 0.0;
  auto& terms = scratch(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double t = std::fabs(values[i]) / m;
    terms[i] = weights[i] > 0.0 ? weights[i] * (p == 1.0 ? t : std::pow(t, p)) : 0.0;
  }
  const double s = pairwise_sum(terms);
  return m * (p == 1.0 ? s : std::pow(s, 1.0 / p));
}

double power_mean(std::span<const double> values, double r) {
  if (values.empty()) return 0.0;
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  if (m == 0.0) return 0.0;
  auto& terms = scratch(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double t = std::fabs(values[i]) / m;
    terms[i] = r == 1.0 ? t : std::pow(t, r);
  }
  const double mean = pairwise_sum(terms) / static_cast<double>(values.size());
  return m * (r == 1.0 ? mean : std::pow(mean, 1.0 / r));
}

double power_mean_counts(std::span<const double> values, std::span<const unsigned> counts,
                         double r) {
  double m = 0.0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (counts[i] > 0) {
      m = std::max(m, std::fabs(values[i]));
      total += counts[i];
    }
  }
  if (m == 0.0 || total == 0) return 0.0;
  auto& terms = scratch(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (counts[i] == 0) {
      terms[i] = 0.0;
      continue;
    }
    const double t = std::fabs(values[i]) / m;
    terms[i] = static_cast<double>(counts[i]) * (r == 1.0 ? t : std::pow(t, r));
  }
  const double mean = pairwise_sum(terms) / static_cast<double>(total);
  return m * (r == 1.0 ? mean : std::pow(mean, 1.0 / r));
}

}  // namespace mixnorm
