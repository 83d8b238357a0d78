#ifndef MIXNORM_OPERATOR_BOUNDS_HPP
#define MIXNORM_OPERATOR_BOUNDS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixnorm/measure_space.hpp"
#include "mixnorm/random_field.hpp"
#include "mixnorm/summation.hpp"
#include "mixnorm/tail_calculus.hpp"

namespace mixnorm {

enum class KernelKind {
  deterministic,      // K = V(x, y)
  factorable_random,  // K = K0(x, y) tau(w)
  general_random,     // K = K0(x, y) xi(x, y, w), xi independent per cell
};

/// Random kernel K(x, y, w) on X (x) Y. The deterministic part lives on the
/// concatenated space with the X-axes first.
class KernelModel {
 public:
  static KernelModel deterministic(GridFunction v, std::size_t x_dims);
  static KernelModel factorable_random(GridFunction k0, std::size_t x_dims, NoiseLaw tau);
  static KernelModel general_random(GridFunction k0, std::size_t x_dims, NoiseLaw per_cell);

  KernelKind kind() const noexcept { return kind_; }
  const GridFunction& deterministic_part() const noexcept { return part_; }
  const NoiseLaw& noise() const noexcept { return noise_; }
  std::size_t x_dims() const noexcept { return x_dims_; }
  std::size_t y_dims() const noexcept { return part_.dims() - x_dims_; }
  ProductSpace x_space() const { return part_.space().slice(0, x_dims_); }
  ProductSpace y_space() const { return part_.space().slice(x_dims_, y_dims()); }

  /// Equivalent field model on the kernel's product space.
  FieldModel field_model() const;

 private:
  KernelModel(KernelKind kind, GridFunction part, std::size_t x_dims, NoiseLaw noise);

  KernelKind kind_;
  GridFunction part_;
  std::size_t x_dims_;
  NoiseLaw noise_;
};

/// q_j = p_j / (p_j - 1); every p_j must lie in (1, inf).
ExponentVector conjugate_exponents(const ExponentVector& p);

/// A = max{max_k r_k, max_j q_j}.
double admissible_order(const ExponentVector& q, const ExponentVector& r);

/// f(x) = sum_y nu(y) V(x, y) g(y). The trailing axes of V must carry the
/// same measures as the axes of g.
GridFunction apply_operator(const GridFunction& v, const GridFunction& g);

/// Raw form used inside Monte Carlo loops: v_values on X (x) Y, g on Y.
void apply_operator(std::span<const double> v_values, std::size_t x_cells,
                    std::span<const double> g_values, std::span<const double> y_weights,
                    std::span<double> out);

struct HolderBound {
  double lhs = 0.0;  // ||V g||_{r,X}
  double rhs = 0.0;  // || ||V||_{q,Y} ||_{r,X} * ||g||_{p,Y}
  bool holds(double rel_tol = 1e-10) const noexcept { return lhs <= rhs * (1.0 + rel_tol); }
};

/// p on Y (each in (1, inf)), r on X (each in (1, inf)).
HolderBound holder_bound(const GridFunction& v, const GridFunction& g, const ExponentVector& p,
                         const ExponentVector& r);

/// || || ||K||_{s,Omega} ||_{q,Y} ||_{r,X} for cellwise s-th moments given on X (x) Y.
double theta_from_moments(std::span<const double> cell_moments, const ProductSpace& kernel_space,
                          const ExponentVector& q, const ExponentVector& r);

/// theta(s) by Monte Carlo over n kernel replicas; requires A <= s <= 512.
double theta(const KernelModel& model, const ExponentVector& q, const ExponentVector& r, double s,
             std::size_t n, std::uint64_t seed);

/// h(q, r) * rho(s) with h = || ||K0||_{q,Y} ||_{r,X} and rho(s) = ||tau||_s
/// looked up in tau_moments.
double factorized_theta(const GridFunction& k0, const PsiTable& tau_moments,
                        const ExponentVector& q, const ExponentVector& r, double s);

/// Empirical ||tau||_s of a factorable kernel's scalar factor on the same
/// replica streams as the kernel itself; a = 1.
PsiTable scalar_moments(const NoiseLaw& law, std::span<const double> s_grid, std::size_t n,
                        std::uint64_t seed);

struct OperatorBoundRow {
  double s = 0.0;
  double theta = 0.0;
  double lhs = 0.0;  // || ||U[g]||_{r,X} ||_{s,Omega}
  double se = 0.0;   // bootstrap SE of lhs
  double g_norm = 0.0;
  double ratio = 0.0;  // lhs / (theta g_norm)
  double tolerance = 0.0;
  std::optional<double> factorized_theta;
  bool hypothesis_met = true;  // a <= s <= b
  bool pass = false;
};

struct OperatorBoundReport {
  std::vector<OperatorBoundRow> rows;
  double A = 0.0;
  double a = 0.0;
  double b = kMaxExponent;
  double g_norm = 0.0;
  /// sup over admissible rows of ratio
  double gls_ratio = 0.0;
  std::vector<std::string> warnings;

  bool all_pass() const;
};

struct Theorem31Options {
  /// Lower end of the Grand Lebesgue interval; defaults to A.
  std::optional<double> a;
  double b = kMaxExponent;
  StatTolerance tolerance;
};

/// Monte Carlo check of || ||U[g]||_{r,X} ||_{s,Omega} <= theta(s) ||g||_{p,Y}
/// with lhs and theta computed from the same kernel replicas.
OperatorBoundReport theorem31_check(const KernelModel& model, const GridFunction& g,
                                    const ExponentVector& p, const ExponentVector& r,
                                    std::span<const double> s_grid, std::size_t n,
                                    std::uint64_t seed, const Theorem31Options& options = {});

}  // namespace mixnorm

#endif  // MIXNORM_OPERATOR_BOUNDS_HPP
