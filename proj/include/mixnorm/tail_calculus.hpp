#ifndef MIXNORM_TAIL_CALCULUS_HPP
#define MIXNORM_TAIL_CALCULUS_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mixnorm/measure_space.hpp"
#include "mixnorm/random_field.hpp"

namespace mixnorm {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kDefaultGridPoints = 64;

/// Geometric grid standing in for the open interval (a, b):
/// [a (1 + 1e-6), min(b, 512)], never touching a finite b.
std::vector<double> geometric_grid(double a, double b, std::size_t points = kDefaultGridPoints);

/// Tabulated moment function r -> psi(r) on an increasing grid inside (a, b).
struct PsiTable {
  std::vector<double> r_grid;
  std::vector<double> values;
  double a = 1.0;
  double b = kInfinity;
  /// Set when psi is known in closed form; enables refinement of the
  /// conjugate between grid points.
  std::function<double(double)> closed_form;
  std::vector<std::string> warnings;

  /// Throws unless the table invariants hold.
  void validate() const;

  /// Value at a grid point (matched to relative 1e-12).
  double at(double r) const;

  static PsiTable tabulate(std::function<double(double)> psi, std::vector<double> r_grid, double a,
                           double b = kInfinity);
};

/// Pass tolerance max(floor, se_multiplier * SE / rhs), SE from bootstrap.
struct StatTolerance {
  double floor = 0.05;
  double se_multiplier = 3.0;
  std::size_t resamples = kDefaultBootstrapResamples;

  double relative(double se, double rhs) const;
};

/// psi[p](r) = || ||eta(x)||_{r,Omega} ||_{p,X}: empirical r-th moment at
/// every cell, then the mixed p-norm over X. Every r must satisfy
/// max p <= r <= 512; a = max p.
PsiTable psi_from_model(const FieldModel& model, const ProductSpace& space, const ExponentVector& p,
                        std::span<const double> r_grid, std::size_t n, std::uint64_t seed);

/// psi[p](r) = ||h||_{p,X} ||xi||_r from the exact moments of the cell law;
/// carries a closed form.
PsiTable psi_exact(const FieldModel& model, const ProductSpace& space, const ExponentVector& p,
                   std::span<const double> r_grid);

/// Same, from precomputed replicas.
PsiTable psi_from_realizations(const Realizations& fields, const ProductSpace& space,
                               const ExponentVector& p, std::span<const double> r_grid);

/// psi values without the r >= max p gate (orders still in [1, 512]).
std::vector<double> psi_values(const Realizations& fields, const ProductSpace& space,
                               const ExponentVector& p, std::span<const double> r_values);

struct MomentBoundRow {
  double r = 0.0;
  double lhs = 0.0;  // (E |zeta|^r)^(1/r), empirical
  double rhs = 0.0;  // psi[p](r)
  double se = 0.0;   // bootstrap SE of lhs
  double tolerance = 0.0;
  bool hypothesis_met = true;
  bool pass = false;
};

struct Theorem21Report {
  std::vector<MomentBoundRow> rows;
  PsiTable psi;
  SampleSet zeta;
  /// sup over admissible rows of lhs / rhs
  double gls_ratio = 0.0;
  bool all_pass() const;
};

/// Moment bound ||zeta||_r <= psi[p](r) checked on shared replicas.
Theorem21Report theorem21_check(const FieldModel& model, const ProductSpace& space,
                                const ExponentVector& p, std::span<const double> r_grid,
                                std::size_t n, std::uint64_t seed, const StatTolerance& tol = {});

/// sup over the shared grid of moment(r) / psi(r).
double gls_norm(std::span<const double> r_values, std::span<const double> moments,
                const PsiTable& psi);

struct ConjugatePoint {
  double value = 0.0;
  double argmax = 0.0;
};

/// sup over the table of (u r - r ln psi(r)); grid maximum with ties toward
/// smaller r, refined by golden-section search when a closed form is present.
ConjugatePoint conjugate_point(const PsiTable& psi, double u);
double young_fenchel(const PsiTable& psi, double u);

/// Exponential tail bound P(zeta > u) <= exp(-G(u)) with
/// G(u) = sup_r (r ln u - r ln psi(r)), the conjugate evaluated at ln u.
struct TailCurve {
  std::vector<double> u_grid;
  std::vector<double> g_values;
  /// min(1, exp(-g))
  std::vector<double> bound_values;
};

TailCurve tail_bound(const PsiTable& psi, std::span<const double> u_grid);

struct TailComparisonRow {
  double u = 0.0;
  double bound = 0.0;
  double empirical = 0.0;
  double se = 0.0;  // binomial sqrt(P(1-P)/n) at the empirical frequency
  bool pass = false;
};

/// empirical_tail <= bound + se_multiplier * SE at every u.
std::vector<TailComparisonRow> compare_tail(const TailCurve& curve, std::span<const double> samples,
                                            double se_multiplier = 3.0);

struct PowerTailFit {
  double c2 = 0.0;
  double m_hat = 0.0;
  std::size_t points_used = 0;
  /// Log-log slope still increasing across the fit window.
  bool super_power = false;
};

/// Least squares ln g = ln C2 + m ln u over the largest-u half of the
/// points with g > 0; needs at least 10 such points.
PowerTailFit fit_power_tail(const TailCurve& curve);

struct Example22Result {
  double lhs = 0.0;
  double rhs = 0.0;
  double se = 0.0;
  double tolerance = 0.0;
  bool hypothesis_met = true;
  bool pass = false;
};

/// Single-axis moment bound (E|zeta|^r)^(1/r) <= (int [E|eta(x)|^r]^(p/r) dmu)^(1/p).
Example22Result example22_bound(const FieldModel& model, const ProductSpace& space, double p,
                                double r, std::size_t n, std::uint64_t seed,
                                const StatTolerance& tol = {});

}  // namespace mixnorm

#endif  // MIXNORM_TAIL_CALCULUS_HPP
