#include "mixnorm/tail_calculus.hpp"

#include <algorithm>
#include <cmath>

#include "mixnorm/error.hpp"
#include "mixnorm/mixed_norm.hpp"
#include "mixnorm/summation.hpp"

namespace mixnorm {

namespace {

constexpr double kGridMatchTol = 1e-12;

bool same_point(double x, double y) {
  return std::fabs(x - y) <= kGridMatchTol * std::max(std::fabs(x), std::fabs(y));
}

void check_order(double r) {
  if (!std::isfinite(r) || r < 1.0 || r > kMaxExponent) {
    throw ValidationError(ErrorCode::exponent_out_of_range,
                          "moment order " + std::to_string(r) + " outside [1, 512]");
  }
}

void warn_if_undersampled(std::size_t n, std::span<const double> r_values,
                          std::vector<std::string>& warnings) {
  for (double r : r_values) {
    if (static_cast<double>(n) < 10.0 * r) {
      warnings.push_back("n = " + std::to_string(n) + " replicas is below 10 r for r = " +
                         std::to_string(r) + "; the moment estimate is noise-dominated");
    }
  }
}

double objective(double u, double r, double psi) { return u * r - r * std::log(psi); }

// Least-squares slope and intercept of y on x.
std::pair<double, double> least_squares(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {slope, my - slope * mx};
}

}  // namespace

std::vector<double> geometric_grid(double a, double b, std::size_t points) {
  if (!(a >= 1.0) || !std::isfinite(a)) {
    throw ValidationError(ErrorCode::invalid_argument, "grid start a must be finite and >= 1");
  }
  if (!(b > a)) {
    throw ValidationError(ErrorCode::invalid_argument, "grid needs a < b");
  }
  if (points < 2) {
    throw ValidationError(ErrorCode::invalid_argument, "grid needs two or more points");
  }
  const double first = a * (1.0 + 1e-6);
  const double last = b > kMaxExponent ? kMaxExponent : b * (1.0 - 1e-6);
  if (!(last > first)) {
    throw ValidationError(ErrorCode::invalid_argument, "interval (a, b) too narrow for a grid");
  }
  std::vector<double> grid(points);
  const double ratio = std::log(last / first) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = first * std::exp(ratio * static_cast<double>(i));
  }
  grid.front() = first;
  grid.back() = last;
  return grid;
}

void PsiTable::validate() const {
  if (r_grid.empty()) throw ValidationError(ErrorCode::empty_table, "psi table is empty");
  if (values.size() != r_grid.size()) {
    throw ValidationError(ErrorCode::length_mismatch, "psi table grid and values differ in length");
  }
  if (!(a >= 1.0)) throw ValidationError(ErrorCode::invalid_argument, "psi table needs a >= 1");
  if (!(r_grid.front() > a)) {
    throw ValidationError(ErrorCode::grid_mismatch, "psi grid must start above a");
  }
  for (std::size_t i = 1; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > r_grid[i - 1])) {
      throw ValidationError(ErrorCode::grid_mismatch, "psi grid must be strictly increasing");
    }
  }
  if (r_grid.back() > std::min(b, kMaxExponent)) {
    throw ValidationError(ErrorCode::grid_mismatch, "psi grid exceeds min(b, 512)");
  }
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(ErrorCode::non_finite, "psi values must be positive and finite");
    }
  }
}

double PsiTable::at(double r) const {
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (same_point(r_grid[i], r)) return values[i];
  }
  throw ValidationError(ErrorCode::grid_mismatch,
                        "r = " + std::to_string(r) + " is not a grid point of the table");
}

PsiTable PsiTable::tabulate(std::function<double(double)> psi, std::vector<double> r_grid,
                            double a, double b) {
  PsiTable t;
  t.values.reserve(r_grid.size());
  for (double r : r_grid) t.values.push_back(psi(r));
  t.r_grid = std::move(r_grid);
  t.a = a;
  t.b = b;
  t.closed_form = std::move(psi);
  t.validate();
  return t;
}

double StatTolerance::relative(double se, double rhs) const {
  if (!(rhs > 0.0)) return floor;
  return std::max(floor, se_multiplier * se / rhs);
}

std::vector<double> psi_values(const Realizations& fields, const ProductSpace& space,
                               const ExponentVector& p, std::span<const double> r_values) {
  if (fields.cells != space.size()) {
    throw ValidationError(ErrorCode::shape_mismatch, "realizations do not match the space");
  }
  if (p.size() != space.dims()) {
    throw ValidationError(ErrorCode::exponent_count_mismatch, "one exponent per axis required");
  }
  for (double r : r_values) check_order(r);
  // moments[j * cells + c] = ||eta(x_c)||_{r_j, Omega}
  std::vector<double> moments(r_values.size() * fields.cells);
  for (std::size_t c = 0; c < fields.cells; ++c) {
    const auto column = fields.column(c);
    for (std::size_t j = 0; j < r_values.size(); ++j) {
      moments[j * fields.cells + c] = power_mean(column, r_values[j]);
    }
  }
  std::vector<double> out(r_values.size());
  for (std::size_t j = 0; j < r_values.size(); ++j) {
    out[j] = mixed_norm(std::span<const double>(moments).subspan(j * fields.cells, fields.cells),
                        space, p);
  }
  return out;
}

PsiTable psi_from_realizations(const Realizations& fields, const ProductSpace& space,
                               const ExponentVector& p, std::span<const double> r_grid) {
  for (double r : r_grid) {
    if (r < p.max()) {
      throw ValidationError(ErrorCode::exponent_out_of_range,
                            "psi needs r >= max p = " + std::to_string(p.max()) + ", got " +
                                std::to_string(r));
    }
  }
  PsiTable t;
  t.r_grid.assign(r_grid.begin(), r_grid.end());
  t.values = psi_values(fields, space, p, r_grid);
  t.a = p.max();
  // r may equal max p exactly; keep a strictly below the grid.
  if (!t.r_grid.empty() && !(t.r_grid.front() > t.a)) t.a = std::max(1.0, t.a * (1.0 - 1e-9));
  warn_if_undersampled(fields.replicas, r_grid, t.warnings);
  for (double v : t.values) {
    if (!(v > 0.0)) {
      throw ValidationError(ErrorCode::invalid_model, "psi vanishes: the field is identically zero");
    }
  }
  t.validate();
  return t;
}

PsiTable psi_from_model(const FieldModel& model, const ProductSpace& space, const ExponentVector& p,
                        std::span<const double> r_grid, std::size_t n, std::uint64_t seed) {
  for (double r : r_grid) {
    if (r < p.max()) {
      throw ValidationError(ErrorCode::exponent_out_of_range,
                            "psi needs r >= max p = " + std::to_string(p.max()));
    }
    check_order(r);
  }
  return psi_from_realizations(simulate(model, space, n, seed), space, p, r_grid);
}

PsiTable psi_exact(const FieldModel& model, const ProductSpace& space, const ExponentVector& p,
                   std::span<const double> r_grid) {
  model.validate(space);
  for (double r : r_grid) {
    check_order(r);
    if (r < p.max()) {
      throw ValidationError(ErrorCode::exponent_out_of_range,
                            "psi needs r >= max p = " + std::to_string(p.max()));
    }
  }
  // Every supported field has |eta(x)| = |h(x)| |xi|, one marginal law per cell.
  const NoiseLaw law = [&] {
    switch (model.kind()) {
      case FieldKind::correlated:
        return NoiseLaw::gaussian();
      case FieldKind::scaled_deterministic:
        return NoiseLaw::constant(model.scale());
      default:
        return model.noise();
    }
  }();
  const double h_norm = mixed_norm(GridFunction(space, model.amplitude_table(space)), p);
  if (!(h_norm > 0.0)) {
    throw ValidationError(ErrorCode::invalid_model, "psi vanishes: the amplitude is identically zero");
  }
  const auto psi = [law, h_norm](double r) { return h_norm * law.absolute_moment(r); };
  for (double r : r_grid) {
    if (!std::isfinite(psi(r)) || !(psi(r) > 0.0)) {
      throw ValidationError(ErrorCode::invalid_model,
                            "moment of order " + std::to_string(r) + " is not finite and positive");
    }
  }
  double a = p.max();
  if (!r_grid.empty() && !(r_grid.front() > a)) a = std::max(1.0, a * (1.0 - 1e-9));
  return PsiTable::tabulate(psi, std::vector<double>(r_grid.begin(), r_grid.end()), a);
}

bool Theorem21Report::all_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const MomentBoundRow& row) { return row.pass && row.hypothesis_met; });
}

Theorem21Report theorem21_check(const FieldModel& model, const ProductSpace& space,
                                const ExponentVector& p, std::span<const double> r_grid,
                                std::size_t n, std::uint64_t seed, const StatTolerance& tol) {
  if (r_grid.empty()) throw ValidationError(ErrorCode::empty_table, "empty r grid");
  for (double r : r_grid) check_order(r);
  const Realizations fields = simulate(model, space, n, seed);
  Theorem21Report report;
  report.zeta = zeta_from_realizations(fields, space, p, seed, model.digest());
  const auto psi = psi_values(fields, space, p, r_grid);
  const auto se = bootstrap_moment_se(report.zeta.values, r_grid, tol.resamples, seed);

  std::vector<double> admissible;
  for (std::size_t j = 0; j < r_grid.size(); ++j) {
    MomentBoundRow row;
    row.r = r_grid[j];
    row.lhs = empirical_moment(report.zeta, row.r);
    row.rhs = psi[j];
    row.se = se[j];
    row.tolerance = tol.relative(row.se, row.rhs);
    row.hypothesis_met = row.r >= p.max();
    row.pass = row.lhs <= row.rhs * (1.0 + row.tolerance);
    if (row.hypothesis_met) {
      admissible.push_back(row.r);
      if (row.rhs > 0.0) report.gls_ratio = std::max(report.gls_ratio, row.lhs / row.rhs);
    }
    report.rows.push_back(row);
  }
  if (!admissible.empty()) {
    report.psi = psi_from_realizations(fields, space, p, admissible);
  }
  return report;
}

double gls_norm(std::span<const double> r_values, std::span<const double> moments,
                const PsiTable& psi) {
  if (r_values.size() != moments.size() || r_values.size() != psi.r_grid.size()) {
    throw ValidationError(ErrorCode::grid_mismatch, "moment grid and psi grid differ");
  }
  double sup = 0.0;
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    if (!same_point(r_values[i], psi.r_grid[i])) {
      throw ValidationError(ErrorCode::grid_mismatch, "moment grid and psi grid differ");
    }
    sup = std::max(sup, moments[i] / psi.values[i]);
  }
  return sup;
}

ConjugatePoint conjugate_point(const PsiTable& psi, double u) {
  if (psi.r_grid.empty() || psi.values.size() != psi.r_grid.size()) {
    throw ValidationError(ErrorCode::empty_table, "conjugate of an empty table");
  }
  if (!std::isfinite(u)) {
    throw ValidationError(ErrorCode::invalid_argument, "conjugate argument must be finite");
  }
  std::size_t best = 0;
  double best_value = objective(u, psi.r_grid[0], psi.values[0]);
  for (std::size_t i = 1; i < psi.r_grid.size(); ++i) {
    const double v = objective(u, psi.r_grid[i], psi.values[i]);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  ConjugatePoint out{best_value, psi.r_grid[best]};
  if (!psi.closed_form || psi.r_grid.size() < 2) return out;

  // r -> u r - r ln psi(r) is concave whenever r ln psi(r) is convex, which
  // holds for every L_r moment function.
  const auto phi = [&](double r) { return objective(u, r, psi.closed_form(r)); };
  double lo = psi.r_grid[best == 0 ? 0 : best - 1];
  double hi = psi.r_grid[std::min(best + 1, psi.r_grid.size() - 1)];
  const double inv_golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_golden * (hi - lo);
  double x2 = lo + inv_golden * (hi - lo);
  double f1 = phi(x1), f2 = phi(x2);
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_golden * (hi - lo);
      f1 = phi(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_golden * (hi - lo);
      f2 = phi(x2);
    }
  }
  const double r_star = f1 >= f2 ? x1 : x2;
  const double v_star = std::max(f1, f2);
  if (v_star > out.value) out = {v_star, r_star};
  return out;
}

double young_fenchel(const PsiTable& psi, double u) { return conjugate_point(psi, u).value; }

TailCurve tail_bound(const PsiTable& psi, std::span<const double> u_grid) {
  TailCurve curve;
  for (double u : u_grid) {
    if (!(u >= 1.0) || !std::isfinite(u)) {
      throw ValidationError(ErrorCode::invalid_argument, "tail bound needs u >= 1");
    }
    const double g = young_fenchel(psi, std::log(u));
    curve.u_grid.push_back(u);
    curve.g_values.push_back(g);
    curve.bound_values.push_back(std::min(1.0, std::exp(-g)));
  }
  return curve;
}

std::vector<TailComparisonRow> compare_tail(const TailCurve& curve, std::span<const double> samples,
                                            double se_multiplier) {
  std::vector<TailComparisonRow> rows;
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < curve.u_grid.size(); ++i) {
    TailComparisonRow row;
    row.u = curve.u_grid[i];
    row.bound = curve.bound_values[i];
    row.empirical = empirical_tail(samples, row.u);
    row.se = n > 0 ? std::sqrt(row.empirical * (1.0 - row.empirical) / n) : 0.0;
    row.pass = row.empirical <= row.bound + se_multiplier * row.se;
    rows.push_back(row);
  }
  return rows;
}

PowerTailFit fit_power_tail(const TailCurve& curve) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < curve.u_grid.size(); ++i) {
    if (curve.g_values[i] > 0.0 && curve.u_grid[i] > 0.0) {
      x.push_back(std::log(curve.u_grid[i]));
      y.push_back(std::log(curve.g_values[i]));
    }
  }
  if (x.size() < 10) {
    throw ValidationError(ErrorCode::insufficient_data,
                          "power-tail fit needs 10 or more points with g > 0");
  }
  const std::size_t start = x.size() / 2;
  const std::span<const double> wx = std::span<const double>(x).subspan(start);
  const std::span<const double> wy = std::span<const double>(y).subspan(start);
  const auto [slope, intercept] = least_squares(wx, wy);

  PowerTailFit fit;
  fit.m_hat = slope;
  fit.c2 = std::exp(intercept);
  fit.points_used = wx.size();
  const std::size_t half = wx.size() / 2;
  const auto lower = least_squares(wx.first(half + 1), wy.first(half + 1)).first;
  const auto upper = least_squares(wx.subspan(half), wy.subspan(half)).first;
  fit.super_power = lower > 0.0 && upper > 1.2 * lower;
  return fit;
}

Example22Result example22_bound(const FieldModel& model, const ProductSpace& space, double p,
                                double r, std::size_t n, std::uint64_t seed,
                                const StatTolerance& tol) {
  if (space.dims() != 1) {
    throw ValidationError(ErrorCode::invalid_axis, "the one-dimensional bound needs a single axis");
  }
  const double orders[] = {r};
  const auto report = theorem21_check(model, space, ExponentVector{p}, orders, n, seed, tol);
  const auto& row = report.rows.front();
  return {row.lhs, row.rhs, row.se, row.tolerance, row.hypothesis_met, row.pass};
}

}  // namespace mixnorm
