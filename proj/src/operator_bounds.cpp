#include "mixnorm/operator_bounds.hpp"

#include <algorithm>
#include <cmath>

#include "mixnorm/error.hpp"
#include "mixnorm/mixed_norm.hpp"
#include "mixnorm/parallel.hpp"
#include "mixnorm/summation.hpp"

namespace mixnorm {

namespace {

void check_holder_exponents(const ExponentVector& e, const char* what) {
  for (double v : e.values()) {
    if (!(v > 1.0)) {
      throw ValidationError(ErrorCode::exponent_out_of_range,
                            std::string(what) + " exponents must lie in (1, inf)");
    }
  }
}

void check_order(double s) {
  if (!std::isfinite(s) || s < 1.0 || s > kMaxExponent) {
    throw ValidationError(ErrorCode::exponent_out_of_range,
                          "moment order " + std::to_string(s) + " outside [1, 512]");
  }
}

// Number of leading axes of v that are not matched by g.
std::size_t split_point(const ProductSpace& v_space, const ProductSpace& g_space) {
  if (v_space.dims() <= g_space.dims()) {
    throw ValidationError(ErrorCode::shape_mismatch, "kernel needs X-axes in front of the Y-axes");
  }
  const std::size_t x_dims = v_space.dims() - g_space.dims();
  for (std::size_t j = 0; j < g_space.dims(); ++j) {
    const Axis& kernel_axis = v_space.axis(x_dims + j);
    if (kernel_axis.size() != g_space.axis(j).size() ||
        !kernel_axis.same_measure(g_space.axis(j))) {
      throw ValidationError(ErrorCode::shape_mismatch,
                            "kernel Y-axis " + std::to_string(j) + " does not match g");
    }
  }
  return x_dims;
}

std::vector<double> product_weights(const ProductSpace& space) {
  std::vector<double> w(space.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = space.cell_weight(i);
  return w;
}

std::vector<AxisReduction> kernel_steps(std::size_t x_dims, const ExponentVector& q,
                                        const ExponentVector& r) {
  std::vector<AxisReduction> steps;
  for (std::size_t j = 0; j < q.size(); ++j) steps.push_back({x_dims + j, q[j]});
  for (std::size_t k = 0; k < r.size(); ++k) steps.push_back({k, r[k]});
  return steps;
}

}  // namespace

KernelModel::KernelModel(KernelKind kind, GridFunction part, std::size_t x_dims, NoiseLaw noise)
    : kind_(kind), part_(std::move(part)), x_dims_(x_dims), noise_(noise) {
  if (x_dims_ == 0 || x_dims_ >= part_.dims()) {
    throw ValidationError(ErrorCode::invalid_model,
                          "kernel needs at least one X-axis and one Y-axis");
  }
}

KernelModel KernelModel::deterministic(GridFunction v, std::size_t x_dims) {
  return KernelModel(KernelKind::deterministic, std::move(v), x_dims, NoiseLaw::constant(1.0));
}

KernelModel KernelModel::factorable_random(GridFunction k0, std::size_t x_dims, NoiseLaw tau) {
  return KernelModel(KernelKind::factorable_random, std::move(k0), x_dims, tau);
}

KernelModel KernelModel::general_random(GridFunction k0, std::size_t x_dims, NoiseLaw per_cell) {
  return KernelModel(KernelKind::general_random, std::move(k0), x_dims, per_cell);
}

FieldModel KernelModel::field_model() const {
  std::vector<double> table(part_.values().begin(), part_.values().end());
  switch (kind_) {
    case KernelKind::deterministic: return FieldModel::scaled_deterministic(std::move(table), 1.0);
    case KernelKind::factorable_random: return FieldModel::factorable(std::move(table), noise_);
    case KernelKind::general_random: return FieldModel::iid(noise_, std::move(table));
  }
  throw ValidationError(ErrorCode::invalid_model, "unknown kernel kind");
}

ExponentVector conjugate_exponents(const ExponentVector& p) {
  std::vector<double> q;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!(p[j] > 1.0)) {
      throw ValidationError(ErrorCode::exponent_out_of_range,
                            "conjugate exponent of p_" + std::to_string(j) +
                                " = 1 is infinite; p must lie in (1, inf)");
    }
    q.push_back(p[j] / (p[j] - 1.0));
  }
  return ExponentVector(std::move(q));
}

double admissible_order(const ExponentVector& q, const ExponentVector& r) {
  return std::max(q.max(), r.max());
}

void apply_operator(std::span<const double> v_values, std::size_t x_cells,
                    std::span<const double> g_values, std::span<const double> y_weights,
                    std::span<double> out) {
  const std::size_t y_cells = g_values.size();
  std::vector<double> terms(y_cells);
  for (std::size_t x = 0; x < x_cells; ++x) {
    const double* row = v_values.data() + x * y_cells;
    for (std::size_t y = 0; y < y_cells; ++y) terms[y] = y_weights[y] * row[y] * g_values[y];
    out[x] = pairwise_sum(terms);
  }
}

GridFunction apply_operator(const GridFunction& v, const GridFunction& g) {
  const std::size_t x_dims = split_point(v.space(), g.space());
  const ProductSpace x_space = v.space().slice(0, x_dims);
  const auto y_weights = product_weights(g.space());
  std::vector<double> out(x_space.size());
  apply_operator(v.values(), x_space.size(), g.values(), y_weights, out);
  return GridFunction(x_space, std::move(out));
}

HolderBound holder_bound(const GridFunction& v, const GridFunction& g, const ExponentVector& p,
                         const ExponentVector& r) {
  const std::size_t x_dims = split_point(v.space(), g.space());
  if (p.size() != g.dims() || r.size() != x_dims) {
    throw ValidationError(ErrorCode::exponent_count_mismatch,
                          "p must match the Y-axes and r the X-axes");
  }
  check_holder_exponents(p, "p");
  check_holder_exponents(r, "r");
  const ExponentVector q = conjugate_exponents(p);

  HolderBound out;
  out.lhs = mixed_norm(apply_operator(v, g), r);
  out.rhs = iterated_norm(v, kernel_steps(x_dims, q, r)) * mixed_norm(g, p);
  return out;
}

double theta_from_moments(std::span<const double> cell_moments, const ProductSpace& kernel_space,
                          const ExponentVector& q, const ExponentVector& r) {
  if (q.size() + r.size() != kernel_space.dims()) {
    throw ValidationError(ErrorCode::exponent_count_mismatch,
                          "q and r must cover the kernel's Y- and X-axes");
  }
  return iterated_norm(cell_moments, kernel_space, kernel_steps(r.size(), q, r));
}

namespace {

std::vector<double> cell_moments(const Realizations& fields, double s) {
  std::vector<double> out(fields.cells);
  for (std::size_t c = 0; c < fields.cells; ++c) out[c] = power_mean(fields.column(c), s);
  return out;
}

void check_theta_order(const ExponentVector& q, const ExponentVector& r, double s) {
  check_order(s);
  const double A = admissible_order(q, r);
  if (s < A) {
    throw ValidationError(ErrorCode::exponent_out_of_range,
                          "theta needs s >= A = " + std::to_string(A) + ", got " +
                              std::to_string(s));
  }
}

}  // namespace

double theta(const KernelModel& model, const ExponentVector& q, const ExponentVector& r, double s,
             std::size_t n, std::uint64_t seed) {
  check_theta_order(q, r, s);
  const ProductSpace& space = model.deterministic_part().space();
  const Realizations kernels = simulate(model.field_model(), space, n, seed);
  return theta_from_moments(cell_moments(kernels, s), space, q, r);
}

double factorized_theta(const GridFunction& k0, const PsiTable& tau_moments,
                        const ExponentVector& q, const ExponentVector& r, double s) {
  if (q.size() + r.size() != k0.dims()) {
    throw ValidationError(ErrorCode::exponent_count_mismatch,
                          "q and r must cover the kernel's Y- and X-axes");
  }
  const double rho = tau_moments.at(s);
  const double h = iterated_norm(k0, kernel_steps(r.size(), q, r));
  return h * rho;
}

PsiTable scalar_moments(const NoiseLaw& law, std::span<const double> s_grid, std::size_t n,
                        std::uint64_t seed) {
  if (n == 0) throw ValidationError(ErrorCode::invalid_argument, "replica count must be positive");
  std::vector<double> tau(n);
  parallel_for(n, [&](std::size_t i) {
    Engine engine = replica_engine(seed, i);
    tau[i] = law.draw(engine);
  });
  PsiTable t;
  t.a = 1.0;
  for (double s : s_grid) {
    check_order(s);
    t.r_grid.push_back(s);
    t.values.push_back(power_mean(tau, s));
  }
  t.validate();
  return t;
}

bool OperatorBoundReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const OperatorBoundRow& row) {
    return row.pass && row.hypothesis_met;
  });
}

OperatorBoundReport theorem31_check(const KernelModel& model, const GridFunction& g,
                                    const ExponentVector& p, const ExponentVector& r,
                                    std::span<const double> s_grid, std::size_t n,
                                    std::uint64_t seed, const Theorem31Options& options) {
  const GridFunction& k0 = model.deterministic_part();
  const std::size_t x_dims = split_point(k0.space(), g.space());
  if (x_dims != model.x_dims()) {
    throw ValidationError(ErrorCode::shape_mismatch, "g does not live on the kernel's Y-axes");
  }
  if (p.size() != g.dims() || r.size() != x_dims) {
    throw ValidationError(ErrorCode::exponent_count_mismatch,
                          "p must match the Y-axes and r the X-axes");
  }
  if (s_grid.empty()) throw ValidationError(ErrorCode::empty_table, "empty s grid");
  check_holder_exponents(p, "p");
  check_holder_exponents(r, "r");
  for (double s : s_grid) check_order(s);
  const ExponentVector q = conjugate_exponents(p);

  OperatorBoundReport report;
  report.A = admissible_order(q, r);
  report.a = options.a.value_or(report.A);
  report.b = options.b;
  if (report.a < report.A) {
    throw ValidationError(ErrorCode::invalid_argument, "the interval start a must be >= A");
  }
  report.g_norm = mixed_norm(g, p);

  const ProductSpace& kernel_space = k0.space();
  const ProductSpace x_space = model.x_space();
  const Realizations kernels = simulate(model.field_model(), kernel_space, n, seed);
  const auto y_weights = product_weights(g.space());

  std::vector<double> image_norms(n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> f(x_space.size());
    apply_operator(kernels.replica(i), x_space.size(), g.values(), y_weights, f);
    image_norms[i] = mixed_norm(f, x_space, r);
  });
  const auto se = bootstrap_moment_se(image_norms, s_grid, options.tolerance.resamples, seed);

  std::optional<PsiTable> tau_moments;
  if (model.kind() == KernelKind::factorable_random) {
    tau_moments = scalar_moments(model.noise(), s_grid, n, seed);
  }

  for (std::size_t j = 0; j < s_grid.size(); ++j) {
    OperatorBoundRow row;
    row.s = s_grid[j];
    row.hypothesis_met = row.s >= report.a && row.s <= report.b;
    row.theta = theta_from_moments(cell_moments(kernels, row.s), kernel_space, q, r);
    row.lhs = power_mean(image_norms, row.s);
    row.se = se[j];
    row.g_norm = report.g_norm;
    const double rhs = row.theta * row.g_norm;
    row.ratio = rhs > 0.0 ? row.lhs / rhs : (row.lhs > 0.0 ? kInfinity : 0.0);
    row.tolerance = options.tolerance.relative(row.se, rhs);
    row.pass = row.lhs <= rhs * (1.0 + row.tolerance);
    if (tau_moments) row.factorized_theta = factorized_theta(k0, *tau_moments, q, r, row.s);
    if (row.hypothesis_met) report.gls_ratio = std::max(report.gls_ratio, row.ratio);
    if (static_cast<double>(n) < 10.0 * row.s) {
      report.warnings.push_back("n = " + std::to_string(n) + " replicas is below 10 s for s = " +
                                std::to_string(row.s));
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace mixnorm
