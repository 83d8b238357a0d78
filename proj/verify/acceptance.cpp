#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "mixnorm/io.hpp"
#include "mixnorm/mixed_norm.hpp"
#include "mixnorm/operator_bounds.hpp"
#include "mixnorm/random_field.hpp"
#include "mixnorm/tail_calculus.hpp"
#include "oracles.hpp"

namespace mixnorm::acceptance {

namespace {

using io::format_real;
using Clock = std::chrono::steady_clock;

double relative_error(double value, double reference) {
  const double scale = std::max(std::fabs(reference), 1e-300);
  return std::fabs(value - reference) / scale;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ";") + format_real(x);
  return s;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// Axis of `n` cells with random weights normalized to total mass `mass`.
Axis random_axis(std::mt19937_64& rng, std::size_t n, double mass, const std::string& name) {
  auto w = oracle::random_values(rng, n, 0.1, 1.0);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x *= mass / total;
  std::vector<double> pts(n);
  std::iota(pts.begin(), pts.end(), 0.0);
  return make_axis(std::move(pts), std::move(w), name);
}

std::vector<double> normalized(std::vector<double> v, const std::vector<double>& w, double p) {
  const double n = oracle::vector_norm(v, w, p);
  for (auto& x : v) x /= n;
  return v;
}

struct Timed {
  Clock::time_point start = Clock::now();
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

CriterionResult finish(int id, std::string name, bool passed, std::string detail,
                       const Timed& timer, double limit, std::string csv_name, std::string csv) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.seconds = timer.seconds();
  r.limit_seconds = limit;
  r.passed = passed && r.seconds < limit;
  r.detail = std::move(detail);
  if (!(r.seconds < limit)) r.detail += "; runtime limit exceeded";
  r.csv_name = std::move(csv_name);
  r.csv = std::move(csv);
  return r;
}

// 1. Equal exponents reduce to the flat L_p norm of the product measure.
CriterionResult flat_norm_consistency(const Options& opt) {
  Timed timer;
  std::mt19937_64 rng(opt.seed + 1);
  std::uniform_real_distribution<double> exponent(1.0, 8.0);
  std::ostringstream csv;
  csv << "case,dims,cells,p,mixed,flat,rel_err,pass\n";
  double worst = 0.0;
  bool ok = true;
  for (int t = 0; t < 500; ++t) {
    const ProductSpace space = oracle::random_space(rng, 4, 6);
    const GridFunction f(space, oracle::random_values(rng, space.size(), -2.0, 2.0));
    const double p = exponent(rng);
    const double mixed = mixed_norm(f, ExponentVector::uniform(space.dims(), p));
    const double flat = oracle::flat_lp_norm(f, p);
    const double err = relative_error(mixed, flat);
    const bool pass = err <= 1e-12;
    ok = ok && pass;
    worst = std::max(worst, err);
    csv << t << ',' << space.dims() << ',' << space.size() << ',' << format_real(p) << ','
        << format_real(mixed) << ',' << format_real(flat) << ',' << format_real(err) << ','
        << pass << '\n';
  }
  return finish(1, "flat-norm consistency (500 tensors, rel 1e-12)", ok,
                "max rel err " + fmt("%.3g", worst), timer, 5.0, "c01_flat_norm.csv", csv.str());
}

// 2. Product of per-axis norms equals the mixed norm of the outer product.
CriterionResult factorization(const Options& opt) {
  Timed timer;
  std::mt19937_64 rng(opt.seed + 2);
  std::uniform_real_distribution<double> exponent(1.0, 8.0);
  std::ostringstream csv;
  csv << "case,dims,p,factorable,mixed,rel_err,pass\n";
  double worst = 0.0;
  bool ok = true;
  for (int t = 0; t < 500; ++t) {
    const ProductSpace space = oracle::random_space(rng, 4, 6);
    std::vector<std::vector<double>> factors;
    std::vector<double> p;
    for (std::size_t k = 0; k < space.dims(); ++k) {
      factors.push_back(oracle::random_values(rng, space.axis(k).size(), -2.0, 2.0));
      p.push_back(exponent(rng));
    }
    const ExponentVector pv(p);
    const double fact = factorable_norm(space, factors, pv);
    const double mixed = mixed_norm(outer_product(space, factors), pv);
    const double err = relative_error(fact, mixed);
    const bool pass = err <= 1e-12;
    ok = ok && pass;
    worst = std::max(worst, err);
    csv << t << ',' << space.dims() << ',' << join(p) << ',' << format_real(fact) << ','
        << format_real(mixed) << ',' << format_real(err) << ',' << pass << '\n';
  }
  return finish(2, "factorization identity (500 outer products, rel 1e-12)", ok,
                "max rel err " + fmt("%.3g", worst), timer, 5.0, "c02_factorization.csv",
                csv.str());
}

// 3. Minkowski-type permutation inequality plus its factorable equality case.
CriterionResult permutation(const Options& opt) {
  Timed timer;
  std::mt19937_64 rng(opt.seed + 3);
  std::uniform_real_distribution<double> exponent(1.0, 6.0);
  std::uniform_real_distribution<double> excess(0.0, 6.0);
  std::ostringstream csv;
  csv << "case,p,r,lhs,rhs,pass\n";
  bool ok = true;
  double worst_ratio = 0.0;
  for (int t = 0; t < 1000; ++t) {
    ProductSpace space = oracle::random_space(rng, 4, 5);
    while (space.dims() < 2) space = oracle::random_space(rng, 4, 5);
    const GridFunction phi(space, oracle::random_values(rng, space.size(), 0.0, 3.0));
    std::vector<std::size_t> axes(space.dims());
    std::iota(axes.begin(), axes.end(), 0);
    std::shuffle(axes.begin(), axes.end(), rng);
    const std::size_t split =
        std::uniform_int_distribution<std::size_t>(1, space.dims() - 1)(rng);
    const std::vector<std::size_t> x_axes(axes.begin(), axes.begin() + split);
    const std::vector<std::size_t> z_axes(axes.begin() + split, axes.end());
    std::vector<double> p;
    for (std::size_t j = 0; j < x_axes.size(); ++j) p.push_back(exponent(rng));
    const ExponentVector pv(p);
    const double r = pv.max() + excess(rng);
    const PermutationGap gap = permutation_gap(phi, x_axes, z_axes, pv, r);
    const bool pass = gap.hypothesis_met && gap.holds(1e-10);
    ok = ok && pass;
    worst_ratio = std::max(worst_ratio, gap.lhs / gap.rhs);
    csv << t << ',' << join(p) << ',' << format_real(r) << ',' << format_real(gap.lhs) << ','
        << format_real(gap.rhs) << ',' << pass << '\n';
  }

  // phi = h (x) tau with ||h||_{p,X} = ||tau||_{r,Z} = 1.
  const Axis x1 = random_axis(rng, 3, 1.3, "x1");
  const Axis x2 = random_axis(rng, 4, 0.7, "x2");
  const Axis z = random_axis(rng, 5, 1.0, "z");
  const ProductSpace x_space({x1, x2});
  const ExponentVector p{1.5, 2.5};
  const double r = 4.0;
  const GridFunction h0(x_space, oracle::random_values(rng, x_space.size(), 0.1, 2.0));
  const double h_norm = mixed_norm(h0, p);
  const auto tau = normalized(oracle::random_values(rng, z.size(), 0.1, 2.0), z.weights(), r);
  std::vector<double> phi_values;
  for (double h : h0.values()) {
    for (double t : tau) phi_values.push_back(h / h_norm * t);
  }
  const GridFunction phi(ProductSpace({x1, x2, z}), std::move(phi_values));
  const std::size_t xs[] = {0, 1};
  const std::size_t zs[] = {2};
  const PermutationGap eq = permutation_gap(phi, xs, zs, p, r);
  const bool eq_ok = std::fabs(eq.lhs - 1.0) <= 1e-10 && std::fabs(eq.rhs - 1.0) <= 1e-10;
  csv << "factorable," << join(p.values()) << ',' << format_real(r) << ',' << format_real(eq.lhs)
      << ',' << format_real(eq.rhs) << ',' << eq_ok << '\n';
  return finish(3, "permutation inequality (1000 tensors) and factorable equality", ok && eq_ok,
                "max lhs/rhs " + fmt("%.12f", worst_ratio) + ", equality case lhs " +
                    fmt("%.15f", eq.lhs) + " rhs " + fmt("%.15f", eq.rhs),
                timer, 10.0, "c03_permutation.csv", csv.str());
}

ProductSpace field_space() {
  return ProductSpace({uniform_axis(4, 1.0, "x1"), uniform_axis(4, 1.0, "x2")});
}

std::vector<double> field_amplitude() {
  std::vector<double> h;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) h.push_back(1.0 + 0.25 * i + 0.5 * j);
  }
  return h;
}

struct NamedField {
  std::string name;
  FieldModel model;
};

std::vector<NamedField> moment_fields() {
  return {
      {"gaussian_iid", FieldModel::iid(NoiseLaw::gaussian(), field_amplitude())},
      {"exponential_power_1", FieldModel::iid(NoiseLaw::exponential_power(1.0), field_amplitude())},
      {"exponential_power_2", FieldModel::iid(NoiseLaw::exponential_power(2.0), field_amplitude())},
  };
}

// 4 and 5. Moment bound rows and the Grand-Lebesgue normalized ratio.
std::pair<CriterionResult, CriterionResult> moment_bound(const Options& opt) {
  Timed timer;
  const ProductSpace space = field_space();
  const ExponentVector p{1.0, 2.0};
  const std::vector<double> r_grid{2.0, 4.0, 8.0, 16.0};
  std::ostringstream csv4, csv5;
  csv4 << "model,r,lhs,rhs,se,tolerance,pass\n";
  csv5 << "model,gls_norm,pass\n";
  bool ok4 = true, ok5 = true;
  double worst_gls = 0.0;
  std::uint64_t offset = 0;
  std::vector<std::pair<std::string, double>> gls;
  for (const auto& field : moment_fields()) {
    const auto report =
        theorem21_check(field.model, space, p, r_grid, opt.replicas, opt.seed + 40 + offset++);
    for (const auto& row : report.rows) {
      const bool pass = row.pass && row.hypothesis_met;
      ok4 = ok4 && pass;
      csv4 << field.name << ',' << format_real(row.r) << ',' << format_real(row.lhs) << ','
           << format_real(row.rhs) << ',' << format_real(row.se) << ','
           << format_real(row.tolerance) << ',' << pass << '\n';
    }
    std::vector<double> lhs;
    for (const auto& row : report.rows) lhs.push_back(row.lhs);
    gls.emplace_back(field.name, gls_norm(r_grid, lhs, report.psi));
  }
  CriterionResult c4 = finish(4, "moment bound ||zeta||_r <= psi(r) (3 fields, n replicas)", ok4,
                              "all rows within max(5%, 3 SE)", timer, 60.0,
                              "c04_moment_bound.csv", csv4.str());
  Timed timer5;
  for (const auto& [name, value] : gls) {
    const bool pass = value <= 1.05;
    ok5 = ok5 && pass;
    worst_gls = std::max(worst_gls, value);
    csv5 << name << ',' << format_real(value) << ',' << pass << '\n';
  }
  CriterionResult c5 = finish(5, "Grand Lebesgue norm of zeta <= 1.05", ok5,
                              "max GLS ratio " + fmt("%.6f", worst_gls), timer5, 60.0,
                              "c05_gls.csv", csv5.str());
  return {c4, c5};
}

struct ClosedForm {
  std::string name;
  std::function<double(double)> psi;
};

// 6. Conjugate against a 1e5-point dense grid search.
CriterionResult young_fenchel_oracle(const Options&) {
  Timed timer;
  const std::vector<ClosedForm> forms = {
      {"constant", [](double) { return 2.0; }},
      {"exp", [](double r) { return std::exp(r); }},
      {"identity", [](double r) { return r; }},
      {"sqrt", [](double r) { return 2.0 * std::sqrt(r); }},
  };
  std::ostringstream csv;
  csv << "psi,u,g,oracle,rel_err,pass\n";
  bool ok = true;
  double worst = 0.0;
  for (const auto& form : forms) {
    const PsiTable table = PsiTable::tabulate(form.psi, geometric_grid(1.0, kInfinity), 1.0);
    for (int i = 1; i <= 20; ++i) {
      const double u = static_cast<double>(i);
      const double g = young_fenchel(table, u);
      const double ref =
          oracle::dense_conjugate(form.psi, u, table.r_grid.front(), table.r_grid.back());
      const double err = relative_error(g, ref);
      const bool pass = err <= 1e-6;
      ok = ok && pass;
      worst = std::max(worst, err);
      csv << form.name << ',' << format_real(u) << ',' << format_real(g) << ','
          << format_real(ref) << ',' << format_real(err) << ',' << pass << '\n';
    }
  }
  return finish(6, "Young-Fenchel transform vs dense grid oracle (rel 1e-6)", ok,
                "max rel err " + fmt("%.3g", worst), timer, 10.0, "c06_young_fenchel.csv",
                csv.str());
}

// 7. Power-law exponent recovery and the tail bound against sampled tails.
CriterionResult power_tail(const Options& opt) {
  Timed timer;
  std::ostringstream csv;
  csv << "m,quantity,u,value,reference,pass\n";
  bool ok = true;
  std::string detail;
  const double C = 1.5;
  const ProductSpace space = field_space();
  const ExponentVector p{1.0, 2.0};
  std::uint64_t offset = 0;
  for (double m : {1.0, 2.0, 4.0}) {
    const auto psi = [C, m](double r) { return C * std::pow(r, 1.0 / m); };
    const PsiTable table = PsiTable::tabulate(psi, geometric_grid(1.0, kInfinity), 1.0);
    const double u_top = 0.9 * C * std::pow(kMaxExponent * std::exp(1.0), 1.0 / m);
    std::vector<double> u_grid;
    for (int i = 0; i < 40; ++i) u_grid.push_back(std::pow(u_top, i / 39.0));
    const PowerTailFit fit = fit_power_tail(tail_bound(table, u_grid));
    const bool fit_ok = std::fabs(fit.m_hat - m) <= 0.1 * m;
    ok = ok && fit_ok;
    csv << format_real(m) << ",m_hat,," << format_real(fit.m_hat) << ',' << format_real(m) << ','
        << fit_ok << '\n';
    detail += (detail.empty() ? "" : "; ") + ("m=" + fmt("%g", m) + ": m_hat " + fmt("%.4f", fit.m_hat));

    const FieldModel model = FieldModel::iid(NoiseLaw::exponential_power(m), field_amplitude());
    const Realizations fields = simulate(model, space, opt.replicas, opt.seed + 70 + offset++);
    const SampleSet zeta = zeta_from_realizations(fields, space, p, 0, model.digest());
    const auto r_grid = geometric_grid(p.max(), kInfinity);
    const PsiTable field_psi = psi_from_realizations(fields, space, p, r_grid);
    const double z_max = *std::max_element(zeta.values.begin(), zeta.values.end());
    std::vector<double> tail_u;
    for (int i = 0; i < 40; ++i) tail_u.push_back(std::pow(1.2 * z_max, i / 39.0));
    const auto rows = compare_tail(tail_bound(field_psi, tail_u), zeta.values, 3.0);
    for (const auto& row : rows) {
      ok = ok && row.pass;
      csv << format_real(m) << ",tail," << format_real(row.u) << ',' << format_real(row.empirical)
          << ',' << format_real(row.bound) << ',' << row.pass << '\n';
    }
  }
  return finish(7, "power-law tail exponent recovery and tail domination", ok, detail, timer, 60.0,
                "c07_power_tail.csv", csv.str());
}

// 8. Hoelder bound for deterministic kernels and its equality cases.
CriterionResult holder(const Options& opt) {
  Timed timer;
  std::mt19937_64 rng(opt.seed + 8);
  std::uniform_real_distribution<double> exponent(1.1, 6.0);
  std::ostringstream csv;
  csv << "case,lhs,rhs,pass\n";
  bool ok = true;
  for (int t = 0; t < 1000; ++t) {
    const ProductSpace xs = oracle::random_space(rng, 2, 4, "x");
    const ProductSpace ys = oracle::random_space(rng, 2, 4, "y");
    const ProductSpace kernel_space = ProductSpace::concat(xs, ys);
    const GridFunction v(kernel_space, oracle::random_values(rng, kernel_space.size(), -2.0, 2.0));
    const GridFunction g(ys, oracle::random_values(rng, ys.size(), -2.0, 2.0));
    std::vector<double> p, r;
    for (std::size_t j = 0; j < ys.dims(); ++j) p.push_back(exponent(rng));
    for (std::size_t k = 0; k < xs.dims(); ++k) r.push_back(exponent(rng));
    const HolderBound b = holder_bound(v, g, ExponentVector(p), ExponentVector(r));
    const bool pass = b.holds(1e-10);
    ok = ok && pass;
    csv << t << ',' << format_real(b.lhs) << ',' << format_real(b.rhs) << ',' << pass << '\n';
  }

  // Degenerate kernel V(x, y) = v(x), nu(Y) = 1, g = 1.
  {
    const Axis x = random_axis(rng, 5, 2.0, "x");
    const Axis y = random_axis(rng, 4, 1.0, "y");
    const auto vx = oracle::random_values(rng, x.size(), -2.0, 2.0);
    std::vector<double> values;
    for (double a : vx) {
      for (std::size_t j = 0; j < y.size(); ++j) values.push_back(a);
    }
    const GridFunction v(ProductSpace({x, y}), std::move(values));
    const GridFunction g(ProductSpace({y}), std::vector<double>(y.size(), 1.0));
    const HolderBound b = holder_bound(v, g, ExponentVector{2.5}, ExponentVector{3.0});
    const bool pass = relative_error(b.lhs, b.rhs) <= 1e-10;
    ok = ok && pass;
    csv << "degenerate," << format_real(b.lhs) << ',' << format_real(b.rhs) << ',' << pass << '\n';
  }

  // Factorable V = a1(x1) a2(x2) b1(y1) b2(y2) with the Hoelder-dual g.
  {
    const Axis x1 = random_axis(rng, 3, 1.0, "x1");
    const Axis x2 = random_axis(rng, 2, 1.5, "x2");
    const Axis y1 = random_axis(rng, 4, 0.8, "y1");
    const Axis y2 = random_axis(rng, 3, 1.2, "y2");
    const ExponentVector p{1.8, 3.0};
    const ExponentVector r{2.0, 1.5};
    const ExponentVector q = conjugate_exponents(p);
    const auto a1 = oracle::random_values(rng, x1.size(), -2.0, 2.0);
    const auto a2 = oracle::random_values(rng, x2.size(), -2.0, 2.0);
    const auto b1 = oracle::random_values(rng, y1.size(), -2.0, 2.0);
    const auto b2 = oracle::random_values(rng, y2.size(), -2.0, 2.0);
    const auto dual = [](const std::vector<double>& b, double qj) {
      std::vector<double> g;
      for (double x : b) g.push_back(std::copysign(std::pow(std::fabs(x), qj - 1.0), x));
      return g;
    };
    const ProductSpace kernel_space({x1, x2, y1, y2});
    const ProductSpace ys({y1, y2});
    const GridFunction v = outer_product(kernel_space, {a1, a2, b1, b2});
    const GridFunction g = outer_product(ys, {dual(b1, q[0]), dual(b2, q[1])});
    const HolderBound b = holder_bound(v, g, p, r);
    const bool pass = relative_error(b.lhs, b.rhs) <= 1e-10;
    ok = ok && pass;
    csv << "factorable," << format_real(b.lhs) << ',' << format_real(b.rhs) << ',' << pass << '\n';
  }
  return finish(8, "Hoelder operator bound (1000 pairs) and equality cases", ok,
                "all pairs within rel 1e-10", timer, 10.0, "c08_holder.csv", csv.str());
}

// 9. Random-operator bound via theta(s).
CriterionResult random_operator(const Options& opt) {
  Timed timer;
  const Axis x = uniform_axis(3, 1.0, "x");
  const Axis y = uniform_axis(3, 1.0, "y");
  const ProductSpace kernel_space({x, y});
  const ProductSpace ys({y});
  std::vector<double> k0_values;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) k0_values.push_back(1.0 + 0.5 * i - 0.25 * j);
  }
  const GridFunction k0(kernel_space, k0_values);
  const GridFunction g(ys, {1.0, -0.5, 2.0});
  const ExponentVector p{2.0};
  const ExponentVector r{2.0};
  const std::vector<double> s_grid{4.0, 8.0, 16.0};

  std::ostringstream csv;
  csv << "model,s,theta,lhs,g_norm,ratio,tolerance,pass,factorized_theta,factorized_pass\n";
  bool ok = true;
  std::string detail;

  const auto record = [&](const std::string& name, const OperatorBoundReport& report,
                          bool equality) {
    for (const auto& row : report.rows) {
      bool pass = row.pass && row.hypothesis_met;
      if (equality) pass = pass && std::fabs(row.ratio - 1.0) <= row.tolerance;
      ok = ok && pass;
      csv << name << ',' << format_real(row.s) << ',' << format_real(row.theta) << ','
          << format_real(row.lhs) << ',' << format_real(row.g_norm) << ','
          << format_real(row.ratio) << ',' << format_real(row.tolerance) << ',' << pass;
      csv << ",,\n";
    }
    const bool gls_ok = report.gls_ratio <= 1.05;
    ok = ok && gls_ok;
    detail += (detail.empty() ? "" : "; ") + (name + " GLS " + fmt("%.6f", report.gls_ratio));
  };

  const KernelModel general = KernelModel::general_random(k0, 1, NoiseLaw::gaussian());
  record("general_random", theorem31_check(general, g, p, r, s_grid, opt.replicas, opt.seed + 90),
         false);

  // Factorable kernel: also compare h(q,r) rho(s) with the Monte Carlo theta.
  const KernelModel factorable = KernelModel::factorable_random(k0, 1, NoiseLaw::gaussian());
  const std::uint64_t fseed = opt.seed + 91;
  const auto freport = theorem31_check(factorable, g, p, r, s_grid, opt.replicas, fseed);
  record("factorable_random", freport, false);
  {
    std::vector<double> tau(opt.replicas);
    for (std::size_t i = 0; i < opt.replicas; ++i) {
      Engine engine = replica_engine(fseed, i);
      tau[i] = NoiseLaw::gaussian().draw(engine);
    }
    const auto rho_se = bootstrap_moment_se(tau, s_grid, kDefaultBootstrapResamples, fseed + 1);
    const ExponentVector q = conjugate_exponents(p);
    const std::vector<AxisReduction> steps{{1, q[0]}, {0, r[0]}};
    const double h = iterated_norm(k0, steps);
    for (std::size_t j = 0; j < freport.rows.size(); ++j) {
      const auto& row = freport.rows[j];
      const double fact = row.factorized_theta.value_or(0.0);
      const bool pass = std::fabs(fact - row.theta) <= 3.0 * h * rho_se[j];
      ok = ok && pass;
      csv << "factorized," << format_real(row.s) << ',' << format_real(row.theta) << ",,,,,,"
          << format_real(fact) << ',' << pass << '\n';
    }
  }

  // K = V(x) xi(w), nu(Y) = 1, g = 1: rows are equalities.
  {
    std::vector<double> v_values;
    for (double vx : {1.0, 2.0, 0.5}) {
      for (int j = 0; j < 3; ++j) v_values.push_back(vx);
    }
    const KernelModel degenerate = KernelModel::factorable_random(
        GridFunction(kernel_space, v_values), 1, NoiseLaw::gaussian());
    const GridFunction ones(ys, {1.0, 1.0, 1.0});
    record("degenerate_equality",
           theorem31_check(degenerate, ones, p, r, s_grid, opt.replicas, opt.seed + 92), true);
  }
  return finish(9, "random operator bound via theta(s) (3 kernels)", ok, detail, timer, 120.0,
                "c09_random_operator.csv", csv.str());
}

}  // namespace

std::vector<CriterionResult> run(const Options& options,
                                 const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> results;
  const auto push = [&](CriterionResult r) {
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  };
  push(flat_norm_consistency(options));
  push(factorization(options));
  push(permutation(options));
  auto [c4, c5] = moment_bound(options);
  push(std::move(c4));
  push(std::move(c5));
  push(young_fenchel_oracle(options));
  push(power_tail(options));
  push(holder(options));
  push(random_operator(options));
  return results;
}

CriterionResult reproducibility(const std::vector<CriterionResult>& first,
                                const std::vector<CriterionResult>& second) {
  CriterionResult r;
  r.id = 10;
  r.name = "reproducibility: identical configuration gives byte-identical CSV";
  r.limit_seconds = 0.0;
  bool same = first.size() == second.size();
  std::string differing;
  for (std::size_t i = 0; same && i < first.size(); ++i) {
    if (first[i].csv != second[i].csv || first[i].csv_name != second[i].csv_name) {
      same = false;
      differing = first[i].csv_name;
    }
  }
  r.passed = same;
  r.detail = same ? std::to_string(first.size()) + " tables identical" : "differs: " + differing;
  return r;
}

std::string format_line(const CriterionResult& result) {
  std::string line = result.passed ? "[PASS] " : "[FAIL] ";
  line += std::to_string(result.id) + " " + result.name;
  if (!result.detail.empty()) line += " -- " + result.detail;
  if (result.limit_seconds > 0.0) {
    line += " (" + fmt("%.2f", result.seconds) + " s / " + fmt("%.0f", result.limit_seconds) + " s)";
  }
  return line;
}

}  // namespace mixnorm::acceptance
