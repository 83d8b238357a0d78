#include "oracles.hpp"

#include <cmath>

namespace mixnorm::oracle {

double flat_lp_norm(const GridFunction& f, double p) {
  const auto& space = f.space();
  const auto shape = space.shape();
  std::vector<std::size_t> index(shape.size(), 0);
  double sum = 0.0;
  for (std::size_t cell = 0; cell < space.size(); ++cell) {
    double w = 1.0;
    for (std::size_t k = 0; k < shape.size(); ++k) w *= space.axis(k).weights()[index[k]];
    sum += w * std::pow(std::fabs(f.at(index)), p);
    for (std::size_t k = shape.size(); k-- > 0;) {
      if (++index[k] < shape[k]) break;
      index[k] = 0;
    }
  }
  return std::pow(sum, 1.0 / p);
}

double iterated_norm(const GridFunction& f, const std::vector<AxisReduction>& steps) {
  const auto& space = f.space();
  const std::size_t dims = space.dims();
  std::vector<std::size_t> shape = space.shape();

  // Tabulate values keyed by full multi-index; reduced axes pinned to 0.
  std::vector<double> table(f.values().begin(), f.values().end());
  std::vector<bool> alive(dims, true);
  auto flat = [&](const std::vector<std::size_t>& idx) {
    std::size_t pos = 0;
    for (std::size_t k = 0; k < dims; ++k) pos = pos * shape[k] + idx[k];
    return pos;
  };

  for (const auto& step : steps) {
    const std::size_t axis = step.axis;
    const auto& weights = space.axis(axis).weights();
    std::vector<double> next(table.size(), 0.0);
    std::vector<std::size_t> idx(dims, 0);
    // Enumerate all multi-indices with reduced axes (and the current one) at 0.
    while (true) {
      double sum = 0.0;
      std::vector<std::size_t> j = idx;
      for (std::size_t i = 0; i < shape[axis]; ++i) {
        j[axis] = i;
        sum += weights[i] * std::pow(std::fabs(table[flat(j)]), step.p);
      }
      next[flat(idx)] = std::pow(sum, 1.0 / step.p);
      std::size_t k = dims;
      bool done = true;
      while (k-- > 0) {
        if (!alive[k] || k == axis) continue;
        if (++idx[k] < shape[k]) {
          done = false;
          break;
        }
        idx[k] = 0;
      }
      if (done) break;
    }
    alive[axis] = false;
    table = std::move(next);
  }
  return table[0];
}

double vector_norm(const std::vector<double>& values, const std::vector<double>& weights,
                   double p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += weights[i] * std::pow(std::fabs(values[i]), p);
  return std::pow(sum, 1.0 / p);
}

std::vector<double> matvec(const std::vector<double>& v, std::size_t x_cells,
                           const std::vector<double>& g, const std::vector<double>& y_weights) {
  std::vector<double> f(x_cells, 0.0);
  for (std::size_t x = 0; x < x_cells; ++x) {
    for (std::size_t y = 0; y < g.size(); ++y) f[x] += y_weights[y] * v[x * g.size() + y] * g[y];
  }
  return f;
}

double dense_conjugate(const std::function<double(double)>& psi, double u, double lo, double hi,
                       std::size_t points) {
  double best = -INFINITY;
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double r = i + 1 == points ? hi : lo * std::exp(step * static_cast<double>(i));
    best = std::max(best, u * r - r * std::log(psi(r)));
  }
  return best;
}

ProductSpace random_space(std::mt19937_64& rng, std::size_t max_axes, std::size_t max_points,
                          const std::string& prefix) {
  std::uniform_int_distribution<std::size_t> axes_count(1, max_axes);
  std::uniform_int_distribution<std::size_t> points(1, max_points);
  std::uniform_real_distribution<double> weight(0.05, 1.5);
  const std::size_t l = axes_count(rng);
  std::vector<Axis> axes;
  for (std::size_t k = 0; k < l; ++k) {
    const std::size_t n = points(rng);
    std::vector<double> w(n);
    for (auto& x : w) x = weight(rng);
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = static_cast<double>(i);
    axes.push_back(make_axis(std::move(pts), std::move(w), prefix + std::to_string(k)));
  }
  return ProductSpace(std::move(axes));
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace mixnorm::oracle
