#ifndef MIXNORM_VERIFY_ORACLES_HPP
#define MIXNORM_VERIFY_ORACLES_HPP

// Reference computations used only to check the library. They evaluate the
// defining sums directly (no max factoring, plain sequential sums, explicit
// multi-index enumeration) and so share no code path with the engine.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "mixnorm/measure_space.hpp"
#include "mixnorm/mixed_norm.hpp"

namespace mixnorm::oracle {

/// (sum over cells of prod_k w_k |f|^p)^(1/p) over the product measure.
double flat_lp_norm(const GridFunction& f, double p);

/// Iterated norm by definition: each step builds the reduced function cell by
/// cell from multi-indices.
double iterated_norm(const GridFunction& f, const std::vector<AxisReduction>& steps);

/// Weighted L_p norm of one vector, plain loop.
double vector_norm(const std::vector<double>& values, const std::vector<double>& weights, double p);

/// f(x) = sum_y w(y) V(x, y) g(y) written out for an X-by-Y matrix.
std::vector<double> matvec(const std::vector<double>& v, std::size_t x_cells,
                           const std::vector<double>& g, const std::vector<double>& y_weights);

/// max of u r - r ln psi(r) over `points` geometrically spaced r in [lo, hi].
double dense_conjugate(const std::function<double(double)>& psi, double u, double lo, double hi,
                       std::size_t points = 100000);

/// Random product space with 1..max_axes axes of 1..max_points cells each,
/// weights uniform in [0.05, 1.5).
ProductSpace random_space(std::mt19937_64& rng, std::size_t max_axes, std::size_t max_points,
                          const std::string& prefix = "a");

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo, double hi);

}  // namespace mixnorm::oracle

#endif  // MIXNORM_VERIFY_ORACLES_HPP
