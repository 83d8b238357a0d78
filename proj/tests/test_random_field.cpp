#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mixnorm/error.hpp"
#include "mixnorm/mixed_norm.hpp"
#include "mixnorm/random_field.hpp"
#include "oracles.hpp"

using namespace mixnorm;
using doctest::Approx;

namespace {

ProductSpace grid2(std::size_t n, std::size_t m) {
  return ProductSpace({uniform_axis(n, 1.0, "x1"), uniform_axis(m, 1.0, "x2")});
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST_CASE("stream seeds are distinct and order free") {
  CHECK(stream_seed(1, 0) != stream_seed(1, 1));
  CHECK(stream_seed(1, 0) != stream_seed(2, 0));
  Engine a = replica_engine(5, 17);
  Engine b = replica_engine(5, 17);
  CHECK(a() == b());
}

TEST_CASE("noise law validation and exact moments") {
  CHECK_THROWS_AS(NoiseLaw::student(2.0), ValidationError);
  CHECK_THROWS_AS(NoiseLaw::student(1.5), ValidationError);
  CHECK_THROWS_AS(NoiseLaw::exponential_power(0.0), ValidationError);
  CHECK_THROWS_AS(NoiseLaw::exponential_power(-1.0), ValidationError);
  CHECK(NoiseLaw::gaussian().absolute_moment(2.0) == Approx(1.0).epsilon(1e-14));
  CHECK(NoiseLaw::gaussian().absolute_moment(1.0) ==
        Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-14));
  // Laplace-type law exp(-|x|): E|X|^r = Gamma(r + 1).
  CHECK(NoiseLaw::exponential_power(1.0).absolute_moment(3.0) == Approx(std::cbrt(6.0)).epsilon(1e-13));
  CHECK(NoiseLaw::student(5.0).absolute_moment(2.0) == Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-13));
  CHECK(std::isinf(NoiseLaw::student(5.0).absolute_moment(5.0)));
  CHECK(NoiseLaw::constant(-2.0).absolute_moment(7.0) == 2.0);
}

TEST_CASE("sampled noise matches the exact moments") {
  const std::vector<NoiseLaw> laws = {NoiseLaw::gaussian(), NoiseLaw::exponential_power(1.0),
                                      NoiseLaw::exponential_power(2.0),
                                      NoiseLaw::exponential_power(4.0), NoiseLaw::student(7.0)};
  for (const auto& law : laws) {
    std::vector<double> draws(200000);
    for (std::size_t i = 0; i < draws.size(); ++i) {
      Engine e = replica_engine(99, i);
      draws[i] = law.draw(e);
    }
    CAPTURE(law.describe());
    CHECK(std::fabs(mean(draws)) < 0.02);
    for (double r : {1.0, 2.0, 3.0}) {
      CHECK(empirical_moment(draws, r) == Approx(law.absolute_moment(r)).epsilon(0.02));
    }
  }
}

TEST_CASE("scaled deterministic fields return their function") {
  const ProductSpace s = grid2(2, 3);
  const std::vector<double> f{1, -2, 3, 0.5, 0, 4};
  const FieldModel model = FieldModel::scaled_deterministic(f);
  const GridFunction g = sample_field(model, s, 3, 11);
  CHECK(std::vector<double>(g.values().begin(), g.values().end()) == f);
  const GridFunction h = sample_field(FieldModel::scaled_deterministic(f, -2.0), s, 3, 11);
  CHECK(h.values()[2] == -6.0);
}

TEST_CASE("factorable fields are tau times h and deterministic per replica") {
  const ProductSpace s = grid2(2, 2);
  const FieldModel model = FieldModel::factorable(std::vector<double>{1, 2, 3, 4}, NoiseLaw::gaussian());
  const GridFunction a = sample_field(model, s, 8, 3);
  const GridFunction b = sample_field(model, s, 8, 3);
  CHECK(std::vector<double>(a.values().begin(), a.values().end()) ==
        std::vector<double>(b.values().begin(), b.values().end()));
  const double tau = a.values()[0];
  for (std::size_t i = 0; i < 4; ++i) CHECK(a.values()[i] == Approx(tau * (i + 1)).epsilon(1e-15));
  Engine e = replica_engine(8, 3);
  CHECK(tau == NoiseLaw::gaussian().draw(e));

  const FieldModel per_axis = FieldModel::factorable(std::vector<std::vector<double>>{{1, 2}, {3, 5}},
                                                     NoiseLaw::constant(1.0));
  const GridFunction c = sample_field(per_axis, s, 1, 0);
  CHECK(std::vector<double>(c.values().begin(), c.values().end()) == std::vector<double>{3, 5, 6, 10});
}

TEST_CASE("iid replicas differ") {
  const ProductSpace s = grid2(3, 3);
  const FieldModel model = FieldModel::iid(NoiseLaw::gaussian());
  const GridFunction first = sample_field(model, s, 21, 0);
  bool all_differ = true;
  for (std::uint64_t r = 1; r <= 100; ++r) {
    const GridFunction g = sample_field(model, s, 21, r);
    bool differs = false;
    for (std::size_t i = 0; i < s.size(); ++i) differs = differs || g.values()[i] != first.values()[i];
    all_differ = all_differ && differs;
  }
  CHECK(all_differ);
}

TEST_CASE("model validation") {
  const ProductSpace s = grid2(2, 2);
  CHECK_THROWS_AS(FieldModel::iid(NoiseLaw::gaussian(), std::vector<double>{1, 2, 3}).validate(s),
                  ValidationError);
  CHECK_THROWS_AS(
      FieldModel::factorable(std::vector<std::vector<double>>{{1, 2}}, NoiseLaw::gaussian()).validate(s),
      ValidationError);
  CHECK_THROWS_AS(FieldModel::correlated({1.0}).validate(s), ValidationError);
  CHECK_THROWS_AS(FieldModel::correlated({1.0, -1.0}).validate(s), ValidationError);
  CHECK_THROWS_AS(sample_field(FieldModel::iid(NoiseLaw::gaussian(), std::vector<double>{1}), s, 1, 0),
                  ValidationError);
  CHECK(FieldModel::iid(NoiseLaw::gaussian()).digest() != FieldModel::iid(NoiseLaw::student(5)).digest());
  CHECK(FieldModel::iid(NoiseLaw::gaussian()).digest().size() == 16);
}

TEST_CASE("correlated fields have unit marginals and AR(1) neighbour correlation") {
  const ProductSpace s({uniform_axis(6, 1.0, "x1"), uniform_axis(2, 1.0, "x2")});
  const FieldModel model = FieldModel::correlated({2.0, 0.5});
  const Realizations fields = simulate(model, s, 40000, 4);
  const auto c00 = fields.column(0);   // (0, 0)
  const auto c10 = fields.column(2);   // (1, 0)
  const auto c01 = fields.column(1);   // (0, 1)
  CHECK(stddev(c00) == Approx(1.0).epsilon(0.03));
  CHECK(stddev(fields.column(11)) == Approx(1.0).epsilon(0.03));
  const auto corr = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s / static_cast<double>(a.size());
  };
  CHECK(corr(c00, c10) == Approx(std::exp(-0.5)).epsilon(0.05));
  CHECK(corr(c00, c01) == Approx(std::exp(-2.0)).epsilon(0.1));
}

TEST_CASE("simulate orders replicas by index") {
  const ProductSpace s = grid2(2, 3);
  const FieldModel model = FieldModel::iid(NoiseLaw::exponential_power(1.5), std::vector<double>{1, 2, 3, 4, 5, 6});
  const Realizations fields = simulate(model, s, 3000, 77);
  for (std::uint64_t r : {0u, 1u, 1500u, 2999u}) {
    const GridFunction g = sample_field(model, s, 77, r);
    const auto row = fields.replica(r);
    CHECK(std::equal(row.begin(), row.end(), g.values().begin()));
  }
  CHECK_THROWS_AS(simulate(model, s, 0, 1), ValidationError);
}

TEST_CASE("sample_zeta degenerate models") {
  const ProductSpace s = grid2(2, 2);
  const FieldModel unit = FieldModel::factorable(std::vector<double>{1, 1, 1, 1}, NoiseLaw::constant(1.0));
  const SampleSet z = sample_zeta(unit, s, ExponentVector{2.0, 3.0}, 50, 1);
  CHECK(z.n == 50);
  CHECK(z.seed == 1);
  CHECK(z.model_digest == unit.digest());
  for (double v : z.values) CHECK(v == Approx(1.0).epsilon(1e-15));

  const std::vector<double> f{1, -2, 0.5, 3};
  const double c = mixed_norm(GridFunction(s, f), ExponentVector{1.5, 2.0});
  const SampleSet d = sample_zeta(FieldModel::scaled_deterministic(f), s, ExponentVector{1.5, 2.0}, 20, 9);
  for (double v : d.values) CHECK(v == c);
  CHECK_THROWS_AS(sample_zeta(unit, s, ExponentVector{2.0, 3.0}, 0, 1), ValidationError);
}

TEST_CASE("sample_zeta is reproducible") {
  const ProductSpace s = grid2(3, 2);
  const FieldModel model = FieldModel::iid(NoiseLaw::gaussian());
  const SampleSet a = sample_zeta(model, s, ExponentVector{1.0, 2.0}, 5000, 123);
  const SampleSet b = sample_zeta(model, s, ExponentVector{1.0, 2.0}, 5000, 123);
  CHECK(a.values == b.values);
  const SampleSet c = sample_zeta(model, s, ExponentVector{1.0, 2.0}, 5000, 124);
  CHECK(a.values != c.values);
  for (double v : a.values) CHECK(v >= 0.0);
}

TEST_CASE("mean of zeta agrees with a high-replica oracle") {
  // zeta = sum over 4 cells of |xi| / 4 on a 2x2 grid of unit-mass axes.
  const ProductSpace s = grid2(2, 2);
  const SampleSet z = sample_zeta(FieldModel::iid(NoiseLaw::gaussian()), s, ExponentVector{1.0, 1.0}, 10000, 31);
  std::mt19937_64 rng(2718);
  std::normal_distribution<double> normal;
  double oracle_sum = 0.0;
  const int oracle_n = 1000000;
  for (int i = 0; i < oracle_n; ++i) {
    double zeta = 0.0;
    for (int c = 0; c < 4; ++c) zeta += 0.25 * std::fabs(normal(rng));
    oracle_sum += zeta;
  }
  const double oracle_mean = oracle_sum / oracle_n;
  CHECK(oracle_mean == Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(2e-3));
  const double se = stddev(z.values) / std::sqrt(10000.0);
  CHECK(std::fabs(mean(z.values) - oracle_mean) <= 3.0 * se);
}

TEST_CASE("empirical moments") {
  const std::vector<double> c(10, 2.5);
  for (double r : {1.0, 3.0, 512.0}) CHECK(empirical_moment(c, r) == Approx(2.5).epsilon(1e-14));
  const std::vector<double> two{0, 2};
  CHECK(empirical_moment(two, 1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(empirical_moment(two, 2.0) == Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(empirical_moment(two, 0.5), ValidationError);
  CHECK_THROWS_AS(empirical_moment(two, 513.0), ValidationError);
  CHECK_THROWS_AS(empirical_moment(std::vector<double>{}, 2.0), ValidationError);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto v = oracle::random_values(rng, 200, 0.0, 10.0);
    double prev = 0.0;
    for (double r = 1.0; r <= 512.0; r *= 1.3) {
      const double m = empirical_moment(v, r);
      CHECK(m >= prev * (1.0 - 1e-12));
      prev = m;
    }
  }
}

TEST_CASE("empirical tails") {
  const std::vector<double> v{1, 2, 3};
  CHECK(empirical_tail(v, 0.5) == 1.0);
  CHECK(empirical_tail(v, 3.0) == 0.0);
  CHECK(empirical_tail(v, 10.0) == 0.0);
  CHECK(empirical_tail(v, 2.0) == Approx(1.0 / 3.0));
  CHECK(empirical_tail(v, 1.0) == Approx(2.0 / 3.0));
}

TEST_CASE("normalized factorable model has unit moment") {
  const ProductSpace s = grid2(3, 3);
  const double r = 4.0;
  const ExponentVector p{1.0, 2.0};
  const NoiseLaw law = NoiseLaw::gaussian();
  std::vector<double> h{1, 2, 3, 1, 2, 3, 1, 2, 3};
  const double scale = mixed_norm(GridFunction(s, h), p) * law.absolute_moment(r);
  for (auto& v : h) v /= scale;
  const SampleSet z = sample_zeta(FieldModel::factorable(h, law), s, p, 100000, 8);
  const double m = empirical_moment(z, r);
  const double rr[] = {r};
  const double se = bootstrap_moment_se(z.values, rr, 200, 8)[0];
  CHECK(std::fabs(m - 1.0) <= 3.0 * se);
}

TEST_CASE("bootstrap standard errors") {
  std::mt19937_64 rng(3);
  const auto small = oracle::random_values(rng, 1000, 0.0, 1.0);
  const auto large = oracle::random_values(rng, 16000, 0.0, 1.0);
  const double r[] = {1.0, 2.0};
  const auto se_small = bootstrap_moment_se(small, r, 200, 1);
  const auto se_large = bootstrap_moment_se(large, r, 200, 1);
  CHECK(se_small == bootstrap_moment_se(small, r, 200, 1));
  // SE of the mean of U(0,1): 1 / sqrt(12 n).
  CHECK(se_small[0] == Approx(1.0 / std::sqrt(12.0 * 1000.0)).epsilon(0.2));
  CHECK(se_small[0] / se_large[0] == Approx(4.0).epsilon(0.25));
  const std::vector<double> c(100, 3.0);
  CHECK(bootstrap_moment_se(c, r, 50, 1)[1] == Approx(0.0).epsilon(1e-12));
}
