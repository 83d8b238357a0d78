#include "mixnorm/random_field.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "mixnorm/error.hpp"
#include "mixnorm/mixed_norm.hpp"
#include "mixnorm/parallel.hpp"
#include "mixnorm/summation.hpp"

namespace mixnorm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kBootstrapTag = 0xB0075724A9D1C3E5ull;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_moment_order(double r) {
  if (!std::isfinite(r) || r < 1.0 || r > kMaxExponent) {
    throw ValidationError(ErrorCode::exponent_out_of_range,
                          "moment order " + std::to_string(r) + " outside [1, 512]");
  }
}

// Separable AR(1) filter along one axis of a row-major tensor.
void ar1_along_axis(std::vector<double>& v, const std::vector<std::size_t>& shape,
                    std::size_t axis, double rho) {
  std::size_t outer = 1, inner = 1;
  for (std::size_t k = 0; k < axis; ++k) outer *= shape[k];
  for (std::size_t k = axis + 1; k < shape.size(); ++k) inner *= shape[k];
  const std::size_t len = shape[axis];
  const double innovation = std::sqrt(1.0 - rho * rho);
  for (std::size_t o = 0; o < outer; ++o) {
    double* base = v.data() + o * len * inner;
    for (std::size_t i = 0; i < inner; ++i) {
      for (std::size_t j = 1; j < len; ++j) {
        base[j * inner + i] = rho * base[(j - 1) * inner + i] + innovation * base[j * inner + i];
      }
    }
  }
}

void realize_into(const FieldModel& model, const ProductSpace& space,
                  std::span<const double> amplitude, std::uint64_t seed, std::uint64_t replica,
                  std::span<double> out) {
  switch (model.kind()) {
    case FieldKind::scaled_deterministic: {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = model.scale() * amplitude[i];
      return;
    }
    case FieldKind::factorable: {
      Engine engine = replica_engine(seed, replica);
      const double tau = model.noise().draw(engine);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = tau * amplitude[i];
      return;
    }
    case FieldKind::iid: {
      Engine engine = replica_engine(seed, replica);
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = amplitude[i] * model.noise().draw(engine);
      }
      return;
    }
    case FieldKind::correlated: {
      Engine engine = replica_engine(seed, replica);
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> z(out.size());
      for (auto& x : z) x = normal(engine);
      const auto shape = space.shape();
      for (std::size_t k = 0; k < shape.size(); ++k) {
        ar1_along_axis(z, shape, k, std::exp(-1.0 / model.correlation_lengths()[k]));
      }
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = amplitude[i] * z[i];
      return;
    }
  }
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t replica) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(replica ^ 0xD1B54A32D192ED03ull));
}

Engine replica_engine(std::uint64_t seed, std::uint64_t replica) {
  return Engine(stream_seed(seed, replica));
}

NoiseLaw NoiseLaw::gaussian() { return NoiseLaw(NoiseKind::gaussian, 0.0); }

NoiseLaw NoiseLaw::exponential_power(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw ValidationError(ErrorCode::invalid_model, "exponential_power needs m > 0");
  }
  return NoiseLaw(NoiseKind::exponential_power, m);
}

NoiseLaw NoiseLaw::student(double nu) {
  if (!(nu > 2.0) || !std::isfinite(nu)) {
    throw ValidationError(ErrorCode::invalid_model, "student law needs nu > 2");
  }
  return NoiseLaw(NoiseKind::student, nu);
}

NoiseLaw NoiseLaw::constant(double c) {
  if (!std::isfinite(c)) {
    throw ValidationError(ErrorCode::invalid_model, "constant law needs a finite value");
  }
  return NoiseLaw(NoiseKind::constant, c);
}

double NoiseLaw::draw(Engine& engine) const {
  switch (kind_) {
    case NoiseKind::gaussian:
      return std::normal_distribution<double>(0.0, 1.0)(engine);
    case NoiseKind::exponential_power: {
      // |X|^m ~ Gamma(1/m, 1)
      const double g = std::gamma_distribution<double>(1.0 / parameter_, 1.0)(engine);
      const double magnitude = std::pow(g, 1.0 / parameter_);
      return std::bernoulli_distribution(0.5)(engine) ? magnitude : -magnitude;
    }
    case NoiseKind::student:
      return std::student_t_distribution<double>(parameter_)(engine);
    case NoiseKind::constant:
      return parameter_;
  }
  return 0.0;
}

double NoiseLaw::absolute_moment(double r) const {
  using std::numbers::pi;
  switch (kind_) {
    case NoiseKind::gaussian:
      return std::exp((0.5 * r * std::log(2.0) + std::lgamma(0.5 * (r + 1.0)) - 0.5 * std::log(pi)) / r);
    case NoiseKind::exponential_power:
      return std::exp((std::lgamma((r + 1.0) / parameter_) - std::lgamma(1.0 / parameter_)) / r);
    case NoiseKind::student: {
      const double nu = parameter_;
      if (r >= nu) return std::numeric_limits<double>::infinity();
      const double log_moment = 0.5 * r * std::log(nu) + std::lgamma(0.5 * (r + 1.0)) +
                                std::lgamma(0.5 * (nu - r)) - 0.5 * std::log(pi) -
                                std::lgamma(0.5 * nu);
      return std::exp(log_moment / r);
    }
    case NoiseKind::constant:
      return std::fabs(parameter_);
  }
  return 0.0;
}

std::string NoiseLaw::describe() const {
  switch (kind_) {
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::exponential_power: return "exponential_power(" + format_double(parameter_) + ")";
    case NoiseKind::student: return "student(" + format_double(parameter_) + ")";
    case NoiseKind::constant: return "constant(" + format_double(parameter_) + ")";
  }
  return "unknown";
}

FieldModel FieldModel::factorable(Amplitude h, NoiseLaw tau) {
  FieldModel m(FieldKind::factorable, tau);
  m.amplitude_ = std::move(h);
  return m;
}

FieldModel FieldModel::iid(NoiseLaw noise, Amplitude h) {
  FieldModel m(FieldKind::iid, noise);
  m.amplitude_ = std::move(h);
  return m;
}

FieldModel FieldModel::correlated(std::vector<double> correlation_lengths, Amplitude h) {
  for (double len : correlation_lengths) {
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw ValidationError(ErrorCode::invalid_model, "correlation lengths must be positive");
    }
  }
  FieldModel m(FieldKind::correlated, NoiseLaw::gaussian());
  m.correlation_ = std::move(correlation_lengths);
  m.amplitude_ = std::move(h);
  return m;
}

FieldModel FieldModel::scaled_deterministic(Amplitude f, double scale) {
  if (!std::isfinite(scale)) {
    throw ValidationError(ErrorCode::invalid_model, "scale must be finite");
  }
  if (std::holds_alternative<std::monostate>(f)) {
    throw ValidationError(ErrorCode::invalid_model, "scaled_deterministic needs a function");
  }
  FieldModel m(FieldKind::scaled_deterministic, NoiseLaw::constant(scale));
  m.amplitude_ = std::move(f);
  m.scale_ = scale;
  return m;
}

std::vector<double> FieldModel::amplitude_table(const ProductSpace& space) const {
  if (std::holds_alternative<std::monostate>(amplitude_)) {
    return std::vector<double>(space.size(), 1.0);
  }
  if (const auto* table = std::get_if<std::vector<double>>(&amplitude_)) {
    if (table->size() != space.size()) {
      throw ValidationError(ErrorCode::shape_mismatch,
                            "deterministic part does not match the space");
    }
    static_cast<void>(GridFunction(space, *table));  // finiteness check
    return *table;
  }
  const auto& factors = std::get<std::vector<std::vector<double>>>(amplitude_);
  const GridFunction g = outer_product(space, factors);
  return {g.values().begin(), g.values().end()};
}

void FieldModel::validate(const ProductSpace& space) const {
  amplitude_table(space);
  if (kind_ == FieldKind::correlated && correlation_.size() != space.dims()) {
    throw ValidationError(ErrorCode::invalid_model, "one correlation length per axis required");
  }
}

std::string FieldModel::describe() const {
  std::string s;
  switch (kind_) {
    case FieldKind::factorable: s = "factorable"; break;
    case FieldKind::iid: s = "iid"; break;
    case FieldKind::correlated: s = "correlated"; break;
    case FieldKind::scaled_deterministic: s = "scaled_deterministic"; break;
  }
  s += ";noise=" + noise_.describe() + ";scale=" + format_double(scale_) + ";corr=";
  for (double c : correlation_) s += format_double(c) + ",";
  s += ";amplitude=";
  if (const auto* table = std::get_if<std::vector<double>>(&amplitude_)) {
    for (double v : *table) s += format_double(v) + ",";
  } else if (const auto* factors = std::get_if<std::vector<std::vector<double>>>(&amplitude_)) {
    for (const auto& f : *factors) {
      s += "[";
      for (double v : f) s += format_double(v) + ",";
      s += "]";
    }
  } else {
    s += "ones";
  }
  return s;
}

std::string FieldModel::digest() const {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : describe()) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> Realizations::column(std::size_t cell) const {
  std::vector<double> out(replicas);
  for (std::size_t i = 0; i < replicas; ++i) out[i] = data[i * cells + cell];
  return out;
}

GridFunction sample_field(const FieldModel& model, const ProductSpace& space, std::uint64_t seed,
                          std::uint64_t replica) {
  model.validate(space);
  const auto amplitude = model.amplitude_table(space);
  std::vector<double> values(space.size());
  realize_into(model, space, amplitude, seed, replica, values);
  return GridFunction(space, std::move(values));
}

Realizations simulate(const FieldModel& model, const ProductSpace& space, std::size_t n,
                      std::uint64_t seed) {
  if (n == 0) {
    throw ValidationError(ErrorCode::invalid_argument, "replica count must be positive");
  }
  model.validate(space);
  const auto amplitude = model.amplitude_table(space);
  Realizations out;
  out.replicas = n;
  out.cells = space.size();
  out.data.resize(n * out.cells);
  parallel_for(n, [&](std::size_t i) {
    realize_into(model, space, amplitude, seed, i,
                 std::span<double>(out.data).subspan(i * out.cells, out.cells));
  });
  return out;
}

SampleSet zeta_from_realizations(const Realizations& fields, const ProductSpace& space,
                                 const ExponentVector& p, std::uint64_t seed, std::string digest) {
  if (fields.cells != space.size()) {
    throw ValidationError(ErrorCode::shape_mismatch, "realizations do not match the space");
  }
  SampleSet s;
  s.values.resize(fields.replicas);
  s.seed = seed;
  s.n = fields.replicas;
  s.model_digest = std::move(digest);
  parallel_for(fields.replicas,
               [&](std::size_t i) { s.values[i] = mixed_norm(fields.replica(i), space, p); });
  return s;
}

SampleSet sample_zeta(const FieldModel& model, const ProductSpace& space, const ExponentVector& p,
                      std::size_t n, std::uint64_t seed) {
  if (p.size() != space.dims()) {
    throw ValidationError(ErrorCode::exponent_count_mismatch, "one exponent per axis required");
  }
  return zeta_from_realizations(simulate(model, space, n, seed), space, p, seed, model.digest());
}

double empirical_moment(std::span<const double> samples, double r) {
  check_moment_order(r);
  if (samples.empty()) {
    throw ValidationError(ErrorCode::insufficient_data, "no samples");
  }
  return power_mean(samples, r);
}

double empirical_moment(const SampleSet& samples, double r) {
  return empirical_moment(samples.values, r);
}

double empirical_tail(std::span<const double> samples, double u) {
  if (samples.empty()) return 0.0;
  std::size_t above = 0;
  for (double z : samples) above += z > u ? 1 : 0;
  return static_cast<double>(above) / static_cast<double>(samples.size());
}

double empirical_tail(const SampleSet& samples, double u) {
  return empirical_tail(samples.values, u);
}

std::vector<double> bootstrap_moment_se(std::span<const double> samples,
                                        std::span<const double> r_values, std::size_t resamples,
                                        std::uint64_t seed) {
  for (double r : r_values) check_moment_order(r);
  if (samples.empty()) {
    throw ValidationError(ErrorCode::insufficient_data, "no samples");
  }
  if (resamples < 2) {
    throw ValidationError(ErrorCode::invalid_argument, "bootstrap needs two or more resamples");
  }
  const std::size_t n = samples.size();
  const std::size_t nr = r_values.size();
  std::vector<double> moments(resamples * nr);
  parallel_for(resamples, [&](std::size_t b) {
    Engine engine = replica_engine(seed ^ kBootstrapTag, b);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<unsigned> counts(n, 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[pick(engine)];
    for (std::size_t j = 0; j < nr; ++j) {
      moments[b * nr + j] = power_mean_counts(samples, counts, r_values[j]);
    }
  });
  std::vector<double> se(nr);
  for (std::size_t j = 0; j < nr; ++j) {
    std::vector<double> column(resamples);
    for (std::size_t b = 0; b < resamples; ++b) column[b] = moments[b * nr + j];
    const double mean = pairwise_sum(column) / static_cast<double>(resamples);
    for (auto& c : column) c = (c - mean) * (c - mean);
    se[j] = std::sqrt(pairwise_sum(column) / static_cast<double>(resamples - 1));
  }
  return se;
}

}  // namespace mixnorm
