#ifndef MIXNORM_RANDOM_FIELD_HPP
#define MIXNORM_RANDOM_FIELD_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mixnorm/measure_space.hpp"

namespace mixnorm {

using Engine = std::mt19937_64;

/// Seed of the independent stream for one replica; order-free, so replicas
/// may be generated in any order or in parallel.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t replica) noexcept;
Engine replica_engine(std::uint64_t seed, std::uint64_t replica);

enum class NoiseKind { gaussian, exponential_power, student, constant };

/// Scalar distribution used for tau(omega) or per-cell noise.
///
/// - gaussian: standard normal.
/// - exponential_power(m): density proportional to exp(-|x|^m), m > 0, so
///   ||X||_r grows like r^(1/m).
/// - student(nu): Student t with nu > 2 degrees of freedom.
/// - constant(c): the degenerate law at c.
class NoiseLaw {
 public:
  static NoiseLaw gaussian();
  static NoiseLaw exponential_power(double m);
  static NoiseLaw student(double nu);
  static NoiseLaw constant(double c);

  NoiseKind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return parameter_; }

  double draw(Engine& engine) const;

  /// Exact (E|X|^r)^(1/r); +inf when the moment does not exist.
  double absolute_moment(double r) const;

  std::string describe() const;

 private:
  NoiseLaw(NoiseKind kind, double parameter) : kind_(kind), parameter_(parameter) {}

  NoiseKind kind_;
  double parameter_;
};

enum class FieldKind {
  factorable,            // eta(x, w) = tau(w) h(x), one scalar draw per replica
  iid,                   // eta(x, w) = h(x) xi(x, w), xi independent per cell
  correlated,            // eta(x, w) = h(x) Z(x, w), Z separable AR(1) Gaussian
  scaled_deterministic,  // eta(x, w) = c f(x)
};

/// Deterministic amplitude: a full table or one factor per axis.
using Amplitude = std::variant<std::monostate, std::vector<double>, std::vector<std::vector<double>>>;

class FieldModel {
 public:
  static FieldModel factorable(Amplitude h, NoiseLaw tau);
  static FieldModel iid(NoiseLaw noise, Amplitude h = {});
  /// correlation_lengths in grid-index units, one per axis; neighbouring
  /// cells along axis k have correlation exp(-1 / length_k).
  static FieldModel correlated(std::vector<double> correlation_lengths, Amplitude h = {});
  static FieldModel scaled_deterministic(Amplitude f, double scale = 1.0);

  FieldKind kind() const noexcept { return kind_; }
  const NoiseLaw& noise() const noexcept { return noise_; }
  const Amplitude& amplitude() const noexcept { return amplitude_; }
  double scale() const noexcept { return scale_; }
  const std::vector<double>& correlation_lengths() const noexcept { return correlation_; }

  /// Throws if the model cannot be realized on space.
  void validate(const ProductSpace& space) const;

  /// Amplitude resolved to a row-major table over space (ones if absent).
  std::vector<double> amplitude_table(const ProductSpace& space) const;

  std::string describe() const;
  /// 16 hex digits identifying describe().
  std::string digest() const;

 private:
  FieldModel(FieldKind kind, NoiseLaw noise) : kind_(kind), noise_(noise) {}

  FieldKind kind_;
  NoiseLaw noise_;
  Amplitude amplitude_;
  double scale_ = 1.0;
  std::vector<double> correlation_;
};

/// n replicas of a field stored row by row (replica-major).
struct Realizations {
  std::size_t replicas = 0;
  std::size_t cells = 0;
  std::vector<double> data;

  std::span<const double> replica(std::size_t i) const {
    return std::span<const double>(data).subspan(i * cells, cells);
  }
  /// Copy of one cell's values across replicas.
  std::vector<double> column(std::size_t cell) const;
};

/// Draws one realization; a deterministic function of (model, seed, replica).
GridFunction sample_field(const FieldModel& model, const ProductSpace& space, std::uint64_t seed,
                          std::uint64_t replica);

/// Replicas 0..n-1 of the field, ordered by replica index.
Realizations simulate(const FieldModel& model, const ProductSpace& space, std::size_t n,
                      std::uint64_t seed);

/// Independent draws of zeta = ||eta||_{p,X}.
struct SampleSet {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::string model_digest;
};

SampleSet sample_zeta(const FieldModel& model, const ProductSpace& space, const ExponentVector& p,
                      std::size_t n, std::uint64_t seed);

/// zeta_i = mixed norm of replica i.
SampleSet zeta_from_realizations(const Realizations& fields, const ProductSpace& space,
                                 const ExponentVector& p, std::uint64_t seed, std::string digest);

/// (n^-1 sum zeta_i^r)^(1/r), r in [1, 512].
double empirical_moment(const SampleSet& samples, double r);
double empirical_moment(std::span<const double> samples, double r);

/// Fraction of samples strictly above u.
double empirical_tail(const SampleSet& samples, double u);
double empirical_tail(std::span<const double> samples, double u);

/// Bootstrap standard error of the empirical r-th moment for each r, from
/// `resamples` multinomial resamples drawn on a stream derived from seed.
std::vector<double> bootstrap_moment_se(std::span<const double> samples,
                                        std::span<const double> r_values, std::size_t resamples,
                                        std::uint64_t seed);

inline constexpr std::size_t kDefaultBootstrapResamples = 200;

}  // namespace mixnorm

#endif  // MIXNORM_RANDOM_FIELD_HPP
