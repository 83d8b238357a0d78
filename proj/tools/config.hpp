#ifndef MIXNORM_TOOLS_CONFIG_HPP
#define MIXNORM_TOOLS_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixnorm/measure_space.hpp"
#include "mixnorm/operator_bounds.hpp"
#include "mixnorm/random_field.hpp"
#include "mixnorm/tail_calculus.hpp"

namespace mixnorm::cli {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicas;
};

/// Typed access to a parsed experiment config. Every accessor throws
/// ValidationError naming the offending key.
class Config {
 public:
  Config(nlohmann::json doc, Overrides overrides, std::string base_dir = ".");

  static Config parse(const std::string& text, Overrides overrides, std::string base_dir = ".");

  const nlohmann::json& doc() const noexcept { return doc_; }
  bool has(const char* key) const { return doc_.contains(key); }

  std::uint64_t seed() const;
  std::size_t replicas() const;

  /// spaces.<name>: array of axis specs.
  ProductSpace space(const std::string& name) const;

  /// Function spec under key on space: values / factors / constant / csv.
  GridFunction function(const nlohmann::json& spec, const ProductSpace& space,
                        const std::string& where) const;
  /// Per-axis factors when the spec is given as factors.
  std::optional<std::vector<std::vector<double>>> factors(const nlohmann::json& spec) const;

  ExponentVector exponents(const char* key) const;
  std::vector<double> reals(const char* key) const;
  /// Explicit list, {a, b, points} (r-grid, b may be "inf") or an inclusive
  /// {from, to, points}.
  std::optional<std::vector<double>> grid(const char* key) const;

  NoiseLaw noise(const nlohmann::json& spec, const std::string& where) const;
  FieldModel field(const ProductSpace& space) const;
  KernelModel kernel(const ProductSpace& x, const ProductSpace& y) const;

  StatTolerance tolerance() const;

 private:
  nlohmann::json doc_;
  Overrides overrides_;
  std::string base_dir_;
};

}  // namespace mixnorm::cli

#endif  // MIXNORM_TOOLS_CONFIG_HPP
