#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "mixnorm/error.hpp"
#include "mixnorm/io.hpp"

namespace mixnorm::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ValidationError(ErrorCode::invalid_argument, "config " + where + ": " + what);
}

double real(const json& v, const std::string& where) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInfinity;
  }
  if (!v.is_number()) bad(where, "expected a number");
  return v.get<double>();
}

std::vector<double> real_list(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(real(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::size_t count(const json& v, const std::string& where) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) bad(where, "expected an integer");
  const auto n = v.get<long long>();
  if (n < 1) bad(where, "must be at least 1");
  return static_cast<std::size_t>(n);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) bad(where, std::string("missing '") + key + "'");
  return obj.at(key);
}

}  // namespace

Config::Config(json doc, Overrides overrides, std::string base_dir)
    : doc_(std::move(doc)), overrides_(overrides), base_dir_(std::move(base_dir)) {
  if (!doc_.is_object()) bad("document", "top level must be an object");
}

Config Config::parse(const std::string& text, Overrides overrides, std::string base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(ErrorCode::invalid_argument, std::string("config is not valid JSON: ") + e.what());
  }
  return Config(std::move(doc), overrides, std::move(base_dir));
}

std::uint64_t Config::seed() const {
  if (overrides_.seed) return *overrides_.seed;
  const json& v = member(doc_, "seed", "document");
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    bad("seed", "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::size_t Config::replicas() const {
  if (overrides_.replicas) {
    if (*overrides_.replicas < 1) bad("replicas", "must be at least 1");
    return *overrides_.replicas;
  }
  return count(member(doc_, "replicas", "document"), "replicas");
}

ProductSpace Config::space(const std::string& name) const {
  const std::string where = "spaces." + name;
  const json& axes = member(member(doc_, "spaces", "document"), name.c_str(), "spaces");
  if (!axes.is_array() || axes.empty()) bad(where, "expected a non-empty array of axes");
  std::vector<Axis> out;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const json& a = axes[k];
    const std::string at = where + "[" + std::to_string(k) + "]";
    const std::string axis_name =
        a.contains("name") ? a.at("name").get<std::string>() : name + std::to_string(k + 1);
    if (a.contains("uniform")) {
      const json& u = a.at("uniform");
      const double mass = u.contains("mass") ? real(u.at("mass"), at + ".uniform.mass") : 1.0;
      out.push_back(uniform_axis(count(member(u, "n", at + ".uniform"), at + ".uniform.n"), mass,
                                 axis_name));
    } else {
      auto weights = real_list(member(a, "weights", at), at + ".weights");
      std::vector<double> points;
      if (a.contains("points")) {
        points = real_list(a.at("points"), at + ".points");
      } else {
        for (std::size_t i = 0; i < weights.size(); ++i) points.push_back(static_cast<double>(i));
      }
      out.push_back(make_axis(std::move(points), std::move(weights), axis_name));
    }
  }
  return ProductSpace(std::move(out));
}

std::optional<std::vector<std::vector<double>>> Config::factors(const json& spec) const {
  if (!spec.is_object() || !spec.contains("factors")) return std::nullopt;
  const json& f = spec.at("factors");
  if (!f.is_array()) bad("factors", "expected an array of arrays");
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < f.size(); ++k) out.push_back(real_list(f[k], "factors[" + std::to_string(k) + "]"));
  return out;
}

GridFunction Config::function(const json& spec, const ProductSpace& space,
                              const std::string& where) const {
  if (!spec.is_object()) bad(where, "expected an object");
  if (spec.contains("values")) return GridFunction(space, real_list(spec.at("values"), where + ".values"));
  if (auto f = factors(spec)) {
    if (f->size() != space.dims()) bad(where + ".factors", "one factor per axis required");
    return outer_product(space, *f);
  }
  if (spec.contains("constant")) {
    return GridFunction(space, std::vector<double>(space.size(), real(spec.at("constant"), where + ".constant")));
  }
  if (spec.contains("csv")) {
    std::filesystem::path path(spec.at("csv").get<std::string>());
    if (path.is_relative()) path = std::filesystem::path(base_dir_) / path;
    std::istringstream is(io::read_file(path.string()));
    return io::read_grid_function(is, space);
  }
  bad(where, "needs one of values, factors, constant, csv");
}

ExponentVector Config::exponents(const char* key) const {
  return ExponentVector(real_list(member(doc_, key, "document"), key));
}

std::vector<double> Config::reals(const char* key) const {
  return real_list(member(doc_, key, "document"), key);
}

std::optional<std::vector<double>> Config::grid(const char* key) const {
  if (!doc_.contains(key)) return std::nullopt;
  const json& g = doc_.at(key);
  if (g.is_array()) return real_list(g, key);
  const std::string where = key;
  if (g.is_object() && g.contains("a")) {
    const std::size_t points =
        g.contains("points") ? count(g.at("points"), where + ".points") : kDefaultGridPoints;
    const double b = g.contains("b") ? real(g.at("b"), where + ".b") : kInfinity;
    return geometric_grid(real(g.at("a"), where + ".a"), b, points);
  }
  if (g.is_object() && g.contains("from")) {
    const double from = real(g.at("from"), where + ".from");
    const double to = real(member(g, "to", where), where + ".to");
    const std::size_t points = count(member(g, "points", where), where + ".points");
    if (!(from > 0.0) || !(to >= from) || !std::isfinite(to)) bad(where, "need 0 < from <= to < inf");
    std::vector<double> out;
    for (std::size_t i = 0; i < points; ++i) {
      const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
      out.push_back(i + 1 == points ? to : from * std::pow(to / from, t));
    }
    return out;
  }
  bad(where, "expected an array, {a, b, points} or {from, to, points}");
}

NoiseLaw Config::noise(const json& spec, const std::string& where) const {
  if (spec.is_null()) return NoiseLaw::gaussian();
  const std::string law = member(spec, "law", where).get<std::string>();
  if (law == "gaussian") return NoiseLaw::gaussian();
  if (law == "exponential_power") return NoiseLaw::exponential_power(real(member(spec, "m", where), where + ".m"));
  if (law == "student") return NoiseLaw::student(real(member(spec, "nu", where), where + ".nu"));
  if (law == "constant") return NoiseLaw::constant(real(member(spec, "value", where), where + ".value"));
  bad(where + ".law", "unknown law '" + law + "'");
}

namespace {

Amplitude amplitude_of(const Config& cfg, const json& spec, const ProductSpace& space,
                       const std::string& where) {
  if (spec.is_null()) return {};
  if (auto f = cfg.factors(spec)) return *f;
  const GridFunction g = cfg.function(spec, space, where);
  return std::vector<double>(g.values().begin(), g.values().end());
}

}  // namespace

FieldModel Config::field(const ProductSpace& space) const {
  const json& f = member(doc_, "field", "document");
  const std::string kind = member(f, "kind", "field").get<std::string>();
  const json none;
  const auto opt = [&](const char* key) -> const json& { return f.contains(key) ? f.at(key) : none; };
  FieldModel model = [&] {
    if (kind == "iid" || kind == "gaussian_iid") {
      const NoiseLaw law = kind == "gaussian_iid" && opt("noise").is_null()
                               ? NoiseLaw::gaussian()
                               : noise(opt("noise"), "field.noise");
      return FieldModel::iid(law, amplitude_of(*this, opt("amplitude"), space, "field.amplitude"));
    }
    if (kind == "factorable") {
      return FieldModel::factorable(amplitude_of(*this, opt("amplitude"), space, "field.amplitude"),
                                    noise(opt("noise"), "field.noise"));
    }
    if (kind == "correlated" || kind == "gaussian_correlated") {
      return FieldModel::correlated(real_list(member(f, "correlation", "field"), "field.correlation"),
                                    amplitude_of(*this, opt("amplitude"), space, "field.amplitude"));
    }
    if (kind == "scaled_deterministic" || kind == "deterministic") {
      const double scale = f.contains("scale") ? real(f.at("scale"), "field.scale") : 1.0;
      return FieldModel::scaled_deterministic(
          amplitude_of(*this, member(f, "function", "field"), space, "field.function"), scale);
    }
    bad("field.kind", "unknown kind '" + kind + "'");
  }();
  model.validate(space);
  return model;
}

KernelModel Config::kernel(const ProductSpace& x, const ProductSpace& y) const {
  const json& k = member(doc_, "kernel", "document");
  const std::string kind = member(k, "kind", "kernel").get<std::string>();
  const GridFunction part = function(member(k, "part", "kernel"), ProductSpace::concat(x, y), "kernel.part");
  const json none;
  const json& law = k.contains("noise") ? k.at("noise") : none;
  if (kind == "deterministic") return KernelModel::deterministic(part, x.dims());
  if (kind == "factorable_random") return KernelModel::factorable_random(part, x.dims(), noise(law, "kernel.noise"));
  if (kind == "general_random") return KernelModel::general_random(part, x.dims(), noise(law, "kernel.noise"));
  bad("kernel.kind", "unknown kind '" + kind + "'");
}

StatTolerance Config::tolerance() const {
  StatTolerance tol;
  if (!doc_.contains("tolerance")) return tol;
  const json& t = doc_.at("tolerance");
  if (t.contains("floor")) tol.floor = real(t.at("floor"), "tolerance.floor");
  if (t.contains("se_multiplier")) tol.se_multiplier = real(t.at("se_multiplier"), "tolerance.se_multiplier");
  if (t.contains("resamples")) tol.resamples = count(t.at("resamples"), "tolerance.resamples");
  return tol;
}

}  // namespace mixnorm::cli
