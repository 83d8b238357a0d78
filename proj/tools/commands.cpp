#include "commands.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance.hpp"
#include "mixnorm/error.hpp"
#include "mixnorm/io.hpp"
#include "mixnorm/mixed_norm.hpp"

namespace mixnorm::cli {

using nlohmann::json;
using nlohmann::ordered_json;
using io::format_real;

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw ValidationError(ErrorCode::invalid_argument, what);
}

std::string join(std::span<const double> v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ";") + format_real(x);
  return s;
}

std::string join(std::span<const std::size_t> v) {
  std::string s;
  for (std::size_t x : v) s += (s.empty() ? "" : ";") + std::to_string(x);
  return s;
}

void check_dims(const ExponentVector& p, const ProductSpace& space, const char* key,
                const char* space_name) {
  if (p.size() != space.dims()) {
    throw ValidationError(ErrorCode::exponent_count_mismatch,
                          std::string(key) + " has " + std::to_string(p.size()) +
                              " exponents but space " + space_name + " has " +
                              std::to_string(space.dims()) + " axes");
  }
}

std::size_t axis_ref(const json& ref, const ProductSpace& space) {
  if (ref.is_number_unsigned() || ref.is_number_integer()) {
    const auto k = ref.get<long long>();
    if (k < 0 || static_cast<std::size_t>(k) >= space.dims()) bad("axis index out of range");
    return static_cast<std::size_t>(k);
  }
  const std::string name = ref.get<std::string>();
  for (std::size_t k = 0; k < space.dims(); ++k) {
    if (space.axis(k).name() == name) return k;
  }
  throw ValidationError(ErrorCode::invalid_axis, "no axis named '" + name + "'");
}

std::vector<std::size_t> axis_refs(const json& refs, const ProductSpace& space, const char* where) {
  if (!refs.is_array()) bad(std::string("permute.") + where + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& r : refs) out.push_back(axis_ref(r, space));
  return out;
}

std::string csv_of(const std::function<void(std::ostream&)>& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

}  // namespace

const std::string* CommandOutput::file(const std::string& name) const {
  for (const auto& [n, contents] : files) {
    if (n == name) return &contents;
  }
  return nullptr;
}

CommandOutput cmd_norm(const Config& config) {
  const ProductSpace space = config.space("X");
  const ExponentVector p = config.exponents("p");
  check_dims(p, space, "p", "X");
  CommandOutput out;

  if (config.has("function")) {
    const json& spec = config.doc().at("function");
    const GridFunction f = config.function(spec, space, "function");
    const auto factors = config.factors(spec);
    std::vector<NormOrder> orders{NormOrder::identity(space.dims())};
    if (config.has("orders")) {
      for (const auto& o : config.doc().at("orders")) {
        std::vector<std::size_t> order;
        for (const auto& ref : o) order.push_back(axis_ref(ref, space));
        orders.emplace_back(order);
      }
    }
    std::ostringstream csv;
    csv << "order,p,mixed_norm" << (factors ? ",factorable_norm" : "") << '\n';
    const std::string fact = factors ? format_real(factorable_norm(space, *factors, p)) : "";
    for (const auto& order : orders) {
      std::vector<double> pj;
      for (std::size_t k : order.indices()) pj.push_back(p[k]);
      csv << join(order.indices()) << ',' << join(pj) << ','
          << format_real(mixed_norm_ordered(f, p, order));
      if (factors) csv << ',' << fact;
      csv << '\n';
    }
    out.files.emplace_back("norm.csv", csv.str());
    out.report = csv.str();
    return out;
  }
  if (config.has("field")) {
    const FieldModel model = config.field(space);
    const SampleSet zeta = sample_zeta(model, space, p, config.replicas(), config.seed());
    out.files.emplace_back("zeta.csv", csv_of([&](std::ostream& os) { io::write_samples(os, zeta); }));
    out.report = "zeta: " + std::to_string(zeta.n) + " samples of model " + zeta.model_digest + "\n";
    return out;
  }
  bad("norm needs a function or a field");
}

CommandOutput cmd_permute(const Config& config) {
  const ProductSpace space = config.space("X");
  if (!config.has("permute")) bad("config: missing 'permute'");
  const json& spec = config.doc().at("permute");
  if (!spec.contains("x_axes") || !spec.contains("z_axes") || !spec.contains("p") ||
      !spec.contains("r")) {
    bad("config permute: needs x_axes, z_axes, p, r");
  }
  const auto x_axes = axis_refs(spec.at("x_axes"), space, "x_axes");
  const auto z_axes = axis_refs(spec.at("z_axes"), space, "z_axes");
  const ExponentVector p(spec.at("p").get<std::vector<double>>());
  std::vector<double> r_values;
  if (spec.at("r").is_array()) {
    r_values = spec.at("r").get<std::vector<double>>();
  } else {
    r_values.push_back(spec.at("r").get<double>());
  }
  std::size_t batch = 0;
  if (spec.contains("batch")) {
    const auto b = spec.at("batch").get<long long>();
    if (b < 1) bad("config permute.batch: must be at least 1");
    batch = static_cast<std::size_t>(b);
  }
  if (!config.has("function") && batch == 0) bad("permute needs a function or permute.batch");

  std::ostringstream csv;
  csv << "case,p,r,lhs,rhs,pass,note\n";
  std::size_t failures = 0, rows = 0;
  const auto emit = [&](const std::string& name, const GridFunction& phi) {
    for (double r : r_values) {
      const PermutationGap gap = permutation_gap(phi, x_axes, z_axes, p, r);
      const bool pass = gap.holds();
      failures += pass ? 0 : 1;
      ++rows;
      csv << name << ',' << join(p.values()) << ',' << format_real(r) << ','
          << format_real(gap.lhs) << ',' << format_real(gap.rhs) << ',' << (pass ? 1 : 0) << ','
          << (gap.hypothesis_met ? "" : "hypothesis not met") << '\n';
    }
  };
  if (config.has("function")) emit("function", config.function(config.doc().at("function"), space, "function"));
  if (batch > 0) {
    // Nonnegative tensors with uniform [0, 1) entries, one stream per case.
    const std::uint64_t seed = config.seed();
    for (std::size_t i = 0; i < batch; ++i) {
      Engine engine = replica_engine(seed, i);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::vector<double> values(space.size());
      for (auto& v : values) v = unit(engine);
      emit(std::to_string(i), GridFunction(space, std::move(values)));
    }
  }
  CommandOutput out;
  out.files.emplace_back("permute.csv", csv.str());
  out.report = std::to_string(rows) + " rows, " + std::to_string(failures) + " violations\n";
  return out;
}

CommandOutput cmd_tail(const Config& config) {
  const ProductSpace space = config.space("X");
  const ExponentVector p = config.exponents("p");
  check_dims(p, space, "p", "X");
  const auto u_grid = config.grid("u_grid");
  if (!u_grid) bad("config: tail needs 'u_grid'");
  const FieldModel model = config.field(space);
  const std::vector<double> r_grid =
      config.grid("r_grid").value_or(geometric_grid(p.max(), kInfinity));
  const StatTolerance tol = config.tolerance();
  const std::uint64_t seed = config.seed();
  const std::size_t n = config.replicas();

  std::string psi_source = "empirical";
  if (config.has("psi")) psi_source = config.doc().at("psi").get<std::string>();
  if (psi_source != "empirical" && psi_source != "exact") bad("config psi: expected 'empirical' or 'exact'");

  const Realizations fields = simulate(model, space, n, seed);
  const SampleSet zeta = zeta_from_realizations(fields, space, p, seed, model.digest());
  const PsiTable psi = psi_source == "exact" ? psi_exact(model, space, p, r_grid)
                                             : psi_from_realizations(fields, space, p, r_grid);
  const TailCurve curve = tail_bound(psi, *u_grid);
  const auto rows = compare_tail(curve, zeta.values, tol.se_multiplier);

  std::ostringstream csv;
  csv << "u,g,bound,empirical,pass\n";
  bool all = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    all = all && rows[i].pass;
    csv << format_real(rows[i].u) << ',' << format_real(curve.g_values[i]) << ','
        << format_real(rows[i].bound) << ',' << format_real(rows[i].empirical) << ','
        << (rows[i].pass ? 1 : 0) << '\n';
  }

  std::vector<double> moments;
  for (double r : psi.r_grid) moments.push_back(empirical_moment(zeta, r));
  ordered_json summary;
  summary["model"] = model.describe();
  summary["model_digest"] = model.digest();
  summary["seed"] = seed;
  summary["replicas"] = n;
  summary["psi"] = psi_source;
  summary["all_pass"] = all;
  summary["gls_norm"] = gls_norm(psi.r_grid, moments, psi);
  try {
    const PowerTailFit fit = fit_power_tail(curve);
    summary["fit"] = {{"m_hat", fit.m_hat},
                      {"c2", fit.c2},
                      {"points_used", fit.points_used},
                      {"super_power", fit.super_power}};
  } catch (const ValidationError& e) {
    summary["fit"] = nullptr;
    summary["fit_error"] = e.what();
  }
  summary["warnings"] = psi.warnings;

  CommandOutput out;
  out.files.emplace_back("tail.csv", csv.str());
  out.files.emplace_back("psi.csv", csv_of([&](std::ostream& os) { io::write_psi_table(os, psi); }));
  out.files.emplace_back("zeta.csv", csv_of([&](std::ostream& os) { io::write_samples(os, zeta); }));
  out.files.emplace_back("summary.json", summary.dump(2) + "\n");
  out.report = summary.dump(2) + "\n";
  return out;
}

CommandOutput cmd_operator(const Config& config) {
  const ProductSpace x = config.space("X");
  const ProductSpace y = config.space("Y");
  const KernelModel kernel = config.kernel(x, y);
  if (!config.has("g")) bad("config: operator needs 'g'");
  const GridFunction g = config.function(config.doc().at("g"), y, "g");
  const ExponentVector p = config.exponents("p");
  const ExponentVector r = config.exponents("r");
  check_dims(p, y, "p", "Y");
  check_dims(r, x, "r", "X");
  CommandOutput out;

  if (kernel.kind() == KernelKind::deterministic) {
    const HolderBound b = holder_bound(kernel.deterministic_part(), g, p, r);
    std::ostringstream csv;
    csv << "lhs,rhs,pass\n"
        << format_real(b.lhs) << ',' << format_real(b.rhs) << ',' << (b.holds() ? 1 : 0) << '\n';
    out.files.emplace_back("holder.csv", csv.str());
    out.report = csv.str();
    if (!config.has("s_grid")) return out;
  }
  const auto s_grid = config.grid("s_grid");
  if (!s_grid) bad("config: random kernels need 's_grid'");
  Theorem31Options options;
  options.tolerance = config.tolerance();
  if (config.has("interval")) {
    const json& iv = config.doc().at("interval");
    if (iv.contains("a")) options.a = iv.at("a").get<double>();
    if (iv.contains("b")) options.b = iv.at("b").get<double>();
  }
  const OperatorBoundReport report =
      theorem31_check(kernel, g, p, r, *s_grid, config.replicas(), config.seed(), options);
  out.files.emplace_back("operator.csv",
                         csv_of([&](std::ostream& os) { io::write_operator_report(os, report); }));
  const std::string summary = io::operator_report_summary(report);
  out.files.emplace_back("operator_summary.json", summary);
  out.report += summary;
  return out;
}

CommandOutput cmd_verify(const Config& config) {
  acceptance::Options options;
  options.seed = config.seed();
  options.replicas = config.has("replicas") ? config.replicas() : options.replicas;
  CommandOutput out;
  bool ok = true;
  for (const auto& result : acceptance::run(options)) {
    ok = ok && result.passed;
    out.files.emplace_back(result.csv_name, result.csv);
    out.report += acceptance::format_line(result) + "\n";
  }
  out.status = ok ? kSuccess : kViolation;
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed Lebesgue norms, moment and tail bounds, operator bounds"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed_value = 0;
  std::size_t replicas_value = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "experiment config (JSON)");
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed-override", seed_value, "replace the config seed");
  auto* replicas_opt =
      app.add_option("--replicas-override", replicas_value, "replace the config replica count");
  app.add_flag("--quiet", quiet, "no report on stdout");

  using Command = CommandOutput (*)(const Config&);
  const std::vector<std::pair<std::string, Command>> commands = {
      {"norm", cmd_norm}, {"permute", cmd_permute}, {"tail", cmd_tail},
      {"operator", cmd_operator}, {"verify", cmd_verify}};
  for (const auto& [name, fn] : commands) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidationError;
  }

  Command command = nullptr;
  for (const auto& [name, fn] : commands) {
    if (app.got_subcommand(name)) command = fn;
  }
  const bool is_verify = command == cmd_verify;
  Overrides overrides;
  if (seed_opt->count() > 0) overrides.seed = seed_value;
  if (replicas_opt->count() > 0) overrides.replicas = replicas_value;

  CommandOutput output;
  try {
    std::string text;
    std::string base = ".";
    if (!config_path.empty()) {
      text = io::read_file(config_path);
      base = std::filesystem::path(config_path).parent_path().string();
      if (base.empty()) base = ".";
    } else if (is_verify) {
      text = "{}";
    } else {
      bad("--config is required");
    }
    output = command(Config::parse(text, overrides, base));
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  try {
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, contents] : output.files) {
      io::write_file((std::filesystem::path(out_dir) / name).string(), contents);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  if (!quiet) out << output.report;
  return output.status;
}

}  // namespace mixnorm::cli
