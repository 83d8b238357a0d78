#include "mixnorm/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mixnorm/error.hpp"

namespace mixnorm::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_real(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw IoError("cannot parse '" + text + "' as a number");
  }
  return v;
}

std::size_t parse_index(const std::string& text) {
  const double v = parse_real(text);
  if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw IoError("'" + text + "' is not a nonnegative integer index");
  }
  return static_cast<std::size_t>(v);
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

// Data rows (header and comments removed) plus the comment lines.
struct CsvBody {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;
};

CsvBody read_csv(std::istream& is) {
  CsvBody body;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      body.comments.push_back(line.substr(1));
      continue;
    }
    auto fields = split(line);
    for (auto& f : fields) f = strip(f);
    if (!have_header) {
      body.header = std::move(fields);
      have_header = true;
    } else {
      body.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw IoError("CSV input has no header row");
  return body;
}

void expect_header(const CsvBody& body, const std::vector<std::string>& expected) {
  if (body.header.size() < expected.size() ||
      !std::equal(expected.begin(), expected.end(), body.header.begin())) {
    std::string want;
    for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
    throw IoError("unexpected CSV header; expected " + want);
  }
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_grid_function(std::ostream& os, const GridFunction& f) {
  const auto shape = f.space().shape();
  for (std::size_t k = 0; k < shape.size(); ++k) os << 'i' << k << ',';
  os << "value\n";
  std::vector<std::size_t> index(shape.size(), 0);
  for (double v : f.values()) {
    for (auto i : index) os << i << ',';
    os << format_real(v) << '\n';
    for (std::size_t k = shape.size(); k-- > 0;) {
      if (++index[k] < shape[k]) break;
      index[k] = 0;
    }
  }
}

GridFunction read_grid_function(std::istream& is, const ProductSpace& space) {
  const CsvBody body = read_csv(is);
  const std::size_t dims = space.dims();
  if (body.header.size() != dims + 1) {
    throw IoError("grid CSV needs " + std::to_string(dims) + " index columns and a value column");
  }
  std::vector<double> values(space.size(), 0.0);
  std::vector<bool> seen(space.size(), false);
  const auto shape = space.shape();
  for (const auto& row : body.rows) {
    if (row.size() != dims + 1) throw IoError("grid CSV row has the wrong number of fields");
    std::size_t flat = 0;
    for (std::size_t k = 0; k < dims; ++k) {
      const std::size_t i = parse_index(row[k]);
      if (i >= shape[k]) throw IoError("grid CSV index out of range");
      flat = flat * shape[k] + i;
    }
    if (seen[flat]) throw IoError("grid CSV lists a cell twice");
    seen[flat] = true;
    values[flat] = parse_real(row[dims]);
  }
  for (bool s : seen) {
    if (!s) throw IoError("grid CSV does not cover every cell");
  }
  return GridFunction(space, std::move(values));
}

void write_samples(std::ostream& os, const SampleSet& samples) {
  os << "replica,zeta\n";
  for (std::size_t i = 0; i < samples.values.size(); ++i) {
    os << i << ',' << format_real(samples.values[i]) << '\n';
  }
}

void write_psi_table(std::ostream& os, const PsiTable& table) {
  os << "# a=" << format_real(table.a) << ",b=" << format_real(table.b) << '\n';
  os << "r,psi\n";
  for (std::size_t i = 0; i < table.r_grid.size(); ++i) {
    os << format_real(table.r_grid[i]) << ',' << format_real(table.values[i]) << '\n';
  }
}

PsiTable read_psi_table(std::istream& is) {
  const CsvBody body = read_csv(is);
  expect_header(body, {"r", "psi"});
  PsiTable t;
  bool have_bounds = false;
  for (const auto& c : body.comments) {
    const auto fields = split(strip(c));
    if (fields.size() == 2 && fields[0].rfind("a=", 0) == 0 && fields[1].rfind("b=", 0) == 0) {
      t.a = parse_real(fields[0].substr(2));
      t.b = parse_real(fields[1].substr(2));
      have_bounds = true;
    }
  }
  for (const auto& row : body.rows) {
    if (row.size() != 2) throw IoError("psi CSV row needs two fields");
    t.r_grid.push_back(parse_real(row[0]));
    t.values.push_back(parse_real(row[1]));
  }
  if (!have_bounds && !t.r_grid.empty()) t.a = std::max(1.0, t.r_grid.front() * (1.0 - 1e-9));
  t.validate();
  return t;
}

void write_tail_curve(std::ostream& os, const TailCurve& curve) {
  os << "u,g,bound\n";
  for (std::size_t i = 0; i < curve.u_grid.size(); ++i) {
    os << format_real(curve.u_grid[i]) << ',' << format_real(curve.g_values[i]) << ','
       << format_real(curve.bound_values[i]) << '\n';
  }
}

TailCurve read_tail_curve(std::istream& is) {
  const CsvBody body = read_csv(is);
  expect_header(body, {"u", "g", "bound"});
  TailCurve c;
  for (const auto& row : body.rows) {
    if (row.size() != 3) throw IoError("tail CSV row needs three fields");
    c.u_grid.push_back(parse_real(row[0]));
    c.g_values.push_back(parse_real(row[1]));
    c.bound_values.push_back(parse_real(row[2]));
  }
  return c;
}

void write_operator_report(std::ostream& os, const OperatorBoundReport& report) {
  const bool factorized =
      !report.rows.empty() && report.rows.front().factorized_theta.has_value();
  os << "s,theta,lhs,g_norm,ratio,pass,se,tolerance,hypothesis";
  if (factorized) os << ",factorized_theta";
  os << '\n';
  for (const auto& row : report.rows) {
    os << format_real(row.s) << ',' << format_real(row.theta) << ',' << format_real(row.lhs) << ','
       << format_real(row.g_norm) << ',' << format_real(row.ratio) << ','
       << (row.pass ? "true" : "false") << ',' << format_real(row.se) << ','
       << format_real(row.tolerance) << ','
       << (row.hypothesis_met ? "met" : "hypothesis not met");
    if (factorized) os << ',' << format_real(row.factorized_theta.value_or(0.0));
    os << '\n';
  }
}

std::string operator_report_summary(const OperatorBoundReport& report) {
  nlohmann::ordered_json j;
  j["A"] = report.A;
  j["a"] = report.a;
  j["b"] = report.b;
  j["g_norm"] = report.g_norm;
  j["gls_ratio"] = report.gls_ratio;
  j["all_pass"] = report.all_pass();
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["s"] = row.s;
    r["theta"] = row.theta;
    r["lhs"] = row.lhs;
    r["ratio"] = row.ratio;
    r["tolerance"] = row.tolerance;
    r["hypothesis_met"] = row.hypothesis_met;
    r["pass"] = row.pass;
    if (row.factorized_theta) r["factorized_theta"] = *row.factorized_theta;
    j["rows"].push_back(std::move(r));
  }
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mixnorm::io
