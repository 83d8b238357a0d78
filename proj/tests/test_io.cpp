#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mixnorm/error.hpp"
#include "mixnorm/io.hpp"
#include "oracles.hpp"

using namespace mixnorm;

TEST_CASE("format_real round-trips") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(oracle::random_values(rng, 1, -1.0, 1.0)[0], static_cast<int>(rng() % 200) - 100);
    CHECK(std::strtod(io::format_real(v).c_str(), nullptr) == v);
  }
  CHECK(io::format_real(0.1) == "0.10000000000000001");
  CHECK(io::format_real(2.0) == "2");
}

TEST_CASE("grid function CSV round trip") {
  std::mt19937_64 rng(2);
  const ProductSpace s = oracle::random_space(rng, 3, 4);
  const GridFunction f(s, oracle::random_values(rng, s.size(), -5, 5));
  std::stringstream ss;
  io::write_grid_function(ss, f);
  const GridFunction g = io::read_grid_function(ss, s);
  CHECK(std::equal(f.values().begin(), f.values().end(), g.values().begin(), g.values().end()));
}

TEST_CASE("grid function CSV errors") {
  const ProductSpace s({uniform_axis(2, 1.0, "x")});
  std::istringstream missing("i0,value\n0,1\n");
  CHECK_THROWS(io::read_grid_function(missing, s));
  std::istringstream range("i0,value\n0,1\n2,1\n");
  CHECK_THROWS(io::read_grid_function(range, s));
  std::istringstream garbage("i0,value\n0,abc\n1,2\n");
  CHECK_THROWS_AS(io::read_grid_function(garbage, s), IoError);
  std::istringstream fine("# comment\ni0,value\n1,2.5\n0,-1\n");
  const GridFunction g = io::read_grid_function(fine, s);
  CHECK(g.values()[0] == -1.0);
  CHECK(g.values()[1] == 2.5);
}

TEST_CASE("psi table and tail curve CSV round trips") {
  const PsiTable t = PsiTable::tabulate([](double r) { return std::sqrt(r) * 1.1; }, geometric_grid(2.0, kInfinity, 12), 2.0);
  std::stringstream ss;
  io::write_psi_table(ss, t);
  const PsiTable back = io::read_psi_table(ss);
  CHECK(back.r_grid == t.r_grid);
  CHECK(back.values == t.values);
  CHECK(back.a == t.a);
  CHECK(std::isinf(back.b));

  const double u[] = {1.0, 1.5, 2.0, 7.0};
  const TailCurve c = tail_bound(t, u);
  std::stringstream cs;
  io::write_tail_curve(cs, c);
  CHECK(cs.str().rfind("u,g,bound\n", 0) == 0);
  const TailCurve cb = io::read_tail_curve(cs);
  CHECK(cb.u_grid == c.u_grid);
  CHECK(cb.g_values == c.g_values);
  CHECK(cb.bound_values == c.bound_values);
}

TEST_CASE("sample and operator report CSV layout") {
  SampleSet z;
  z.values = {1.5, 0.25};
  z.n = 2;
  std::ostringstream zs;
  io::write_samples(zs, z);
  CHECK(zs.str() == "replica,zeta\n0,1.5\n1,0.25\n");

  const ProductSpace x({uniform_axis(2, 1.0, "x")});
  const ProductSpace y({uniform_axis(2, 1.0, "y")});
  const GridFunction k0(ProductSpace::concat(x, y), {1, 2, 3, 4});
  const double s[] = {4.0, 8.0};
  const auto rep = theorem31_check(KernelModel::factorable_random(k0, 1, NoiseLaw::gaussian()),
                                   GridFunction(y, {1, -1}), ExponentVector{2.0}, ExponentVector{2.0}, s, 500, 1);
  std::ostringstream os;
  io::write_operator_report(os, rep);
  const std::string csv = os.str();
  CHECK(csv.rfind("s,theta,lhs,g_norm,ratio,pass,se,tolerance,hypothesis,factorized_theta\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

  const auto summary = nlohmann::json::parse(io::operator_report_summary(rep));
  CHECK(summary.at("A").get<double>() == 2.0);
  CHECK(summary.at("rows").size() == 2);
  CHECK(summary.at("all_pass").get<bool>() == rep.all_pass());
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "mixnorm_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "a.txt").string();
  io::write_file(path, "hello\n");
  CHECK(io::read_file(path) == "hello\n");
  CHECK_THROWS_AS(io::read_file((dir / "missing.txt").string()), IoError);
  CHECK_THROWS_AS(io::write_file((dir / "no" / "such" / "dir.txt").string(), "x"), IoError);
  std::filesystem::remove_all(dir);
}
