#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "hartree/errors.hpp"
#include "hartree/verifier.hpp"

using namespace hartree;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("hartree_unit_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p / name;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

const ConstantsTable& table5() {
  static const ConstantsTable t = constants_table(5, bubble_constant(5));
  return t;
}

Problem problem_with(double V0) {
  auto g = default_grid(5);
  Problem p = Problem::limit(coupling_constants(1, 2, 3));
  if (V0 > 0.0) {
    p.V1 = power_potential(g, V0, 2.0);
    p.V2 = power_potential(g, V0, 2.0);
  }
  return p;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + HARTREE_VERIFY_EXE + "\" " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("smallness condition") {
  auto z = check_A3(problem_with(0.0), table5());
  CHECK(z.left_A3 == 0.0);
  CHECK_FALSE(z.nonzero);
  CHECK_FALSE(z.satisfied_A3);
  CHECK_FALSE(z.satisfied_C3);

  auto s = check_A3(problem_with(0.1), table5());
  CHECK(s.satisfied_A3);
  CHECK(s.satisfied_C3);
  CHECK(s.margin_A3 == doctest::Approx(s.right_A3 - s.left_A3).epsilon(1e-15));
  CHECK(std::fabs(s.m - std::sqrt(7.0 / 6.0)) < 1e-14);
  // |(1 + r^2)^{-2}|_{5/2} = (|S^4| B(5/2, 5/2) / 2)^{2/5}
  const double beta_fn = std::tgamma(2.5) * std::tgamma(2.5) / std::tgamma(5.0);
  const double norm = std::pow(8.0 * M_PI * M_PI / 3.0 * 0.5 * beta_fn, 0.4);
  CHECK(std::fabs(s.norm_V1 - 0.1 * norm) < 1e-8 * norm);
  CHECK(std::fabs(s.margin_C3 * std::sqrt(table5().hls) - s.margin_A3) < 1e-12 * s.right_A3);

  auto big = check_A3(problem_with(100.0), table5());
  CHECK_FALSE(big.satisfied_A3);
  CHECK(big.margin_A3 < 0.0);
  CHECK(big.margin_C3 < 0.0);

  Problem bad = problem_with(0.1);
  bad.beta = 1.5;
  CHECK_THROWS_AS(check_A3(bad, table5()), DomainError);
}

TEST_CASE("threshold constants") {
  const auto& c = coupling_constants(1, 2, 3);
  const double lower = 1.02 * c.c_inf;
  for (double V0 : {1e-8, 0.1, 0.5}) {
    auto t = choose_a_and_cbar(problem_with(V0), table5(), lower);
    CHECK(t.a > 0.0);
    CHECK(t.a < 1.0);
    CHECK(std::fabs(t.a - t.a_bisect) < 1e-12);
    CHECK(t.f_increasing);
    CHECK(t.chain_ok);
    CHECK(t.cbar > c.c_inf);
    CHECK(t.cbar < lower);
    CHECK(t.cbar == doctest::Approx(0.5 * (c.c_inf + std::min(0.5 * (lower + c.c_inf), t.two_pow))));
  }
  // tiny V: 2^{-(1-a)/2} m = 1
  auto tiny = choose_a_and_cbar(problem_with(1e-12), table5(), lower);
  CHECK(std::fabs(tiny.a - (1.0 - std::log2(7.0 / 6.0))) < 1e-9);

  CHECK_THROWS_AS(choose_a_and_cbar(problem_with(100.0), table5(), lower), AdmissibilityError);
  CHECK_THROWS_AS(choose_a_and_cbar(problem_with(0.1), table5(), lower, "B7"), ParameterError);
  CHECK_THROWS_AS(choose_a_and_cbar(problem_with(0.1), table5(), 0.9 * c.c_inf), ParameterError);

  // consistency: the calculator succeeds exactly when the margin is positive
  for (double V0 : {0.5, 1.0, 1.2, 1.5, 3.0}) {
    auto adm = check_A3(problem_with(V0), table5());
    bool ok = true;
    try {
      choose_a_and_cbar(problem_with(V0), table5(), lower);
    } catch (const AdmissibilityError&) {
      ok = false;
    }
    CHECK(ok == (adm.margin_A3 > 0.0));
  }
}

TEST_CASE("lemma report status") {
  LemmaReport r;
  r.info("x", 1.0);
  r.finish();
  CHECK(r.status == "informational");
  r.check("y", 1.0, "<", 2.0);
  r.finish();
  CHECK(r.status == "pass");
  r.check("z", std::nan(""), ">", 0.0);
  r.finish();
  CHECK(r.status == "fail");
  CHECK_THROWS_AS(r.check("w", 1.0, "~", 0.0), ParameterError);
}

TEST_CASE("configuration loading") {
  CHECK_THROWS_WITH_AS(load_config("/nonexistent/hartree.ini"), "cannot open config file '/nonexistent/hartree.ini'",
                       IoError);

  auto p = scratch("unknown.ini");
  write(p, "[problem]\nmu1 = 1\ncolour = red\n");
  CHECK_THROWS_AS(load_config(p.string()), ParameterError);

  write(p, "[scan]\ndelta1 = 0.3, x\n");
  CHECK_THROWS_AS(load_config(p.string()), ParameterError);

  write(p, "[problem]\nmu1 = 1\nmu2 = 2\nbeta = 1.5\n");
  auto cfg = load_config(p.string());
  CHECK(cfg.beta == 1.5);
  CHECK_THROWS_AS(make_problem(cfg, make_grid(cfg)), DomainError);

  write(p, "[V1]\nkind = file\nfile = /nonexistent/v1.csv\n");
  cfg = load_config(p.string());
  CHECK_THROWS_WITH_AS(make_problem(cfg, make_grid(cfg)), "cannot open potential file '/nonexistent/v1.csv'", IoError);
}

TEST_CASE("potential from a file") {
  auto csv = scratch("v.csv");
  {
    std::ofstream out(csv);
    out << "# tabulated V\nr,value\n";
    for (int i = 0; i <= 400; ++i) {
      double r = 0.05 * i;
      out << r << "," << 0.1 / std::pow(1 + r * r, 2) << "\n";
    }
  }
  auto g = default_grid(5);
  PotentialSpec spec;
  spec.kind = "file";
  spec.file = csv.string();
  RadialFn V = load_potential(spec, g);
  RadialFn ref = power_potential(g, 0.1, 2.0);
  CHECK(V.tail().p == doctest::Approx(4.0).epsilon(0.01));
  CHECK(lp_norm(V, 2.5) == doctest::Approx(lp_norm(ref, 2.5)).epsilon(1e-3));

  spec.kind = "power";
  spec.s = 0.5;
  CHECK_THROWS_AS(load_potential(spec, g), ParameterError);
  spec.kind = "none";
  CHECK_FALSE(load_potential(spec, g).grid());
}

TEST_CASE("region scan without potential") {
  VerifierConfig cfg;
  cfg.V1.kind = cfg.V2.kind = "none";
  cfg.boundary_points = 6;
  cfg.interior_deltas = 4;
  cfg.interior_rhos = 3;
  cfg.far_rhos = {0, 4, 64};
  cfg.delta2_candidates = {100, 1000};
  cfg.rbar_candidates = {5};
  cfg.lambda_sweep = {0.1, 1e-3, 1e-6};
  Verifier v(cfg);
  const auto& s = v.scan();
  REQUIRE(s.found);
  // trial members sit on the limit Nehari manifold, so I_0 is the same everywhere
  for (const auto& x : s.interior) CHECK(x.i0 == doctest::Approx(v.trial().sigma).epsilon(1e-9));
  double prev = -1.0;
  for (const auto& x : s.h3) {
    CHECK(x.gamma > prev);
    prev = x.gamma;
  }

  std::vector<double> ss{0.0, 0.5, 1.0};
  HomotopyClearance c;
  auto rep = homotopy_boundary_check(s, ss, &c);
  CHECK(rep.status == "pass");
  CHECK(c.h1 == doctest::Approx(0.5 - s.delta1).epsilon(1e-12));

  for (std::size_t i = 1; i < s.lambda_rows.size(); ++i) CHECK(s.lambda_rows[i].lambda < s.lambda_rows[i - 1].lambda);
  CHECK(s.lambda_monotone);

  RegionScan none;
  none.failing = "test";
  CHECK(homotopy_boundary_check(none, ss).status == "fail");
}

TEST_CASE("command line exit codes") {
  auto out = scratch("cli").string();
  CHECK(run_cli("--out " + out + " constants") == 0);
  CHECK(fs::exists(fs::path(out) / "report.json"));
  CHECK(run_cli("--config /nonexistent.ini constants") == 2);
  CHECK(run_cli("--out " + out + " verify no-such-check") == 2);
  CHECK(run_cli("--convention Z9 constants") == 2);
  CHECK(run_cli("") == 2);
  auto p = scratch("domain.ini");
  write(p, "[problem]\nbeta = 1.5\n");
  CHECK(run_cli("--config " + p.string() + " constants") == 2);
  std::error_code ec;
  fs::remove_all(fs::path(out).parent_path(), ec);
}
