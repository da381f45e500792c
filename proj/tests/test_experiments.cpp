#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "qnorm/experiments.hpp"
#include "qnorm/verify.hpp"

using namespace qnorm;
using namespace qnorm::experiments;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

TEST_CASE("seven significant digits") {
  CHECK(format_sig7(0.76980035891950105) == "0.7698004");
  CHECK(format_sig7(0.0) == "0");
  CHECK(format_sig7(-5.919201e-05) == "-5.919201e-05");
  CHECK(format_sig7(1.5) == "1.5");
  CHECK(round_sig7(0.123456789) == 0.1234568);
}

TEST_CASE("counter generator is a pure function of seed and index") {
  const CounterRng a(42), b(42), c(43);
  CHECK(a.bits(7) == b.bits(7));
  CHECK(a.bits(7) != c.bits(7));
  CHECK(a.bits(7) != a.bits(8));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = a.uniform(i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    seen.insert(a.bits(i));
  }
  CHECK(seen.size() == 10000);
}

TEST_CASE("simplex samples") {
  const CounterRng rng(42);
  double mean[3] = {0, 0, 0};
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto p = sample_simplex(rng, i);
    CHECK(p[0] >= 0.0);
    CHECK(p[1] >= 0.0);
    CHECK(p[2] >= 0.0);
    CHECK(std::fabs(p[0] + p[1] + p[2] - 1.0) <= 1e-15);
    for (int k = 0; k < 3; ++k) mean[k] += p[k] / n;
  }
  // Uniform on the simplex: each coordinate has mean 1/3, sd sqrt(1/18) / sqrt(n).
  for (double m : mean) CHECK(std::fabs(m - 1.0 / 3.0) < 0.01);
}

TEST_CASE("sweep rows") {
  SweepOptions o;
  o.nbar = 1.0;
  o.r_min = 0.0;
  o.r_max = 1.5;
  o.steps = 7;
  const auto rows = run_sweep(o);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0].r == 0.0);
  CHECK(rows[6].r == 1.5);
  CHECK(rows[0].n_value == doctest::Approx(oracle::isotropic_l1(0.75, 1.25)).epsilon(1e-6));
  CHECK(rows[0].baseline == doctest::Approx(oracle::kBaseline));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].r > rows[i - 1].r);
    CHECK(rows[i].n_value >= rows[i - 1].n_value);
  }
  CHECK_THROWS_AS(run_sweep(SweepOptions{1.0, 1.0, 0.5, 3}), std::invalid_argument);
  CHECK_THROWS_AS(run_sweep(SweepOptions{1.0, 0.0, 1.0, 1}), std::invalid_argument);
}

TEST_CASE("sweep CSV classifications recompute from their own columns") {
  SweepOptions o;
  o.steps = 31;
  std::ostringstream os;
  write_sweep_csv(os, run_sweep(o));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == kSweepHeader);
  int rows = 0;
  while (std::getline(is, line)) {
    const auto c = split(line);
    REQUIRE(c.size() == 7);
    const bool quantum = c[5] == "1";
    const auto cls = classify(quantum, std::stod(c[4]), std::stod(c[2]));
    CHECK(std::string(to_string(cls)) == c[6]);
    const double r = std::stod(c[0]);
    if (r > 0.56 && r < 0.90) CHECK(c[6] == "nogo_instance");
    ++rows;
  }
  CHECK(rows == 31);
}

TEST_CASE("certification threshold for nbar = 1") {
  const auto c = find_crossing(1.0, 1e-6);
  CHECK(c.onset == doctest::Approx(0.5 * std::log(3.0)));
  CHECK(c.r_star >= 0.90);
  CHECK(c.r_star <= 1.00);
  CHECK(c.m_lo <= 0.0);
  CHECK(c.m_hi > 0.0);
  CHECK(c.r_lo <= c.r_star);
  CHECK(c.r_star <= c.r_hi);
  CHECK_FALSE(c.at_onset);
  // |M(r*)| <= tol
  const auto m = measure_m(make_squeezed_thermal(1.0, c.r_star), ChannelSpec::classicalizer(), FunctionalSpec{}, 1e-7);
  CHECK(std::fabs(m.m_value) <= 1e-6 + m.err);
}

TEST_CASE("squeezed vacuum is certified as soon as it is squeezed") {
  const auto c = find_crossing(0.0, 1e-6);
  CHECK(c.at_onset);
  CHECK(c.r_star == 0.0);
  const auto m = measure_m(make_squeezed_thermal(0.0, 0.05), ChannelSpec::classicalizer(), FunctionalSpec{});
  CHECK(m.m_value > m.err);
}

TEST_CASE("no crossing below r_max") {
  CHECK_THROWS_AS(find_crossing(1.0, 1e-6, 0.8), NoCrossing);
  CHECK_THROWS_AS(find_crossing(1.0, 1e-6, 0.5), std::invalid_argument);
}

TEST_CASE("mixture rows") {
  MixtureOptions o;
  o.count = 12;
  o.seed = 7;
  o.include_corners = true;
  const auto rows = run_mixtures(o);
  REQUIRE(rows.size() == 15);
  for (int i = 0; i < 12; ++i) CHECK(rows[i].seed_index == i);
  for (const auto& r : rows) CHECK(std::fabs(r.p0 + r.p1 + r.p2 - 1.0) <= 1e-9);
  CHECK(rows[12].seed_index == -1);
  CHECK(rows[12].classification == Classification::classical_consistent);
  CHECK(rows[13].classification == Classification::certified_quantum);
  CHECK(std::fabs(rows[13].wigner_negativity - 0.4261226) <= 1e-6);
  CHECK(rows[14].classification == Classification::certified_quantum);

  const auto again = run_mixtures(o);
  std::ostringstream a, b;
  write_mixtures_csv(a, rows);
  write_mixtures_csv(b, again);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind(kMixtureHeader, 0) == 0);
}

TEST_CASE("verify suite parsing and report format") {
  CHECK(verify::parse_suite("axioms") == verify::Suite::axioms);
  CHECK_THROWS_AS(verify::parse_suite("bogus"), std::invalid_argument);
  std::ostringstream os;
  const bool ok = verify::write_report(os, {{"a", true, "x, y"}, {"b", false, "z"}});
  CHECK_FALSE(ok);
  CHECK(os.str() == "check,a,PASS,x; y\ncheck,b,FAIL,z\nsummary,1,2,FAIL\n");
}

TEST_CASE("oracle suite passes") {
  for (const auto& r : verify::run_oracles(1e-6)) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.pass);
  }
}
