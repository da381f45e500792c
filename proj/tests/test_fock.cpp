#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qnorm/fock.hpp"
#include "qnorm/gaussian.hpp"

using namespace qnorm;

namespace {

double binom(unsigned n, unsigned k) { return std::round(std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0))); }

}  // namespace

TEST_CASE("mixture validation") {
  CHECK_THROWS_AS(make_mixture(std::vector<double>{0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(make_mixture(std::vector<double>{-0.1, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(make_mixture(std::vector<double>{}), std::invalid_argument);
  const auto m = make_mixture(std::vector<double>{0.2, 0.3, 0.5});
  CHECK(m.cutoff() == 2);
  CHECK(m.mean_photon_number() == doctest::Approx(1.3));
  CHECK(m.total_mass() == doctest::Approx(1.0));
  CHECK(m.tail_mass_bound() == 0.0);
}

TEST_CASE("thermal Fock state is geometric with a bounded tail") {
  const auto t = make_thermal_fock(1.0, 30);
  for (std::size_t n = 0; n <= 30; ++n) CHECK(t.weight(n) == doctest::Approx(std::pow(0.5, n + 1)));
  CHECK(t.tail_mass_bound() == doctest::Approx(std::pow(0.5, 31)));
  CHECK(t.total_mass() + t.tail_mass_bound() == doctest::Approx(1.0));
}

TEST_CASE("attenuator is binomial") {
  const auto out = attenuate_fock(make_fock(4), 0.3);
  for (unsigned m = 0; m <= 4; ++m)
    CHECK(out.weight(m) == doctest::Approx(binom(4, m) * std::pow(0.3, m) * std::pow(0.7, 4 - m)));
  const auto same = attenuate_fock(make_fock(3), 1.0);
  CHECK(same.weights() == make_fock(3).weights());
  CHECK_THROWS_AS(attenuate_fock(make_fock(1), 1.5), std::invalid_argument);
}

TEST_CASE("amplified vacuum is thermal with nbar = G - 1") {
  const double g = 1.8;
  const auto out = amplify_fock(make_fock(0), g);
  const double x = 1.0 - 1.0 / g;
  for (std::size_t m = 0; m <= out.cutoff(); ++m) CHECK(out.weight(m) == doctest::Approx(std::pow(x, m) / g));
  CHECK(out.tail_mass_bound() < kAmplifierTailLimit);
  CHECK(out.tail_mass_bound() >= 0.0);
  CHECK(out.total_mass() + out.tail_mass_bound() >= 1.0 - 1e-14);
}

TEST_CASE("amplifier transition law") {
  const auto t = amplifier_transitions(3, 40, 2.0);
  for (unsigned n = 0; n <= 3; ++n)
    for (unsigned m = 0; m <= 40; ++m) {
      const double expect = m < n ? 0.0 : binom(m, n) * std::pow(2.0, -(n + 1.0)) * std::pow(0.5, m - n);
      CHECK(t[m][n] == doctest::Approx(expect));
    }
}

TEST_CASE("amplifier margin") {
  CHECK_THROWS_AS(amplify_fock(make_fock(3), 2.0, 0), MarginError);
  try {
    amplify_fock(make_fock(3), 2.0, 1);
    FAIL("expected MarginError");
  } catch (const MarginError& e) {
    CHECK(e.requested_margin() == 1);
    CHECK(e.required_margin() > 1);
    const auto ok = amplify_fock(make_fock(3), 2.0, e.required_margin());
    CHECK(ok.tail_mass_bound() < kAmplifierTailLimit);
  }
  const auto same = amplify_fock(make_fock(2), 1.0);
  CHECK(same.weights() == make_fock(2).weights());
}

TEST_CASE("transition matrices are column stochastic") {
  const auto a = attenuator_transitions(8, 0.35);
  for (std::size_t n = 0; n <= 8; ++n) {
    double s = 0.0;
    for (const auto& row : a) s += row[n];
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto g = amplifier_transitions(8, 200, 1.5);
  for (std::size_t n = 0; n <= 8; ++n) {
    double s = 0.0;
    for (const auto& row : g) {
      CHECK(row[n] >= 0.0);
      s += row[n];
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("loss branches reassemble the attenuated state") {
  const auto st = make_mixture(std::vector<double>{0.35, 0.55, 0.10});
  const auto branches = loss_kraus_decomposition(st, 0.4);
  double total = 0.0;
  std::vector<double> avg(st.cutoff() + 1, 0.0);
  for (const auto& b : branches) {
    CHECK(b.probability > 0.0);
    CHECK(b.state.total_mass() == doctest::Approx(1.0));
    total += b.probability;
    for (std::size_t n = 0; n <= b.state.cutoff(); ++n) avg[n] += b.probability * b.state.weight(n);
  }
  CHECK(total == doctest::Approx(1.0));
  const auto att = attenuate_fock(st, 0.4);
  for (std::size_t n = 0; n < avg.size(); ++n) CHECK(avg[n] == doctest::Approx(att.weight(n)));
  // |1> loses its photon with probability 1 - lambda.
  const auto one = loss_kraus_decomposition(make_fock(1), 0.4);
  REQUIRE(one.size() == 2);
  CHECK(one[0].probability == doctest::Approx(0.4));
  CHECK(one[1].probability == doctest::Approx(0.6));
}

TEST_CASE("Fock s-ordered functions against the Laguerre closed form") {
  for (unsigned n = 0; n <= 6; ++n)
    for (double s : {0.0, -0.5, -1.0, -2.0})
      for (double r : {0.0, 0.3, 0.8, 1.5, 3.0})
        CHECK(wigner_s_fock(make_fock(n), s, r) == doctest::Approx(oracle::fock_ws(n, s, r)).epsilon(1e-12).scale(1e-3));
  CHECK(wigner_s_fock(make_fock(1), 0.0, 0.0) == doctest::Approx(-2.0));
  CHECK_THROWS(wigner_s_fock(make_fock(1), 1.0, 0.5));
}

TEST_CASE("classicalized Fock state equals the s-shifted input") {
  for (unsigned n = 0; n <= 5; ++n) {
    const auto out = classicalize_fock(make_fock(n));
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double r = 0.01 * i;
      worst = std::max(worst, std::fabs(wigner_s_fock(out, 0.0, r) - oracle::fock_ws(n, -2.0, r)));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("thermal states agree across engines") {
  for (double nbar : {0.2, 1.0, 3.0}) {
    const auto f = make_thermal_fock(nbar, 200);
    const auto g = make_thermal(nbar);
    for (double s : {0.0, -1.0, -2.0})
      for (double r : {0.0, 0.4, 1.1, 2.5})
        CHECK(std::fabs(wigner_s_fock(f, s, r) - wigner_s_gaussian(g, s, {r, 0.0})) <= 1e-8);
  }
}

TEST_CASE("profile envelope dominates") {
  const auto st = make_mixture(std::vector<double>{0.1, 0.2, 0.3, 0.4});
  for (double s : {0.0, -1.0, -2.0}) {
    const auto p = wigner_s_fock_profile(st, s);
    for (double r = 0.0; r < 10.0; r += 0.05) {
      CHECK(p(r) == doctest::Approx(wigner_s_fock(st, s, r)));
      CHECK(std::fabs(p(r)) <= p.decay(r) * (1 + 1e-12));
    }
  }
}

TEST_CASE("channel dispatch on diagonal states") {
  const auto st = make_fock(2);
  CHECK(apply_channel(st, ChannelSpec::rotation(0.7)).weights() == st.weights());
  CHECK_THROWS(apply_channel(st, ChannelSpec::displacement({0.5, 0.0})));
  const auto a = apply_channel(st, ChannelSpec::classicalizer());
  const auto b = classicalize_fock(st);
  CHECK(a.weights() == b.weights());
}
