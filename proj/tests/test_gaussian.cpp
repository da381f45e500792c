#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "qnorm/gaussian.hpp"

using namespace qnorm;

TEST_CASE("vacuum and thermal covariances") {
  const auto v = GaussianState::vacuum();
  CHECK(v.cov() == Sym2{0.25, 0.0, 0.25});
  const auto t = make_thermal(1.0);
  CHECK(t.cov().xx == doctest::Approx(0.75));
  CHECK(t.cov().yy == doctest::Approx(0.75));
}

TEST_CASE("squeezed thermal puts the minor axis at theta") {
  const auto s = make_squeezed_thermal(1.0, 0.7);
  CHECK(s.cov().xx == doctest::Approx(0.75 * std::exp(-1.4)));
  CHECK(s.cov().yy == doctest::Approx(0.75 * std::exp(1.4)));
  const double theta = 0.6;
  const auto rot = make_squeezed_thermal(1.0, 0.7, theta);
  const auto ev = rot.cov().eigenvalues();
  CHECK(ev[0] == doctest::Approx(0.75 * std::exp(-1.4)));
  CHECK(ev[1] == doctest::Approx(0.75 * std::exp(1.4)));
  // Variance along (cos theta, sin theta) is the minor one.
  const double c = std::cos(theta), sn = std::sin(theta);
  const auto& m = rot.cov();
  CHECK(c * c * m.xx + 2 * c * sn * m.xy + sn * sn * m.yy == doctest::Approx(ev[0]));
}

TEST_CASE("physicality") {
  CHECK_THROWS_AS(GaussianState({0, 0}, {0.2, 0.0, 0.25}), std::invalid_argument);
  CHECK_THROWS_AS(GaussianState({0, 0}, {0.25, 0.3, 0.25}), std::invalid_argument);
  CHECK_THROWS_AS(GaussianState({NAN, 0}, {0.25, 0.0, 0.25}), std::invalid_argument);
  CHECK_NOTHROW(GaussianState({0, 0}, {0.1, 0.0, 0.625}));
  CHECK_THROWS_AS(make_squeezed_thermal(-0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_squeezed_thermal(0.0, -0.1), std::invalid_argument);
}

TEST_CASE("channel covariance maps") {
  const auto st = make_squeezed_thermal(0.5, 0.4, 0.3);
  const auto in = apply_channel(st, ChannelSpec::displacement({0.6, -0.2}));
  const Sym2 c = in.cov();

  const auto a = apply_channel(in, ChannelSpec::attenuator(0.3));
  CHECK(a.cov().xx == doctest::Approx(0.3 * c.xx + 0.7 * 0.25));
  CHECK(a.cov().xy == doctest::Approx(0.3 * c.xy));
  CHECK(a.mean()[0] == doctest::Approx(std::sqrt(0.3) * 0.6));

  const auto g = apply_channel(in, ChannelSpec::amplifier(2.5));
  CHECK(g.cov().yy == doctest::Approx(2.5 * c.yy + 1.5 * 0.25));
  CHECK(g.mean()[1] == doctest::Approx(std::sqrt(2.5) * -0.2));

  // Loss 1/2 then gain 2 adds half a unit of noise and keeps the mean.
  const auto cl = apply_channel(in, ChannelSpec::classicalizer());
  CHECK(cl.cov().xx == doctest::Approx(c.xx + 0.5));
  CHECK(cl.cov().xy == doctest::Approx(c.xy));
  CHECK(cl.cov().yy == doctest::Approx(c.yy + 0.5));
  CHECK(cl.mean()[0] == doctest::Approx(0.6));
  CHECK(cl.mean()[1] == doctest::Approx(-0.2));

  const auto r = apply_channel(in, ChannelSpec::rotation(std::numbers::pi / 2));
  CHECK(r.mean()[0] == doctest::Approx(0.2));
  CHECK(r.mean()[1] == doctest::Approx(0.6));
  CHECK(r.cov().xx == doctest::Approx(c.yy));
}

TEST_CASE("s-ordered function against the explicit Gaussian") {
  const auto st = make_squeezed_thermal(0.8, 0.5, 1.1);
  const auto d = apply_channel(st, ChannelSpec::displacement({0.3, 0.7}));
  for (double s : {0.0, -0.5, -1.0, -2.0}) {
    const Sym2 m = d.cov().shifted(-s / 4.0);
    const double det = m.det();
    for (double x : {-1.0, 0.0, 0.4})
      for (double y : {-0.5, 0.7, 1.5}) {
        const double dx = x - 0.3, dy = y - 0.7;
        const double q = (m.yy * dx * dx - 2 * m.xy * dx * dy + m.xx * dy * dy) / det;
        CHECK(wigner_s_gaussian(d, s, {x, y}) == doctest::Approx(std::exp(-0.5 * q) / (2 * std::sqrt(det))));
      }
  }
  // Squeezed below vacuum, s = 1 has no function.
  CHECK_THROWS_AS(wigner_s_gaussian(make_squeezed_thermal(0.0, 0.5), 1.0, {0, 0}), std::domain_error);
}

TEST_CASE("s-ordered functions integrate to one") {
  // Midpoint rule on a wide grid; the integrand is smooth and decays fast.
  const auto st = make_squeezed_thermal(1.0, 0.6, 0.4);
  for (double s : {0.0, -1.0}) {
    const double h = 0.02;
    const int half = 700;  // box of +-14, over 8 standard deviations
    double sum = 0.0;
    for (int i = -half; i < half; ++i)
      for (int j = -half; j < half; ++j) sum += wigner_s_gaussian(st, s, {(i + 0.5) * h, (j + 0.5) * h});
    CHECK(sum * h * h / std::numbers::pi == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("classicalizer shifts the ordering by two") {
  const GaussianState states[] = {make_squeezed_thermal(0.0, 1.0, 0.2), make_coherent({1.0, -1.0}),
                                  make_thermal(2.0)};
  for (const auto& st : states) {
    const auto out = apply_channel(st, ChannelSpec::classicalizer());
    for (double x : {-1.3, 0.0, 0.9})
      for (double y : {-0.4, 0.2, 1.7})
        CHECK(wigner_s_gaussian(out, 0.0, {x, y}) == doctest::Approx(wigner_s_gaussian(st, -2.0, {x, y})));
  }
}

TEST_CASE("thermal function matches the isotropic closed form") {
  for (double nbar : {0.0, 0.5, 2.0})
    for (double s : {0.0, -1.0})
      for (double r : {0.0, 0.5, 2.0})
        CHECK(wigner_s_gaussian(make_thermal(nbar), s, {r, 0.0}) == doctest::Approx(oracle::thermal_ws(nbar, s, r)));
}

TEST_CASE("squeezing onset and variance witness") {
  CHECK(squeezing_onset(1.0) == doctest::Approx(0.5 * std::log(3.0)));
  CHECK(squeezing_onset(1.0) == doctest::Approx(0.5493).epsilon(1e-4));
  CHECK(squeezing_onset(0.0) == 0.0);
  const double onset = squeezing_onset(1.0);
  CHECK_FALSE(is_quantum_gaussian(make_squeezed_thermal(1.0, onset - 1e-6)));
  CHECK(is_quantum_gaussian(make_squeezed_thermal(1.0, onset + 1e-6)));
  CHECK_FALSE(is_quantum_gaussian(make_thermal(0.0)));
  CHECK(min_quadrature_variance(make_squeezed_thermal(1.0, 0.7)) == doctest::Approx(0.75 * std::exp(-1.4)));
}

TEST_CASE("difference profile evaluates both functions") {
  const auto a = make_squeezed_thermal(1.0, 0.7, 0.3);
  const auto b = apply_channel(a, ChannelSpec::classicalizer());
  const auto p = wigner_difference_profile(a, b, 0.0);
  for (double x : {-0.5, 0.0, 1.2})
    for (double y : {-1.0, 0.3})
      CHECK(p(x, y) == doctest::Approx(wigner_s_gaussian(a, 0.0, {x, y}) - wigner_s_gaussian(b, 0.0, {x, y})));
  const auto q = wigner_difference_profile(a, 0.0, a, -2.0);
  CHECK(q(0.2, 0.1) == doctest::Approx(p(0.2, 0.1)));
}

TEST_CASE("difference profile envelope dominates") {
  const auto a = apply_channel(make_squeezed_thermal(0.5, 0.9, 0.7), ChannelSpec::displacement({0.8, -0.3}));
  const auto b = apply_channel(a, ChannelSpec::classicalizer());
  const auto p = wigner_difference_profile(a, b, 0.0);
  const auto& f = p.frame;
  for (double t = 0.0; t < 12.0; t += 0.25)
    for (int k = 0; k < 16; ++k) {
      const double phi = 2 * std::numbers::pi * k / 16;
      const double wx = t * std::cos(phi) * f.sx, wy = t * std::sin(phi) * f.sy;
      const double x = f.cx + std::cos(f.angle) * wx - std::sin(f.angle) * wy;
      const double y = f.cy + std::sin(f.angle) * wx + std::cos(f.angle) * wy;
      CHECK(std::fabs(p(x, y)) <= p.decay(t) * (1 + 1e-12));
    }
}
