#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qnorm/quadrature.hpp"
#include "qnorm/quantifier.hpp"

using namespace qnorm;

namespace {

const ChannelSpec cg = ChannelSpec::classicalizer();
constexpr FunctionalSpec kW{0.0, 1.0};

FockDiagonalState mix(std::vector<double> w) { return make_mixture(w); }

}  // namespace

TEST_CASE("functional validation") {
  CHECK_THROWS_AS(make_functional(0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_functional(0.0, 0.9), std::invalid_argument);
  CHECK_NOTHROW(make_functional(-1.0, 2.0));
  CHECK_THROWS_AS(quantumness_norm(GaussianState::vacuum(), cg, FunctionalSpec{0.2, 1.0}), std::invalid_argument);
}

TEST_CASE("isotropic L1 distance closed form") {
  CHECK(isotropic_l1_distance(0.25, 0.75) == doctest::Approx(oracle::kBaseline).epsilon(1e-15));
  CHECK(isotropic_l1_distance(0.75, 0.25) == doctest::Approx(oracle::kBaseline).epsilon(1e-15));
  CHECK(isotropic_l1_distance(0.5, 0.5) == 0.0);
  // Direct radial integral of |g_a - g_b| with the crossing radius known.
  const double a = 0.3, b = 1.1;
  const double u0 = std::log(b / a) / (1.0 / (2 * a) - 1.0 / (2 * b));  // crossing in u = r^2
  const double inside = (1 - std::exp(-u0 / (2 * a))) - (1 - std::exp(-u0 / (2 * b)));
  CHECK(isotropic_l1_distance(a, b) == doctest::Approx(2 * inside));
}

TEST_CASE("baseline") {
  const auto b = baseline(cg, kW);
  CHECK(b.value == doctest::Approx(oracle::kBaseline).epsilon(1e-12));
  CHECK(b.err <= 1e-7);
  const auto q = quantumness_norm(GaussianState::vacuum(), cg, kW, 1e-9);
  CHECK(std::fabs(q.value - oracle::kBaseline) <= 1e-7);
  const auto f = quantumness_norm(make_fock(0), cg, kW, 1e-9);
  CHECK(std::fabs(f.value - oracle::kBaseline) <= 1e-7);
  // p = 2: 1/(4 va) + 1/(4 vb) - 2 / (2 (va + vb)) with va = 1/4, vb = 3/4.
  const auto b2 = baseline(cg, FunctionalSpec{0.0, 2.0}, 1e-8);
  CHECK(b2.value == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-8));
  CHECK(b2.err <= 1e-8);
  // s = -1: variances 1/2 and 1.
  CHECK(baseline(cg, FunctionalSpec{-1.0, 1.0}).value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("thermal state norm against the closed form") {
  for (double nbar : {0.5, 1.0, 2.0}) {
    const double v = (2 * nbar + 1) / 4;
    const double expect = oracle::isotropic_l1(v, v + 0.5);
    const auto g = quantumness_norm(make_thermal(nbar), cg, kW);
    CHECK(std::fabs(g.value - expect) <= g.err);
    CHECK(g.err <= kDefaultTol);
  }
  CHECK(quantumness_norm(make_thermal(1.0), cg, kW).value == doctest::Approx(0.3718064).epsilon(1e-6));
}

TEST_CASE("p = 2 norm of squeezed states against the overlap closed form") {
  const auto st = make_squeezed_thermal(0.3, 0.8, 0.5);
  const auto out = apply_channel(st, cg);
  const auto& a = st.cov();
  const auto& b = out.cov();
  const double n2 = oracle::gaussian_overlap(a.xx, a.xy, a.yy, a.xx, a.xy, a.yy) +
                    oracle::gaussian_overlap(b.xx, b.xy, b.yy, b.xx, b.xy, b.yy) -
                    2 * oracle::gaussian_overlap(a.xx, a.xy, a.yy, b.xx, b.xy, b.yy);
  const auto e = quantumness_norm(st, cg, FunctionalSpec{0.0, 2.0}, 1e-8);
  CHECK(std::fabs(e.value - std::sqrt(n2)) <= e.err);
  CHECK(e.err <= 1e-8);
}

TEST_CASE("Wigner negativity golden values") {
  const auto vac = wigner_negativity(make_fock(0));
  CHECK(std::fabs(vac.value) <= kDefaultTol);
  const auto one = wigner_negativity(make_fock(1));
  CHECK(std::fabs(one.value - (4 * std::exp(-0.5) - 2)) <= 1e-6);
  CHECK(std::fabs(one.value - 0.4261226) <= 1e-6);
  const auto two = wigner_negativity(make_fock(2));
  CHECK(std::fabs(two.value - oracle::fock_negativity(2)) <= 1e-6);
  CHECK(std::fabs(two.value - 0.7289892) <= 1e-6);
}

TEST_CASE("classification rule") {
  CHECK(classify(true, -0.1, 1e-6) == Classification::nogo_instance);
  CHECK(classify(true, 0.0, 1e-6) == Classification::nogo_instance);
  CHECK(classify(true, 0.1, 1e-6) == Classification::certified_quantum);
  CHECK(classify(false, 0.1, 1e-6) == Classification::certified_quantum);
  CHECK(classify(false, 5e-7, 1e-6) == Classification::classical_consistent);
  CHECK(classify(false, -0.2, 1e-6) == Classification::classical_consistent);
  CHECK(to_string(Classification::nogo_instance) == "nogo_instance");
}

TEST_CASE("squeezed thermal examples") {
  const auto nogo = measure_m(make_squeezed_thermal(1.0, 0.7), cg, kW);
  CHECK(nogo.witness.kind == WitnessKind::gaussian_variance);
  CHECK(nogo.witness.quantum);
  CHECK(nogo.m_value < 0.0);
  CHECK(nogo.classification == Classification::nogo_instance);
  const auto cert = measure_m(make_squeezed_thermal(1.0, 1.2), cg, kW);
  CHECK(cert.m_value > cert.err);
  CHECK(cert.classification == Classification::certified_quantum);
  const auto th = measure_m(make_thermal(1.0), cg, kW);
  CHECK(th.classification == Classification::classical_consistent);
  CHECK(th.m_value == doctest::Approx(th.n_value - oracle::kBaseline));
}

TEST_CASE("Fock examples") {
  const auto one = measure_m(make_fock(1), cg, kW);
  CHECK(one.witness.kind == WitnessKind::wigner_negativity);
  CHECK(one.classification == Classification::certified_quantum);
  const auto vac = measure_m(make_fock(0), cg, kW);
  CHECK(vac.classification == Classification::classical_consistent);
  const auto nogo = measure_m(mix({0.35, 0.55, 0.10}), cg, kW);
  CHECK(nogo.witness.value > kNegativityThreshold);
  CHECK(nogo.m_value < -1e-4);
  CHECK(nogo.classification == Classification::nogo_instance);
}

TEST_CASE("displacement and rotation invariance") {
  const auto st = make_squeezed_thermal(0.4, 0.9, 0.3);
  const double n0 = quantumness_norm(st, cg, kW).value;
  for (double re : {-1.5, 0.7})
    for (double ang : {0.5, 2.9}) {
      const auto moved = apply_channel(st, ChannelSpec::displacement({re, 0.4}).then(ChannelSpec::rotation(ang)));
      CHECK(std::fabs(quantumness_norm(moved, cg, kW).value - n0) <= 2 * kDefaultTol);
    }
}

TEST_CASE("N through the channel equals the s-shifted integral") {
  const auto st = make_squeezed_thermal(1.0, 0.9, -0.4);
  const auto n = quantumness_norm(st, cg, kW);
  const auto direct = integrate_plane_abs_pow(wigner_difference_profile(st, 0.0, st, -2.0), 1.0, kDefaultTol);
  CHECK(std::fabs(n.value - direct.value) <= n.err + direct.abs_error_bound);
  const auto f = make_fock(2);
  const auto nf = quantumness_norm(f, cg, kW);
  const auto df = integrate_radial_abs_pow(difference(wigner_s_fock_profile(f, 0.0), wigner_s_fock_profile(f, -2.0)),
                                           1.0, kDefaultTol);
  CHECK(std::fabs(nf.value - df.value) <= nf.err + df.abs_error_bound + 1e-9);
}

TEST_CASE("halving tol keeps estimates consistent") {
  const auto st = make_squeezed_thermal(1.0, 0.8);
  const auto f = mix({0.2, 0.5, 0.3});
  double tol = 1e-4;
  auto prev_g = quantumness_norm(st, cg, kW, tol);
  auto prev_f = quantumness_norm(f, cg, kW, tol);
  for (int i = 0; i < 8; ++i) {
    tol *= 0.5;
    const auto g = quantumness_norm(st, cg, kW, tol);
    const auto h = quantumness_norm(f, cg, kW, tol);
    CHECK(g.err <= tol);
    CHECK(h.err <= tol);
    CHECK(std::fabs(g.value - prev_g.value) <= g.err + prev_g.err);
    CHECK(std::fabs(h.value - prev_f.value) <= h.err + prev_f.err);
    prev_g = g;
    prev_f = h;
  }
}

TEST_CASE("convexity gap") {
  const FockDiagonalState one[] = {make_fock(2)};
  const double w1[] = {1.0};
  const auto g0 = convexity_gap(one, w1, cg, kW);
  CHECK(std::fabs(g0.value) <= 2 * kDefaultTol);

  const FockDiagonalState pair01[] = {make_fock(0), make_fock(1)};
  const double half[] = {0.5, 0.5};
  const auto g1 = convexity_gap(pair01, half, cg, kW);
  CHECK(g1.value >= -g1.err);

  const FockDiagonalState pair12[] = {make_fock(1), make_fock(2)};
  const double w37[] = {0.3, 0.7};
  const auto g2 = convexity_gap(pair12, w37, cg, kW);
  CHECK(g2.value >= -g2.err);

  const double bad[] = {0.3, 0.6};
  CHECK_THROWS_AS(convexity_gap(pair12, bad, cg, kW), std::invalid_argument);

  const GaussianState gs[] = {make_thermal(1.0), make_squeezed_thermal(1.0, 0.5)};
  CHECK_THROWS_AS(convexity_gap(gs, half, cg, kW), UnsupportedInput);
  const double w10[] = {1.0, 0.0};
  CHECK(convexity_gap(gs, w10, cg, kW).value == 0.0);
}

TEST_CASE("monotonicity gaps") {
  for (double l : {0.2, 0.5, 0.8}) {
    const auto w = monotonicity_gap_weak(make_fock(0), l, cg, kW);
    const auto s = monotonicity_gap_strong(make_fock(0), l, cg, kW);
    CHECK(std::fabs(w.value) <= 2 * kDefaultTol);
    CHECK(std::fabs(s.value) <= 2 * kDefaultTol);
    CHECK(std::fabs(monotonicity_gap_weak(GaussianState::vacuum(), l, cg, kW).value) <= 2 * kDefaultTol);
  }
  const auto w = monotonicity_gap_weak(make_fock(1), 0.5, cg, kW);
  const auto s = monotonicity_gap_strong(make_fock(1), 0.5, cg, kW);
  CHECK(w.value >= -w.err);
  CHECK(s.value >= -s.err);
  // Averaging over loss branches cannot exceed the averaged state (convexity).
  CHECK(s.value <= w.value + w.err + s.err);
  CHECK_THROWS_AS(monotonicity_gap_strong(make_thermal(1.0), 0.5, cg, kW), UnsupportedInput);
  CHECK_THROWS_AS(monotonicity_gap_weak(make_fock(1), 1.0, cg, kW), std::invalid_argument);
}

TEST_CASE("loss raises N of thermal states") {
  // Thermal N is the isotropic distance at variances (v, v + 1/2), decreasing in v;
  // loss moves v toward 1/4, so the weak gap is negative.
  for (double l : {0.2, 0.5, 0.8}) {
    const double v = 0.75;
    const double vl = l * v + (1 - l) * 0.25;
    const double expect = oracle::isotropic_l1(v, v + 0.5) - oracle::isotropic_l1(vl, vl + 0.5);
    const auto gap = monotonicity_gap_weak(make_thermal(1.0), l, cg, kW);
    CHECK(expect < 0.0);
    CHECK(std::fabs(gap.value - expect) <= gap.err);
  }
}

TEST_CASE("classical states stay below the vacuum value") {
  const auto base = baseline(cg, kW);
  const State states[] = {make_thermal(0.5), make_coherent({1.2, -0.7}), make_thermal_fock(1.0, 60),
                          attenuate_fock(make_thermal_fock(2.0, 80), 0.3), classicalize_fock(make_fock(3))};
  for (const auto& st : states) {
    const auto r = measure_m(st, cg, kW, kDefaultTol, base);
    CHECK(r.m_value <= r.err);
  }
}
