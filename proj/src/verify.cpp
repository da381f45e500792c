#include "qnorm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "qnorm/experiments.hpp"
#include "qnorm/kernels.hpp"
#include "qnorm/quadrature.hpp"

namespace qnorm::verify {
namespace {

using experiments::CounterRng;

// Sequential draws from the counter-based generator.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}
  double uniform() { return rng_.uniform(next_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::vector<double> simplex(std::size_t k) {
    std::vector<double> cuts(k - 1);
    for (auto& c : cuts) c = uniform();
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> w(k);
    double prev = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      w[i] = cuts[i] - prev;
      prev = cuts[i];
    }
    w[k - 1] = 1.0 - prev;
    return w;
  }

 private:
  CounterRng rng_;
  std::uint64_t next_ = 0;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[192];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Thermal state truncated where the geometric tail drops below 1e-14.
FockDiagonalState thermal_fock(double nbar) {
  const double x = nbar / (nbar + 1.0);
  const auto cutoff = static_cast<std::size_t>(std::ceil(std::log(1e-14) / std::log(x)));
  return make_thermal_fock(nbar, cutoff);
}

// Phase-averaged coherent state, diag Poisson(mu).
FockDiagonalState poisson_fock(double mu) {
  std::vector<double> w;
  double term = std::exp(-mu);
  double sum = 0.0;
  std::size_t n = 0;
  while (n < 10 || term > 1e-16 || static_cast<double>(n) < mu) {
    w.push_back(term);
    sum += term;
    ++n;
    term *= mu / static_cast<double>(n);
  }
  double tail = 0.0;
  for (std::size_t k = 0; k < 200 && term > 0.0; ++k) {
    tail += term;
    ++n;
    term *= mu / static_cast<double>(n);
  }
  return FockDiagonalState(std::move(w), tail + 1e-16);
}

FockDiagonalState mixture3(double p0, double p1, double p2) {
  const double w[] = {p0, p1, p2};
  return make_mixture(w);
}

struct NamedState {
  std::string name;
  State state;
};

std::vector<NamedState> battery() {
  return {
      {"fock0", make_fock(0)},
      {"fock1", make_fock(1)},
      {"fock2", make_fock(2)},
      {"mix_0.35_0.55_0.10", mixture3(0.35, 0.55, 0.10)},
      {"thermal_fock_0.5", thermal_fock(0.5)},
      {"vacuum", GaussianState::vacuum()},
      {"sqth_1_0.7", make_squeezed_thermal(1.0, 0.7)},
      {"sqvac_0.5", make_squeezed_thermal(0.0, 0.5, 0.4)},
      {"coherent_1-0.5i", make_coherent({1.0, -0.5})},
      {"thermal_1", make_thermal(1.0)},
  };
}

const ChannelSpec& cg() {
  static const ChannelSpec c = ChannelSpec::classicalizer();
  return c;
}

constexpr FunctionalSpec kWigner{0.0, 1.0};

// --- axioms -----------------------------------------------------------------

CheckResult check_convexity(double tol) {
  std::vector<FockDiagonalState> pool = {make_fock(0),       make_fock(1),      make_fock(2),
                                         make_fock(3),       thermal_fock(0.3), thermal_fock(1.0),
                                         mixture3(0.35, 0.55, 0.10), classicalize_fock(make_fock(1))};
  Draws d(0xC0FFEE);
  int failures = 0;
  double worst = INFINITY;
  auto run = [&](std::vector<FockDiagonalState> states, std::vector<double> weights) {
    const Gap g = convexity_gap(states, weights, cg(), kWigner, tol);
    worst = std::min(worst, g.value + g.err);
    if (g.value < -g.err) ++failures;
  };
  run({make_fock(0), make_fock(1)}, {0.5, 0.5});
  run({make_fock(1), make_fock(2)}, {0.3, 0.7});
  run({make_fock(2)}, {1.0});
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = 2 + static_cast<std::size_t>(d.uniform() * 3.0);
    std::vector<FockDiagonalState> states;
    for (std::size_t j = 0; j < k; ++j)
      states.push_back(pool[static_cast<std::size_t>(d.uniform() * pool.size()) % pool.size()]);
    run(std::move(states), d.simplex(k));
  }
  return {"convexity", failures == 0,
          fmt("53 mixtures; min(gap + err) = %.3g; failures %.0f", worst, failures)};
}

CheckResult check_invariance(double tol) {
  Draws d(0x1A7A);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const GaussianState st =
        make_squeezed_thermal(d.uniform(0.0, 2.0), d.uniform(0.0, 1.2), d.uniform(0.0, std::numbers::pi));
    const std::complex<double> alpha{d.uniform(-2.0, 2.0), d.uniform(-2.0, 2.0)};
    const double angle = d.uniform(-std::numbers::pi, std::numbers::pi);
    const double n0 = quantumness_norm(st, cg(), kWigner, tol).value;
    const double nd = quantumness_norm(apply_channel(st, ChannelSpec::displacement(alpha)), cg(), kWigner, tol).value;
    const double nr = quantumness_norm(apply_channel(st, ChannelSpec::rotation(angle)), cg(), kWigner, tol).value;
    worst = std::max({worst, std::fabs(nd - n0), std::fabs(nr - n0)});
  }
  return {"invariance", worst <= 2.0 * tol, fmt("20 states; max |dN| = %.3g (limit %.3g)", worst, 2.0 * tol)};
}

std::vector<CheckResult> check_monotonicity(double tol) {
  struct Tally {
    double worst = INFINITY;
    std::vector<std::string> violators;
    void add(const std::string& where, double slack) {
      worst = std::min(worst, slack);
      if (slack < 0.0 && std::find(violators.begin(), violators.end(), where) == violators.end())
        violators.push_back(where);
    }
    std::string detail(const char* what) const {
      std::string d = fmt(what, worst);
      if (violators.empty()) return d + "; no violations";
      d += "; violated by";
      for (const auto& v : violators) d += " " + v;
      return d;
    }
  };
  Tally weak, strong, order;
  for (const auto& [name, state] : battery()) {
    for (double l : {0.2, 0.5, 0.8}) {
      const std::string where = name + "@" + fmt("%.1f", l);
      const Gap w = monotonicity_gap_weak(state, l, cg(), kWigner, tol);
      weak.add(where, w.value + w.err);
      if (!std::holds_alternative<FockDiagonalState>(state)) continue;
      const Gap s = monotonicity_gap_strong(state, l, cg(), kWigner, tol);
      strong.add(where, s.value + s.err);
      // Branch averaging is bounded by the averaged state through convexity.
      order.add(where, w.value + w.err + s.err - s.value);
    }
  }
  return {
      {"monotonicity_weak", weak.violators.empty(), weak.detail("min(gap + err) = %.3g")},
      {"monotonicity_strong", strong.violators.empty(), strong.detail("min(gap + err) = %.3g")},
      {"strong_below_weak", order.violators.empty(), order.detail("min(weak + err - strong) = %.3g")},
  };
}

CheckResult check_classical_bound(double tol) {
  const NormEstimate base = baseline(cg(), kWigner, tol);
  const std::vector<NamedState> classical = {
      {"thermal_0.5", make_thermal(0.5)},
      {"thermal_1", make_thermal(1.0)},
      {"thermal_2", make_thermal(2.0)},
      {"thermal_fock_0.5", thermal_fock(0.5)},
      {"thermal_fock_1", thermal_fock(1.0)},
      {"coherent_1.2-0.7i", make_coherent({1.2, -0.7})},
      {"coherent_0.3i", make_coherent({0.0, 0.3})},
      {"poisson_1.5", poisson_fock(1.5)},
      {"poisson_0.4", poisson_fock(0.4)},
      {"amplified_vacuum", apply_channel(GaussianState::vacuum(), ChannelSpec::amplifier(1.7))},
      {"amplified_vacuum_fock", amplify_fock(make_fock(0), 1.7)},
      {"attenuated_thermal_fock", attenuate_fock(thermal_fock(1.0), 0.4)},
      {"classicalized_fock2", classicalize_fock(make_fock(2))},
      {"classicalized_sqvac", apply_channel(make_squeezed_thermal(0.0, 0.8), cg())},
  };
  double worst = -INFINITY;
  std::string where;
  int failures = 0;
  for (const auto& [name, state] : classical) {
    const QuantifierResult r = measure_m(state, cg(), kWigner, tol, base);
    if (r.m_value - r.err > worst) {
      worst = r.m_value - r.err;
      where = name;
    }
    if (r.m_value > r.err) ++failures;
  }
  return {"classical_bound", failures == 0,
          fmt("%.0f states; max(m - err) = %.3g", static_cast<double>(classical.size()), worst) + " at " + where};
}

CheckResult check_nogo(double tol) {
  const QuantifierResult g = measure_m(make_squeezed_thermal(1.0, 0.7), cg(), kWigner, tol);
  const QuantifierResult f = measure_m(mixture3(0.35, 0.55, 0.10), cg(), kWigner, tol);
  const bool ok = g.classification == Classification::nogo_instance &&
                  f.classification == Classification::nogo_instance;
  return {"nogo_existence", ok,
          fmt("sqth(1,0.7) m = %.4g; fock(0.35,0.55,0.10) m = %.4g, negativity %.4g", g.m_value, f.m_value,
              f.witness.value)};
}

// --- oracles ----------------------------------------------------------------

CheckResult check_sshift_fock() {
  double worst = 0.0;
  for (std::size_t n = 0; n <= 5; ++n) {
    const FockDiagonalState in = make_fock(n);
    const FockDiagonalState out = classicalize_fock(in);
    for (int i = 0; i <= 400; ++i) {
      const double r = 0.01 * i;
      worst = std::max(worst, std::fabs(wigner_s_fock(out, 0.0, r) - wigner_s_fock(in, -2.0, r)));
    }
  }
  return {"sshift_fock", worst <= 1e-6, fmt("n <= 5, r in [0, 4]; sup diff %.3g", worst)};
}

CheckResult check_sshift_gaussian() {
  double worst = 0.0;
  const GaussianState states[] = {make_squeezed_thermal(1.0, 0.7, 0.3), make_coherent({0.5, 1.0}),
                                  make_squeezed_thermal(0.0, 1.1, -1.0)};
  for (const auto& st : states) {
    const GaussianState out = apply_channel(st, cg());
    for (int i = -20; i <= 20; ++i)
      for (int j = -20; j <= 20; ++j) {
        const std::complex<double> z{0.15 * i, 0.15 * j};
        worst = std::max(worst, std::fabs(wigner_s_gaussian(out, 0.0, z) - wigner_s_gaussian(st, -2.0, z)));
      }
  }
  return {"sshift_gaussian", worst <= 1e-12, fmt("3 states, 41x41 grid; sup diff %.3g", worst)};
}

CheckResult check_cross_engine() {
  double worst = 0.0;
  for (double nbar : {0.3, 1.0, 2.0}) {
    const GaussianState g = make_thermal(nbar);
    const FockDiagonalState f = thermal_fock(nbar);
    const GaussianState gc = apply_channel(g, cg());
    const FockDiagonalState fc = classicalize_fock(f);
    for (double s : {0.0, -0.5, -1.0, -2.0})
      for (int i = 0; i <= 200; ++i) {
        const double r = 0.02 * i;
        worst = std::max(worst, std::fabs(wigner_s_gaussian(g, s, r) - wigner_s_fock(f, s, r)));
        worst = std::max(worst, std::fabs(wigner_s_gaussian(gc, s, r) - wigner_s_fock(fc, s, r)));
      }
  }
  return {"cross_engine_thermal", worst <= 1e-8, fmt("thermal + classicalized; sup diff %.3g", worst)};
}

CheckResult check_baselines(double tol) {
  const double closed0 = 4.0 * std::sqrt(3.0) / 9.0;
  const NormEstimate b0 = baseline(cg(), kWigner, tol);
  const NormEstimate q0 = quantumness_norm(GaussianState::vacuum(), cg(), kWigner, std::min(tol, 1e-8));
  const NormEstimate f0 = quantumness_norm(make_fock(0), cg(), kWigner, std::min(tol, 1e-8));
  // s = -1: variances 1/2 and 1, 2 (1/2 - 1/4) = 1/2.
  const NormEstimate q1 = quantumness_norm(GaussianState::vacuum(), cg(), FunctionalSpec{-1.0, 1.0},
                                           std::min(tol, 1e-8));
  const double d = std::max({std::fabs(b0.value - closed0), std::fabs(q0.value - closed0),
                             std::fabs(f0.value - closed0), std::fabs(q1.value - 0.5)});
  return {"closed_form_baselines", d <= 1e-7,
          fmt("s=0 closed %.10f quad %.10f; max dev %.3g", closed0, q0.value, d)};
}

CheckResult check_normalization(double tol) {
  double worst = 0.0;
  for (std::size_t n = 0; n <= 5; ++n) {
    const IntegralEstimate e = integrate_radial_abs_pow(wigner_s_fock_profile(make_fock(n), -1.0), 1.0, tol);
    worst = std::max(worst, std::fabs(e.value - 1.0) - e.abs_error_bound);
  }
  for (double nbar : {0.5, 2.0}) {
    const FockDiagonalState f = thermal_fock(nbar);
    for (double s : {0.0, -1.0}) {
      const IntegralEstimate e = integrate_radial_abs_pow(wigner_s_fock_profile(f, s), 1.0, tol);
      worst = std::max(worst, std::fabs(e.value - 1.0) - e.abs_error_bound);
    }
  }
  return {"normalization", worst <= 0.0, fmt("max(|I - 1| - err) = %.3g", worst)};
}

CheckResult check_sshift_norm(double tol) {
  double worst = -INFINITY;
  {
    const GaussianState st = make_squeezed_thermal(1.0, 0.7, 0.2);
    const NormEstimate n = quantumness_norm(st, cg(), kWigner, tol);
    const IntegralEstimate direct = integrate_plane_abs_pow(wigner_difference_profile(st, 0.0, st, -2.0), 1.0, tol);
    worst = std::max(worst, std::fabs(n.value - direct.value) - n.err - direct.abs_error_bound);
  }
  for (std::size_t k = 1; k <= 2; ++k) {
    const FockDiagonalState st = make_fock(k);
    const NormEstimate n = quantumness_norm(st, cg(), kWigner, tol);
    const IntegralEstimate direct = integrate_radial_abs_pow(
        difference(wigner_s_fock_profile(st, 0.0), wigner_s_fock_profile(st, -2.0)), 1.0, tol);
    // The classicalized state carries up to kAmplifierTailLimit of truncated mass.
    worst = std::max(worst, std::fabs(n.value - direct.value) - n.err - direct.abs_error_bound - 1e-9);
  }
  return {"sshift_norm", worst <= 0.0, fmt("max(|N - direct| - budget) = %.3g", worst)};
}

CheckResult check_transitions() {
  double worst = 0.0;
  for (double l : {0.2, 0.5, 0.9}) {
    const auto t = attenuator_transitions(12, l);
    for (std::size_t n = 0; n < t[0].size(); ++n) {
      double col = 0.0;
      for (const auto& row : t) {
        if (row[n] < 0.0) worst = INFINITY;
        col += row[n];
      }
      worst = std::max(worst, std::fabs(col - 1.0));
    }
  }
  for (double g : {1.5, 2.0}) {
    const auto t = amplifier_transitions(12, 300, g);
    for (std::size_t n = 0; n < t[0].size(); ++n) {
      double col = 0.0;
      for (const auto& row : t) {
        if (row[n] < 0.0) worst = INFINITY;
        col += row[n];
      }
      worst = std::max(worst, std::fabs(col - 1.0));
    }
  }
  return {"stochastic_transitions", worst <= 1e-12, fmt("max |column sum - 1| = %.3g", worst)};
}

double rel_diff(double a, double b, double scale) { return std::fabs(a - b) / std::max(scale, 1e-300); }

CheckResult check_kernels() {
  if (!kernels::isa_available(kernels::Isa::avx2))
    return {"kernel_equivalence", true, "avx2 unavailable; scalar only"};
  const auto& sc = kernels::detail::table_for(kernels::Isa::scalar);
  const auto& vx = kernels::detail::table_for(kernels::Isa::avx2);
  Draws d(0xA5A5);
  double worst = 0.0;
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    std::vector<double> x(n), y(n), w(n), a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = d.uniform(-700.0, 700.0);
      y[i] = d.uniform(-3.0, 3.0);
      w[i] = d.uniform(0.0, 1.0);
    }
    sc.exp(x.data(), a.data(), n);
    vx.exp(x.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, rel_diff(a[i], b[i], std::fabs(a[i])));

    for (std::size_t i = 0; i < n; ++i) x[i] = d.uniform(-3.0, 3.0);
    const kernels::Gaussian2D g{0.3, -0.2, 2.5, 0.7, 1.1, 0.8};
    std::fill(a.begin(), a.end(), 0.0);
    std::fill(b.begin(), b.end(), 0.0);
    sc.gaussian2d_accumulate(x.data(), y.data(), n, g, 1.0, a.data());
    vx.gaussian2d_accumulate(x.data(), y.data(), n, g, 1.0, b.data());
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, rel_diff(a[i], b[i], g.amp));

    const double coeffs[] = {0.2, 0.3, 0.1, 0.25, 0.15};
    for (double q : {-1.0, -0.5, 0.0}) {
      const kernels::LaguerreSeries s{coeffs, q, 4.0, 2.0, 2.0};
      for (std::size_t i = 0; i < n; ++i) x[i] = std::fabs(x[i]);
      sc.laguerre_series(x.data(), n, s, a.data());
      vx.laguerre_series(x.data(), n, s, b.data());
      // Cancellation in the recurrence is bounded by the unsigned series.
      for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, rel_diff(a[i], b[i], 1e3 * s.amp));
    }
    worst = std::max(worst, rel_diff(sc.weighted_abs_sum(y.data(), w.data(), n),
                                     vx.weighted_abs_sum(y.data(), w.data(), n), static_cast<double>(n)));
    worst = std::max(worst, rel_diff(sc.weighted_sq_sum(y.data(), w.data(), n),
                                     vx.weighted_sq_sum(y.data(), w.data(), n), 9.0 * static_cast<double>(n)));
  }
  return {"kernel_equivalence", worst <= 1e-13, fmt("scalar vs avx2; max rel diff %.3g", worst)};
}

}  // namespace

Suite parse_suite(std::string_view name) {
  if (name == "axioms") return Suite::axioms;
  if (name == "oracles") return Suite::oracles;
  if (name == "all") return Suite::all;
  throw std::invalid_argument("unknown suite: " + std::string(name));
}

std::vector<CheckResult> run_axioms(double tol) {
  std::vector<CheckResult> out;
  out.push_back(check_convexity(tol));
  out.push_back(check_invariance(tol));
  for (auto& r : check_monotonicity(tol)) out.push_back(std::move(r));
  out.push_back(check_classical_bound(tol));
  out.push_back(check_nogo(tol));
  return out;
}

std::vector<CheckResult> run_oracles(double tol) {
  return {check_sshift_fock(),      check_sshift_gaussian(),  check_cross_engine(),
          check_baselines(tol),     check_normalization(tol), check_sshift_norm(tol),
          check_transitions(),      check_kernels()};
}

std::vector<CheckResult> run_suite(Suite suite, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  std::vector<CheckResult> out;
  if (suite != Suite::oracles) out = run_axioms(tol);
  if (suite != Suite::axioms)
    for (auto& r : run_oracles(tol)) out.push_back(std::move(r));
  return out;
}

bool write_report(std::ostream& os, const std::vector<CheckResult>& results) {
  std::size_t passed = 0;
  for (const auto& r : results) {
    std::string detail = r.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    os << "check," << r.name << ',' << (r.pass ? "PASS" : "FAIL") << ',' << detail << '\n';
    passed += r.pass ? 1 : 0;
  }
  const bool ok = passed == results.size();
  os << "summary," << passed << ',' << results.size() << ',' << (ok ? "PASS" : "FAIL") << '\n';
  return ok;
}

}  // namespace qnorm::verify
