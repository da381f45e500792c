#include "qnorm/quantifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qnorm {
namespace {

// Bound on || sum_{m > N} p_m W^{(s)}_m ||_p for truncated mass tau beyond
// cutoff N. Uses ||W_m||_1 <= 2 sqrt(m + 1) (observed ratio ||W_m||_1 / sqrt(m+1)
// stays below 1.01 for m <= 100) at m = 2N + 1, |W^{(s)}_m| <= 2 for s <= 0,
// and ||g||_p <= ||g||_inf^{1 - 1/p} ||g||_1^{1/p}.
double truncation_norm_bound(double tau, std::size_t cutoff, double p) {
  if (tau <= 0.0) return 0.0;
  const double l1 = tau * 2.0 * std::sqrt(2.0 * static_cast<double>(cutoff) + 2.0);
  if (p == 1.0) return l1;
  return std::pow(2.0 * tau, 1.0 - 1.0 / p) * std::pow(l1, 1.0 / p);
}

// I^{1/p} with error propagated; refines the integral until the root meets tol.
template <class Integrate>
NormEstimate pth_root(Integrate&& integrate, double p, double tol, double extra_err) {
  double tol_i = std::max(tol - extra_err, 0.5 * tol);
  for (int attempt = 0; attempt < 6; ++attempt) {
    const IntegralEstimate est = integrate(tol_i);
    if (p == 1.0) return {est.value, est.abs_error_bound + extra_err};
    const double lo = std::max(est.value - est.abs_error_bound, 0.0);
    const double value = std::pow(std::max(est.value, 0.0), 1.0 / p);
    // x^{1/p} is concave: |I^{1/p} - J^{1/p}| <= |I - J| / (p min(I,J)^{1 - 1/p}),
    // and never more than |I - J|^{1/p}.
    double err = std::pow(est.abs_error_bound, 1.0 / p);
    if (lo > 0.0) err = std::min(err, est.abs_error_bound / (p * std::pow(lo, 1.0 - 1.0 / p)));
    err += extra_err;
    if (err <= tol || attempt == 5) return {value, err};
    tol_i *= std::max(0.01, 0.5 * (tol - extra_err) / (err - extra_err));
  }
  return {};
}

FockDiagonalState padded_mixture(std::span<const FockDiagonalState> states,
                                 std::span<const double> weights) {
  std::size_t cutoff = 0;
  for (const auto& s : states) cutoff = std::max(cutoff, s.cutoff());
  std::vector<double> w(cutoff + 1, 0.0);
  double tail = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    for (std::size_t n = 0; n <= states[k].cutoff(); ++n) w[n] += weights[k] * states[k].weight(n);
    tail += weights[k] * states[k].tail_mass_bound();
  }
  return FockDiagonalState(std::move(w), tail);
}

void check_simplex(std::size_t count, std::span<const double> weights) {
  if (count == 0 || count != weights.size())
    throw std::invalid_argument("need one weight per state");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw std::invalid_argument("weights must sum to 1");
}

}  // namespace

FunctionalSpec make_functional(double s, double p) {
  if (!(s <= 0.0) || !std::isfinite(s)) throw std::invalid_argument("ordering s must be <= 0");
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("norm order p must be >= 1");
  return {s, p};
}

std::string_view to_string(WitnessKind k) noexcept {
  switch (k) {
    case WitnessKind::gaussian_variance:
      return "gaussian_variance";
    case WitnessKind::wigner_negativity:
      return "wigner_negativity";
  }
  return "unknown";
}

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::classical_consistent:
      return "classical_consistent";
    case Classification::certified_quantum:
      return "certified_quantum";
    case Classification::nogo_instance:
      return "nogo_instance";
  }
  return "unknown";
}

Classification classify(bool witness_quantum, double m_value, double err) noexcept {
  if (witness_quantum && m_value <= 0.0) return Classification::nogo_instance;
  if (m_value > err) return Classification::certified_quantum;
  return Classification::classical_consistent;
}

NormEstimate quantumness_norm(const GaussianState& state, const ChannelSpec& channel,
                              const FunctionalSpec& fn, double tol) {
  const FunctionalSpec f = make_functional(fn.s, fn.p);
  const GaussianState out = apply_channel(state, channel);
  const PlaneProfile profile = wigner_difference_profile(state, out, f.s);
  return pth_root([&](double t) { return integrate_plane_abs_pow(profile, f.p, t); }, f.p, tol, 0.0);
}

RadialProfile difference_profile(const FockDiagonalState& state, const ChannelSpec& channel, double s) {
  const FockDiagonalState out = apply_channel(state, channel);
  return difference(wigner_s_fock_profile(state, s), wigner_s_fock_profile(out, s));
}

NormEstimate quantumness_norm(const FockDiagonalState& state, const ChannelSpec& channel,
                              const FunctionalSpec& fn, double tol) {
  const FunctionalSpec f = make_functional(fn.s, fn.p);
  const FockDiagonalState out = apply_channel(state, channel);
  const RadialProfile profile =
      difference(wigner_s_fock_profile(state, f.s), wigner_s_fock_profile(out, f.s));
  const double trunc = truncation_norm_bound(state.tail_mass_bound(), state.cutoff(), f.p) +
                       truncation_norm_bound(out.tail_mass_bound(), out.cutoff(), f.p);
  return pth_root([&](double t) { return integrate_radial_abs_pow(profile, f.p, t); }, f.p, tol, trunc);
}

NormEstimate quantumness_norm(const State& state, const ChannelSpec& channel,
                              const FunctionalSpec& fn, double tol) {
  return std::visit([&](const auto& s) { return quantumness_norm(s, channel, fn, tol); }, state);
}

double isotropic_l1_distance(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("variances must be positive");
  if (a == b) return 0.0;
  if (a > b) std::swap(a, b);
  const double ratio = a / b;
  return 2.0 * (std::pow(ratio, a / (b - a)) - std::pow(ratio, b / (b - a)));
}

NormEstimate baseline(const ChannelSpec& channel, const FunctionalSpec& fn, double tol) {
  const FunctionalSpec f = make_functional(fn.s, fn.p);
  const GaussianState vac = GaussianState::vacuum();
  const GaussianState out = apply_channel(vac, channel);
  const bool concentric = out.mean()[0] == 0.0 && out.mean()[1] == 0.0;
  const bool isotropic = out.cov().xy == 0.0 && out.cov().xx == out.cov().yy;
  if (f.p == 1.0 && concentric && isotropic) {
    const double shift = -f.s * kVacuumVariance;
    const double closed = isotropic_l1_distance(kVacuumVariance + shift, out.cov().xx + shift);
    const NormEstimate quad = quantumness_norm(vac, channel, f, std::min(tol, 1e-8));
    if (std::fabs(closed - quad.value) > 1e-7)
      throw std::logic_error("baseline closed form and quadrature disagree: " + std::to_string(closed) +
                             " vs " + std::to_string(quad.value));
    return {closed, quad.err};
  }
  return quantumness_norm(vac, channel, f, tol);
}

NormEstimate wigner_negativity(const FockDiagonalState& state, double tol) {
  const RadialProfile w = wigner_s_fock_profile(state, 0.0);
  const double trunc = truncation_norm_bound(state.tail_mass_bound(), state.cutoff(), 1.0);
  const IntegralEstimate est = integrate_radial_abs_pow(w, 1.0, std::max(tol - trunc, 0.5 * tol));
  return {est.value - 1.0, est.abs_error_bound + trunc};
}

QuantifierResult measure_m(const State& state, const ChannelSpec& channel, const FunctionalSpec& fn,
                           double tol) {
  return measure_m(state, channel, fn, tol, baseline(channel, fn, tol));
}

QuantifierResult measure_m(const State& state, const ChannelSpec& channel, const FunctionalSpec& fn,
                           double tol, const NormEstimate& base) {
  QuantifierResult r;
  const NormEstimate n = quantumness_norm(state, channel, fn, tol);
  r.n_value = n.value;
  r.baseline = base.value;
  r.m_value = n.value - base.value;
  r.err = n.err + base.err;
  if (const auto* g = std::get_if<GaussianState>(&state)) {
    r.witness = {WitnessKind::gaussian_variance, min_quadrature_variance(*g), is_quantum_gaussian(*g)};
  } else {
    const NormEstimate neg = wigner_negativity(std::get<FockDiagonalState>(state), tol);
    r.witness = {WitnessKind::wigner_negativity, neg.value, neg.value > kNegativityThreshold};
  }
  r.classification = classify(r.witness.quantum, r.m_value, r.err);
  return r;
}

Gap convexity_gap(std::span<const FockDiagonalState> states, std::span<const double> weights,
                  const ChannelSpec& channel, const FunctionalSpec& fn, double tol) {
  check_simplex(states.size(), weights);
  Gap g;
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (weights[k] == 0.0) continue;
    const NormEstimate n = quantumness_norm(states[k], channel, fn, tol);
    g.value += weights[k] * n.value;
    g.err += weights[k] * n.err;
  }
  const NormEstimate mix = quantumness_norm(padded_mixture(states, weights), channel, fn, tol);
  g.value -= mix.value;
  g.err += mix.err;
  return g;
}

Gap convexity_gap(std::span<const GaussianState> states, std::span<const double> weights,
                  const ChannelSpec&, const FunctionalSpec&, double) {
  check_simplex(states.size(), weights);
  std::size_t nonzero = 0;
  for (double w : weights) nonzero += w > 0.0 ? 1 : 0;
  if (nonzero > 1) throw UnsupportedInput("mixtures of Gaussian states are not Gaussian");
  return {0.0, 0.0};
}

Gap monotonicity_gap_weak(const State& state, double l, const ChannelSpec& channel,
                          const FunctionalSpec& fn, double tol) {
  if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("transmittivity must lie in (0, 1)");
  const NormEstimate before = quantumness_norm(state, channel, fn, tol);
  const ChannelSpec loss = ChannelSpec::attenuator(l);
  const State after = std::visit([&](const auto& s) -> State { return apply_channel(s, loss); }, state);
  const NormEstimate n_after = quantumness_norm(after, channel, fn, tol);
  return {before.value - n_after.value, before.err + n_after.err};
}

Gap monotonicity_gap_strong(const State& state, double l, const ChannelSpec& channel,
                            const FunctionalSpec& fn, double tol) {
  if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("transmittivity must lie in (0, 1)");
  const auto* fock = std::get_if<FockDiagonalState>(&state);
  if (fock == nullptr)
    throw UnsupportedInput("photon-counting loss branches of Gaussian states are not Gaussian");
  const NormEstimate before = quantumness_norm(*fock, channel, fn, tol);
  Gap g{before.value, before.err};
  for (const auto& branch : loss_kraus_decomposition(*fock, l)) {
    const NormEstimate n = quantumness_norm(branch.state, channel, fn, tol);
    g.value -= branch.probability * n.value;
    g.err += branch.probability * n.err;
  }
  return g;
}

}  // namespace qnorm
