#include "qnorm/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qnorm/kernels.hpp"

namespace qnorm {
namespace {

double log_binom(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Binomial pmf C(n,m) l^m (1-l)^{n-m}; exact edge cases for l in {0, 1}.
double loss_pmf(std::size_t n, std::size_t m, double l) {
  if (m > n) return 0.0;
  if (l == 1.0) return m == n ? 1.0 : 0.0;
  if (l == 0.0) return m == 0 ? 1.0 : 0.0;
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return std::exp(log_binom(nd, md) + md * std::log(l) + (nd - md) * std::log1p(-l));
}

double gain_pmf(std::size_t n, std::size_t m, double g) {
  if (m < n) return 0.0;
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return std::exp(log_binom(md, nd) - (nd + 1.0) * std::log(g) + (md - nd) * std::log1p(-1.0 / g));
}

// Upper bound on sum_{m > out_cutoff} P(m|n). Term ratios
// (m+1)/(m+1-n) (1 - 1/G) decrease in m, so once a ratio r < 1 is reached the
// remainder after term t is at most t r / (1 - r).
double gain_tail(std::size_t n, std::size_t out_cutoff, double g) {
  std::size_t m = std::max(out_cutoff + 1, n);
  double t = gain_pmf(n, m, g);
  double sum = 0.0;
  const double base = 1.0 - 1.0 / g;
  for (int it = 0; it < 100000; ++it) {
    sum += t;
    const double md = static_cast<double>(m);
    const double r = (md + 1.0) / (md + 1.0 - static_cast<double>(n)) * base;
    if (r < 1.0) {
      const double rest = t * r / (1.0 - r);
      if (rest <= 1e-3 * sum || rest < 1e-300) return sum + rest;
    }
    t *= r;
    ++m;
  }
  return sum + t / (1.0 - base);
}

double truncated_mass(const FockDiagonalState& state, std::size_t out_cutoff, double g) {
  double acc = 0.0;
  for (std::size_t n = 0; n < state.weights().size(); ++n) {
    const double p = state.weights()[n];
    if (p > 0.0) acc += p * gain_tail(n, out_cutoff, g);
  }
  return acc;
}

std::size_t base_cutoff(std::size_t in_cutoff, double g) {
  return static_cast<std::size_t>(std::ceil(g * static_cast<double>(in_cutoff + 1)));
}

}  // namespace

MarginError::MarginError(int requested, int required)
    : std::runtime_error("amplifier margin " + std::to_string(requested) +
                         " cannot certify truncated mass below 1e-10; required margin " +
                         std::to_string(required)),
      requested_(requested),
      required_(required) {}

FockDiagonalState::FockDiagonalState(std::vector<double> weights, double tail_mass_bound)
    : weights_(std::move(weights)), tail_(tail_mass_bound) {
  if (weights_.empty()) throw std::invalid_argument("Fock state needs at least one weight");
  for (double w : weights_)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("Fock weights must be finite and nonnegative");
  if (!(tail_ >= 0.0)) throw std::invalid_argument("tail mass bound must be >= 0");
}

double FockDiagonalState::mean_photon_number() const noexcept {
  double acc = 0.0;
  for (std::size_t n = 0; n < weights_.size(); ++n) acc += static_cast<double>(n) * weights_[n];
  return acc;
}

double FockDiagonalState::total_mass() const noexcept {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

FockDiagonalState make_mixture(std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("mixture needs at least one weight");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("mixture weights must be finite and nonnegative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw std::invalid_argument("mixture weights must sum to 1");
  std::vector<double> w(weights.begin(), weights.end());
  for (double& x : w) x /= sum;
  return FockDiagonalState(std::move(w), 0.0);
}

FockDiagonalState make_fock(std::size_t n) {
  std::vector<double> w(n + 1, 0.0);
  w[n] = 1.0;
  return FockDiagonalState(std::move(w), 0.0);
}

FockDiagonalState make_thermal_fock(double nbar, std::size_t cutoff) {
  if (!(nbar >= 0.0)) throw std::invalid_argument("nbar must be >= 0");
  const double x = nbar / (1.0 + nbar);
  std::vector<double> w(cutoff + 1);
  double t = 1.0 / (1.0 + nbar);
  for (auto& v : w) {
    v = t;
    t *= x;
  }
  return FockDiagonalState(std::move(w), std::pow(x, static_cast<double>(cutoff + 1)));
}

std::vector<std::vector<double>> attenuator_transitions(std::size_t cutoff, double l) {
  if (!(l > 0.0 && l <= 1.0)) throw std::invalid_argument("transmittivity must lie in (0, 1]");
  std::vector<std::vector<double>> t(cutoff + 1, std::vector<double>(cutoff + 1, 0.0));
  for (std::size_t n = 0; n <= cutoff; ++n)
    for (std::size_t m = 0; m <= n; ++m) t[m][n] = loss_pmf(n, m, l);
  return t;
}

std::vector<std::vector<double>> amplifier_transitions(std::size_t in_cutoff,
                                                       std::size_t out_cutoff, double g) {
  if (!(g >= 1.0)) throw std::invalid_argument("gain must be >= 1");
  std::vector<std::vector<double>> t(out_cutoff + 1, std::vector<double>(in_cutoff + 1, 0.0));
  for (std::size_t n = 0; n <= in_cutoff; ++n)
    for (std::size_t m = n; m <= out_cutoff; ++m)
      t[m][n] = g == 1.0 ? (m == n ? 1.0 : 0.0) : gain_pmf(n, m, g);
  return t;
}

FockDiagonalState attenuate_fock(const FockDiagonalState& state, double l) {
  if (!(l > 0.0 && l <= 1.0)) throw std::invalid_argument("transmittivity must lie in (0, 1]");
  if (l == 1.0) return state;
  const auto& p = state.weights();
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (p[n] == 0.0) continue;
    for (std::size_t m = 0; m <= n; ++m) out[m] += p[n] * loss_pmf(n, m, l);
  }
  return FockDiagonalState(std::move(out), state.tail_mass_bound());
}

FockDiagonalState amplify_fock(const FockDiagonalState& state, double g, std::optional<int> margin) {
  if (!(g >= 1.0) || !std::isfinite(g)) throw std::invalid_argument("gain must be >= 1");
  if (g == 1.0) return state;
  if (margin && *margin < 0) throw std::invalid_argument("margin must be >= 0");

  const std::size_t base = base_cutoff(state.cutoff(), g);
  auto fits = [&](std::size_t mg) { return truncated_mass(state, base + mg, g) < kAmplifierTailLimit; };

  // Smallest sufficient margin: doubling then bisection.
  auto required = [&]() {
    std::size_t hi = 1;
    while (!fits(hi)) hi *= 2;
    std::size_t lo = 0;
    if (fits(0)) return std::size_t{0};
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (fits(mid))
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  };

  std::size_t use = 0;
  if (margin) {
    use = static_cast<std::size_t>(*margin);
    if (!fits(use)) throw MarginError(*margin, static_cast<int>(required()));
  } else {
    use = required();
  }

  const std::size_t out_cutoff = base + use;
  const auto& p = state.weights();
  std::vector<double> out(out_cutoff + 1, 0.0);
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (p[n] == 0.0) continue;
    for (std::size_t m = n; m <= out_cutoff; ++m) out[m] += p[n] * gain_pmf(n, m, g);
  }
  const double lost = truncated_mass(state, out_cutoff, g);
  return FockDiagonalState(std::move(out), state.tail_mass_bound() + lost);
}

FockDiagonalState classicalize_fock(const FockDiagonalState& state, std::optional<int> margin) {
  return amplify_fock(attenuate_fock(state, 0.5), 2.0, margin);
}

FockDiagonalState apply_channel(const FockDiagonalState& state, const ChannelSpec& channel) {
  FockDiagonalState out = state;
  for (const auto& element : channel.elements()) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, Attenuator>) {
            out = attenuate_fock(out, e.transmittivity);
          } else if constexpr (std::is_same_v<T, Amplifier>) {
            out = amplify_fock(out, e.gain);
          } else if constexpr (std::is_same_v<T, Rotation>) {
            // diagonal states are phase invariant
          } else {
            if (e.alpha != std::complex<double>{0.0, 0.0})
              throw std::invalid_argument("displacement does not preserve Fock-diagonal states");
          }
        },
        element);
  }
  return out;
}

std::vector<LossBranch> loss_kraus_decomposition(const FockDiagonalState& state, double l) {
  if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("transmittivity must lie in (0, 1)");
  const auto& p = state.weights();
  const std::size_t cutoff = state.cutoff();
  std::vector<LossBranch> branches;
  for (std::size_t k = 0; k <= cutoff; ++k) {
    // k photons lost: n -> n - k with amplitude C(n,k) (1-l)^k l^{n-k}.
    std::vector<double> w(cutoff - k + 1, 0.0);
    double pk = 0.0;
    for (std::size_t n = k; n <= cutoff; ++n) {
      if (p[n] == 0.0) continue;
      const double v = p[n] * loss_pmf(n, n - k, l);
      w[n - k] = v;
      pk += v;
    }
    if (pk <= 0.0) continue;
    for (double& x : w) x /= pk;
    // Trim trailing zeros so cutoffs stay tight.
    while (w.size() > 1 && w.back() == 0.0) w.pop_back();
    branches.push_back({pk, FockDiagonalState(std::move(w), 0.0)});
  }
  return branches;
}

namespace {

struct FockSeries {
  double q;
  double y_scale;
  double amp;
  double rate;
};

FockSeries series_params(double s) {
  if (!(s < 1.0)) throw std::invalid_argument("ordering s must be < 1");
  return {(s + 1.0) / (s - 1.0), 4.0 / ((1.0 - s) * (1.0 - s)), 2.0 / (1.0 - s), 2.0 / (1.0 - s)};
}

}  // namespace

RadialProfile wigner_s_fock_profile(const FockDiagonalState& state, double s) {
  const FockSeries fs = series_params(s);
  const auto& p = state.weights();

  // |sum p_n M_n(y)| <= sum_k y^k / k! sum_n p_n C(n,k) |q|^{n-k}.
  const double aq = std::fabs(fs.q);
  std::vector<double> poly(p.size(), 0.0);
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (p[n] == 0.0) continue;
    for (std::size_t k = 0; k <= n; ++k) {
      double qpow;
      if (k == n) {
        qpow = 0.0;  // log 1
      } else if (aq == 0.0) {
        continue;
      } else {
        qpow = static_cast<double>(n - k) * std::log(aq);
      }
      const double kd = static_cast<double>(k);
      poly[k] += p[n] * std::exp(log_binom(static_cast<double>(n), kd) + qpow +
                                 kd * std::log(fs.y_scale) - std::lgamma(kd + 1.0));
    }
  }
  for (double& c : poly) c *= fs.amp;

  RadialProfile profile;
  profile.decay.add(DecayTerm{std::move(poly), fs.rate});
  profile.eval = [coeffs = p, fs](std::span<const double> radii, std::span<double> out) {
    kernels::LaguerreSeries series{coeffs, fs.q, fs.y_scale, fs.amp, fs.rate};
    kernels::laguerre_series(radii, series, out);
  };
  return profile;
}

double wigner_s_fock(const FockDiagonalState& state, double s, double radius) {
  const FockSeries fs = series_params(s);
  const double r[1] = {radius};
  double out[1] = {0.0};
  kernels::laguerre_series(r, {state.weights(), fs.q, fs.y_scale, fs.amp, fs.rate}, out);
  return out[0];
}

}  // namespace qnorm
