#pragma once
// Photon-number-diagonal states on a truncated Fock space.

#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qnorm/channel.hpp"
#include "qnorm/profile.hpp"

namespace qnorm {

// Largest probability mass an amplifier may truncate away.
inline constexpr double kAmplifierTailLimit = 1e-10;

// Thrown when an explicit amplifier margin cannot certify the tail limit.
class MarginError : public std::runtime_error {
 public:
  MarginError(int requested, int required);
  int requested_margin() const noexcept { return requested_; }
  int required_margin() const noexcept { return required_; }

 private:
  int requested_;
  int required_;
};

// diag(p_0, ..., p_N) plus the mass provably lost to truncation:
// sum p_n + tail_mass_bound = 1.
class FockDiagonalState {
 public:
  // Internal constructor: no normalization check, only p_n >= 0.
  FockDiagonalState(std::vector<double> weights, double tail_mass_bound);

  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t cutoff() const noexcept { return weights_.size() - 1; }
  double tail_mass_bound() const noexcept { return tail_; }
  double weight(std::size_t n) const noexcept { return n < weights_.size() ? weights_[n] : 0.0; }
  double mean_photon_number() const noexcept;
  double total_mass() const noexcept;

 private:
  std::vector<double> weights_;
  double tail_;
};

// Weights must be nonnegative and sum to 1 within 1e-9; the result is renormalized.
FockDiagonalState make_mixture(std::span<const double> weights);
FockDiagonalState make_fock(std::size_t n);
// Geometric weights nbar^n / (1 + nbar)^{n+1} up to `cutoff`, exact tail recorded.
FockDiagonalState make_thermal_fock(double nbar, std::size_t cutoff);

// Binomial loss, P(m|n) = C(n,m) l^m (1-l)^{n-m}.
FockDiagonalState attenuate_fock(const FockDiagonalState& state, double transmittivity);

// Quantum-limited amplifier, P(m|n) = C(m,n) G^{-(n+1)} (1 - 1/G)^{m-n}.
// Output cutoff ceil(G (N + 1)) + margin. With no margin the smallest margin
// that keeps the truncated mass below kAmplifierTailLimit is used; an explicit
// margin that cannot do so throws MarginError.
FockDiagonalState amplify_fock(const FockDiagonalState& state, double gain,
                               std::optional<int> margin = std::nullopt);

// Amplifier(2) after Attenuator(1/2).
FockDiagonalState classicalize_fock(const FockDiagonalState& state,
                                    std::optional<int> margin = std::nullopt);

// Applies attenuators, amplifiers and rotations (identity on diagonal states).
// Displacements leave the diagonal family and are rejected.
FockDiagonalState apply_channel(const FockDiagonalState& state, const ChannelSpec& channel);

// Branches of loss conditioned on counting k lost photons in the environment,
// in increasing k; zero-probability branches are dropped.
struct LossBranch {
  double probability;
  FockDiagonalState state;
};
std::vector<LossBranch> loss_kraus_decomposition(const FockDiagonalState& state,
                                                 double transmittivity);

// Column-stochastic transition matrices, T[m][n] = P(m|n).
std::vector<std::vector<double>> attenuator_transitions(std::size_t cutoff, double transmittivity);
std::vector<std::vector<double>> amplifier_transitions(std::size_t in_cutoff,
                                                       std::size_t out_cutoff, double gain);

// s-ordered quasiprobability of the (truncated) state at radius |alpha|, s < 1.
double wigner_s_fock(const FockDiagonalState& state, double s, double radius);

// Same function as a batch radial profile with a certified envelope.
RadialProfile wigner_s_fock_profile(const FockDiagonalState& state, double s);

}  // namespace qnorm
