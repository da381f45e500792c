#pragma once
// Norm-based quantumness: N = || W^{(s)}_rho - W^{(s)}_{C(rho)} ||_p over the
// alpha plane (measure d^2alpha/pi), its coherent-state baseline N(|0>), the
// measure M = N - N(|0>), and numerical gaps for the resource-theory axioms.

#include <span>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "qnorm/channel.hpp"
#include "qnorm/fock.hpp"
#include "qnorm/gaussian.hpp"
#include "qnorm/quadrature.hpp"

namespace qnorm {

inline constexpr double kDefaultTol = 1e-6;

// Wigner negativity above this counts as a quantumness witness.
inline constexpr double kNegativityThreshold = 1e-3;

// Input outside what an engine can represent (Gaussian mixtures, displaced
// Fock states, photon counting on Gaussian states).
class UnsupportedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// s-ordered quasiprobability functional and the norm order.
struct FunctionalSpec {
  double s = 0.0;
  double p = 1.0;
};

// Throws std::invalid_argument unless s <= 0 and p >= 1.
FunctionalSpec make_functional(double s, double p);

enum class WitnessKind { gaussian_variance, wigner_negativity };
enum class Classification { classical_consistent, certified_quantum, nogo_instance };

std::string_view to_string(WitnessKind k) noexcept;
std::string_view to_string(Classification c) noexcept;

struct QuantumWitness {
  WitnessKind kind = WitnessKind::gaussian_variance;
  // Minimum quadrature variance (Gaussian) or Wigner negativity (Fock).
  double value = 0.0;
  bool quantum = false;
};

struct NormEstimate {
  double value = 0.0;
  double err = 0.0;
};

struct QuantifierResult {
  double n_value = 0.0;
  // Error budget of m_value: quadrature error of N plus that of the baseline.
  double err = 0.0;
  double baseline = 0.0;
  double m_value = 0.0;
  QuantumWitness witness;
  Classification classification = Classification::classical_consistent;
};

// nogo_instance iff witness quantum and m <= 0; certified_quantum iff m > err.
Classification classify(bool witness_quantum, double m_value, double err) noexcept;

using State = std::variant<GaussianState, FockDiagonalState>;

// N with err <= tol. Gaussian inputs use the planar integrator, Fock-diagonal
// inputs the radial one.
NormEstimate quantumness_norm(const GaussianState& state, const ChannelSpec& channel,
                              const FunctionalSpec& fn, double tol = kDefaultTol);
NormEstimate quantumness_norm(const FockDiagonalState& state, const ChannelSpec& channel,
                              const FunctionalSpec& fn, double tol = kDefaultTol);
NormEstimate quantumness_norm(const State& state, const ChannelSpec& channel,
                              const FunctionalSpec& fn, double tol = kDefaultTol);

// L1 distance of two concentric isotropic unit-normalized Gaussians with
// per-axis variances a and b: 2 [ (a/b)^{a/(b-a)} - (a/b)^{b/(b-a)} ].
double isotropic_l1_distance(double a, double b);

// N(|0>). When the channel maps the vacuum to a concentric isotropic Gaussian
// and p = 1 (the classicalizer with s = 0 among them) the closed form is
// returned after checking it against quadrature to 1e-7; otherwise quadrature.
NormEstimate baseline(const ChannelSpec& channel, const FunctionalSpec& fn, double tol = kDefaultTol);

// int |W| - 1 of a diagonal state, by radial quadrature.
NormEstimate wigner_negativity(const FockDiagonalState& state, double tol = kDefaultTol);

QuantifierResult measure_m(const State& state, const ChannelSpec& channel, const FunctionalSpec& fn,
                           double tol = kDefaultTol);
// Reuses a precomputed baseline.
QuantifierResult measure_m(const State& state, const ChannelSpec& channel, const FunctionalSpec& fn,
                           double tol, const NormEstimate& base);

struct Gap {
  double value = 0.0;
  // Accumulated quadrature error of every N entering the gap.
  double err = 0.0;
};

// sum_k w_k N(rho_k) - N(sum_k w_k rho_k); >= -err for a convex N.
Gap convexity_gap(std::span<const FockDiagonalState> states, std::span<const double> weights,
                  const ChannelSpec& channel, const FunctionalSpec& fn, double tol = kDefaultTol);
// The Gaussian family is not closed under mixing.
Gap convexity_gap(std::span<const GaussianState> states, std::span<const double> weights,
                  const ChannelSpec& channel, const FunctionalSpec& fn, double tol = kDefaultTol);

// N(rho) - N(E_l(rho)).
Gap monotonicity_gap_weak(const State& state, double transmittivity, const ChannelSpec& channel,
                          const FunctionalSpec& fn, double tol = kDefaultTol);
// N(rho) - sum_k p_k N(rho_k) over the photon-counting branches of E_l.
// Fock-diagonal inputs only.
Gap monotonicity_gap_strong(const State& state, double transmittivity, const ChannelSpec& channel,
                            const FunctionalSpec& fn, double tol = kDefaultTol);

// The difference integrand W^{(s)}_rho - W^{(s)}_{C(rho)} for a diagonal state.
RadialProfile difference_profile(const FockDiagonalState& state, const ChannelSpec& channel, double s);

}  // namespace qnorm
