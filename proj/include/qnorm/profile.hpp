#pragma once
// Phase-space integrands as the quadrature layer sees them: a batch evaluator
// plus an analytic envelope that certifies how fast the function decays.

#include <functional>
#include <span>
#include <vector>

namespace qnorm {

// One envelope term  P(u) * exp(-rate * u),  u = t^2,  P with nonnegative
// coefficients (poly[k] multiplies u^k).
struct DecayTerm {
  std::vector<double> poly;
  double rate = 0.0;
};

// Pointwise bound |f(t)| <= B(t) = sum of DecayTerm envelopes, valid for all t >= 0.
class DecayBound {
 public:
  DecayBound() = default;

  void add(DecayTerm term);
  void add_gaussian(double amplitude, double rate) { add(DecayTerm{{amplitude}, rate}); }
  void append(const DecayBound& other);

  const std::vector<DecayTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  double operator()(double t) const;

  // Upper bound on  int_R^inf 2 t B(t) dt  (exact for the envelope).
  double tail(double radius) const;

  // Every term is nonincreasing for t >= this radius.
  double monotone_radius() const;

  // Smallest R (to bisection precision) beyond the monotone radius with
  // B(R) <= 1 and tail(R) <= target. B <= 1 makes the bound valid for |f|^p, p >= 1.
  double truncation_radius(double target) const;

 private:
  std::vector<DecayTerm> terms_;
};

using RadialEval = std::function<void(std::span<const double> radii, std::span<double> out)>;

// Rotation-symmetric phase-space function, f(alpha) = g(|alpha|).
struct RadialProfile {
  RadialEval eval;
  DecayBound decay;

  double operator()(double radius) const;
};

using PlaneEval = std::function<void(std::span<const double> xs, std::span<const double> ys,
                                     std::span<double> out)>;

// z = center + R(angle) diag(sx, sy) w : maps the unit-scaled frame onto the
// alpha plane. Chosen along the principal axes of the integrand.
struct PlaneFrame {
  double cx = 0.0;
  double cy = 0.0;
  double angle = 0.0;
  double sx = 1.0;
  double sy = 1.0;
};

// General phase-space function with a decay envelope stated in the scaled
// radius |w| of its frame.
struct PlaneProfile {
  PlaneEval eval;
  PlaneFrame frame;
  DecayBound decay;

  double operator()(double x, double y) const;
};

// a - b, with the envelopes added.
RadialProfile difference(RadialProfile a, RadialProfile b);

}  // namespace qnorm
