#pragma once
// Sign-aware adaptive integration of |f|^p over the alpha plane, measure d^2alpha / pi.
//
// The improper integral is truncated at a radius where the decay envelope
// certifies the remainder below tol/10. The remaining interval is cut at every
// located sign change of f, so |f|^p is smooth on each panel, and the panels
// are refined by 15-point Gauss-Kronrod bisection on the |K15 - G7| estimate.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qnorm/profile.hpp"

namespace qnorm {

struct IntegralEstimate {
  double value = 0.0;
  double abs_error_bound = 0.0;
  std::size_t subdivisions = 0;
  double truncation_radius = 0.0;
};

// Requested tolerance not reached within the subdivision/angle budget.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, IntegralEstimate best)
      : std::runtime_error(what), best_(best) {}
  const IntegralEstimate& best_estimate() const noexcept { return best_; }

 private:
  IntegralEstimate best_;
};

class RootBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  std::size_t max_subdivisions = 20000;
  // Uniform samples used to bracket sign changes on [0, R].
  std::size_t scan_points = 1024;
  std::size_t max_roots = 512;
  // Angular trapezoid rule for planar integrands, doubled until converged.
  std::size_t min_angles = 32;
  std::size_t max_angles = 16384;
};

// Sign changes of f on [lo, hi], bracketed on a uniform scan of `scan_points`
// intervals and bisected to width 1e-12. Returns the bracket midpoints in
// increasing order. Pairs of roots closer than the scan spacing can be missed.
std::vector<double> locate_sign_changes(const RadialEval& f, double lo, double hi,
                                        std::size_t max_roots, std::size_t scan_points = 1024);

// int d^2alpha/pi |f(|alpha|)|^p = int_0^inf 2 rho |f(rho)|^p d rho.
IntegralEstimate integrate_radial_abs_pow(const RadialProfile& f, double p, double tol,
                                          const QuadratureOptions& options = {});

// int d^2alpha/pi |f(alpha)|^p, in polar coordinates of the profile's frame.
IntegralEstimate integrate_plane_abs_pow(const PlaneProfile& f, double p, double tol,
                                         const QuadratureOptions& options = {});

}  // namespace qnorm
