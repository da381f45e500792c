#pragma once
// Single-mode Gaussian states in the alpha plane.
//
// Conventions: phase space is the alpha plane with measure d^2alpha / pi;
// covariances are per-axis variances of (Re alpha, Im alpha), so the vacuum
// has cov = diag(1/4, 1/4). Every s-ordered quasiprobability integrates to 1
// under that measure.

#include <array>
#include <complex>

#include "qnorm/channel.hpp"
#include "qnorm/profile.hpp"

namespace qnorm {

// Physicality slack on covariance eigenvalues.
inline constexpr double kPhysicalSlack = 1e-12;

// Vacuum per-axis variance.
inline constexpr double kVacuumVariance = 0.25;

// Real symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const noexcept { return xx * yy - xy * xy; }
  double trace() const noexcept { return xx + yy; }
  // Ascending.
  std::array<double, 2> eigenvalues() const noexcept;
  // Angle of the eigenvector belonging to the smaller eigenvalue.
  double minor_axis_angle() const noexcept;
  Sym2 inverse() const;
  Sym2 shifted(double d) const noexcept { return {xx + d, xy, yy + d}; }
  Sym2 scaled(double k) const noexcept { return {k * xx, k * xy, k * yy}; }
  // R(angle) * this * R(angle)^T
  Sym2 rotated(double angle) const noexcept;

  friend bool operator==(const Sym2&, const Sym2&) = default;
};

class GaussianState {
 public:
  // Validates physicality: cov positive definite, det cov >= 1/16 - kPhysicalSlack.
  GaussianState(std::array<double, 2> mean, Sym2 cov);

  static GaussianState vacuum() { return GaussianState({0.0, 0.0}, {kVacuumVariance, 0.0, kVacuumVariance}); }

  const std::array<double, 2>& mean() const noexcept { return mean_; }
  const Sym2& cov() const noexcept { return cov_; }

 private:
  std::array<double, 2> mean_;
  Sym2 cov_;
};

// S(r) rho_th(nbar) S(r)^dagger with the squeezed (minor) axis at angle theta.
// theta = 0 squeezes Re alpha.
GaussianState make_squeezed_thermal(double nbar, double r, double theta = 0.0);

GaussianState make_thermal(double nbar);

GaussianState make_coherent(std::complex<double> alpha);

GaussianState apply_channel(const GaussianState& state, const ChannelSpec& channel);

// s-ordered quasiprobability at `point`. s = 0 Wigner, s = -1 Husimi.
// Throws std::domain_error if cov + (-s/4) I is not positive definite.
double wigner_s_gaussian(const GaussianState& state, double s, std::complex<double> point);

// Parameters of the s-ordered function as a kernel Gaussian.
struct GaussianWigner {
  std::array<double, 2> mean;
  Sym2 cov_s;
  double amplitude;  // 1 / (2 sqrt(det cov_s))
};
GaussianWigner wigner_s_parameters(const GaussianState& state, double s);

double min_quadrature_variance(const GaussianState& state);

// Sub-vacuum variance along some quadrature axis.
bool is_quantum_gaussian(const GaussianState& state);

// Smallest squeezing r with min variance below vacuum for thermal occupation nbar:
// 1/2 ln(2 nbar + 1).
double squeezing_onset(double nbar);

// W^{(s)}_a - W^{(s)}_b as a planar integrand, framed along the principal axes
// of the averaged s-ordered covariance.
PlaneProfile wigner_difference_profile(const GaussianState& a, const GaussianState& b, double s);
// W^{(s_a)}_a - W^{(s_b)}_b.
PlaneProfile wigner_difference_profile(const GaussianState& a, double s_a, const GaussianState& b,
                                       double s_b);

}  // namespace qnorm
