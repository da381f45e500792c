#include "qnorm/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qnorm/kernels.hpp"

namespace qnorm {

std::array<double, 2> Sym2::eigenvalues() const noexcept {
  const double mid = 0.5 * (xx + yy);
  const double rad = std::hypot(0.5 * (xx - yy), xy);
  return {mid - rad, mid + rad};
}

double Sym2::minor_axis_angle() const noexcept {
  // Major axis at 1/2 atan2(2xy, xx - yy); minor axis is perpendicular.
  return 0.5 * std::atan2(2.0 * xy, xx - yy) + 0.5 * std::numbers::pi;
}

Sym2 Sym2::inverse() const {
  const double d = det();
  if (!(d > 0.0)) throw std::domain_error("matrix is not positive definite");
  return {yy / d, -xy / d, xx / d};
}

Sym2 Sym2::rotated(double angle) const noexcept {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * c * xx - 2.0 * c * s * xy + s * s * yy,
          c * s * (xx - yy) + (c * c - s * s) * xy,
          s * s * xx + 2.0 * c * s * xy + c * c * yy};
}

GaussianState::GaussianState(std::array<double, 2> mean, Sym2 cov) : mean_(mean), cov_(cov) {
  if (!std::isfinite(mean[0]) || !std::isfinite(mean[1]) || !std::isfinite(cov.xx) ||
      !std::isfinite(cov.xy) || !std::isfinite(cov.yy))
    throw std::invalid_argument("Gaussian state must be finite");
  // Single-mode uncertainty relation: cov > 0 and det cov >= 1/16.
  if (!(cov_.eigenvalues()[0] > 0.0) ||
      cov_.det() < kVacuumVariance * kVacuumVariance - kPhysicalSlack)
    throw std::invalid_argument("covariance violates the uncertainty relation");
}

GaussianState make_squeezed_thermal(double nbar, double r, double theta) {
  if (!(nbar >= 0.0)) throw std::invalid_argument("nbar must be >= 0");
  if (!(r >= 0.0)) throw std::invalid_argument("squeezing r must be >= 0");
  const double v = (2.0 * nbar + 1.0) * kVacuumVariance;
  const Sym2 axis{v * std::exp(-2.0 * r), 0.0, v * std::exp(2.0 * r)};
  Sym2 cov = axis.rotated(theta);
  if (theta == 0.0) cov = axis;
  return GaussianState({0.0, 0.0}, cov);
}

GaussianState make_thermal(double nbar) { return make_squeezed_thermal(nbar, 0.0, 0.0); }

GaussianState make_coherent(std::complex<double> alpha) {
  return GaussianState({alpha.real(), alpha.imag()}, {kVacuumVariance, 0.0, kVacuumVariance});
}

GaussianState apply_channel(const GaussianState& state, const ChannelSpec& channel) {
  std::array<double, 2> m = state.mean();
  Sym2 cov = state.cov();
  for (const auto& element : channel.elements()) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, Attenuator>) {
            const double l = e.transmittivity;
            cov = cov.scaled(l).shifted((1.0 - l) * kVacuumVariance);
            m = {std::sqrt(l) * m[0], std::sqrt(l) * m[1]};
          } else if constexpr (std::is_same_v<T, Amplifier>) {
            const double g = e.gain;
            cov = cov.scaled(g).shifted((g - 1.0) * kVacuumVariance);
            m = {std::sqrt(g) * m[0], std::sqrt(g) * m[1]};
          } else if constexpr (std::is_same_v<T, Rotation>) {
            const double c = std::cos(e.angle);
            const double s = std::sin(e.angle);
            cov = cov.rotated(e.angle);
            m = {c * m[0] - s * m[1], s * m[0] + c * m[1]};
          } else {
            m = {m[0] + e.alpha.real(), m[1] + e.alpha.imag()};
          }
        },
        element);
  }
  return GaussianState(m, cov);
}

GaussianWigner wigner_s_parameters(const GaussianState& state, double s) {
  const Sym2 cov_s = state.cov().shifted(-s * kVacuumVariance);
  const auto ev = cov_s.eigenvalues();
  if (!(ev[0] > 0.0))
    throw std::domain_error("s-ordered covariance is not positive definite for this state");
  return {state.mean(), cov_s, 1.0 / (2.0 * std::sqrt(cov_s.det()))};
}

double wigner_s_gaussian(const GaussianState& state, double s, std::complex<double> point) {
  const auto w = wigner_s_parameters(state, s);
  const Sym2 inv = w.cov_s.inverse();
  const double dx = point.real() - w.mean[0];
  const double dy = point.imag() - w.mean[1];
  const double quad = inv.xx * dx * dx + 2.0 * inv.xy * dx * dy + inv.yy * dy * dy;
  return w.amplitude * std::exp(-0.5 * quad);
}

double min_quadrature_variance(const GaussianState& state) { return state.cov().eigenvalues()[0]; }

bool is_quantum_gaussian(const GaussianState& state) {
  return min_quadrature_variance(state) < kVacuumVariance - kPhysicalSlack;
}

double squeezing_onset(double nbar) {
  if (!(nbar >= 0.0)) throw std::invalid_argument("nbar must be >= 0");
  return 0.5 * std::log(2.0 * nbar + 1.0);
}

namespace {

kernels::Gaussian2D to_kernel(const GaussianWigner& w) {
  const Sym2 inv = w.cov_s.inverse();
  return {w.mean[0], w.mean[1], inv.xx, inv.xy, inv.yy, w.amplitude};
}

// Envelope of one Gaussian in the scaled frame coordinate w:
//   z - m = F w - d,  F = R(angle) diag(sx, sy),  d = m - center.
// The quadratic form in w has smallest eigenvalue kappa; with e = |F^-1 d|,
// (t - e)^2 >= t^2/2 - e^2 gives amp e^{kappa e^2 / 2} e^{-kappa t^2 / 4}.
void add_envelope(DecayBound& bound, const GaussianWigner& w, const PlaneFrame& f) {
  const Sym2 inv = w.cov_s.inverse();
  // Q = F^T inv F
  const Sym2 rot = inv.rotated(-f.angle);
  const Sym2 q{rot.xx * f.sx * f.sx, rot.xy * f.sx * f.sy, rot.yy * f.sy * f.sy};
  const double kappa = q.eigenvalues()[0];
  const double dx = w.mean[0] - f.cx;
  const double dy = w.mean[1] - f.cy;
  const double c = std::cos(f.angle);
  const double s = std::sin(f.angle);
  const double ex = (c * dx + s * dy) / f.sx;
  const double ey = (-s * dx + c * dy) / f.sy;
  const double e2 = ex * ex + ey * ey;
  if (e2 == 0.0) {
    bound.add_gaussian(w.amplitude, 0.5 * kappa);
  } else {
    bound.add_gaussian(w.amplitude * std::exp(0.5 * kappa * e2), 0.25 * kappa);
  }
}

}  // namespace

PlaneProfile wigner_difference_profile(const GaussianState& a, const GaussianState& b, double s) {
  return wigner_difference_profile(a, s, b, s);
}

PlaneProfile wigner_difference_profile(const GaussianState& a, double s_a, const GaussianState& b,
                                       double s_b) {
  const auto wa = wigner_s_parameters(a, s_a);
  const auto wb = wigner_s_parameters(b, s_b);

  PlaneFrame frame;
  frame.cx = 0.5 * (wa.mean[0] + wb.mean[0]);
  frame.cy = 0.5 * (wa.mean[1] + wb.mean[1]);
  const Sym2 avg{0.5 * (wa.cov_s.xx + wb.cov_s.xx), 0.5 * (wa.cov_s.xy + wb.cov_s.xy),
                 0.5 * (wa.cov_s.yy + wb.cov_s.yy)};
  const auto ev = avg.eigenvalues();
  // Frame x axis along the minor axis of the averaged covariance.
  frame.angle = avg.xy == 0.0 ? (avg.xx <= avg.yy ? 0.0 : 0.5 * std::numbers::pi)
                              : avg.minor_axis_angle();
  frame.sx = std::sqrt(ev[0]);
  frame.sy = std::sqrt(ev[1]);

  PlaneProfile profile;
  profile.frame = frame;
  add_envelope(profile.decay, wa, frame);
  add_envelope(profile.decay, wb, frame);
  profile.eval = [ga = to_kernel(wa), gb = to_kernel(wb)](std::span<const double> xs,
                                                          std::span<const double> ys,
                                                          std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    kernels::gaussian2d_accumulate(xs, ys, ga, 1.0, out);
    kernels::gaussian2d_accumulate(xs, ys, gb, -1.0, out);
  };
  return profile;
}

}  // namespace qnorm
