// Scalar reference kernels. These define the expected results for the vector
// variants and are the fallback on machines without AVX2.

#include <cmath>

#include "qnorm/kernels.hpp"

namespace qnorm::kernels::detail {
namespace {

void exp_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void gaussian2d_scalar(const double* xs, const double* ys, std::size_t n, const Gaussian2D& g,
                       double sign, double* out) {
  const double a = sign * g.amp;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - g.mx;
    const double dy = ys[i] - g.my;
    const double quad = g.qxx * dx * dx + 2.0 * g.qxy * dx * dy + g.qyy * dy * dy;
    out[i] += a * std::exp(-0.5 * quad);
  }
}

void laguerre_scalar(const double* radii, std::size_t n, const LaguerreSeries& s, double* out) {
  const std::size_t terms = s.coeffs.size();
  const double q2 = s.q * s.q;
  for (std::size_t i = 0; i < n; ++i) {
    const double r2 = radii[i] * radii[i];
    const double y = s.y_scale * r2;
    double sum = 0.0;
    if (terms > 0) {
      double prev = 1.0;
      sum = s.coeffs[0];
      if (terms > 1) {
        double cur = s.q + y;
        sum += s.coeffs[1] * cur;
        for (std::size_t k = 1; k + 1 < terms; ++k) {
          const double kd = static_cast<double>(k);
          const double next = (((2.0 * kd + 1.0) * s.q + y) * cur - kd * q2 * prev) / (kd + 1.0);
          prev = cur;
          cur = next;
          sum += s.coeffs[k + 1] * cur;
        }
      }
    }
    out[i] = s.amp * std::exp(-s.rate * r2) * sum;
  }
}

double weighted_abs_scalar(const double* v, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::fabs(v[i]);
  return acc;
}

double weighted_sq_scalar(const double* v, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * v[i] * v[i];
  return acc;
}

constexpr KernelTable kScalar{
    exp_scalar, gaussian2d_scalar, laguerre_scalar, weighted_abs_scalar, weighted_sq_scalar,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace qnorm::kernels::detail
