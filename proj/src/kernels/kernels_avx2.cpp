// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be entered after a CPUID check.

#include <immintrin.h>

#include <array>
#include <cmath>
#include <cstddef>

#include "qnorm/kernels.hpp"

namespace qnorm::kernels::detail {
namespace {

constexpr std::size_t kLanes = 4;

// exp(x) for x in [-746, 709.78]; inputs outside are clamped. Cody-Waite
// reduction x = k ln2 + r, |r| <= ln2/2, then a degree-13 Taylor polynomial
// (truncation < 5e-18 relative) and a split 2^k scale so subnormal results
// come out right.
inline __m256d exp_pd(__m256d x) {
  const __m256d hi = _mm256_set1_pd(709.78);
  const __m256d lo = _mm256_set1_pd(-746.0);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);

  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, ln2_hi, x);
  r = _mm256_fnmadd_pd(k, ln2_lo, r);

  static constexpr std::array<double, 14> inv_fact = {
      1.0,
      1.0,
      1.0 / 2.0,
      1.0 / 6.0,
      1.0 / 24.0,
      1.0 / 120.0,
      1.0 / 720.0,
      1.0 / 5040.0,
      1.0 / 40320.0,
      1.0 / 362880.0,
      1.0 / 3628800.0,
      1.0 / 39916800.0,
      1.0 / 479001600.0,
      1.0 / 6227020800.0,
  };
  __m256d p = _mm256_set1_pd(inv_fact[13]);
  for (int i = 12; i >= 0; --i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(inv_fact[i]));

  // 2^k = 2^k1 * 2^k2 with both halves inside the normal exponent range.
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d k1 = _mm256_floor_pd(_mm256_mul_pd(k, half));
  const __m256d k2 = _mm256_sub_pd(k, k1);
  const __m256d magic = _mm256_set1_pd(4503599627370496.0 + 1023.0);  // 2^52 + bias
  const __m256i e1 = _mm256_slli_epi64(_mm256_castpd_si256(_mm256_add_pd(k1, magic)), 52);
  const __m256i e2 = _mm256_slli_epi64(_mm256_castpd_si256(_mm256_add_pd(k2, magic)), 52);
  p = _mm256_mul_pd(p, _mm256_castsi256_pd(e1));
  return _mm256_mul_pd(p, _mm256_castsi256_pd(e2));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Mask selecting the first `count` lanes, count in [0, 4].
inline __m256i tail_mask(std::size_t count) {
  const __m256i idx = _mm256_set_epi64x(3, 2, 1, 0);
  return _mm256_cmpgt_epi64(_mm256_set1_epi64x(static_cast<long long>(count)), idx);
}

void exp_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(x + i)));
  if (i < n) {
    const __m256i m = tail_mask(n - i);
    _mm256_maskstore_pd(out + i, m, exp_pd(_mm256_maskload_pd(x + i, m)));
  }
}

inline __m256d gaussian_block(__m256d x, __m256d y, const Gaussian2D& g) {
  const __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(g.mx));
  const __m256d dy = _mm256_sub_pd(y, _mm256_set1_pd(g.my));
  __m256d quad = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(g.qxx), dx), dx);
  quad = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_set1_pd(2.0 * g.qxy), dx), dy, quad);
  quad = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_set1_pd(g.qyy), dy), dy, quad);
  return exp_pd(_mm256_mul_pd(_mm256_set1_pd(-0.5), quad));
}

void gaussian2d_avx2(const double* xs, const double* ys, std::size_t n, const Gaussian2D& g,
                     double sign, double* out) {
  const __m256d a = _mm256_set1_pd(sign * g.amp);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d e = gaussian_block(_mm256_loadu_pd(xs + i), _mm256_loadu_pd(ys + i), g);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(a, e, _mm256_loadu_pd(out + i)));
  }
  if (i < n) {
    const __m256i m = tail_mask(n - i);
    const __m256d e = gaussian_block(_mm256_maskload_pd(xs + i, m), _mm256_maskload_pd(ys + i, m), g);
    _mm256_maskstore_pd(out + i, m, _mm256_fmadd_pd(a, e, _mm256_maskload_pd(out + i, m)));
  }
}

inline __m256d laguerre_block(__m256d r, const LaguerreSeries& s) {
  const std::size_t terms = s.coeffs.size();
  const __m256d r2 = _mm256_mul_pd(r, r);
  const __m256d y = _mm256_mul_pd(_mm256_set1_pd(s.y_scale), r2);
  const __m256d q = _mm256_set1_pd(s.q);
  const __m256d q2 = _mm256_set1_pd(s.q * s.q);
  __m256d sum = _mm256_setzero_pd();
  if (terms > 0) {
    __m256d prev = _mm256_set1_pd(1.0);
    sum = _mm256_set1_pd(s.coeffs[0]);
    if (terms > 1) {
      __m256d cur = _mm256_add_pd(q, y);
      sum = _mm256_fmadd_pd(_mm256_set1_pd(s.coeffs[1]), cur, sum);
      for (std::size_t k = 1; k + 1 < terms; ++k) {
        const double kd = static_cast<double>(k);
        const __m256d lead = _mm256_fmadd_pd(_mm256_set1_pd(2.0 * kd + 1.0), q, y);
        const __m256d num = _mm256_fnmadd_pd(_mm256_mul_pd(_mm256_set1_pd(kd), q2), prev,
                                             _mm256_mul_pd(lead, cur));
        const __m256d next = _mm256_div_pd(num, _mm256_set1_pd(kd + 1.0));
        prev = cur;
        cur = next;
        sum = _mm256_fmadd_pd(_mm256_set1_pd(s.coeffs[k + 1]), cur, sum);
      }
    }
  }
  const __m256d g = exp_pd(_mm256_mul_pd(_mm256_set1_pd(-s.rate), r2));
  return _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(s.amp), g), sum);
}

void laguerre_avx2(const double* radii, std::size_t n, const LaguerreSeries& s, double* out) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    _mm256_storeu_pd(out + i, laguerre_block(_mm256_loadu_pd(radii + i), s));
  if (i < n) {
    const __m256i m = tail_mask(n - i);
    _mm256_maskstore_pd(out + i, m, laguerre_block(_mm256_maskload_pd(radii + i, m), s));
  }
}

double weighted_abs_avx2(const double* v, const double* w, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(v + i));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), a, acc);
  }
  if (i < n) {
    const __m256i m = tail_mask(n - i);
    const __m256d a = _mm256_andnot_pd(sign_mask, _mm256_maskload_pd(v + i, m));
    acc = _mm256_fmadd_pd(_mm256_maskload_pd(w + i, m), a, acc);
  }
  return hsum(acc);
}

double weighted_sq_avx2(const double* v, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a = _mm256_loadu_pd(v + i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), a), a, acc);
  }
  if (i < n) {
    const __m256i m = tail_mask(n - i);
    const __m256d a = _mm256_maskload_pd(v + i, m);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_maskload_pd(w + i, m), a), a, acc);
  }
  return hsum(acc);
}

constexpr KernelTable kAvx2{
    exp_avx2, gaussian2d_avx2, laguerre_avx2, weighted_abs_avx2, weighted_sq_avx2,
};

}  // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

}  // namespace qnorm::kernels::detail
