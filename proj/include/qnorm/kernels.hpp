#pragma once
// Batch arithmetic kernels behind every phase-space evaluation.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant. The variant is picked once at startup from CPUID and can
// be overridden with QNORM_ISA=scalar|avx2 or set_isa(). Variants agree to a
// few ulp; they are not bit-identical (FMA contraction, vector exp).

#include <cstddef>
#include <span>
#include <string_view>

namespace qnorm::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

// True if the variant was compiled in and the CPU can run it.
bool isa_available(Isa isa) noexcept;

// Best available variant on this machine.
Isa detected_isa() noexcept;

// Variant used by the public kernel entry points.
Isa active_isa() noexcept;

// Throws std::invalid_argument if the variant is unavailable.
void set_isa(Isa isa);

// amp * exp(-1/2 (z - m)^T Q (z - m)) with Q the inverse covariance.
struct Gaussian2D {
  double mx = 0.0;
  double my = 0.0;
  double qxx = 0.0;
  double qxy = 0.0;
  double qyy = 0.0;
  double amp = 0.0;
};

// out_i = amp * exp(-rate * r_i^2) * sum_n coeffs[n] * M_n(r_i^2 * y_scale)
// where M_n(y) = q^n L_n(-y/q) follows the division-free recurrence
//   (n+1) M_{n+1} = ((2n+1) q + y) M_n - n q^2 M_{n-1},  M_0 = 1, M_1 = q + y.
// q = -1 recovers (-1)^n L_n(y); q = 0 gives y^n / n!.
struct LaguerreSeries {
  std::span<const double> coeffs;
  double q = 0.0;
  double y_scale = 0.0;
  double amp = 0.0;
  double rate = 0.0;
};

// out_i = exp(x_i)
void exp(std::span<const double> x, std::span<double> out);

// out_i += sign * g(xs_i, ys_i)
void gaussian2d_accumulate(std::span<const double> xs, std::span<const double> ys,
                           const Gaussian2D& g, double sign, std::span<double> out);

void laguerre_series(std::span<const double> radii, const LaguerreSeries& series,
                     std::span<double> out);

// sum_i w_i |v_i|^p. p == 1 and p == 2 take the vector path.
double weighted_abs_pow_sum(std::span<const double> values, std::span<const double> weights,
                            double p);

namespace detail {

// Raw-pointer variant tables; one per Isa.
struct KernelTable {
  void (*exp)(const double* x, double* out, std::size_t n);
  void (*gaussian2d_accumulate)(const double* xs, const double* ys, std::size_t n,
                                const Gaussian2D& g, double sign, double* out);
  void (*laguerre_series)(const double* radii, std::size_t n, const LaguerreSeries& series,
                          double* out);
  double (*weighted_abs_sum)(const double* v, const double* w, std::size_t n);
  double (*weighted_sq_sum)(const double* v, const double* w, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
#ifdef QNORM_HAVE_AVX2_KERNELS
const KernelTable& avx2_table() noexcept;
#endif
const KernelTable& table_for(Isa isa);

}  // namespace detail

}  // namespace qnorm::kernels
