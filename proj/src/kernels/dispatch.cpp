#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnorm/kernels.hpp"

namespace qnorm::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(QNORM_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  const Isa best = detected_isa();
  if (const char* env = std::getenv("QNORM_ISA")) {
    const std::string v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
  }
  return best;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const detail::KernelTable& table() { return detail::table_for(active().load(std::memory_order_relaxed)); }

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel span sizes differ");
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2();
  }
  return false;
}

Isa detected_isa() noexcept { return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument("kernel variant not available: " + std::string(isa_name(isa)));
  active().store(isa, std::memory_order_relaxed);
}

namespace detail {

const KernelTable& table_for(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument("kernel variant not available: " + std::string(isa_name(isa)));
#ifdef QNORM_HAVE_AVX2_KERNELS
  if (isa == Isa::avx2) return avx2_table();
#endif
  return scalar_table();
}

}  // namespace detail

void exp(std::span<const double> x, std::span<double> out) {
  check_sizes(x.size(), out.size());
  table().exp(x.data(), out.data(), x.size());
}

void gaussian2d_accumulate(std::span<const double> xs, std::span<const double> ys,
                           const Gaussian2D& g, double sign, std::span<double> out) {
  check_sizes(xs.size(), ys.size());
  check_sizes(xs.size(), out.size());
  table().gaussian2d_accumulate(xs.data(), ys.data(), xs.size(), g, sign, out.data());
}

void laguerre_series(std::span<const double> radii, const LaguerreSeries& series,
                     std::span<double> out) {
  check_sizes(radii.size(), out.size());
  table().laguerre_series(radii.data(), radii.size(), series, out.data());
}

double weighted_abs_pow_sum(std::span<const double> values, std::span<const double> weights,
                            double p) {
  check_sizes(values.size(), weights.size());
  if (p == 1.0) return table().weighted_abs_sum(values.data(), weights.data(), values.size());
  if (p == 2.0) return table().weighted_sq_sum(values.data(), weights.data(), values.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    acc += weights[i] * std::pow(std::fabs(values[i]), p);
  return acc;
}

}  // namespace qnorm::kernels
