#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qnorm/profile.hpp"

namespace qnorm {
namespace {

std::size_t degree(const DecayTerm& t) {
  std::size_t d = 0;
  for (std::size_t k = 0; k < t.poly.size(); ++k)
    if (t.poly[k] > 0.0) d = k;
  return d;
}

double term_value(const DecayTerm& t, double u) {
  double acc = 0.0;
  const double logu = u > 0.0 ? std::log(u) : -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < t.poly.size(); ++k) {
    if (t.poly[k] <= 0.0) continue;
    if (k == 0) {
      acc += t.poly[0] * std::exp(-t.rate * u);
    } else if (u > 0.0) {
      acc += std::exp(std::log(t.poly[k]) + static_cast<double>(k) * logu - t.rate * u);
    }
  }
  return acc;
}

// int_U^inf P(u) e^{-c u} du = sum_k a_k Gamma(k+1, cU) / c^{k+1}, evaluated in
// log space with log Gamma(k+1, x) = lgamma(k+1) - x + log sum_{i<=k} x^i / i!.
double term_tail(const DecayTerm& t, double u0) {
  const double x = t.rate * u0;
  const double logx = x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
  const double logc = std::log(t.rate);
  double acc = 0.0;
  double log_partial = 0.0;  // log sum_{i<=k} x^i / i!
  for (std::size_t k = 0; k < t.poly.size(); ++k) {
    const double kd = static_cast<double>(k);
    if (k > 0 && x > 0.0) {
      const double v = kd * logx - std::lgamma(kd + 1.0);
      const double hi = std::max(v, log_partial);
      log_partial = hi + std::log(std::exp(v - hi) + std::exp(log_partial - hi));
    }
    if (t.poly[k] <= 0.0) continue;
    const double log_gamma_inc = std::lgamma(kd + 1.0) - x + log_partial;
    acc += std::exp(std::log(t.poly[k]) + log_gamma_inc - (kd + 1.0) * logc);
  }
  return acc;
}

}  // namespace

void DecayBound::add(DecayTerm term) {
  if (!(term.rate > 0.0) || !std::isfinite(term.rate))
    throw std::invalid_argument("decay rate must be positive");
  for (double c : term.poly)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw std::invalid_argument("decay polynomial coefficients must be finite and nonnegative");
  terms_.push_back(std::move(term));
}

void DecayBound::append(const DecayBound& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
}

double DecayBound::operator()(double t) const {
  const double u = t * t;
  double acc = 0.0;
  for (const auto& term : terms_) acc += term_value(term, u);
  return acc;
}

double DecayBound::tail(double radius) const {
  const double u = radius * radius;
  double acc = 0.0;
  for (const auto& term : terms_) acc += term_tail(term, u);
  return acc;
}

double DecayBound::monotone_radius() const {
  double u = 0.0;
  for (const auto& term : terms_) u = std::max(u, static_cast<double>(degree(term)) / term.rate);
  return std::sqrt(u);
}

double DecayBound::truncation_radius(double target) const {
  if (!(target > 0.0)) throw std::invalid_argument("truncation target must be positive");
  if (terms_.empty()) return 0.0;
  auto ok = [&](double r) { return (*this)(r) <= 1.0 && tail(r) <= target; };
  const double r0 = monotone_radius();
  if (ok(r0)) return r0;
  double step = 1.0;
  double hi = r0 + step;
  while (!ok(hi)) {
    step *= 2.0;
    hi = r0 + step;
    if (hi > 1e6) throw std::runtime_error("decay envelope does not reach the truncation target");
  }
  double lo = std::max(r0, hi - step);
  for (int it = 0; it < 60 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double RadialProfile::operator()(double radius) const {
  double r[1] = {radius};
  double out[1] = {0.0};
  eval(r, out);
  return out[0];
}

double PlaneProfile::operator()(double x, double y) const {
  double xs[1] = {x};
  double ys[1] = {y};
  double out[1] = {0.0};
  eval(xs, ys, out);
  return out[0];
}

RadialProfile difference(RadialProfile a, RadialProfile b) {
  RadialProfile out;
  out.decay = a.decay;
  out.decay.append(b.decay);
  out.eval = [fa = std::move(a.eval), fb = std::move(b.eval)](std::span<const double> r,
                                                               std::span<double> o) {
    std::vector<double> tmp(r.size());
    fa(r, o);
    fb(r, tmp);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] -= tmp[i];
  };
  return out;
}

}  // namespace qnorm
