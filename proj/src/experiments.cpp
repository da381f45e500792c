#include "qnorm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace qnorm::experiments {

std::string format_sig7(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.7g", v);
  return buf;
}

double round_sig7(double v) { return std::stod(format_sig7(v)); }

std::vector<SweepRow> run_sweep(const SweepOptions& o) {
  if (!(o.r_min < o.r_max)) throw std::invalid_argument("r-min must be below r-max");
  if (o.steps < 2) throw std::invalid_argument("steps must be >= 2");
  if (!(o.r_min >= 0.0)) throw std::invalid_argument("r-min must be >= 0");
  const ChannelSpec channel = ChannelSpec::classicalizer();
  const FunctionalSpec fn{};
  const NormEstimate base = baseline(channel, fn, o.tol);

  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(o.steps));
  for (int i = 0; i < o.steps; ++i) {
    const double r = o.r_min + (o.r_max - o.r_min) * static_cast<double>(i) / (o.steps - 1);
    const GaussianState st = make_squeezed_thermal(o.nbar, r);
    const QuantifierResult q = measure_m(st, channel, fn, o.tol, base);
    SweepRow row;
    row.r = r;
    row.n_value = q.n_value;
    row.err = q.err;
    row.baseline = q.baseline;
    row.m_value = q.m_value;
    row.quantum_by_variance = q.witness.quantum ? 1 : 0;
    row.classification = classify(q.witness.quantum, round_sig7(q.m_value), round_sig7(q.err));
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepHeader << '\n';
  for (const auto& r : rows) {
    os << format_sig7(r.r) << ',' << format_sig7(r.n_value) << ',' << format_sig7(r.err) << ','
       << format_sig7(r.baseline) << ',' << format_sig7(r.m_value) << ',' << r.quantum_by_variance
       << ',' << to_string(r.classification) << '\n';
  }
}

CrossingResult find_crossing(double nbar, double tol, double r_max) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const ChannelSpec channel = ChannelSpec::classicalizer();
  const FunctionalSpec fn{};
  // Quadrature an order tighter than the root criterion.
  const double qtol = 0.1 * tol;
  const NormEstimate base = baseline(channel, fn, qtol);
  auto m_at = [&](double r) {
    return quantumness_norm(make_squeezed_thermal(nbar, r), channel, fn, qtol).value - base.value;
  };

  CrossingResult res;
  res.onset = squeezing_onset(nbar);
  if (!(r_max > res.onset)) throw std::invalid_argument("r_max must exceed the squeezing onset");
  double lo = res.onset;
  double m_lo = m_at(lo);
  if (m_lo >= -tol) {
    res.at_onset = true;
    res.r_star = res.r_lo = res.r_hi = lo;
    res.m_lo = res.m_hi = m_lo;
    return res;
  }
  double hi = r_max;
  double m_hi = m_at(hi);
  if (m_hi <= 0.0)
    throw NoCrossing("M stays nonpositive on [onset, " + format_sig7(r_max) + "]: M(onset) = " +
                     format_sig7(m_lo) + ", M(r_max) = " + format_sig7(m_hi));
  double mid = 0.5 * (lo + hi);
  double m_mid = m_at(mid);
  int it = 1;
  while (std::fabs(m_mid) > tol && hi - lo > 1e-12 && it < 200) {
    if (m_mid > 0.0) {
      hi = mid;
      m_hi = m_mid;
    } else {
      lo = mid;
      m_lo = m_mid;
    }
    mid = 0.5 * (lo + hi);
    m_mid = m_at(mid);
    ++it;
  }
  res.r_star = mid;
  res.r_lo = lo;
  res.m_lo = m_lo;
  res.r_hi = hi;
  res.m_hi = m_hi;
  res.iterations = it;
  return res;
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const noexcept {
  // SplitMix64 finalizer over a Weyl sequence keyed by the seed.
  std::uint64_t z = seed_ * 0xD1B54A32D192ED03ULL + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const noexcept {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

std::array<double, 3> sample_simplex(const CounterRng& rng, std::uint64_t index) {
  double a = rng.uniform(2 * index);
  double b = rng.uniform(2 * index + 1);
  if (a > b) std::swap(a, b);
  return {a, b - a, 1.0 - b};
}

MixtureRow evaluate_mixture(const std::array<double, 3>& p, long long seed_index, double tol,
                            const NormEstimate& base) {
  const ChannelSpec channel = ChannelSpec::classicalizer();
  const FunctionalSpec fn{};
  const FockDiagonalState st = make_mixture(p);
  const QuantifierResult q = measure_m(State{st}, channel, fn, tol, base);
  MixtureRow row;
  row.p0 = p[0];
  row.p1 = p[1];
  row.p2 = p[2];
  row.n_value = q.n_value;
  row.m_value = q.m_value;
  row.wigner_negativity = q.witness.value;
  const bool witness = round_sig7(q.witness.value) > kNegativityThreshold;
  row.classification = classify(witness, round_sig7(q.m_value), q.err);
  row.seed_index = seed_index;
  return row;
}

std::vector<MixtureRow> run_mixtures(const MixtureOptions& o) {
  if (o.count < 1) throw std::invalid_argument("count must be >= 1");
  const NormEstimate base = baseline(ChannelSpec::classicalizer(), FunctionalSpec{}, o.tol);
  const CounterRng rng(o.seed);
  std::vector<MixtureRow> rows;
  for (int i = 0; i < o.count; ++i)
    rows.push_back(evaluate_mixture(sample_simplex(rng, static_cast<std::uint64_t>(i)), i, o.tol, base));
  if (o.include_corners) {
    rows.push_back(evaluate_mixture({1.0, 0.0, 0.0}, -1, o.tol, base));
    rows.push_back(evaluate_mixture({0.0, 1.0, 0.0}, -2, o.tol, base));
    rows.push_back(evaluate_mixture({0.0, 0.0, 1.0}, -3, o.tol, base));
  }
  return rows;
}

void write_mixtures_csv(std::ostream& os, const std::vector<MixtureRow>& rows) {
  os << kMixtureHeader << '\n';
  for (const auto& r : rows) {
    os << format_sig7(r.p0) << ',' << format_sig7(r.p1) << ',' << format_sig7(r.p2) << ','
       << format_sig7(r.n_value) << ',' << format_sig7(r.m_value) << ','
       << format_sig7(r.wigner_negativity) << ',' << to_string(r.classification) << ','
       << r.seed_index << '\n';
  }
}

}  // namespace qnorm::experiments
