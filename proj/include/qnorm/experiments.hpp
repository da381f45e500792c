#pragma once
// Squeezing sweeps, certification-threshold search and random Fock mixtures,
// emitted as CSV with 7 significant digits.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnorm/quantifier.hpp"

namespace qnorm::experiments {

inline constexpr const char* kSweepHeader =
    "r,n_value,err,baseline,m_value,quantum_by_variance,classification";
inline constexpr const char* kMixtureHeader =
    "p0,p1,p2,n_value,m_value,wigner_negativity,classification,seed_index";

// printf("%.7g").
std::string format_sig7(double v);

// Value as printed in a CSV cell.
double round_sig7(double v);

struct SweepOptions {
  double nbar = 1.0;
  double r_min = 0.0;
  double r_max = 1.5;
  int steps = 61;
  double tol = kDefaultTol;
};

struct SweepRow {
  double r = 0.0;
  double n_value = 0.0;
  double err = 0.0;
  double baseline = 0.0;
  double m_value = 0.0;
  int quantum_by_variance = 0;
  Classification classification = Classification::classical_consistent;
};

// Squeezed thermal states under the classicalizer, W functional, L1 norm.
// Rows are classified from their printed (rounded) columns.
std::vector<SweepRow> run_sweep(const SweepOptions& options);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

class NoCrossing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CrossingResult {
  double onset = 0.0;
  double r_star = 0.0;
  // Final bracket with M(r_lo) <= 0 < M(r_hi), or the onset itself twice
  // when M is already nonnegative there.
  double r_lo = 0.0;
  double m_lo = 0.0;
  double r_hi = 0.0;
  double m_hi = 0.0;
  int iterations = 0;
  bool at_onset = false;
};

// Squeezing r* >= onset where M of the squeezed thermal state changes sign,
// bisected until |M(r*)| <= tol. Throws NoCrossing if M(r_max) <= 0 while
// M(onset) < 0.
CrossingResult find_crossing(double nbar, double tol = kDefaultTol, double r_max = 2.0);

// Counter-based uniform generator: the k-th draw of a seed is a pure function
// of (seed, k).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t bits(std::uint64_t counter) const noexcept;
  // In [0, 1), 53 random bits.
  double uniform(std::uint64_t counter) const noexcept;

 private:
  std::uint64_t seed_;
};

// Uniform point on the 2-simplex from sorted-uniform spacings; sample k uses
// draws 2k and 2k+1.
std::array<double, 3> sample_simplex(const CounterRng& rng, std::uint64_t index);

struct MixtureOptions {
  int count = 100;
  std::uint64_t seed = 42;
  bool include_corners = false;
  double tol = kDefaultTol;
};

struct MixtureRow {
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double n_value = 0.0;
  double m_value = 0.0;
  double wigner_negativity = 0.0;
  Classification classification = Classification::classical_consistent;
  // Sample index in the generator stream; corners get -1, -2, -3.
  long long seed_index = 0;
};

MixtureRow evaluate_mixture(const std::array<double, 3>& p, long long seed_index, double tol,
                            const NormEstimate& base);
std::vector<MixtureRow> run_mixtures(const MixtureOptions& options);
void write_mixtures_csv(std::ostream& os, const std::vector<MixtureRow>& rows);

}  // namespace qnorm::experiments
