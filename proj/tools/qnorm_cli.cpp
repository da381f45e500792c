// qnorm: baseline, squeezing sweep, certification threshold, Fock mixture scan
// and the verification batteries.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "qnorm/experiments.hpp"
#include "qnorm/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;

using qnorm::experiments::format_sig7;

// Writes to `path` ("-" for stdout) only after the content is complete.
void emit(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  f.close();
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norm-based optical quantumness: baselines, sweeps and no-go scans"};
  app.require_subcommand(1);

  double b_s = 0.0;
  double b_p = 1.0;
  double b_tol = qnorm::kDefaultTol;
  auto* baseline = app.add_subcommand("baseline", "Vacuum value of N under the classicalizer");
  baseline->add_option("--s", b_s, "Ordering parameter, <= 0")->capture_default_str();
  baseline->add_option("--p", b_p, "Norm order, >= 1")->capture_default_str();
  baseline->add_option("--tol", b_tol, "Absolute tolerance")->capture_default_str();

  qnorm::experiments::SweepOptions sw;
  std::string sw_out = "-";
  auto* sweep = app.add_subcommand("sweep", "N and M of squeezed thermal states versus r");
  sweep->add_option("--nbar", sw.nbar, "Thermal occupation")->capture_default_str();
  sweep->add_option("--r-min", sw.r_min, "First squeezing value")->capture_default_str();
  sweep->add_option("--r-max", sw.r_max, "Last squeezing value")->capture_default_str();
  sweep->add_option("--steps", sw.steps, "Number of rows, >= 2")->capture_default_str();
  sweep->add_option("--tol", sw.tol, "Absolute tolerance")->capture_default_str();
  sweep->add_option("--out", sw_out, "CSV file, - for stdout")->capture_default_str();

  double c_nbar = 1.0;
  double c_tol = qnorm::kDefaultTol;
  double c_rmax = 2.0;
  auto* crossing = app.add_subcommand("crossing", "Squeezing where M of the squeezed thermal state reaches 0");
  crossing->add_option("--nbar", c_nbar, "Thermal occupation")->capture_default_str();
  crossing->add_option("--tol", c_tol, "Stop when |M| <= tol")->capture_default_str();
  crossing->add_option("--r-max", c_rmax, "Upper end of the search interval")->capture_default_str();

  qnorm::experiments::MixtureOptions mx;
  std::string mx_out = "-";
  auto* mixtures = app.add_subcommand("mixtures", "Random mixtures of |0>, |1>, |2>");
  mixtures->add_option("--count", mx.count, "Number of sampled triplets, >= 1")->capture_default_str();
  mixtures->add_option("--seed", mx.seed, "Generator seed")->capture_default_str();
  mixtures->add_option("--tol", mx.tol, "Absolute tolerance")->capture_default_str();
  mixtures->add_option("--out", mx_out, "CSV file, - for stdout")->capture_default_str();
  mixtures->add_flag("--include-corners", mx.include_corners,
                     "Append (1,0,0), (0,1,0), (0,0,1) with seed_index -1, -2, -3");

  std::string v_suite = "all";
  double v_tol = qnorm::kDefaultTol;
  auto* verify = app.add_subcommand("verify", "Property and oracle checks");
  verify->add_option("--suite", v_suite, "axioms | oracles | all")
      ->check(CLI::IsMember({"axioms", "oracles", "all"}))
      ->capture_default_str();
  verify->add_option("--tol", v_tol, "Absolute tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*baseline) {
      const auto fn = qnorm::make_functional(b_s, b_p);
      if (!(b_tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
      const auto b = qnorm::baseline(qnorm::ChannelSpec::classicalizer(), fn, b_tol);
      std::cout << "baseline," << format_sig7(b.value) << ',' << format_sig7(b.err) << '\n';
    } else if (*sweep) {
      if (!(sw.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
      const auto rows = qnorm::experiments::run_sweep(sw);
      std::ostringstream os;
      qnorm::experiments::write_sweep_csv(os, rows);
      emit(sw_out, os.str());
    } else if (*crossing) {
      const auto c = qnorm::experiments::find_crossing(c_nbar, c_tol, c_rmax);
      std::cout << "onset," << format_sig7(c.onset) << '\n'
                << "r_star," << format_sig7(c.r_star) << '\n'
                << "bracket_lo," << format_sig7(c.r_lo) << ',' << format_sig7(c.m_lo) << '\n'
                << "bracket_hi," << format_sig7(c.r_hi) << ',' << format_sig7(c.m_hi) << '\n';
    } else if (*mixtures) {
      if (!(mx.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
      const auto rows = qnorm::experiments::run_mixtures(mx);
      std::ostringstream os;
      qnorm::experiments::write_mixtures_csv(os, rows);
      emit(mx_out, os.str());
    } else if (*verify) {
      const auto results = qnorm::verify::run_suite(qnorm::verify::parse_suite(v_suite), v_tol);
      return qnorm::verify::write_report(std::cout, results) ? kOk : kRuntime;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
