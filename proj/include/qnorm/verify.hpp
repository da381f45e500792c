#pragma once
// Runnable property and oracle batteries behind `qnorm verify`.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qnorm/quantifier.hpp"

namespace qnorm::verify {

enum class Suite { axioms, oracles, all };

// Throws std::invalid_argument for anything but axioms|oracles|all.
Suite parse_suite(std::string_view name);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckResult> run_axioms(double tol = kDefaultTol);
std::vector<CheckResult> run_oracles(double tol = kDefaultTol);
std::vector<CheckResult> run_suite(Suite suite, double tol = kDefaultTol);

// One "check,<name>,PASS|FAIL,<detail>" line per result, then
// "summary,<passed>,<total>,PASS|FAIL". Returns true if everything passed.
bool write_report(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace qnorm::verify
