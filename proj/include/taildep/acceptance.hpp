// The built-in verification battery: twelve numbered checks covering the
// quadratic program, the closed-form indices and expansions, the quadrature
// oracle's regular-variation behavior, the samplers, and the estimators.
// Each check prints one pass/fail line with its measured values.
//
// Quick level trims sample counts and model batteries to about a minute;
// Full runs everything at the stated tolerances.

#ifndef TAILDEP_ACCEPTANCE_HPP
#define TAILDEP_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace taildep::accept {

enum class Level { Quick, Full };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CriterionResult> run_acceptance(Level level, std::ostream& log);

}  // namespace taildep::accept

#endif  // TAILDEP_ACCEPTANCE_HPP
