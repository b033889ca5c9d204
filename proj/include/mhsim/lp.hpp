#pragma once

#include <optional>
#include <vector>

namespace mhsim::lp {

// maximize c.x  subject to  A x <= b,  x >= 0.
// Rows of A may have negative right-hand sides (i.e. >= constraints).
struct Problem {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Solution {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double value = 0.0;
};

// Dense two-phase simplex with Bland's rule. Intended for the small
// allocation problems here (a handful of variables, tens of rows).
Solution solve(const Problem& problem);

}  // namespace mhsim::lp
