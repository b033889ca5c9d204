#include "mhsim/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace mhsim::lp {
namespace {

constexpr double kEps = 1e-10;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols), cells_(rows, std::vector<double>(cols + 1, 0.0)),
        basis_(rows, 0) {}

  std::vector<double>& row(std::size_t i) { return cells_[i]; }
  double rhs(std::size_t i) const { return cells_[i][cols_]; }
  std::size_t& basis(std::size_t i) { return basis_[i]; }
  std::size_t rows() const { return cells_.size(); }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c, std::vector<double>& objective) {
    auto& pr = cells_[r];
    const double p = pr[c];
    for (double& v : pr) v /= p;
    auto eliminate = [&](std::vector<double>& target) {
      const double f = target[c];
      if (f == 0.0) return;
      for (std::size_t j = 0; j <= cols_; ++j) target[j] -= f * pr[j];
      target[c] = 0.0;
    };
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (i != r) eliminate(cells_[i]);
    }
    eliminate(objective);
    basis_[r] = c;
  }

  // Maximizes the objective row, written as z - sum(c_j x_j) = 0, over
  // columns < allowed. Returns false when unbounded.
  bool optimize(std::vector<double>& objective, std::size_t allowed) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (objective[j] < -kEps) {
          enter = j;
          break;
        }
      }
      if (enter == allowed) return true;
      std::size_t leave = rows();
      double best = 0.0;
      for (std::size_t i = 0; i < rows(); ++i) {
        const double a = cells_[i][enter];
        if (a <= kEps) continue;
        const double ratio = rhs(i) / a;
        if (leave == rows() || ratio < best - kEps ||
            (ratio <= best + kEps && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows()) return false;
      pivot(leave, enter, objective);
    }
  }

 private:
  std::size_t cols_;
  std::vector<std::vector<double>> cells_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Solution solve(const Problem& problem) {
  const std::size_t n = problem.objective.size();
  const std::size_t m = problem.rows.size();
  if (problem.rhs.size() != m) {
    throw std::invalid_argument("lp: rhs size does not match rows");
  }
  std::size_t artificial = 0;
  for (double b : problem.rhs) artificial += b < 0.0 ? 1 : 0;

  // Columns: originals, one slack/surplus per row, then artificials.
  const std::size_t slack0 = n;
  const std::size_t art0 = n + m;
  const std::size_t total = art0 + artificial;
  Tableau t(m, total);
  std::size_t next_art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    if (problem.rows[i].size() != n) {
      throw std::invalid_argument("lp: row width does not match objective");
    }
    auto& r = t.row(i);
    const double sign = problem.rhs[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) r[j] = sign * problem.rows[i][j];
    r[slack0 + i] = sign;
    r[total] = sign * problem.rhs[i];
    if (sign < 0.0) {
      r[next_art] = 1.0;
      t.basis(i) = next_art++;
    } else {
      t.basis(i) = slack0 + i;
    }
  }

  Solution out;
  if (artificial > 0) {
    std::vector<double> phase1(total + 1, 0.0);
    for (std::size_t j = art0; j < total; ++j) phase1[j] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis(i) < art0) continue;
      for (std::size_t j = 0; j <= total; ++j) phase1[j] -= t.row(i)[j];
    }
    t.optimize(phase1, total);
    // phase1[total] holds -(sum of artificials) at optimum.
    if (phase1[total] < -1e-8) {
      out.status = Status::kInfeasible;
      return out;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis(i) < art0) continue;
      for (std::size_t j = 0; j < art0; ++j) {
        if (std::abs(t.row(i)[j]) > kEps) {
          t.pivot(i, j, phase1);
          break;
        }
      }
    }
  }

  std::vector<double> phase2(total + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = -problem.objective[j];
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t b = t.basis(i);
    const double f = phase2[b];
    if (f == 0.0) continue;
    for (std::size_t j = 0; j <= total; ++j) phase2[j] -= f * t.row(i)[j];
  }
  if (!t.optimize(phase2, art0)) {
    out.status = Status::kUnbounded;
    return out;
  }

  out.status = Status::kOptimal;
  out.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis(i) < n) out.x[t.basis(i)] = std::max(0.0, t.rhs(i));
  }
  out.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.value += problem.objective[j] * out.x[j];
  return out;
}

}  // namespace mhsim::lp
