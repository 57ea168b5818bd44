#pragma once

#include <Eigen/Dense>

namespace snum {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;
  double value = 0.0;
};

// min c^T x  s.t.  A x = b, x >= 0. Dense two-phase simplex with Bland's rule.
LpResult solve_standard_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

// Minimum ||z||_1 (resp. ||z||_inf) subject to g^T z = rhs.
Eigen::VectorXd min_l1_solution(const Eigen::MatrixXd& g, const Eigen::VectorXd& rhs);
Eigen::VectorXd min_linf_solution(const Eigen::MatrixXd& g, const Eigen::VectorXd& rhs);

}  // namespace snum
