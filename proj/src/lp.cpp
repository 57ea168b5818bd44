#include "snum/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "snum/error.hpp"

namespace snum {

namespace {

constexpr double kPivotEps = 1e-11;

// Tableau rows 0..m-1 are constraints, the last column is the rhs. The
// objective row holds reduced costs; basis[i] is the variable of row i.
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<Eigen::Index> basis;

  Eigen::Index rows() const { return t.rows() - 1; }
  Eigen::Index rhs() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[static_cast<std::size_t>(r)] = c;
  }

  // Returns false when unbounded. Only columns < allowed may enter.
  bool optimize(Eigen::Index allowed) {
    const Eigen::Index obj = rows();
    for (int guard = 0; guard < 100000; ++guard) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (t(obj, j) < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < obj; ++i) {
        if (t(i, enter) > kPivotEps) {
          const double ratio = t(i, rhs()) / t(i, enter);
          if (ratio < best - 1e-14 ||
              (ratio <= best + 1e-14 && leave >= 0 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw ResourceLimit("simplex iteration limit reached");
  }
};

}  // namespace

LpResult solve_standard_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m || c.size() != n) throw InvalidInput("LP dimensions disagree");

  // Columns: n structural, m artificial, rhs.
  Tableau tab;
  tab.t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  tab.basis.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    tab.t.row(i).head(n) = sign * a.row(i);
    tab.t(i, n + i) = 1.0;
    tab.t(i, n + m) = sign * b(i);
    tab.basis[static_cast<std::size_t>(i)] = n + i;
  }
  // Phase 1: minimise the sum of artificials.
  for (Eigen::Index i = 0; i < m; ++i) tab.t.row(m) -= tab.t.row(i);
  for (Eigen::Index i = 0; i < m; ++i) tab.t(m, n + i) = 0.0;
  tab.optimize(n + m);
  LpResult out;
  const double scale = 1.0 + b.cwiseAbs().sum();
  if (-tab.t(m, n + m) > 1e-9 * scale) return out;

  // Drive remaining artificials out of the basis where possible.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab.t(i, j)) > kPivotEps) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2 objective in terms of the current basis.
  tab.t.row(m).setZero();
  tab.t.row(m).head(n) = c.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bi = tab.basis[static_cast<std::size_t>(i)];
    if (bi < n && c(bi) != 0.0) tab.t.row(m) -= c(bi) * tab.t.row(i);
  }
  if (!tab.optimize(n)) {
    out.status = LpStatus::unbounded;
    return out;
  }
  out.status = LpStatus::optimal;
  out.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bi = tab.basis[static_cast<std::size_t>(i)];
    if (bi < n) out.x(bi) = tab.t(i, n + m);
  }
  out.value = c.dot(out.x);
  return out;
}

Eigen::VectorXd min_l1_solution(const Eigen::MatrixXd& g, const Eigen::VectorXd& rhs) {
  // z = u - v with u, v >= 0; minimise sum(u + v).
  const Eigen::Index n = g.rows();
  const Eigen::Index k = g.cols();
  Eigen::MatrixXd a(k, 2 * n);
  a << g.transpose(), -g.transpose();
  const auto res = solve_standard_lp(a, rhs, Eigen::VectorXd::Ones(2 * n));
  if (res.status != LpStatus::optimal) throw PreconditionViolation("minimum-norm extension has no solution");
  return res.x.head(n) - res.x.tail(n);
}

Eigen::VectorXd min_linf_solution(const Eigen::MatrixXd& g, const Eigen::VectorXd& rhs) {
  // Variables (u, v, s, t) >= 0 with z = u - v and u_j + v_j + s_j = t.
  const Eigen::Index n = g.rows();
  const Eigen::Index k = g.cols();
  const Eigen::Index vars = 3 * n + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + n, vars);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k + n);
  a.block(0, 0, k, n) = g.transpose();
  a.block(0, n, k, n) = -g.transpose();
  b.head(k) = rhs;
  for (Eigen::Index j = 0; j < n; ++j) {
    a(k + j, j) = 1.0;
    a(k + j, n + j) = 1.0;
    a(k + j, 2 * n + j) = 1.0;
    a(k + j, 3 * n) = -1.0;
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(vars);
  c(3 * n) = 1.0;
  const auto res = solve_standard_lp(a, b, c);
  if (res.status != LpStatus::optimal) throw PreconditionViolation("minimum-norm extension has no solution");
  return res.x.head(n) - res.x.segment(n, n);
}

}  // namespace snum
