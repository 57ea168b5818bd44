#pragma once

// Independent reference routines for the tests. Nothing here calls into the
// library's numerics: eigenvalues come from a cyclic Jacobi sweep, the
// minorant from a direct chord scan.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace snum::ref {

// Eigenvalues of a symmetric matrix, nonincreasing.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

// Singular values through the Gram matrix.
inline std::vector<double> gram_singular_values(const Eigen::MatrixXd& m) {
  auto ev = jacobi_eigenvalues(m.transpose() * m);
  for (auto& v : ev) v = std::sqrt(std::max(0.0, v));
  return ev;
}

// beta_k = min over chords (i, j) with i <= k <= j, i < j inside alpha.
inline std::vector<double> chord_scan(const std::vector<double>& alpha, std::size_t horizon) {
  const std::size_t len = alpha.size();
  std::vector<double> beta(horizon);
  for (std::size_t k = 1; k <= horizon; ++k) {
    double best = alpha[k - 1];
    for (std::size_t i = 1; i <= k; ++i) {
      for (std::size_t j = std::max(k, i + 1); j <= len; ++j) {
        const double w = static_cast<double>(j - k) / static_cast<double>(j - i);
        best = std::min(best, w * alpha[i - 1] + (1.0 - w) * alpha[j - 1]);
      }
    }
    beta[k - 1] = best;
  }
  return beta;
}

// Random nonincreasing sequence with alpha_1 = 1; some runs hit exact zeros.
inline std::vector<double> random_decay(std::mt19937_64& rng, std::size_t len) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(len);
  double cur = 1.0;
  const bool zero_tail = u(rng) < 0.2;
  const std::size_t cut = 1 + static_cast<std::size_t>(u(rng) * static_cast<double>(len));
  for (std::size_t i = 0; i < len; ++i) {
    if (i > 0) {
      const double r = u(rng);
      if (r < 0.3) {
        // plateau
      } else if (r < 0.5) {
        cur *= 0.2 + 0.3 * u(rng);
      } else {
        cur *= 0.8 + 0.2 * u(rng);
      }
    }
    v[i] = (zero_tail && i >= cut) ? 0.0 : cur;
  }
  return v;
}

inline std::vector<double> random_nonincreasing(std::mt19937_64& rng, std::size_t n, double lo = 0.0,
                                                double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> d(n);
  for (auto& x : d) x = u(rng);
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

inline Eigen::MatrixXd diag(const std::vector<double>& d) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return m;
}

// Vertices of the bounded polytope {c : A c <= 1} by brute force over
// every choice of dim(c) active rows.
inline std::vector<Eigen::VectorXd> polytope_vertices(const Eigen::MatrixXd& a) {
  const Eigen::Index d = a.cols();
  const Eigen::Index rows = a.rows();
  std::vector<Eigen::VectorXd> out;
  std::vector<Eigen::Index> pick(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    Eigen::MatrixXd sub(d, d);
    for (Eigen::Index i = 0; i < d; ++i) sub.row(i) = a.row(pick[static_cast<std::size_t>(i)]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (lu.isInvertible()) {
      const Eigen::VectorXd c = lu.solve(Eigen::VectorXd::Ones(d));
      if ((a * c).maxCoeff() <= 1.0 + 1e-9) out.push_back(c);
    }
    Eigen::Index i = d - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == rows - d + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < d; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

// Constraint rows describing {c : ||B c||_p <= 1} for p = 1 (all sign
// vectors) or p = inf (both signs of every row).
inline Eigen::MatrixXd ball_constraints(const Eigen::MatrixXd& b, bool l1) {
  const Eigen::Index n = b.rows();
  if (!l1) {
    Eigen::MatrixXd a(2 * n, b.cols());
    a << b, -b;
    return a;
  }
  Eigen::MatrixXd a(Eigen::Index{1} << n, b.cols());
  for (Eigen::Index mask = 0; mask < a.rows(); ++mask) {
    Eigen::RowVectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) s(i) = (mask >> i) & 1 ? -1.0 : 1.0;
    a.row(mask) = s * b;
  }
  return a;
}

inline double lp_norm(const Eigen::VectorXd& v, double p) {
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  if (p == 1.0) return v.cwiseAbs().sum();
  return v.norm();
}

// Induced norm of an n x n matrix on l_p^n for p in {1, 2, inf}.
inline double induced_norm(const Eigen::MatrixXd& m, double p) {
  if (std::isinf(p)) return m.cwiseAbs().rowwise().sum().maxCoeff();
  if (p == 1.0) return m.cwiseAbs().colwise().sum().maxCoeff();
  return gram_singular_values(m).front();
}

// sup ||M x||_q over x in span(b) with ||x||_p <= 1; q defaults to p. Mixed pairs need p in {1, inf}.
inline double restricted_norm_ref(const Eigen::MatrixXd& m, const Eigen::MatrixXd& b, double p, double q = 0.0) {
  if (q == 0.0) q = p;
  if (p == 2.0 && q == 2.0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
    return gram_singular_values(m * q).front();
  }
  double best = 0.0;
  for (const auto& c : polytope_vertices(ball_constraints(b, p == 1.0))) best = std::max(best, lp_norm(m * b * c, q));
  return best;
}

// Norm of the functional phi on span(b) inside l_p.
inline double functional_norm_ref(const Eigen::RowVectorXd& phi, const Eigen::MatrixXd& b, double p) {
  if (p == 2.0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
    return (phi * q).norm();
  }
  double best = 0.0;
  for (const auto& c : polytope_vertices(ball_constraints(b, p == 1.0))) best = std::max(best, std::abs(phi * b * c));
  return best;
}

struct ProjectionCase {
  Eigen::MatrixXd p;
  Eigen::MatrixXd e;
  Eigen::MatrixXd f;
  double ambient = 2.0;  // 1, 2 or inf
  double restricted = 0.0;
  double epsilon = 0.0;
};

// Random projection P onto F whose restriction to E is small: P = Q0 + F D (I - Q0)
// where Q0 projects onto F along a complement containing E.
inline ProjectionCase random_projection_case(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(2, 6);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ProjectionCase c;
  const int kind = static_cast<int>(rng() % 3);
  c.ambient = kind == 0 ? 1.0 : kind == 1 ? 2.0 : INFINITY;
  const Eigen::Index n = dim(rng);
  const Eigen::Index rank = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(std::min<Eigen::Index>(3, n - 1)));
  Eigen::Index e_dim = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n - rank));
  if (kind == 0) e_dim = std::min<Eigen::Index>(e_dim, 2);
  auto gauss = [&](Eigen::Index r, Eigen::Index cc) {
    Eigen::MatrixXd m(r, cc);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
    return m;
  };
  c.f = gauss(n, rank);
  c.e = gauss(n, e_dim);
  Eigen::MatrixXd basis(n, n);
  basis << c.f, c.e, gauss(n, n - rank - e_dim);
  const Eigen::MatrixXd inv = basis.inverse();
  const Eigen::MatrixXd phi0 = inv.topRows(rank);
  const Eigen::MatrixXd q0 = c.f * phi0;
  const Eigen::MatrixXd d = gauss(rank, n);
  const Eigen::MatrixXd delta = c.f * d * (Eigen::MatrixXd::Identity(n, n) - q0);
  const double rho0 = restricted_norm_ref(delta, c.e, c.ambient);
  const double target = 0.001 + 0.079 * u(rng);
  c.p = q0 + (target / rho0) * delta;
  c.restricted = restricted_norm_ref(c.p, c.e, c.ambient);
  c.epsilon = c.restricted * 1.1 + (0.1 - c.restricted * 1.1) * u(rng);
  return c;
}

}  // namespace snum::ref
