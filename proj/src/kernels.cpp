#include "snum/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snum/error.hpp"

namespace snum {

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

namespace {

double chord_at(std::span<const double> alpha, std::size_t k) {
  const std::size_t total = alpha.size();
  double best = alpha[k - 1];
  for (std::size_t m = 1; m <= k; ++m) {
    for (std::size_t n = std::max(k, m + 1); n <= total; ++n) {
      const double span = static_cast<double>(n - m);
      const double v = static_cast<double>(n - k) / span * alpha[m - 1] +
                       static_cast<double>(k - m) / span * alpha[n - 1];
      best = std::min(best, v);
    }
  }
  return best;
}

}  // namespace

std::vector<double> chord_infimum(std::span<const double> alpha, std::size_t horizon, Exec exec) {
  if (horizon > alpha.size()) throw InvalidInput("chord horizon shorter than the minorant horizon");
  std::vector<double> out(horizon);
  const auto h = static_cast<long long>(horizon);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long long k = 1; k <= h; ++k) out[static_cast<std::size_t>(k - 1)] = chord_at(alpha, static_cast<std::size_t>(k));
  } else {
    for (long long k = 1; k <= h; ++k) out[static_cast<std::size_t>(k - 1)] = chord_at(alpha, static_cast<std::size_t>(k));
  }
  if (!out.empty()) out[0] = alpha[0];
  return out;
}

namespace {

constexpr double kFeasibility = 1e-9;

double vec_norm(const Eigen::VectorXd& v, Norm q) {
  switch (q) {
    case Norm::one: return v.lpNorm<1>();
    case Norm::two: return v.norm();
    case Norm::inf: return v.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

// Visits every vertex produced by the facet system of one subset.
// For p = inf the subset is the set of active coordinates (|x_i| = 1);
// for p = 1 it is the support of the vertex.
template <class Visit>
void visit_subset_vertices(const Eigen::MatrixXd& b, Norm p, const std::vector<int>& subset, Visit&& visit) {
  const auto n = b.rows();
  const auto d = b.cols();
  if (p == Norm::inf) {
    Eigen::MatrixXd sys(d, d);
    for (Eigen::Index r = 0; r < d; ++r) sys.row(r) = b.row(subset[static_cast<std::size_t>(r)]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
    lu.setThreshold(1e-12);
    if (lu.rank() < d) return;
    const long long patterns = 1LL << (d - 1);
    Eigen::VectorXd rhs(d);
    for (long long s = 0; s < patterns; ++s) {
      rhs(0) = 1.0;
      for (Eigen::Index r = 1; r < d; ++r) rhs(r) = (s >> (r - 1)) & 1 ? -1.0 : 1.0;
      const Eigen::VectorXd c = lu.solve(rhs);
      const Eigen::VectorXd x = b * c;
      if (x.lpNorm<Eigen::Infinity>() <= 1.0 + kFeasibility) visit(c);
    }
    return;
  }
  // p == one: x_i = 0 off the support, sum_i s_i x_i = 1 on it.
  std::vector<char> in_support(static_cast<std::size_t>(n), 0);
  for (int i : subset) in_support[static_cast<std::size_t>(i)] = 1;
  Eigen::MatrixXd sys(d, d);
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!in_support[static_cast<std::size_t>(i)]) sys.row(row++) = b.row(i);
  }
  const auto support = static_cast<Eigen::Index>(subset.size());
  const long long patterns = 1LL << (support - 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  rhs(d - 1) = 1.0;
  for (long long s = 0; s < patterns; ++s) {
    Eigen::RowVectorXd last = Eigen::RowVectorXd::Zero(d);
    std::vector<double> sign(static_cast<std::size_t>(support));
    for (Eigen::Index r = 0; r < support; ++r) {
      sign[static_cast<std::size_t>(r)] = r == 0 ? 1.0 : ((s >> (r - 1)) & 1 ? -1.0 : 1.0);
      last += sign[static_cast<std::size_t>(r)] * b.row(subset[static_cast<std::size_t>(r)]);
    }
    sys.row(d - 1) = last;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
    lu.setThreshold(1e-12);
    if (lu.rank() < d) continue;
    const Eigen::VectorXd c = lu.solve(rhs);
    const Eigen::VectorXd x = b * c;
    bool ok = true;
    for (Eigen::Index r = 0; r < support && ok; ++r) {
      ok = sign[static_cast<std::size_t>(r)] * x(subset[static_cast<std::size_t>(r)]) >= -kFeasibility;
    }
    if (ok && std::abs(x.lpNorm<1>() - 1.0) <= kFeasibility) visit(c);
  }
}

std::vector<std::vector<int>> facet_subsets(const Eigen::MatrixXd& b, Norm p) {
  const int n = static_cast<int>(b.rows());
  const int d = static_cast<int>(b.cols());
  if (p == Norm::inf) return combinations(n, d);
  if (p == Norm::one) return combinations(n, n - d + 1);
  throw InvalidInput("section vertices are defined for polyhedral norms only");
}

}  // namespace

double section_max_norm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Norm p, Norm q, Exec exec) {
  if (b.cols() == 0) return 0.0;
  if (a.cols() != b.cols()) throw InvalidInput("section_max_norm: column mismatch");
  const auto subsets = facet_subsets(b, p);
  const auto count = static_cast<long long>(subsets.size());
  double best = 0.0;
  auto body = [&](long long i) {
    double local = 0.0;
    visit_subset_vertices(b, p, subsets[static_cast<std::size_t>(i)],
                          [&](const Eigen::VectorXd& c) { local = std::max(local, vec_norm(a * c, q)); });
    return local;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for reduction(max : best) schedule(dynamic, 8)
    for (long long i = 0; i < count; ++i) best = std::max(best, body(i));
  } else {
    for (long long i = 0; i < count; ++i) best = std::max(best, body(i));
  }
  return best;
}

std::vector<Eigen::VectorXd> section_vertices(const Eigen::MatrixXd& b, Norm p) {
  std::vector<Eigen::VectorXd> out;
  if (b.cols() == 0) return out;
  for (const auto& subset : facet_subsets(b, p)) {
    visit_subset_vertices(b, p, subset, [&](const Eigen::VectorXd& c) {
      out.push_back(c);
      out.push_back(-c);
    });
  }
  return out;
}

std::vector<EnvelopePoint> decay_envelope(std::span<const double> tail, std::size_t k_max, double kg,
                                          Exec exec) {
  if (tail.empty()) throw InvalidInput("decay envelope needs at least tail(0)");
  std::vector<EnvelopePoint> out(k_max);
  auto at = [&](std::size_t n) { return tail[std::min(n, tail.size() - 1)]; };
  auto point = [&](std::size_t k) {
    EnvelopePoint e{k, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (std::size_t n = 0; n < k; ++n) {
      const double gap = static_cast<double>(k - n);
      e.x_hat = std::min(e.x_hat, kg * at(n) / std::sqrt(gap));
      e.h_hat = std::min(e.h_hat, kg * kg * at(n) / gap);
    }
    return e;
  };
  const auto kk = static_cast<long long>(k_max);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long long k = 1; k <= kk; ++k) out[static_cast<std::size_t>(k - 1)] = point(static_cast<std::size_t>(k));
  } else {
    for (long long k = 1; k <= kk; ++k) out[static_cast<std::size_t>(k - 1)] = point(static_cast<std::size_t>(k));
  }
  return out;
}

}  // namespace snum
