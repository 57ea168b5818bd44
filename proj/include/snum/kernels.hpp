#pragma once

// Data-parallel kernels. Every kernel takes an Exec flag: Exec::parallel
// runs the OpenMP loop, Exec::serial runs the identical loop body without
// the pragma and is kept as the reference the tests compare against. Both
// paths produce bitwise identical results.

#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "snum/operators.hpp"

namespace snum {

enum class Exec { serial, parallel };

// All size-k subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k);

// Brute-force chord infimum
//   beta_k = min over m <= k <= n, m < n, n <= alpha.size() of the chord value,
// for k = 1..horizon. O(horizon * |alpha|^2); the reference for the hull.
std::vector<double> chord_infimum(std::span<const double> alpha, std::size_t horizon, Exec exec);

// max ||A c||_q over vertices c of the section {c : ||B c||_p <= 1}, where
// p is 1 or inf. B is n x d with full column rank and A is rows x d.
double section_max_norm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Norm p, Norm q, Exec exec);

// Vertices (coefficient vectors) of the section {c : ||B c||_p <= 1}, p in {1, inf}.
std::vector<Eigen::VectorXd> section_vertices(const Eigen::MatrixXd& b, Norm p);

struct EnvelopePoint {
  std::size_t k = 0;
  double x_hat = 0.0;  // Weyl-number envelope (also used for y_k)
  double h_hat = 0.0;  // Hilbert-number envelope
};

// For k = 1..k_max:
//   x_hat_k = min_{0 <= N < k} kg * tail(N) / sqrt(k - N)
//   h_hat_k = min_{0 <= N < k} kg^2 * tail(N) / (k - N)
// tail[N] = ||T - P_N T P_N||; indices past the end reuse the last entry.
std::vector<EnvelopePoint> decay_envelope(std::span<const double> tail, std::size_t k_max, double kg,
                                          Exec exec);

// Runs fn(i) for i in [0, count) and returns the results in index order.
template <class Fn>
auto run_restarts(std::size_t count, Fn&& fn, Exec exec) {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<R> out(count);
  const auto n = static_cast<long long>(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  } else {
    for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace snum
