#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "snum/kernels.hpp"
#include "snum/operators.hpp"

namespace snum {

struct OracleOptions {
  std::size_t restarts = 50;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::size_t dimension_cap = 12;
  std::size_t iterations = 300;
  double initial_step = 0.3;
  double min_step = 1e-9;
  Exec exec = Exec::parallel;
};

struct OracleResult {
  double lower = 0.0;  // certified
  double upper = 0.0;  // value attained by the witness
  std::string witness;
  // Gelfand/Kolmogorov: basis of the witness subspace E (columns).
  // Approximation: the witness approximant S.
  Eigen::MatrixXd witness_matrix;
  std::size_t restarts_used = 0;
  bool converged = false;
  bool exact = false;
};

// Certified lower bound for c_m(M): 0 for m = dim + 1, the operator norm
// for m = 1, sigma_m on Hilbert tags, the tail-sum formula on l_inf -> l_1
// diagonals, otherwise 0.
double certified_gelfand_lower(const TaggedMatrix& m, std::size_t index);

OracleResult gelfand_oracle(const TaggedMatrix& m, std::size_t index, const OracleOptions& options = {});
// Gelfand oracle of the adjoint.
OracleResult kolmogorov_oracle(const TaggedMatrix& m, std::size_t index, const OracleOptions& options = {});
OracleResult approx_oracle(const TaggedMatrix& m, std::size_t index, const OracleOptions& options = {});

// sup over functionals x* in the dual unit ball of (sum_i <x*, x_i>^2)^{1/2},
// with x_i the columns of `family`.
double weak_l2_norm(const Eigen::MatrixXd& family, Norm domain);

// (sum_i ||M x_i||^2)^{1/2} / weak_l2_norm(X); 0 for a null family.
double summing_ratio(const TaggedMatrix& m, const Eigen::MatrixXd& family);

struct Pi2Bound {
  double lower = 0.0;      // max of the two below
  double canonical = 0.0;  // family = canonical basis
  double sampled = 0.0;    // best random family after local ascent
  Eigen::MatrixXd family;  // witness of `lower`
};

Pi2Bound pi2_lower_oracle(const TaggedMatrix& m, std::size_t family_size, std::size_t rounds, std::uint64_t seed,
                          Exec exec = Exec::parallel);

struct AuerbachBasis {
  Eigen::MatrixXd vectors;      // ambient n x d, unit columns f_i
  Eigen::MatrixXd functionals;  // d x n rows; <row_i, f_j> = delta_ij, unit norm on F
  bool converged = false;
  double pairing_error = 0.0;
  double norm_error = 0.0;
};

// Auerbach basis of the whole space: the canonical basis.
AuerbachBasis auerbach_basis(const SpaceTag& space, std::size_t cap = 6);

// Auerbach basis of F = span(subspace) inside (R^n, ||.||_p), by |det|
// maximisation over the vertices of the unit ball of F (p = 1, inf) or QR (p = 2).
AuerbachBasis auerbach_basis(const Eigen::MatrixXd& subspace, Norm p, std::size_t cap = 6);

// Norm of the functional phi restricted to F = span(subspace), in the dual of ||.||_p.
double functional_norm_on(const Eigen::RowVectorXd& phi, const Eigen::MatrixXd& subspace, Norm p);

struct PerturbedProjection {
  Eigen::MatrixXd q;
  AuerbachBasis basis;
  std::size_t rank = 0;
  double restricted_norm = 0.0;  // ||P|_E||
  double p_norm = 0.0;           // ||P||
  double distance = 0.0;         // ||P - Q||
  double bound = 0.0;            // 4 ||P|| n eps
  double idempotence_residual = 0.0;
  double kernel_residual = 0.0;
  double range_residual = 0.0;
};

// Projection Q onto F = range(P) with Q|_E = 0, from the Auerbach basis of F
// and minimum dual-norm extensions of the functionals P^* f_i^* restricted to E.
PerturbedProjection perturb_projection(const Eigen::MatrixXd& p, const Eigen::MatrixXd& e, Norm ambient,
                                       double epsilon, std::size_t cap = 6);

}  // namespace snum
