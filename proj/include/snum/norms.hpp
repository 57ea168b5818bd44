#pragma once

#include <Eigen/Dense>

#include "snum/kernels.hpp"
#include "snum/operators.hpp"

namespace snum {

double vector_norm(const Eigen::VectorXd& v, Norm p);

// Orthonormal basis (thin QR) of the column span of b; b must have full column rank.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& b);

// Orthonormal basis of the orthogonal complement of span(u) in R^n.
Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& u, Eigen::Index n);

// max over sign vectors s of ||a^T s||_2, i.e. the l2 -> l1 norm of a.
double sign_enumeration_norm(const Eigen::MatrixXd& a);

// ||M|_E|| from (E, ||.||_p_dom) to (R^rows, ||.||_p_cod) with E = span(b).
// Exact: closed forms on a Hilbert domain, vertex enumeration of the
// section E cap B_p otherwise.
double restricted_norm(const Eigen::MatrixXd& m, const Eigen::MatrixXd& b, Norm p_dom, Norm p_cod,
                       Exec exec = Exec::parallel);

double operator_norm(const TaggedMatrix& m, Exec exec = Exec::parallel);

}  // namespace snum
