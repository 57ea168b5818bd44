#include "snum/norms.hpp"

#include <algorithm>

#include "snum/error.hpp"

namespace snum {

double vector_norm(const Eigen::VectorXd& v, Norm p) {
  switch (p) {
    case Norm::one: return v.lpNorm<1>();
    case Norm::two: return v.norm();
    case Norm::inf: return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& b) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
  return qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
}

Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& u, Eigen::Index n) {
  if (u.cols() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
  const Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - u.cols());
}

double sign_enumeration_norm(const Eigen::MatrixXd& a) {
  const auto rows = a.rows();
  if (rows == 0) return 0.0;
  if (rows > 24) throw ResourceLimit("sign enumeration over more than 24 rows");
  const long long patterns = 1LL << (rows - 1);
  double best = 0.0;
  Eigen::VectorXd s(rows);
  for (long long k = 0; k < patterns; ++k) {
    s(0) = 1.0;
    for (Eigen::Index i = 1; i < rows; ++i) s(i) = (k >> (i - 1)) & 1 ? -1.0 : 1.0;
    best = std::max(best, (a.transpose() * s).norm());
  }
  return best;
}

double restricted_norm(const Eigen::MatrixXd& m, const Eigen::MatrixXd& b, Norm p_dom, Norm p_cod,
                       Exec exec) {
  if (b.cols() == 0) return 0.0;
  if (m.cols() != b.rows()) throw InvalidInput("restricted_norm: subspace basis has wrong ambient dimension");
  if (p_dom == Norm::two) {
    const Eigen::MatrixXd a = m * orthonormal_basis(b);
    switch (p_cod) {
      case Norm::two: {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
        return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
      }
      case Norm::inf: return a.rowwise().norm().maxCoeff();
      case Norm::one: return sign_enumeration_norm(a);
    }
  }
  return section_max_norm(m * b, b, p_dom, p_cod, exec);
}

double operator_norm(const TaggedMatrix& m, Exec exec) {
  const auto n = static_cast<Eigen::Index>(m.cols());
  return restricted_norm(m.entries, Eigen::MatrixXd::Identity(n, n), m.domain.p, m.codomain.p, exec);
}

}  // namespace snum
