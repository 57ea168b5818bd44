#include "snum/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "snum/error.hpp"
#include "snum/lp.hpp"
#include "snum/norms.hpp"
#include "snum/rng.hpp"

namespace snum {

namespace {

void check_oracle_input(const TaggedMatrix& m, std::size_t index, const OracleOptions& options) {
  if (index == 0) throw InvalidInput("s-number index must be >= 1");
  if (index > m.cols() + 1) throw InvalidInput("index exceeds domain dimension + 1");
  if (std::max(m.rows(), m.cols()) > options.dimension_cap) {
    throw ResourceLimit("matrix dimension " + std::to_string(std::max(m.rows(), m.cols())) +
                        " exceeds the oracle cap " + std::to_string(options.dimension_cap));
  }
}

bool is_diagonal(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != 0.0) return false;
    }
  return true;
}

double sigma(const Eigen::MatrixXd& m, std::size_t index) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return index <= static_cast<std::size_t>(s.size()) ? s(static_cast<Eigen::Index>(index - 1)) : 0.0;
}

Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = g(rng);
  return out;
}

std::string index_list(const std::vector<int>& idx) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i] + 1;
  os << '}';
  return os.str();
}

Eigen::MatrixXd coordinate_frame(Eigen::Index n, const std::vector<int>& idx) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) u(idx[k], static_cast<Eigen::Index>(k)) = 1.0;
  return u;
}

struct Search {
  double value = 0.0;
  Eigen::MatrixXd point;
  bool converged = false;
};

// (1+1) evolution strategy with the 1/5 success rule. `propose` maps
// (point, step, rng) to a candidate; strict improvement is required.
template <class Objective, class Propose>
Search local_search(Eigen::MatrixXd start, Objective&& f, Propose&& propose, std::mt19937_64& rng,
                    const OracleOptions& options) {
  Search s{f(start), std::move(start), false};
  double step = options.initial_step;
  for (std::size_t it = 0; it < options.iterations; ++it) {
    if (step < options.min_step) {
      s.converged = true;
      break;
    }
    Eigen::MatrixXd cand = propose(s.point, step, rng);
    const double v = f(cand);
    if (v < s.value) {
      s.value = v;
      s.point = std::move(cand);
      step = std::min(1.0, step * 1.5);
    } else {
      step *= 0.9036;
    }
  }
  return s;
}

}  // namespace

double certified_gelfand_lower(const TaggedMatrix& m, std::size_t index) {
  if (index == 0) throw InvalidInput("s-number index must be >= 1");
  if (index > m.cols()) return 0.0;
  if (index == 1) return operator_norm(m, Exec::serial);
  if (m.hilbert()) return sigma(m.entries, index);
  if (m.domain.p == Norm::inf && m.codomain.p == Norm::one && is_diagonal(m.entries)) {
    std::vector<double> d(static_cast<std::size_t>(m.entries.rows()));
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = std::abs(m.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
    }
    std::sort(d.begin(), d.end(), std::greater<>());
    double acc = 0.0;
    for (std::size_t i = index - 1; i < d.size(); ++i) acc += d[i];
    return acc;
  }
  return 0.0;
}

OracleResult gelfand_oracle(const TaggedMatrix& m, std::size_t index, const OracleOptions& options) {
  check_oracle_input(m, index, options);
  const auto n = static_cast<Eigen::Index>(m.cols());
  OracleResult out;
  if (index == m.cols() + 1) {
    out.witness = "E = {0}";
    out.witness_matrix = Eigen::MatrixXd::Zero(n, 0);
    out.converged = out.exact = true;
    return out;
  }
  if (index == 1) {
    out.lower = out.upper = operator_norm(m, options.exec);
    out.witness = "E = whole domain";
    out.witness_matrix = Eigen::MatrixXd::Identity(n, n);
    out.converged = out.exact = true;
    return out;
  }
  if (m.hilbert()) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.entries, Eigen::ComputeFullV);
    out.lower = out.upper = sigma(m.entries, index);
    out.witness = "orthogonal complement of the top " + std::to_string(index - 1) + " right singular vectors";
    out.witness_matrix = svd.matrixV().rightCols(n - static_cast<Eigen::Index>(index - 1));
    out.converged = out.exact = true;
    return out;
  }

  const auto codim = static_cast<int>(index - 1);
  auto objective = [&](const Eigen::MatrixXd& u) {
    return restricted_norm(m.entries, complement_basis(u, n), m.domain.p, m.codomain.p, Exec::serial);
  };

  // Deterministic candidates: E = {x : x_i = 0 for i in S}, |S| = m - 1.
  const auto subsets = combinations(static_cast<int>(n), codim);
  const auto coord_values = run_restarts(
      subsets.size(),
      [&](std::size_t s) {
        std::vector<int> keep;
        for (int i = 0; i < n; ++i) {
          if (!std::binary_search(subsets[s].begin(), subsets[s].end(), i)) keep.push_back(i);
        }
        Eigen::MatrixXd cols(m.entries.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t k = 0; k < keep.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = m.entries.col(keep[k]);
        const auto d = static_cast<Eigen::Index>(keep.size());
        return restricted_norm(cols, Eigen::MatrixXd::Identity(d, d), m.domain.p, m.codomain.p, Exec::serial);
      },
      options.exec);
  std::size_t best_subset = 0;
  for (std::size_t s = 1; s < coord_values.size(); ++s) {
    if (coord_values[s] < coord_values[best_subset]) best_subset = s;
  }
  const Eigen::MatrixXd coord_u = coordinate_frame(n, subsets[best_subset]);

  auto propose = [&](const Eigen::MatrixXd& u, double step, std::mt19937_64& rng) {
    return orthonormal_basis(u + step * gaussian(rng, n, codim));
  };
  const auto searches = run_restarts(
      options.restarts,
      [&](std::size_t r) {
        auto rng = stream_for(options.seed, Stream::oracle_restart, r);
        Eigen::MatrixXd start = r == 0 ? coord_u : orthonormal_basis(gaussian(rng, n, codim));
        return local_search(std::move(start), objective, propose, rng, options);
      },
      options.exec);

  out.upper = coord_values[best_subset];
  out.witness = "coordinate subspace x_i = 0 for i in " + index_list(subsets[best_subset]);
  Eigen::MatrixXd best_u = coord_u;
  bool all_converged = true;
  for (std::size_t r = 0; r < searches.size(); ++r) {
    all_converged = all_converged && searches[r].converged;
    if (searches[r].value < out.upper) {
      out.upper = searches[r].value;
      best_u = searches[r].point;
      out.witness = "local search from restart " + std::to_string(r);
    }
  }
  out.witness_matrix = complement_basis(best_u, n);
  out.restarts_used = searches.size();
  out.lower = std::min(certified_gelfand_lower(m, index), out.upper);
  out.exact = out.lower > 0.0 && out.upper - out.lower <= options.tol * std::max(1.0, out.upper);
  out.converged = all_converged || out.exact;
  return out;
}

OracleResult kolmogorov_oracle(const TaggedMatrix& m, std::size_t index, const OracleOptions& options) {
  if (index == 0) throw InvalidInput("s-number index must be >= 1");
  if (index > m.rows() + 1) throw InvalidInput("index exceeds codomain dimension + 1");
  auto out = gelfand_oracle(m.adjoint(), index, options);
  out.witness = "adjoint: " + out.witness;
  return out;
}

OracleResult approx_oracle(const TaggedMatrix& m, std::size_t index, const OracleOptions& options) {
  check_oracle_input(m, index, options);
  const auto rows = m.entries.rows();
  const auto cols = m.entries.cols();
  const auto rank = static_cast<Eigen::Index>(index - 1);
  OracleResult out;
  if (rank >= std::min(rows, cols)) {
    out.witness = "S = M";
    out.witness_matrix = m.entries;
    out.converged = out.exact = true;
    return out;
  }
  if (index == 1 || m.hilbert()) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.entries, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.lower = out.upper = index == 1 ? operator_norm(m, options.exec) : sigma(m.entries, index);
    out.witness = index == 1 ? "S = 0" : "SVD truncation to rank " + std::to_string(rank);
    out.witness_matrix = svd.matrixU().leftCols(rank) * svd.singularValues().head(rank).asDiagonal() *
                         svd.matrixV().leftCols(rank).transpose();
    out.converged = out.exact = true;
    return out;
  }

  // Approximants S = L R^T are packed as [L; R] ((rows + cols) x rank).
  auto unpack = [&](const Eigen::MatrixXd& lr) {
    return Eigen::MatrixXd(lr.topRows(rows) * lr.bottomRows(cols).transpose());
  };
  auto objective = [&](const Eigen::MatrixXd& lr) {
    return operator_norm(TaggedMatrix(m.entries - unpack(lr), m.domain.p, m.codomain.p), Exec::serial);
  };

  std::vector<std::pair<std::string, Eigen::MatrixXd>> candidates;
  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.entries, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXd lr(rows + cols, rank);
    lr.topRows(rows) = svd.matrixU().leftCols(rank) * svd.singularValues().head(rank).asDiagonal();
    lr.bottomRows(cols) = svd.matrixV().leftCols(rank);
    candidates.emplace_back("SVD truncation", lr);
  }
  for (const auto& s : combinations(static_cast<int>(cols), static_cast<int>(rank))) {
    Eigen::MatrixXd lr = Eigen::MatrixXd::Zero(rows + cols, rank);
    for (Eigen::Index k = 0; k < rank; ++k) {
      lr.col(k).head(rows) = m.entries.col(s[static_cast<std::size_t>(k)]);
      lr(rows + s[static_cast<std::size_t>(k)], k) = 1.0;
    }
    candidates.emplace_back("columns " + index_list(s), lr);
  }
  for (const auto& s : combinations(static_cast<int>(rows), static_cast<int>(rank))) {
    Eigen::MatrixXd lr = Eigen::MatrixXd::Zero(rows + cols, rank);
    for (Eigen::Index k = 0; k < rank; ++k) {
      lr(s[static_cast<std::size_t>(k)], k) = 1.0;
      lr.col(k).tail(cols) = m.entries.row(s[static_cast<std::size_t>(k)]).transpose();
    }
    candidates.emplace_back("rows " + index_list(s), lr);
  }
  const auto values = run_restarts(
      candidates.size(), [&](std::size_t i) { return objective(candidates[i].second); }, options.exec);
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }

  const double scale = std::max(m.entries.cwiseAbs().maxCoeff(), 1e-300);
  auto propose = [&](const Eigen::MatrixXd& lr, double step, std::mt19937_64& rng) {
    return Eigen::MatrixXd(lr + step * scale * gaussian(rng, rows + cols, rank));
  };
  const auto searches = run_restarts(
      options.restarts,
      [&](std::size_t r) {
        auto rng = stream_for(options.seed, Stream::oracle_restart, r);
        Eigen::MatrixXd start = candidates[r == 0 ? best : 0].second;
        if (r > 0) start += 0.3 * scale * gaussian(rng, rows + cols, rank);
        return local_search(std::move(start), objective, propose, rng, options);
      },
      options.exec);

  out.upper = values[best];
  out.witness = candidates[best].first;
  Eigen::MatrixXd best_lr = candidates[best].second;
  bool all_converged = true;
  for (std::size_t r = 0; r < searches.size(); ++r) {
    all_converged = all_converged && searches[r].converged;
    if (searches[r].value < out.upper) {
      out.upper = searches[r].value;
      best_lr = searches[r].point;
      out.witness = "local search from restart " + std::to_string(r);
    }
  }
  out.witness_matrix = unpack(best_lr);
  out.restarts_used = searches.size();
  const double lower =
      std::max(certified_gelfand_lower(m, index),
               index <= m.rows() ? certified_gelfand_lower(m.adjoint(), index) : 0.0);
  out.lower = std::min(lower, out.upper);
  out.exact = out.lower > 0.0 && out.upper - out.lower <= options.tol * std::max(1.0, out.upper);
  out.converged = all_converged || out.exact;
  return out;
}

double weak_l2_norm(const Eigen::MatrixXd& family, Norm domain) {
  if (family.size() == 0) return 0.0;
  switch (domain) {
    case Norm::inf: return family.rowwise().norm().maxCoeff();
    case Norm::two: return sigma(family, 1);
    case Norm::one: return sign_enumeration_norm(family);
  }
  return 0.0;
}

double summing_ratio(const TaggedMatrix& m, const Eigen::MatrixXd& family) {
  const double weak = weak_l2_norm(family, m.domain.p);
  if (weak <= 0.0) return 0.0;
  double strong = 0.0;
  for (Eigen::Index i = 0; i < family.cols(); ++i) {
    const double v = vector_norm(m.entries * family.col(i), m.codomain.p);
    strong += v * v;
  }
  return std::sqrt(strong) / weak;
}

Pi2Bound pi2_lower_oracle(const TaggedMatrix& m, std::size_t family_size, std::size_t rounds, std::uint64_t seed,
                          Exec exec) {
  if (family_size == 0) throw InvalidInput("family size must be >= 1");
  const auto n = static_cast<Eigen::Index>(m.cols());
  Pi2Bound out;
  out.family = Eigen::MatrixXd::Identity(n, n);
  out.canonical = summing_ratio(m, out.family);

  OracleOptions ascent;
  ascent.iterations = 200;
  ascent.initial_step = 0.3;
  auto negative_ratio = [&](const Eigen::MatrixXd& x) { return -summing_ratio(m, x); };
  auto propose = [&](const Eigen::MatrixXd& x, double step, std::mt19937_64& rng) {
    return Eigen::MatrixXd(x + step * gaussian(rng, x.rows(), x.cols()));
  };
  const auto fams = static_cast<Eigen::Index>(family_size);
  const auto searches = run_restarts(
      rounds,
      [&](std::size_t r) {
        auto rng = stream_for(seed, Stream::family, r);
        return local_search(gaussian(rng, n, fams), negative_ratio, propose, rng, ascent);
      },
      exec);
  out.lower = out.canonical;
  for (const auto& s : searches) {
    out.sampled = std::max(out.sampled, -s.value);
    if (-s.value > out.lower) {
      out.lower = -s.value;
      out.family = s.point;
    }
  }
  return out;
}

AuerbachBasis auerbach_basis(const SpaceTag& space, std::size_t cap) {
  if (space.dim == 0 || space.dim > cap) throw ResourceLimit("Auerbach basis dimension outside [1, cap]");
  const auto n = static_cast<Eigen::Index>(space.dim);
  AuerbachBasis out;
  out.vectors = Eigen::MatrixXd::Identity(n, n);
  out.functionals = Eigen::MatrixXd::Identity(n, n);
  out.converged = true;
  return out;
}

double functional_norm_on(const Eigen::RowVectorXd& phi, const Eigen::MatrixXd& subspace, Norm p) {
  if (p == Norm::two) return (phi * orthonormal_basis(subspace)).norm();
  return section_max_norm(phi * subspace, subspace, p, Norm::inf, Exec::serial);
}

namespace {

void auerbach_diagnostics(AuerbachBasis& b, const Eigen::MatrixXd& subspace, Norm p) {
  const Eigen::MatrixXd pairing = b.functionals * b.vectors;
  b.pairing_error = (pairing - Eigen::MatrixXd::Identity(pairing.rows(), pairing.cols())).cwiseAbs().maxCoeff();
  b.norm_error = 0.0;
  for (Eigen::Index i = 0; i < b.vectors.cols(); ++i) {
    b.norm_error = std::max(b.norm_error, std::abs(vector_norm(b.vectors.col(i), p) - 1.0));
    b.norm_error = std::max(b.norm_error, std::abs(functional_norm_on(b.functionals.row(i), subspace, p) - 1.0));
  }
}

}  // namespace

AuerbachBasis auerbach_basis(const Eigen::MatrixXd& subspace, Norm p, std::size_t cap) {
  const auto n = subspace.rows();
  const auto d = subspace.cols();
  if (d == 0 || static_cast<std::size_t>(n) > cap) throw ResourceLimit("Auerbach basis dimension outside [1, cap]");
  Eigen::FullPivLU<Eigen::MatrixXd> rank_check(subspace);
  if (rank_check.rank() < d) throw InvalidInput("Auerbach basis: subspace basis is rank deficient");
  AuerbachBasis out;
  if (p == Norm::two) {
    out.vectors = orthonormal_basis(subspace);
    out.functionals = out.vectors.transpose();
    out.converged = true;
    auerbach_diagnostics(out, subspace, p);
    return out;
  }

  const auto vertices = section_vertices(subspace, p);
  if (vertices.empty()) throw PreconditionViolation("unit ball of the subspace has no vertices");
  // Greedy start: repeatedly take the vertex with the largest residual
  // against the span of the chosen ones.
  Eigen::MatrixXd c(d, d);
  std::vector<std::size_t> chosen;
  for (Eigen::Index j = 0; j < d; ++j) {
    double best = -1.0;
    std::size_t arg = 0;
    Eigen::MatrixXd q = j ? orthonormal_basis(c.leftCols(j)) : Eigen::MatrixXd::Zero(d, 0);
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      const double r = (vertices[v] - q * (q.transpose() * vertices[v])).norm();
      if (r > best + 1e-14) {
        best = r;
        arg = v;
      }
    }
    c.col(j) = vertices[arg];
    chosen.push_back(arg);
  }
  // Coordinate ascent on |det C|: replacing column j by v scales det by (C^{-1} v)_j.
  bool improved = true;
  std::size_t sweeps = 0;
  while (improved && sweeps < 1000) {
    improved = false;
    ++sweeps;
    const Eigen::MatrixXd inv = c.inverse();
    for (std::size_t v = 0; v < vertices.size() && !improved; ++v) {
      const Eigen::VectorXd coef = inv * vertices[v];
      for (Eigen::Index j = 0; j < d; ++j) {
        if (std::abs(coef(j)) > 1.0 + 1e-12) {
          c.col(j) = vertices[v];
          improved = true;
          break;
        }
      }
    }
  }
  out.converged = !improved;
  const Eigen::MatrixXd inv = c.inverse();
  const Eigen::MatrixXd pinv = (subspace.transpose() * subspace).ldlt().solve(subspace.transpose());
  out.vectors = subspace * c;
  out.functionals = inv * pinv;
  auerbach_diagnostics(out, subspace, p);
  return out;
}

PerturbedProjection perturb_projection(const Eigen::MatrixXd& p, const Eigen::MatrixXd& e, Norm ambient,
                                       double epsilon, std::size_t cap) {
  const auto n = p.rows();
  if (p.cols() != n || e.rows() != n) throw InvalidInput("projection and subspace dimensions disagree");
  if (static_cast<std::size_t>(n) > cap) throw ResourceLimit("ambient dimension exceeds the Auerbach cap");
  if (!(epsilon > 0.0) || !(epsilon < 0.125)) throw PreconditionViolation("epsilon must lie in (0, 1/8)");
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  if ((p * p - p).cwiseAbs().maxCoeff() > 1e-9 * scale) throw PreconditionViolation("P is not a projection");

  PerturbedProjection out;
  out.restricted_norm = restricted_norm(p, e, ambient, ambient, Exec::serial);
  if (!(out.restricted_norm < epsilon)) {
    throw PreconditionViolation("||P|_E|| = " + std::to_string(out.restricted_norm) + " is not below epsilon");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(p, Eigen::ComputeFullU);
  Eigen::Index rank = 0;
  while (rank < svd.singularValues().size() && svd.singularValues()(rank) > 0.5) ++rank;
  if (rank == 0) throw PreconditionViolation("P has trivial range");
  out.rank = static_cast<std::size_t>(rank);
  const Eigen::MatrixXd f = svd.matrixU().leftCols(rank);
  out.basis = auerbach_basis(f, ambient, cap);

  const Eigen::MatrixXd a = out.basis.functionals * p;
  Eigen::MatrixXd g(n, e.cols() + rank);
  g << e, out.basis.vectors;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (lu.rank() < g.cols()) throw PreconditionViolation("E and F must be independent");

  Eigen::MatrixXd z(rank, n);
  for (Eigen::Index i = 0; i < rank; ++i) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g.cols());
    rhs.head(e.cols()) = (a.row(i) * e).transpose();
    Eigen::VectorXd zi;
    switch (ambient) {
      case Norm::two: zi = g.transpose().completeOrthogonalDecomposition().solve(rhs); break;
      case Norm::inf: zi = min_l1_solution(g, rhs); break;
      case Norm::one: zi = min_linf_solution(g, rhs); break;
    }
    z.row(i) = zi.transpose();
  }
  out.q = out.basis.vectors * (a - z);

  out.p_norm = operator_norm(TaggedMatrix(p, ambient, ambient), Exec::serial);
  out.distance = operator_norm(TaggedMatrix(p - out.q, ambient, ambient), Exec::serial);
  out.bound = 4.0 * out.p_norm * static_cast<double>(rank) * epsilon;
  out.idempotence_residual = (out.q * out.q - out.q).cwiseAbs().maxCoeff();
  out.kernel_residual = e.cols() ? (out.q * e).cwiseAbs().maxCoeff() : 0.0;
  const Eigen::MatrixXd off_range = out.q - f * (f.transpose() * out.q);
  out.range_residual = std::max(off_range.cwiseAbs().maxCoeff(),
                                (out.q * out.basis.vectors - out.basis.vectors).cwiseAbs().maxCoeff());
  return out;
}

}  // namespace snum
