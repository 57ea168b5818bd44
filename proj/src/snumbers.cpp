#include "snum/snumbers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "snum/error.hpp"

namespace snum {

double Constants::kappa_for(double p) const {
  if (p == 2.0) return 1.0;
  const auto it = kappa.find(p);
  if (it == kappa.end()) {
    throw ConfigError("kappa_" + std::to_string(p) + " is not configured");
  }
  return it->second;
}

std::string to_string(Scale s) {
  switch (s) {
    case Scale::a: return "a";
    case Scale::c: return "c";
    case Scale::d: return "d";
    case Scale::t: return "t";
    case Scale::x: return "x";
    case Scale::y: return "y";
    case Scale::h: return "h";
    case Scale::pi2_gelfand: return "pi2_gelfand";
    case Scale::pitr_gelfand: return "pitr_gelfand";
    case Scale::schatten_q_approx: return "schatten_q_approx";
  }
  return "?";
}

Scale parse_scale(std::string_view name) {
  for (auto s : {Scale::a, Scale::c, Scale::d, Scale::t, Scale::x, Scale::y, Scale::h, Scale::pi2_gelfand,
                 Scale::pitr_gelfand, Scale::schatten_q_approx}) {
    if (to_string(s) == name) return s;
  }
  throw ParseError("unknown scale '" + std::string(name) + "'");
}

std::vector<double> singular_values(const TaggedMatrix& m) {
  if (!m.hilbert()) throw InvalidInput("singular values need l2 -> l2 tags");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m.entries);
  const Eigen::VectorXd s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

namespace {

void check_index(std::span<const double> d, std::size_t m) {
  if (m == 0 || m > d.size()) throw InvalidInput("s-number index out of range");
}

}  // namespace

double diag_inf1_snumber(std::span<const double> d, std::size_t m) {
  check_index(d, m);
  double acc = 0.0;
  for (std::size_t i = m - 1; i < d.size(); ++i) acc += d[i];
  return acc;
}

double schatten_q_tail(std::span<const double> d, std::size_t m, double q) {
  check_index(d, m);
  if (!(q >= 1.0)) throw InvalidInput("Schatten exponent must be >= 1");
  if (std::isinf(q)) {
    double best = 0.0;
    for (std::size_t i = m - 1; i < d.size(); ++i) best = std::max(best, std::abs(d[i]));
    return best;
  }
  double acc = 0.0;
  for (std::size_t i = m - 1; i < d.size(); ++i) acc += std::pow(std::abs(d[i]), q);
  return std::pow(acc, 1.0 / q);
}

double pi2_diag_inf2(std::span<const double> d) {
  double acc = 0.0;
  for (double x : d) acc += x * x;
  return std::sqrt(acc);
}

Interval pi_p_diag_bounds(std::span<const double> d, double p, const Constants& constants) {
  if (!(p >= 2.0)) throw InvalidInput("pi_p bounds need p >= 2");
  const double hs = pi2_diag_inf2(d);
  return {constants.kappa_for(p) * hs, hs};
}

double schatten_norm(const TaggedMatrix& m, double q) {
  const auto s = singular_values(m);
  return schatten_q_tail(s, 1, q);
}

Interval pitr_hilbert_bounds(const TaggedMatrix& m, double t, double r) {
  const double q = type_exponent(t, r);
  const double norm = schatten_norm(m, q);
  return {norm, std::sqrt(std::numbers::pi / 2.0) * norm};
}

Interval pitr_diag_bounds(std::span<const double> d, double t, double r) {
  const double q = type_exponent(t, r);
  const double norm = d.empty() ? 0.0 : schatten_q_tail(d, 1, q);
  return {norm, std::sqrt(std::numbers::pi / 2.0) * norm};
}

double weyl_upper(double pi2_value, std::size_t k) {
  if (k == 0) throw InvalidInput("Weyl bound index must be >= 1");
  return pi2_value / std::sqrt(static_cast<double>(k));
}

double hilbertnum_upper_from_nuclear(double nu, std::size_t k) {
  if (k == 0) throw InvalidInput("Hilbert-number bound index must be >= 1");
  return nu / static_cast<double>(k);
}

namespace {

bool is_nonnegative_diagonal(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != 0.0) return false;
    }
  return true;
}

}  // namespace

SNumberReport exact_snumbers(const TaggedMatrix& m, Scale scale, std::size_t m_max) {
  std::vector<double> values;
  if (m.hilbert()) {
    if (scale == Scale::pi2_gelfand || scale == Scale::pitr_gelfand || scale == Scale::schatten_q_approx) {
      throw InvalidInput("scale " + to_string(scale) + " has no closed form here");
    }
    values = singular_values(m);
  } else if (m.domain.p == Norm::inf && m.codomain.p == Norm::one && is_nonnegative_diagonal(m.entries)) {
    if (scale != Scale::a && scale != Scale::c && scale != Scale::d) {
      throw InvalidInput("only a, c, d have a closed form on l_inf -> l_1 diagonals");
    }
    std::vector<double> d(static_cast<std::size_t>(m.entries.rows()));
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = std::abs(m.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
    }
    std::sort(d.begin(), d.end(), std::greater<>());
    for (std::size_t k = 1; k <= d.size(); ++k) values.push_back(diag_inf1_snumber(d, k));
  } else {
    throw InvalidInput("no closed form for these tags; use the oracle subcommand");
  }
  if (m_max == 0) m_max = values.size();
  SNumberReport out;
  out.scale = scale;
  for (std::size_t k = 1; k <= m_max; ++k) {
    const double v = k <= values.size() ? values[k - 1] : 0.0;
    out.rows.push_back({k, v, v, true});
  }
  return out;
}

DecayEnvelope prop12_decay_envelope(const BlockOperator& op, std::size_t k_max, const Constants& constants,
                                    Exec exec) {
  if (op.instantiation.domain != "c0" || op.instantiation.codomain != "l1") {
    throw InvalidInput("decay envelope needs the (c0, l1) instantiation");
  }
  const auto coords = op.coordinates();
  const double remainder = 1.25 * op.tail_anchor;
  DecayEnvelope out;
  out.tail.assign(coords.size() + 1, remainder);
  double acc = 0.0;
  for (std::size_t i = coords.size(); i-- > 0;) {
    acc += std::abs(coords[i]);
    out.tail[i] = acc + remainder;
  }
  out.points = decay_envelope(out.tail, k_max, constants.kg, exec);
  return out;
}

}  // namespace snum
