#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "snum/kernels.hpp"
#include "snum/operators.hpp"

namespace snum {

struct Constants {
  double kg = 1.78222;
  // kappa_p by exponent p; kappa_2 = 1 is implied and never overridden.
  std::map<double, double> kappa;
  double gauss_a = 0.79788456080286535588;  // sqrt(2/pi)

  // Throws ConfigError when p != 2 and kappa_p is not configured.
  double kappa_for(double p) const;
};

enum class Scale { a, c, d, t, x, y, h, pi2_gelfand, pitr_gelfand, schatten_q_approx };

std::string to_string(Scale s);
Scale parse_scale(std::string_view name);

struct SNumberRow {
  std::size_t m = 0;
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
};

struct SNumberReport {
  Scale scale = Scale::a;
  std::vector<SNumberRow> rows;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// Nonincreasing singular values; both tags must be l2.
std::vector<double> singular_values(const TaggedMatrix& m);

// sum_{i=m}^n d_i for a nonincreasing nonnegative diagonal l_inf^n -> l_1^n.
double diag_inf1_snumber(std::span<const double> d, std::size_t m);

// (sum_{i=m}^n d_i^q)^{1/q}; q = +inf gives the largest tail entry.
double schatten_q_tail(std::span<const double> d, std::size_t m, double q);

double pi2_diag_inf2(std::span<const double> d);

// [kappa_p ||d||_2, ||d||_2] for p >= 2.
Interval pi_p_diag_bounds(std::span<const double> d, double p, const Constants& constants);

// Schatten-q norm from the singular values of a Hilbert-tagged matrix.
double schatten_norm(const TaggedMatrix& m, double q);

// [||M||_q, sqrt(pi/2) ||M||_q] with 1/q = 1/2 - 1/r + 1/t.
Interval pitr_hilbert_bounds(const TaggedMatrix& m, double t, double r);

// Same interval for a diagonal Hilbert operator, from its entries.
Interval pitr_diag_bounds(std::span<const double> d, double t, double r);

double weyl_upper(double pi2_value, std::size_t k);
double hilbertnum_upper_from_nuclear(double nu, std::size_t k);

// Exact report for the scales that have a closed form on m: singular values
// on Hilbert tags, the tail-sum formula on nonnegative l_inf -> l_1
// diagonals. Throws InvalidInput otherwise.
SNumberReport exact_snumbers(const TaggedMatrix& m, Scale scale, std::size_t m_max);

struct DecayEnvelope {
  std::vector<double> tail;  // tail[N] = ||T - P_N T P_N||, N = 0..total_dim
  std::vector<EnvelopePoint> points;
};

// Upper envelopes for x_k, y_k, h_k of a (c0, l1) block operator; tail
// norms are exact on retained coordinates plus the analytic remainder.
DecayEnvelope prop12_decay_envelope(const BlockOperator& op, std::size_t k_max, const Constants& constants,
                                    Exec exec = Exec::parallel);

}  // namespace snum
