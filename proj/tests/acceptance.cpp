// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "snum/norms.hpp"
#include "snum/oracle.hpp"
#include "snum/snumbers.hpp"
#include "snum/verify.hpp"
#include "support.hpp"

using namespace snum;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) note << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// 1: sandwich on the Hilbert instantiation, recomputed from the sorted diagonal.
void controlled_sandwich(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& seq : {DecaySequence::geometric(0.5), DecaySequence::power(1)}) {
    const auto report = verify_controlled(seq, 3);
    o.require(report.overall_pass, seq.spec() + " report");
    o.require(report.indices == std::vector<std::size_t>({6, 36, 186}), seq.spec() + " plan");
    auto sigma = build_controlled(seq, 3).coordinates();
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    const double tol = 1e-10;
    o.require(sigma.front() <= 2 * seq(1) + tol, "norm bound");
    for (std::size_t m = 1; m <= report.indices.back(); ++m) {
      const double s = sigma[m - 1], a = seq(m);
      const double rm = static_cast<double>(m);
      bool ok = a / 9 <= s + tol && s <= 3 * seq(ceil_div(m, 6)) + tol && a / (9 * std::sqrt(rm)) <= s + tol &&
                a / (9 * rm) <= s + tol && a <= s + tol;
      ok = ok && std::abs(report.rows[m - 1].certified_lower - s) <= tol;
      o.require(ok, seq.spec() + " m=" + std::to_string(m));
    }
    o.note << seq.spec() << ": " << report.rows.size() << " rows; ";
  }
  const double t = seconds_since(t0);
  o.require(t < 5.0, "runtime");
  o.note << "time " << t << " s";
}

// 2: minorant properties on random sequences.
void minorant_suite(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  const std::size_t h = 64;
  for (int trial = 0; trial < 1000 && o.pass; ++trial) {
    const auto seq = DecaySequence::table(ref::random_decay(rng, 96));
    const auto m = convex_minorant(seq, h);
    const auto& b = m.values;
    for (std::size_t i = 1; i <= h; ++i)
      for (std::size_t k = i + 1; k <= h; ++k)
        for (std::size_t j = k + 1; j <= h; ++j) {
          const double w = static_cast<double>(j - k) / static_cast<double>(j - i);
          if (b[k - 1] > w * b[i - 1] + (1 - w) * b[j - 1] + kSequenceTolerance) {
            o.require(false, "chord test trial " + std::to_string(trial));
          }
        }
    for (std::size_t k = 1; k <= h; ++k) {
      const double floor = std::min(seq(k) / 2.0, seq(2 * k - 1));
      o.require(b[k - 1] <= seq(k) + kSequenceTolerance && b[k - 1] >= floor - kSequenceTolerance,
                "sandwich trial " + std::to_string(trial));
    }
    const auto again = convex_minorant(m.as_table(), h);
    for (std::size_t k = 1; k <= h; ++k) {
      o.require(std::abs(again.values[k - 1] - b[k - 1]) <= 1e-12, "idempotence trial " + std::to_string(trial));
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 10.0, "runtime");
  o.note << "1000 sequences, time " << t << " s";
}

// 3: tail-sum formula against the width oracles.
void diagonal_widths(Outcome& o) {
  std::mt19937_64 rng(3);
  OracleOptions opts;
  opts.restarts = 50;
  opts.seed = 3;
  int instances = 0, gel_ok = 0, kol_ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const std::size_t m = 1 + rng() % std::min<std::size_t>(3, n);
    const auto d = ref::random_nonincreasing(rng, n, 0.0, 1.0);
    const TaggedMatrix mat(ref::diag(d), Norm::inf, Norm::one);
    double formula = 0.0;
    for (std::size_t i = m; i <= n; ++i) formula += d[i - 1];
    // coordinate witness x_1 = ... = x_{m-1} = 0
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n - m + 1));
    for (std::size_t i = m; i <= n; ++i) e(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(i - m)) = 1.0;
    o.require(std::abs(ref::restricted_norm_ref(mat.entries, e, INFINITY, 1.0) - formula) <= 1e-12, "coordinate witness");
    ++instances;
    if (std::abs(gelfand_oracle(mat, m, opts).upper - formula) <= 1e-6) ++gel_ok;
    if (std::abs(kolmogorov_oracle(mat, m, opts).upper - formula) <= 1e-6) ++kol_ok;
  }
  o.require(gel_ok * 100 >= instances * 99, "gelfand agreement");
  o.require(kol_ok * 100 >= instances * 99, "kolmogorov agreement");
  o.note << "gelfand " << gel_ok << "/" << instances << ", kolmogorov " << kol_ok << "/" << instances;
}

// 4: pi_2 of diagonals l_inf -> l_2.
void pi2_diagonals(Outcome& o) {
  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const auto d = ref::random_nonincreasing(rng, n, 0.0, 2.0);
    double hs = 0.0;
    for (double x : d) hs += x * x;
    hs = std::sqrt(hs);
    const auto b = pi2_lower_oracle(TaggedMatrix(ref::diag(d), Norm::inf, Norm::two), n + 2, 20,
                                    static_cast<std::uint64_t>(trial));
    o.require(std::abs(b.canonical - hs) <= 1e-9, "canonical family");
    o.require(b.sampled <= hs + 1e-9, "sampled family");
    worst = std::max(worst, b.sampled - hs);
  }
  o.note << "100 diagonals, max(sampled - ||d||_2) = " << worst;
}

void check_claims(Outcome& o, const TheoremCheckReport& r, const DecaySequence& alpha, double c_lower,
                  std::size_t lower_index, double c_upper, const std::string& label) {
  o.require(r.overall_pass, label + " overall");
  o.require(r.rows.size() == r.indices.back(), label + " row count");
  const double tol = 1e-10 * alpha(1);
  for (const auto& row : r.rows) {
    const double lo = c_lower * alpha(lower_index * row.m);
    const double hi = c_upper * alpha(ceil_div(4 * row.m, 5));
    o.require(std::abs(row.claimed_lower - lo) <= 1e-15 * alpha(1) && std::abs(row.claimed_upper - hi) <= 1e-15 * alpha(1),
              label + " claim values m=" + std::to_string(row.m));
    o.require(row.certified_lower >= lo - tol && row.certified_upper <= hi + tol, label + " m=" + std::to_string(row.m));
  }
}

const DecaySequence& raw_table() {
  static const auto t = DecaySequence::table({1, 1, 0.5, 0.5, 0.25, 0.25, 0.1});
  return t;
}

// 5: two-summing construction.
void twosum(Outcome& o) {
  const auto geo = DecaySequence::geometric(0.5);
  const auto convex = verify_twosum(geo, 3);
  o.require(convex.claim_form == "convex", "claim form");
  check_claims(o, convex, geo, 7.0 / 99.0, 9, 3.0, "geometric");
  for (const auto& raw : {raw_table(), DecaySequence::table({1, 1, 0})}) {
    const auto general = verify_twosum(raw, 2);
    o.require(general.claim_form == "general", "raw form");
    check_claims(o, general, raw, 7.0 / 198.0, 18, 3.0, raw.spec());
  }
  o.note << "convex " << convex.rows.size() << " rows; raw tables pass the 18m form";
}

// 6: (c0, l1) construction.
void nocotype(Outcome& o) {
  std::size_t rows = 0;
  for (const auto& seq : {DecaySequence::geometric(0.5), DecaySequence::power(1)}) {
    const auto r = verify_nocotype(seq, 3);
    o.require(r.claim_form == "convex", seq.spec() + " form");
    check_claims(o, r, seq, 49.0 / 1100.0, 9, 4.0, seq.spec());
    rows += r.rows.size();
  }
  const auto general = verify_nocotype(raw_table(), 3);
  o.require(general.claim_form == "general", "raw form");
  check_claims(o, general, raw_table(), 1.0 / 50.0, 18, 4.0, "raw table");
  o.note << "convex " << rows << " rows, raw " << general.rows.size() << " rows";
}

// 7: (t, r) = (4, 2).
void type_four_two(Outcome& o) {
  o.require(type_exponent(4, 2) == 4.0, "q = 4");
  const auto seq = DecaySequence::geometric(0.5);
  const auto ws = convex_working_sequence(seq, Variant::type, 3, 4.0);
  double worst = 0.0;
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto beta = beta_table(ws.sequence, ws.plan, k);
    const std::size_t nk = ws.plan.n(k), shift = 2 * ws.plan.n(k - 1);
    double acc = 0.0;
    for (std::size_t m = nk; m >= 1; --m) {
      acc += std::pow(beta[m - 1], 4.0);
      const double want = std::pow(ws.sequence(m + shift), 4.0) - std::pow(ws.sequence(nk + shift + 1), 4.0);
      worst = std::max(worst, std::abs(acc - want));
    }
  }
  o.require(worst <= 1e-12, "Schatten-4 telescoping");
  const auto r = verify_type(seq, 3, 4, 2);
  o.require(r.claim_form == "convex", "form");
  check_claims(o, r, seq, 7.0 / 66.0, 9, 4.0, "geometric");
  const auto op = build_type(seq, 3, 4, 2);
  const double root = std::sqrt(std::numbers::pi / 2.0);
  for (std::size_t m = 1; m <= op.plan.n(3); ++m) {
    const auto& d = op.blocks[op.plan.block_of(m) - 1].diagonal;
    double s = 0.0;
    for (std::size_t i = m; i <= d.size(); ++i) s += std::pow(d[i - 1], 4.0);
    const auto iv = pitr_diag_bounds(std::span<const double>(d).subspan(m - 1), 4, 2);
    if (s > 0.0) o.require(std::abs(iv.upper / iv.lower - root) <= 1e-14, "Mitiagin ratio m=" + std::to_string(m));
  }
  o.note << "telescoping error " << worst << ", " << r.rows.size() << " rows";
}

// 8: decay envelopes.
void prop_optimal(Outcome& o) {
  const double eps = 0.01;
  const auto r = verify_prop_optimal(DecaySequence::geometric(0.5), 3, 500, eps);
  o.require(r.pass && r.k0.has_value(), "k0 found");
  if (r.k0) {
    const EnvelopeRow* prev = nullptr;
    for (const auto& row : r.curve) {
      if (row.k < *r.k0) continue;
      o.require(row.x_scaled <= eps && row.y_scaled <= eps && row.h_scaled <= eps, "below eps k=" + std::to_string(row.k));
      if (prev) {
        o.require(row.x_scaled <= prev->x_scaled && row.y_scaled <= prev->y_scaled && row.h_scaled <= prev->h_scaled,
                  "monotone k=" + std::to_string(row.k));
      }
      prev = &row;
    }
    o.note << "k0 = " << *r.k0 << " of k_max 500";
  }
}

// 9: strict gap of the second Gelfand number.
void prop_second(Outcome& o) {
  OracleOptions opts;
  opts.iterations = 1500;
  opts.seed = 0;
  const auto r = verify_prop_second(6, 50, 0.1, 1, opts);
  o.require(r.pass && r.rows.size() == 50, "sampled trials");
  for (const auto& t : r.rows) o.require(t.c2_upper < t.norm - 1e-3 && 1 - t.second_row / t.norm >= 0.1, "trial");
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(3, 3);
  rows(0, 0) = 1.0;
  rows(1, 1) = 0.8;
  rows(2, 2) = 0.6;
  const auto bal = second_gelfand_gap(rows, opts);
  const double want = 0.8 / std::sqrt(1.64);
  o.require(std::abs(bal.c2_upper - want) <= 1e-4, "balancing value");
  o.note << "min gap " << r.min_gap << ", balanced c2 " << bal.c2_upper << " vs " << want;
}

// 10: projection perturbation and Auerbach bases.
void projections(Outcome& o) {
  std::mt19937_64 rng(10);
  double worst_ratio = 0.0, worst_res = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = ref::random_projection_case(rng);
    const Norm amb = c.ambient == 1.0 ? Norm::one : c.ambient == 2.0 ? Norm::two : Norm::inf;
    const auto r = perturb_projection(c.p, c.e, amb, c.epsilon);
    const double n = static_cast<double>(c.f.cols());
    const double res = std::max({(r.q * r.q - r.q).cwiseAbs().maxCoeff(), (r.q * c.e).cwiseAbs().maxCoeff(),
                                 (r.q * c.f - c.f).cwiseAbs().maxCoeff()});
    const double dist = ref::induced_norm(c.p - r.q, c.ambient);
    const double bound = 4 * ref::induced_norm(c.p, c.ambient) * n * c.epsilon;
    o.require(res <= 1e-10, "residuals trial " + std::to_string(trial));
    o.require(dist <= bound + 1e-12, "distance bound trial " + std::to_string(trial));
    const auto& b = r.basis;
    o.require((b.functionals * b.vectors - Eigen::MatrixXd::Identity(b.vectors.cols(), b.vectors.cols()))
                      .cwiseAbs()
                      .maxCoeff() <= 1e-8,
              "pairing");
    for (Eigen::Index i = 0; i < b.vectors.cols(); ++i) {
      o.require(std::abs(ref::lp_norm(b.vectors.col(i), c.ambient) - 1) <= 1e-8, "vector norm");
      o.require(std::abs(ref::functional_norm_ref(b.functionals.row(i), c.f, c.ambient) - 1) <= 1e-8,
                "functional norm");
    }
    worst_ratio = std::max(worst_ratio, dist / bound);
    worst_res = std::max(worst_res, res);
  }
  o.note << "100 instances, max residual " << worst_res << ", max distance/bound " << worst_ratio;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"controlled sandwich on (l2, l2)", controlled_sandwich},
      {"convex minorant property suite", minorant_suite},
      {"diagonal tail formula vs width oracles", diagonal_widths},
      {"pi_2 of l_inf -> l_2 diagonals", pi2_diagonals},
      {"two-summing construction (p = 2)", twosum},
      {"(c0, l1) construction", nocotype},
      {"(t, r) = (4, 2) construction", type_four_two},
      {"decay envelopes", prop_optimal},
      {"strict gap of c_2", prop_second},
      {"projection perturbation and Auerbach bases", projections},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << "exception: " << e.what();
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2zu %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds_since(t0), o.note.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
