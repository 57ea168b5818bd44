#include "snum/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <tuple>

#include "snum/error.hpp"
#include "snum/rng.hpp"

namespace snum {

std::string to_string(ClaimForm f) {
  switch (f) {
    case ClaimForm::automatic: return "automatic";
    case ClaimForm::convex: return "convex";
    case ClaimForm::general: return "general";
  }
  return "?";
}

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

std::size_t resolve_m_max(const BlockIndexPlan& plan, std::size_t blocks, const VerifyOptions& options) {
  const std::size_t last = plan.n(blocks);
  const std::size_t m_max = options.m_max.value_or(last);
  if (m_max == 0 || m_max > last) {
    throw InvalidInput("m-max must lie in [1, n_K] = [1, " + std::to_string(last) + "]");
  }
  return m_max;
}

bool coincides_with_minorant(const DecaySequence& seq, std::size_t horizon) {
  const auto minorant = convex_minorant(seq, std::max<std::size_t>(horizon, 2));
  const double tol = kSequenceTolerance * std::max(1.0, seq(1));
  for (std::size_t k = 1; k <= minorant.horizon; ++k) {
    if (std::abs(minorant(k) - seq(k)) > tol) return false;
  }
  return true;
}

ClaimForm resolve_form(const DecaySequence& seq, std::size_t horizon, ClaimForm requested) {
  if (requested != ClaimForm::automatic) return requested;
  return coincides_with_minorant(seq, horizon) ? ClaimForm::convex : ClaimForm::general;
}

void add_check(TheoremCheckReport& report, std::string name, const std::vector<double>& margins, double tol) {
  NamedCheck check{std::move(name), true, std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < margins.size(); ++i) {
    if (margins[i] < check.worst_margin) {
      check.worst_margin = margins[i];
      check.worst_m = i + 1;
    }
  }
  check.pass = check.worst_margin >= -tol;
  report.checks.push_back(check);
}

void finish(TheoremCheckReport& report, double tol) {
  std::vector<double> interval;
  bool all = !report.rows.empty();
  for (auto& row : report.rows) {
    row.pass = row.claimed_lower <= row.certified_lower + tol && row.certified_upper <= row.claimed_upper + tol;
    all = all && row.pass;
    interval.push_back(row.certified_upper - row.certified_lower);
  }
  add_check(report, "certified_lower <= certified_upper", interval, tol);
  for (const auto& c : report.checks) all = all && c.pass;
  report.overall_pass = all;
}

TheoremCheckReport header(const std::string& theorem, const BlockOperator& op, std::size_t blocks, double tol) {
  TheoremCheckReport r;
  r.theorem = theorem;
  r.instantiation = op.instantiation;
  r.sequence_spec = op.sequence_spec;
  r.indices.assign(op.plan.indices.begin(), op.plan.indices.begin() + static_cast<std::ptrdiff_t>(blocks));
  if (op.block_count() > blocks) r.lookahead_index = op.plan.n(blocks + 1);
  r.minorant_horizon = op.minorant_horizon;
  r.chord_horizon = op.chord_horizon;
  r.tolerance = tol;
  return r;
}

// Per-block suffix aggregates: agg[k][i] combines beta_{i+1..n_k}.
enum class Aggregate { sum, sum_squares, power_sum };

std::vector<std::vector<double>> suffix_tables(const BlockOperator& op, Aggregate kind, double q) {
  std::vector<std::vector<double>> out;
  for (const auto& block : op.blocks) {
    const auto& d = block.diagonal;
    std::vector<double> suffix(d.size() + 1, 0.0);
    for (std::size_t i = d.size(); i-- > 0;) {
      const double v = kind == Aggregate::sum ? d[i] : kind == Aggregate::sum_squares ? d[i] * d[i] : std::pow(d[i], q);
      suffix[i] = suffix[i + 1] + v;
    }
    out.push_back(std::move(suffix));
  }
  return out;
}

struct RecipeSpec {
  Aggregate aggregate;
  double q = 1.0;        // root applied to the aggregate (1, 2, or q)
  NormKind tail_kind;
  double lower_factor;   // multiplies every certified lower value
  double upper_factor;   // multiplies every certified upper value
};

double root(double v, double q) { return q == 1.0 ? v : std::pow(v, 1.0 / q); }

// Certified lower: best block restriction at index m. Certified upper:
// best rank split that removes blocks 1..k-1 and the top l-1 coordinates
// of block k, with l = min(n_k + 1, m - n'_k).
void fill_recipe_rows(TheoremCheckReport& report, const BlockOperator& op, const RecipeSpec& spec,
                      std::size_t m_max, Exec exec) {
  const auto& plan = op.plan;
  const std::size_t K = plan.block_count();
  const auto suffix = suffix_tables(op, spec.aggregate, spec.q);
  std::vector<double> tails(K + 2, 0.0);
  for (std::size_t k = 1; k <= K + 1; ++k) tails[k] = tail_norm(op, k, spec.tail_kind).total();

  report.rows = run_restarts(
      m_max,
      [&](std::size_t i) {
        const std::size_t m = i + 1;
        CheckRow row;
        row.m = m;
        double lower = 0.0;
        for (std::size_t k = 1; k <= K; ++k) {
          if (plan.n(k) >= m) lower = std::max(lower, root(suffix[k - 1][m - 1], spec.q));
        }
        double upper = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k <= K; ++k) {
          const std::size_t before = plan.prefix(k);
          if (before >= m) break;
          const std::size_t l = std::min(plan.n(k) + 1, m - before);
          upper = std::min(upper, root(suffix[k - 1][l - 1], spec.q) + tails[k + 1]);
        }
        row.certified_lower = spec.lower_factor * lower;
        row.certified_upper = spec.upper_factor * upper;
        return row;
      },
      exec);
}

void fill_claims(TheoremCheckReport& report, const DecaySequence& seq, ClaimForm form, double convex_const,
                 double general_const, double upper_const) {
  for (auto& row : report.rows) {
    const std::size_t m = row.m;
    row.claimed_lower = form == ClaimForm::convex ? convex_const * seq(9 * m) : general_const * seq(18 * m);
    row.claimed_upper = upper_const * seq(ceil_div(4 * m, 5));
  }
}

std::vector<std::size_t> thresholds_of(const DecaySequence& seq, Variant variant, std::size_t blocks,
                                       std::optional<double> q) {
  const auto ws = convex_working_sequence(seq, variant, blocks, q);
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k <= ws.plan.block_count(); ++k) out.push_back(threshold_index(ws.sequence, ws.plan, k));
  return out;
}

}  // namespace

TheoremCheckReport verify_controlled(const DecaySequence& seq, std::size_t blocks, const VerifyOptions& options) {
  const auto op = build_controlled(seq, blocks);
  const std::size_t m_max = resolve_m_max(op.plan, blocks, options);
  const double a1 = seq(1);
  const double tol = options.relative_tolerance * a1;
  auto report = header("controlled", op, blocks, tol);
  report.claim_form = "all";
  report.certification = "exact (SVD of the truncation) plus analytic tail";
  report.constants = {{"tail_factor", 1.25}};

  const auto sigma = singular_values(truncate(op, op.block_count()));
  const double remainder = 1.25 * op.tail_anchor;
  std::vector<double> weyl, hilbert, sharp;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const double s = sigma[m - 1];
    const double am = seq(m);
    CheckRow row;
    row.m = m;
    row.claimed_lower = am / 9.0;
    row.certified_lower = s;
    row.certified_upper = s + remainder;
    row.claimed_upper = 3.0 * seq(ceil_div(m, 6));
    report.rows.push_back(row);
    weyl.push_back(s - am / (9.0 * std::sqrt(static_cast<double>(m))));
    hilbert.push_back(s - am / (9.0 * static_cast<double>(m)));
    sharp.push_back(s - am);
  }
  add_check(report, "sigma_m >= alpha_m/(9 sqrt m)", weyl, tol);
  add_check(report, "sigma_m >= alpha_m/(9 m)", hilbert, tol);
  add_check(report, "sigma_m >= alpha_m", sharp, tol);
  add_check(report, "||T|| <= 2 alpha_1", {2.0 * a1 - sigma.front()}, tol);

  auto coords = op.coordinates();
  std::sort(coords.begin(), coords.end(), std::greater<>());
  double deviation = 0.0;
  for (std::size_t i = 0; i < coords.size(); ++i) deviation = std::max(deviation, std::abs(coords[i] - sigma[i]));
  add_check(report, "singular values = sorted block diagonals", {1e-10 - deviation}, 0.0);
  finish(report, tol);
  return report;
}

TheoremCheckReport verify_twosum(const DecaySequence& seq, std::size_t blocks, const VerifyOptions& options) {
  const double kappa = options.constants.kappa_for(options.p);
  const std::size_t built = blocks + (options.lookahead ? 1 : 0);
  const auto op = build_twosum(seq, built);
  const std::size_t m_max = resolve_m_max(op.plan, blocks, options);
  const double tol = options.relative_tolerance * seq(1);
  auto report = header("twosum", op, blocks, tol);
  const auto form = resolve_form(seq, op.minorant_horizon, options.form);
  report.claim_form = to_string(form);
  report.certification = "recipe bounds";
  report.thresholds = thresholds_of(seq, Variant::twosum, blocks, std::nullopt);
  report.constants = {{"p", options.p}, {"kappa_p", kappa}, {"c_p", 7.0 / 198.0}, {"tail_factor", 1.25}};
  fill_recipe_rows(report, op, {Aggregate::sum_squares, 2.0, NormKind::pi2, kappa, 1.0}, m_max, options.exec);
  fill_claims(report, seq, form, 7.0 / 99.0 * kappa, 7.0 / 198.0 * kappa, 3.0);
  finish(report, tol);
  return report;
}

TheoremCheckReport verify_nocotype(const DecaySequence& seq, std::size_t blocks, const VerifyOptions& options) {
  const std::size_t built = blocks + (options.lookahead ? 1 : 0);
  const auto op = build_nocotype(seq, built);
  const std::size_t m_max = resolve_m_max(op.plan, blocks, options);
  const double tol = options.relative_tolerance * seq(1);
  auto report = header("nocotype", op, blocks, tol);
  const auto form = resolve_form(seq, op.minorant_horizon, options.form);
  report.claim_form = to_string(form);
  report.certification = "recipe bounds";
  report.thresholds = thresholds_of(seq, Variant::nocotype, blocks, std::nullopt);
  report.constants = {{"tail_factor", 1.25}};
  fill_recipe_rows(report, op, {Aggregate::sum, 1.0, NormKind::operator_norm, 1.0, 1.0}, m_max, options.exec);
  fill_claims(report, seq, form, 49.0 / 1100.0, 1.0 / 50.0, 4.0);
  finish(report, tol);
  return report;
}

TheoremCheckReport verify_type(const DecaySequence& seq, std::size_t blocks, double t, double r,
                               ConstructionConstants cc, const VerifyOptions& options) {
  const std::size_t built = blocks + (options.lookahead ? 1 : 0);
  const auto op = build_type(seq, built, t, r, cc);
  const double q = *op.plan.q;
  const std::size_t m_max = resolve_m_max(op.plan, blocks, options);
  const double tol = options.relative_tolerance * seq(1);
  auto report = header("type", op, blocks, tol);
  const auto form = resolve_form(seq, op.minorant_horizon, options.form);
  report.claim_form = to_string(form);
  report.certification = "recipe bounds";
  report.thresholds = thresholds_of(seq, Variant::type, blocks, q);
  const double inv_a = std::sqrt(std::numbers::pi / 2.0);
  report.constants = {{"t", t},     {"r", r},           {"q", q},
                      {"C", cc.C},  {"C1", cc.C1},      {"gauss_a", options.constants.gauss_a},
                      {"tail_factor", 1.25}};
  fill_recipe_rows(report, op, {Aggregate::power_sum, q, NormKind::schatten_q, 1.0 / cc.C1, cc.C1 * inv_a}, m_max,
                   options.exec);
  fill_claims(report, seq, form, 7.0 / (66.0 * cc.C1), 1.0 / (20.0 * cc.C * cc.C), 4.0);

  // Mitiagin interval of the block tail at each m: upper/lower = sqrt(pi/2).
  std::vector<double> ratio;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const std::size_t k = op.plan.block_of(m);
    const auto& d = op.blocks[k - 1].diagonal;
    const auto iv = pitr_diag_bounds(std::span<const double>(d).subspan(m - 1), t, r);
    ratio.push_back(iv.lower > 0.0 ? -std::abs(iv.upper / iv.lower - inv_a) : 0.0);
  }
  add_check(report, "Mitiagin interval ratio = sqrt(pi/2)", ratio, 1e-14);
  finish(report, tol);
  return report;
}

PropOptimalReport verify_prop_optimal(const DecaySequence& seq, std::size_t blocks, std::size_t k_max,
                                      double epsilon, const Constants& constants, Exec exec) {
  if (k_max == 0) throw InvalidInput("k-max must be >= 1");
  const auto op = build_nocotype(seq, blocks);
  const auto env = prop12_decay_envelope(op, k_max, constants, exec);
  PropOptimalReport out;
  out.sequence_spec = op.sequence_spec;
  out.indices = op.plan.indices;
  out.k_max = k_max;
  out.epsilon = epsilon;
  out.kg = constants.kg;
  for (const auto& p : env.points) {
    const double k = static_cast<double>(p.k);
    out.curve.push_back({p.k, std::sqrt(k) * p.x_hat, std::sqrt(k) * p.x_hat, k * p.h_hat});
  }
  if (!(epsilon > 0.0)) {
    out.diagnostic = "epsilon must be positive: the limits are 0 but no finite k reaches a zero envelope bound";
    return out;
  }
  auto below = [&](const EnvelopeRow& r) {
    return r.x_scaled <= epsilon && r.y_scaled <= epsilon && r.h_scaled <= epsilon;
  };
  std::size_t first = out.curve.size();
  while (first > 0 && below(out.curve[first - 1])) --first;
  if (first == out.curve.size()) {
    out.diagnostic = "no k0 <= k-max with all scaled envelopes <= epsilon";
    return out;
  }
  out.k0 = out.curve[first].k;
  out.monotone_beyond_k0 = true;
  for (std::size_t i = first + 1; i < out.curve.size(); ++i) {
    const auto& a = out.curve[i - 1];
    const auto& b = out.curve[i];
    out.monotone_beyond_k0 = out.monotone_beyond_k0 && b.x_scaled <= a.x_scaled && b.y_scaled <= a.y_scaled &&
                             b.h_scaled <= a.h_scaled;
  }
  out.pass = out.monotone_beyond_k0;
  if (!out.pass) out.diagnostic = "envelope curves increase beyond k0";
  return out;
}

namespace {

constexpr double kStrictGap = 1e-3;

std::pair<double, double> top_two_row_norms(const Eigen::MatrixXd& rows) {
  double first = 0.0, second = 0.0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double v = rows.row(i).norm();
    if (v > first) {
      second = first;
      first = v;
    } else if (v > second) {
      second = v;
    }
  }
  return {first, second};
}

}  // namespace

GapTrial second_gelfand_gap(const Eigen::MatrixXd& rows, const OracleOptions& oracle) {
  GapTrial out;
  out.dim = static_cast<std::size_t>(rows.cols());
  std::tie(out.norm, out.second_row) = top_two_row_norms(rows);
  const auto res = gelfand_oracle(TaggedMatrix(rows, Norm::two, Norm::inf), 2, oracle);
  out.c2_upper = res.upper;
  out.gap = out.norm - out.c2_upper;
  out.pass = out.c2_upper < out.norm - kStrictGap;
  return out;
}

PropSecondReport verify_prop_second(std::size_t max_dim, std::size_t trials, double gap_min, std::uint64_t seed,
                                    OracleOptions oracle) {
  if (max_dim < 2 || max_dim > 6) throw InvalidInput("dimension must lie in [2, 6]");
  if (trials == 0) throw InvalidInput("at least one trial is required");
  if (!(gap_min > 0.0) || !(gap_min < 1.0)) throw InvalidInput("gap-min must lie in (0, 1)");
  PropSecondReport out;
  out.max_dim = max_dim;
  out.trials = trials;
  out.gap_min = gap_min;
  out.delta = kStrictGap;
  out.seed = seed;
  out.min_gap = std::numeric_limits<double>::infinity();
  out.pass = true;
  auto rng = stream_for(seed, Stream::instance);
  std::uniform_int_distribution<std::size_t> dim_dist(2, max_dim);
  std::normal_distribution<double> gauss;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto n = static_cast<Eigen::Index>(dim_dist(rng));
    Eigen::MatrixXd rows(n, n);
    std::size_t resamples = 0;
    while (true) {
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) rows(i, j) = gauss(rng);
      const auto [first, second] = top_two_row_norms(rows);
      rows /= first;
      if (1.0 - second / first >= gap_min) break;
      if (++resamples > 100000) throw ResourceLimit("could not sample an instance with the requested row gap");
    }
    OracleOptions opt = oracle;
    opt.seed = splitmix64(seed ^ splitmix64(t + 1));
    auto row = second_gelfand_gap(rows, opt);
    row.resamples = resamples;
    out.min_gap = std::min(out.min_gap, row.gap);
    out.pass = out.pass && row.pass;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace snum
