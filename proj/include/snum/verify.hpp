#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "snum/kernels.hpp"
#include "snum/operators.hpp"
#include "snum/oracle.hpp"
#include "snum/snumbers.hpp"

namespace snum {

// Which claimed lower bound is asserted: the convex-input form (index 9m)
// or the general form (index 18m, via the minorant). `automatic` picks
// convex when the input coincides with its minorant on the horizon.
enum class ClaimForm { automatic, convex, general };

std::string to_string(ClaimForm f);

struct CheckRow {
  std::size_t m = 0;
  double claimed_lower = 0.0;
  double certified_lower = 0.0;
  double certified_upper = 0.0;
  double claimed_upper = 0.0;
  bool pass = false;
};

// A named side condition checked over all rows; `worst_margin` is the
// smallest (value - bound) observed, negative on failure.
struct NamedCheck {
  std::string name;
  bool pass = false;
  double worst_margin = 0.0;
  std::size_t worst_m = 0;
};

struct TheoremCheckReport {
  std::string theorem;
  Instantiation instantiation;
  std::string sequence_spec;
  std::vector<std::size_t> indices;
  std::vector<std::size_t> thresholds;  // m_k per block
  // n_{K+1} of the extra block that certifies rows m_K < m <= n_K; 0 if none.
  std::size_t lookahead_index = 0;
  std::string claim_form;
  std::string certification;  // "exact (SVD)" or "recipe bounds"
  std::size_t minorant_horizon = 0;
  std::size_t chord_horizon = 0;
  std::map<std::string, double> constants;
  double tolerance = 0.0;
  std::vector<CheckRow> rows;
  std::vector<NamedCheck> checks;
  bool overall_pass = false;
};

struct VerifyOptions {
  std::optional<std::size_t> m_max;
  ClaimForm form = ClaimForm::automatic;
  // Pass tolerance relative to alpha_1.
  double relative_tolerance = 1e-10;
  Constants constants;
  double p = 2.0;  // summing exponent for the two-summing check
  // Build one block beyond K for the recipe verifiers: rows near n_K are
  // certified through block K+1. Rows still range over m <= n_K.
  bool lookahead = true;
  Exec exec = Exec::parallel;
};

TheoremCheckReport verify_controlled(const DecaySequence& seq, std::size_t blocks, const VerifyOptions& options = {});
TheoremCheckReport verify_twosum(const DecaySequence& seq, std::size_t blocks, const VerifyOptions& options = {});
TheoremCheckReport verify_nocotype(const DecaySequence& seq, std::size_t blocks, const VerifyOptions& options = {});
TheoremCheckReport verify_type(const DecaySequence& seq, std::size_t blocks, double t, double r,
                               ConstructionConstants cc = {}, const VerifyOptions& options = {});

struct EnvelopeRow {
  std::size_t k = 0;
  double x_scaled = 0.0;  // sqrt(k) * x_hat_k
  double y_scaled = 0.0;  // sqrt(k) * y_hat_k
  double h_scaled = 0.0;  // k * h_hat_k
};

struct PropOptimalReport {
  std::string sequence_spec;
  std::vector<std::size_t> indices;
  std::size_t k_max = 0;
  double epsilon = 0.0;
  double kg = 0.0;
  std::optional<std::size_t> k0;
  bool monotone_beyond_k0 = false;
  std::vector<EnvelopeRow> curve;
  std::string diagnostic;
  bool pass = false;
};

PropOptimalReport verify_prop_optimal(const DecaySequence& seq, std::size_t blocks, std::size_t k_max,
                                      double epsilon, const Constants& constants = {},
                                      Exec exec = Exec::parallel);

struct GapTrial {
  std::size_t dim = 0;
  double norm = 0.0;        // largest row norm = ||T||
  double second_row = 0.0;  // second largest row norm
  double c2_upper = 0.0;
  double gap = 0.0;  // ||T|| - c2_upper
  std::size_t resamples = 0;
  bool pass = false;
};

struct PropSecondReport {
  std::size_t max_dim = 0;
  std::size_t trials = 0;
  double gap_min = 0.0;
  double delta = 1e-3;
  std::uint64_t seed = 0;
  std::vector<GapTrial> rows;
  double min_gap = 0.0;
  bool pass = false;
};

// Second Gelfand number of T: l2^n -> l_inf^n (rows are functionals).
GapTrial second_gelfand_gap(const Eigen::MatrixXd& rows, const OracleOptions& oracle);

PropSecondReport verify_prop_second(std::size_t max_dim, std::size_t trials, double gap_min, std::uint64_t seed,
                                    OracleOptions oracle = {});

}  // namespace snum
