#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace snum {

// Absolute tolerance for comparisons between sequence values (values are
// assumed scaled so that alpha_1 <= 1e3).
inline constexpr double kSequenceTolerance = 1e-12;

enum class Generator { geometric, power, table };

// A nonincreasing, nonnegative sequence alpha_1 >= alpha_2 >= ... >= 0 with
// alpha_1 > 0. Indices are 1-based throughout the library.
class DecaySequence {
 public:
  // alpha_j = scale * ratio^j, ratio in (0,1).
  static DecaySequence geometric(double ratio, double scale = 1.0);
  // alpha_j = scale / j^exponent, exponent > 0.
  static DecaySequence power(double exponent, double scale = 1.0);
  // alpha_j = scale * values[j-1], zero beyond the table.
  static DecaySequence table(std::vector<double> values, double scale = 1.0);

  // Parses `geometric:<r>`, `power:<s>` or `file:<path>` (JSON array).
  static DecaySequence parse(std::string_view spec);

  double operator()(std::size_t j) const;

  Generator generator() const { return generator_; }
  double parameter() const { return parameter_; }
  double scale() const { return scale_; }
  std::span<const double> values() const { return values_; }

  // True when the sequence is known to vanish at every index >= j.
  bool vanishes_from(std::size_t j) const;

  // Canonical spec string; file-backed tables keep the original path.
  const std::string& spec() const { return spec_; }

  DecaySequence scaled(double lambda) const;

 private:
  DecaySequence() = default;

  Generator generator_ = Generator::table;
  double parameter_ = 0.0;
  double scale_ = 1.0;
  std::vector<double> values_;
  std::string spec_;
};

double eval_sequence(const DecaySequence& seq, std::size_t j);

// Greatest convex minorant of alpha restricted to [1, horizon], computed
// over chords whose endpoints lie in [1, chord_horizon].
struct ConvexDecaySequence {
  DecaySequence base;
  std::size_t horizon = 0;
  std::size_t chord_horizon = 0;
  std::vector<double> values;  // values[k-1] = beta_k

  double operator()(std::size_t k) const;

  // The minorant as a table sequence, extended linearly past the horizon
  // until it reaches zero.
  DecaySequence as_table() const;
};

// Chord horizon used by convex_minorant: max(4H, first j with
// alpha_j <= alpha_H / 8), clamped to `cap`.
std::size_t chord_horizon_for(const DecaySequence& seq, std::size_t horizon,
                              std::size_t cap = std::size_t{1} << 22);

ConvexDecaySequence convex_minorant(const DecaySequence& seq, std::size_t horizon);

// Lower convex hull of the points (j, alpha[j-1]) evaluated at 1..horizon.
std::vector<double> lower_hull_values(std::span<const double> alpha, std::size_t horizon);

// Nonnegative second differences within kSequenceTolerance.
bool check_convexity(std::span<const double> values);

// (a_i - a_j)/(j - i) >= (a_m - a_n)/(n - m); indices are 1-based and must
// satisfy j > i, n > m, i <= m, j <= n.
bool check_slope_monotonicity(std::span<const double> values, std::size_t i, std::size_t j,
                              std::size_t m, std::size_t n);

enum class Variant { controlled, twosum, nocotype, type };

std::string to_string(Variant v);
Variant parse_variant(std::string_view name);

// 1/q = 1/2 - 1/r + 1/t; throws InvalidInput unless
// 1 <= r <= min(2, t) and 1/r - 1/t < 1/2.
double type_exponent(double t, double r);

struct BlockIndexPlan {
  Variant variant = Variant::controlled;
  std::vector<std::size_t> indices;  // n_1 < ... < n_K, n_0 = 0 implicit
  std::vector<std::vector<double>> beta_tables;
  std::optional<double> q;
  std::optional<double> t;
  std::optional<double> r;

  std::size_t block_count() const { return indices.size(); }
  // n_k with n_0 = 0.
  std::size_t n(std::size_t k) const { return k == 0 ? 0 : indices.at(k - 1); }
  // n_1 + ... + n_{k-1}
  std::size_t prefix(std::size_t k) const;
  std::size_t total_dim() const { return prefix(block_count() + 1); }
  // Block k containing the global index m (n_{k-1} < m <= n_k), 0 if none.
  std::size_t block_of(std::size_t m) const;
};

// Greedy minimal n_k satisfying the variant's two growth conditions. Exact
// floating-point comparisons, so the conditions hold literally.
BlockIndexPlan select_block_indices(const DecaySequence& seq, Variant variant, std::size_t blocks,
                                    std::size_t scan_cap = std::size_t{1} << 40);

// Beta table of block k (1-based). For twosum/nocotype/type the sequence
// must already be convex; a negative or increasing table is rejected.
std::vector<double> beta_table(const DecaySequence& seq, const BlockIndexPlan& plan, std::size_t k);

// Largest m <= n_k with alpha_{m+2n_{k-1}} >= 1.1 alpha_{n_k+2n_{k-1}+1}; 0 if none.
std::size_t threshold_index(const DecaySequence& seq, const BlockIndexPlan& plan, std::size_t k);

}  // namespace snum
