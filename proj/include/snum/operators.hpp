#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "snum/sequences.hpp"

namespace snum {

enum class Norm { one, two, inf };

std::string to_string(Norm p);
Norm parse_norm(std::string_view text);
// Dual exponent: 1 <-> inf, 2 <-> 2.
Norm dual(Norm p);

struct SpaceTag {
  Norm p = Norm::two;
  std::size_t dim = 1;

  friend bool operator==(const SpaceTag&, const SpaceTag&) = default;
};

// Dense matrix acting from (R^cols, domain norm) to (R^rows, codomain norm).
struct TaggedMatrix {
  Eigen::MatrixXd entries;
  SpaceTag domain;
  SpaceTag codomain;

  TaggedMatrix() = default;
  TaggedMatrix(Eigen::MatrixXd m, Norm p_dom, Norm p_cod);

  std::size_t rows() const { return static_cast<std::size_t>(entries.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(entries.cols()); }
  bool hilbert() const { return domain.p == Norm::two && codomain.p == Norm::two; }

  // Transpose with dual tags; the adjoint in finite dimensions.
  TaggedMatrix adjoint() const;
};

struct Block {
  SpaceTag domain;
  SpaceTag codomain;
  std::vector<double> diagonal;
};

struct Instantiation {
  std::string domain;
  std::string codomain;
};

struct ConstructionConstants {
  double C = 1.0;
  double C1 = 1.0;
};

struct BlockOperator {
  Variant variant = Variant::controlled;
  BlockIndexPlan plan;
  std::vector<Block> blocks;
  Instantiation instantiation;
  ConstructionConstants constants;
  std::string sequence_spec;
  // 0 when no minorant was taken (controlled).
  std::size_t minorant_horizon = 0;
  std::size_t chord_horizon = 0;
  // Sequence value bounding every block beyond the last one; 0 means the
  // model is exactly finite.
  double tail_anchor = 0.0;

  std::size_t block_count() const { return blocks.size(); }
  // All diagonal entries in coordinate order (block 1 first).
  std::vector<double> coordinates() const;
};

// The sequence the convex constructions actually run on: the convex
// minorant of `seq`, with a horizon large enough for K blocks.
struct WorkingSequence {
  DecaySequence sequence;
  BlockIndexPlan plan;
  std::size_t horizon = 0;
  std::size_t chord_horizon = 0;
};

WorkingSequence convex_working_sequence(const DecaySequence& seq, Variant variant, std::size_t blocks,
                                        std::optional<double> q = std::nullopt);

BlockOperator build_controlled(const DecaySequence& seq, std::size_t blocks);
BlockOperator build_twosum(const DecaySequence& seq, std::size_t blocks);
BlockOperator build_nocotype(const DecaySequence& seq, std::size_t blocks);
BlockOperator build_type(const DecaySequence& seq, std::size_t blocks, double t, double r,
                         ConstructionConstants constants = {});
BlockOperator build(Variant variant, const DecaySequence& seq, std::size_t blocks,
                    std::optional<double> t = std::nullopt, std::optional<double> r = std::nullopt,
                    ConstructionConstants constants = {});

TaggedMatrix truncate(const BlockOperator& op, std::size_t up_to_block);

enum class NormKind { operator_norm, pi2, schatten_q };

std::string to_string(NormKind kind);

struct TailNorm {
  double finite = 0.0;     // sum over retained blocks s >= from_block
  double remainder = 0.0;  // analytic bound for blocks beyond the truncation
  double total() const { return finite + remainder; }
};

// Norm of a single diagonal block of the requested kind.
double block_norm(const Block& block, NormKind kind, std::optional<double> q = std::nullopt);

// Sum of block norms over blocks s >= from_block plus the untruncated
// remainder, bounded by (5/4) * tail_anchor via the 1/5 geometric decay
// the index plan guarantees.
TailNorm tail_norm(const BlockOperator& op, std::size_t from_block, NormKind kind);

// Haar-distributed orthogonal matrix from a seeded stream.
Eigen::MatrixXd random_orthogonal(std::size_t n, std::uint64_t seed);

// U * M * V^T with independent random orthogonal U, V (Hilbert tags only).
TaggedMatrix rotate_hilbert(const TaggedMatrix& m, std::uint64_t seed);

}  // namespace snum
