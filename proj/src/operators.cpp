#include "snum/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "snum/error.hpp"
#include "snum/rng.hpp"

namespace snum {

std::string to_string(Norm p) {
  switch (p) {
    case Norm::one: return "1";
    case Norm::two: return "2";
    case Norm::inf: return "inf";
  }
  return "?";
}

Norm parse_norm(std::string_view text) {
  if (text == "1") return Norm::one;
  if (text == "2") return Norm::two;
  if (text == "inf" || text == "infinity") return Norm::inf;
  throw ParseError("norm exponent must be 1, 2 or inf, got '" + std::string(text) + "'");
}

Norm dual(Norm p) {
  switch (p) {
    case Norm::one: return Norm::inf;
    case Norm::two: return Norm::two;
    case Norm::inf: return Norm::one;
  }
  return Norm::two;
}

TaggedMatrix::TaggedMatrix(Eigen::MatrixXd m, Norm p_dom, Norm p_cod)
    : entries(std::move(m)),
      domain{p_dom, static_cast<std::size_t>(entries.cols())},
      codomain{p_cod, static_cast<std::size_t>(entries.rows())} {
  if (entries.rows() == 0 || entries.cols() == 0) throw InvalidInput("tagged matrix must be non-empty");
}

TaggedMatrix TaggedMatrix::adjoint() const {
  return TaggedMatrix(entries.transpose(), dual(codomain.p), dual(domain.p));
}

std::vector<double> BlockOperator::coordinates() const {
  std::vector<double> out;
  for (const auto& b : blocks) out.insert(out.end(), b.diagonal.begin(), b.diagonal.end());
  return out;
}

namespace {

std::size_t required_extent(const BlockIndexPlan& plan) {
  const std::size_t K = plan.block_count();
  return std::max(plan.n(K) + 2 * plan.n(K - 1) + 1, 2 * plan.n(K) + 1) + 1;
}

DecaySequence monotone_table(std::vector<double> values) {
  for (std::size_t i = 1; i < values.size(); ++i) values[i] = std::min(values[i], values[i - 1]);
  for (auto& v : values) v = std::max(v, 0.0);
  return DecaySequence::table(std::move(values));
}

struct VariantTags {
  Norm dom;
  Norm cod;
  Instantiation inst;
};

VariantTags tags_for(Variant v) {
  switch (v) {
    case Variant::controlled: return {Norm::two, Norm::two, {"l2", "l2"}};
    case Variant::twosum: return {Norm::inf, Norm::two, {"linf", "l2"}};
    case Variant::nocotype: return {Norm::inf, Norm::one, {"c0", "l1"}};
    case Variant::type: return {Norm::two, Norm::two, {"l2", "l2"}};
  }
  return {Norm::two, Norm::two, {"l2", "l2"}};
}

BlockOperator assemble(Variant variant, const DecaySequence& working, BlockIndexPlan plan,
                       const std::string& spec) {
  const auto tags = tags_for(variant);
  BlockOperator op;
  op.variant = variant;
  op.instantiation = tags.inst;
  op.sequence_spec = spec;
  for (std::size_t k = 1; k <= plan.block_count(); ++k) {
    plan.beta_tables.push_back(beta_table(working, plan, k));
    const std::size_t nk = plan.n(k);
    op.blocks.push_back(Block{{tags.dom, nk}, {tags.cod, nk}, plan.beta_tables.back()});
  }
  op.plan = std::move(plan);
  return op;
}

}  // namespace

WorkingSequence convex_working_sequence(const DecaySequence& seq, Variant variant, std::size_t blocks,
                                        std::optional<double> q) {
  constexpr std::size_t kMaxHorizon = std::size_t{1} << 24;
  for (std::size_t horizon = 64; horizon <= kMaxHorizon; horizon *= 2) {
    const auto minorant = convex_minorant(seq, horizon);
    auto working = monotone_table(minorant.values);
    auto plan = select_block_indices(working, variant, blocks);
    if (required_extent(plan) > horizon) continue;
    plan.q = q;
    return WorkingSequence{std::move(working), std::move(plan), horizon, minorant.chord_horizon};
  }
  throw ResourceLimit("convex minorant horizon would exceed " + std::to_string(kMaxHorizon));
}

BlockOperator build_controlled(const DecaySequence& seq, std::size_t blocks) {
  auto plan = select_block_indices(seq, Variant::controlled, blocks);
  auto op = assemble(Variant::controlled, seq, std::move(plan), seq.spec());
  op.tail_anchor = seq(op.plan.n(op.plan.block_count()) + 1);
  return op;
}

namespace {

BlockOperator build_convex(Variant variant, const DecaySequence& seq, std::size_t blocks,
                           std::optional<double> q) {
  auto ws = convex_working_sequence(seq, variant, blocks, q);
  const std::size_t K = ws.plan.block_count();
  const double anchor = ws.sequence(2 * ws.plan.n(K) + 1);
  auto op = assemble(variant, ws.sequence, std::move(ws.plan), seq.spec());
  op.minorant_horizon = ws.horizon;
  op.chord_horizon = ws.chord_horizon;
  op.tail_anchor = anchor;
  return op;
}

}  // namespace

BlockOperator build_twosum(const DecaySequence& seq, std::size_t blocks) {
  return build_convex(Variant::twosum, seq, blocks, std::nullopt);
}

BlockOperator build_nocotype(const DecaySequence& seq, std::size_t blocks) {
  return build_convex(Variant::nocotype, seq, blocks, std::nullopt);
}

BlockOperator build_type(const DecaySequence& seq, std::size_t blocks, double t, double r,
                         ConstructionConstants constants) {
  const double q = type_exponent(t, r);
  if (!(constants.C >= 1.0) || !(constants.C1 >= 1.0)) {
    throw InvalidInput("construction constants C, C1 must be >= 1");
  }
  auto op = build_convex(Variant::type, seq, blocks, q);
  op.plan.t = t;
  op.plan.r = r;
  op.constants = constants;
  return op;
}

BlockOperator build(Variant variant, const DecaySequence& seq, std::size_t blocks,
                    std::optional<double> t, std::optional<double> r, ConstructionConstants constants) {
  switch (variant) {
    case Variant::controlled: return build_controlled(seq, blocks);
    case Variant::twosum: return build_twosum(seq, blocks);
    case Variant::nocotype: return build_nocotype(seq, blocks);
    case Variant::type:
      if (!t || !r) throw InvalidInput("type construction needs both t and r");
      return build_type(seq, blocks, *t, *r, constants);
  }
  throw InvalidInput("unknown construction");
}

TaggedMatrix truncate(const BlockOperator& op, std::size_t up_to_block) {
  if (up_to_block == 0 || up_to_block > op.block_count()) {
    throw InvalidInput("truncation block index out of range");
  }
  std::size_t dim = 0;
  for (std::size_t k = 0; k < up_to_block; ++k) dim += op.blocks[k].diagonal.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < up_to_block; ++k) {
    for (double d : op.blocks[k].diagonal) {
      m(offset, offset) = d;
      ++offset;
    }
  }
  return TaggedMatrix(std::move(m), op.blocks.front().domain.p, op.blocks.front().codomain.p);
}

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::operator_norm: return "operator";
    case NormKind::pi2: return "pi2";
    case NormKind::schatten_q: return "schatten_q";
  }
  return "?";
}

namespace {

int rank_of(Norm p) { return p == Norm::one ? 1 : p == Norm::two ? 2 : 3; }

double lp_norm(const std::vector<double>& d, double s) {
  if (std::isinf(s)) {
    double m = 0.0;
    for (double x : d) m = std::max(m, std::abs(x));
    return m;
  }
  double acc = 0.0;
  for (double x : d) acc += std::pow(std::abs(x), s);
  return std::pow(acc, 1.0 / s);
}

double exponent_of(Norm p) {
  return p == Norm::one ? 1.0 : p == Norm::two ? 2.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

double block_norm(const Block& block, NormKind kind, std::optional<double> q) {
  const auto& d = block.diagonal;
  switch (kind) {
    case NormKind::operator_norm: {
      if (rank_of(block.domain.p) <= rank_of(block.codomain.p)) return lp_norm(d, INFINITY);
      // 1/s = 1/p_cod - 1/p_dom
      const double inv = 1.0 / exponent_of(block.codomain.p) - 1.0 / exponent_of(block.domain.p);
      return lp_norm(d, 1.0 / inv);
    }
    case NormKind::pi2:
      if (block.codomain.p != Norm::two || block.domain.p == Norm::one) {
        throw InvalidInput("pi2 block norm is only available for l2/linf -> l2 diagonals");
      }
      return lp_norm(d, 2.0);
    case NormKind::schatten_q:
      if (block.domain.p != Norm::two || block.codomain.p != Norm::two) {
        throw InvalidInput("Schatten norms need Hilbert tags");
      }
      if (!q) throw InvalidInput("Schatten norm needs q");
      return lp_norm(d, *q);
  }
  return 0.0;
}

TailNorm tail_norm(const BlockOperator& op, std::size_t from_block, NormKind kind) {
  const std::size_t K = op.block_count();
  if (from_block == 0 || from_block > K + 1) throw InvalidInput("tail block index out of range");
  bool consistent = kind == NormKind::operator_norm;
  if (kind == NormKind::pi2) consistent = op.variant == Variant::twosum;
  if (kind == NormKind::schatten_q) consistent = op.variant == Variant::type;
  if (!consistent) {
    throw InvalidInput("norm kind " + to_string(kind) + " does not apply to " + to_string(op.variant));
  }
  TailNorm out;
  for (std::size_t s = from_block; s <= K; ++s) {
    out.finite += block_norm(op.blocks[s - 1], kind, op.plan.q);
  }
  out.remainder = 1.25 * op.tail_anchor;
  return out;
}

Eigen::MatrixXd random_orthogonal(std::size_t n, std::uint64_t seed) {
  auto rng = stream_for(seed, Stream::rotation);
  std::normal_distribution<double> gauss;
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd g(N, N);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < N; ++i) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < N; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

TaggedMatrix rotate_hilbert(const TaggedMatrix& m, std::uint64_t seed) {
  if (!m.hilbert()) throw InvalidInput("orthogonal conjugation needs Hilbert tags");
  const Eigen::MatrixXd u = random_orthogonal(m.rows(), seed);
  const Eigen::MatrixXd v = random_orthogonal(m.cols(), splitmix64(seed));
  return TaggedMatrix(u * m.entries * v.transpose(), Norm::two, Norm::two);
}

}  // namespace snum
