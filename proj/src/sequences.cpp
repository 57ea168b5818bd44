#include "snum/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "snum/error.hpp"

namespace snum {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("sequence spec: cannot parse " + std::string(what) + " '" + s + "'");
  }
  if (used != s.size()) {
    throw ParseError("sequence spec: trailing characters in " + std::string(what) + " '" + s + "'");
  }
  return v;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

DecaySequence DecaySequence::geometric(double ratio, double scale) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw InvalidInput("geometric ratio must lie in (0,1)");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidInput("sequence scale must be positive");
  DecaySequence s;
  s.generator_ = Generator::geometric;
  s.parameter_ = ratio;
  s.scale_ = scale;
  s.spec_ = "geometric:" + format_number(ratio);
  return s;
}

DecaySequence DecaySequence::power(double exponent, double scale) {
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw InvalidInput("power exponent must be positive");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidInput("sequence scale must be positive");
  DecaySequence s;
  s.generator_ = Generator::power;
  s.parameter_ = exponent;
  s.scale_ = scale;
  s.spec_ = "power:" + format_number(exponent);
  return s;
}

DecaySequence DecaySequence::table(std::vector<double> values, double scale) {
  if (values.empty()) throw InvalidInput("table sequence must be non-empty");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidInput("sequence scale must be positive");
  if (!(values.front() > 0.0)) throw InvalidInput("table sequence needs alpha_1 > 0");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw InvalidInput("table entry " + std::to_string(i + 1) + " is negative or not finite");
    }
    if (i > 0 && values[i] > values[i - 1]) {
      throw InvalidInput("table sequence increases at index " + std::to_string(i + 1));
    }
  }
  DecaySequence s;
  s.generator_ = Generator::table;
  s.scale_ = scale;
  s.values_ = std::move(values);
  std::ostringstream os;
  os << "table:[";
  for (std::size_t i = 0; i < s.values_.size(); ++i) {
    if (i) os << ',';
    os << format_number(s.values_[i]);
  }
  os << ']';
  s.spec_ = os.str();
  return s;
}

DecaySequence DecaySequence::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("sequence spec '" + std::string(spec) + "' lacks a '<kind>:' prefix");
  }
  const auto kind = spec.substr(0, colon);
  const auto arg = spec.substr(colon + 1);
  if (kind == "geometric") return geometric(parse_number(arg, "ratio"));
  if (kind == "power") return power(parse_number(arg, "exponent"));
  if (kind == "file") {
    std::ifstream in{std::string(arg)};
    if (!in) throw IoError("cannot open sequence file '" + std::string(arg) + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("sequence file '" + std::string(arg) + "': " + e.what());
    }
    if (!doc.is_array()) {
      throw ParseError("sequence file '" + std::string(arg) + "': expected an array of reals");
    }
    std::vector<double> values;
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (!doc[i].is_number()) {
        throw ParseError("sequence file '" + std::string(arg) + "': entry " + std::to_string(i) +
                         " is not a number");
      }
      values.push_back(doc[i].get<double>());
    }
    auto s = table(std::move(values));
    s.spec_ = "file:" + std::string(arg);
    return s;
  }
  throw ParseError("unknown sequence kind '" + std::string(kind) + "'");
}

double DecaySequence::operator()(std::size_t j) const {
  if (j == 0) throw InvalidInput("sequence index must be >= 1");
  switch (generator_) {
    case Generator::geometric:
      return scale_ * std::pow(parameter_, static_cast<double>(j));
    case Generator::power:
      return scale_ / std::pow(static_cast<double>(j), parameter_);
    case Generator::table:
      return j <= values_.size() ? scale_ * values_[j - 1] : 0.0;
  }
  return 0.0;
}

bool DecaySequence::vanishes_from(std::size_t j) const {
  if (generator_ != Generator::table) {
    return (*this)(std::max<std::size_t>(j, 1)) == 0.0;
  }
  return j > values_.size() || values_[j - 1] == 0.0;
}

DecaySequence DecaySequence::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw InvalidInput("scaling factor must be positive");
  DecaySequence s = *this;
  s.scale_ *= lambda;
  if (lambda != 1.0) {
    s.spec_ = spec_ + "*" + format_number(lambda);
  }
  return s;
}

double eval_sequence(const DecaySequence& seq, std::size_t j) { return seq(j); }

double ConvexDecaySequence::operator()(std::size_t k) const {
  if (k == 0) throw InvalidInput("minorant index must be >= 1");
  if (k > horizon) throw InvalidInput("minorant index " + std::to_string(k) + " beyond horizon");
  return values[k - 1];
}

DecaySequence ConvexDecaySequence::as_table() const {
  // Continue the last slope down to zero so the table stays convex past the
  // horizon; a flat end is kept up to the chord horizon.
  std::vector<double> v = values;
  const double slope = v.size() >= 2 ? v[v.size() - 1] - v[v.size() - 2] : 0.0;
  const std::size_t limit = std::max(chord_horizon, v.size());
  while (v.size() < limit && v.back() > 0.0) v.push_back(std::max(0.0, v.back() + slope));
  return DecaySequence::table(std::move(v));
}

std::size_t chord_horizon_for(const DecaySequence& seq, std::size_t horizon, std::size_t cap) {
  const std::size_t base = 4 * horizon;
  const double target = seq(horizon) / 8.0;
  if (seq(horizon) <= 0.0) return base;
  // alpha is nonincreasing, so "alpha_j <= target" is monotone in j.
  std::size_t lo = horizon;
  std::size_t hi = horizon;
  while (seq(hi) > target) {
    if (hi >= cap) return std::max(base, cap);
    lo = hi;
    hi = std::min(cap, 2 * hi);
  }
  while (lo + 1 < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (seq(mid) <= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::max(base, hi);
}

std::vector<double> lower_hull_values(std::span<const double> alpha, std::size_t horizon) {
  const std::size_t n = alpha.size();
  if (horizon > n || n == 0) throw InvalidInput("hull horizon exceeds the sampled range");
  // Monotone chain over x = 1..n; the stack holds 0-based indices.
  std::vector<std::size_t> hull;
  hull.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const double cross = static_cast<double>(b - a) * (alpha[i] - alpha[a]) -
                           (alpha[b] - alpha[a]) * static_cast<double>(i - a);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  std::vector<double> out(horizon);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < horizon; ++k) {
    while (seg + 1 < hull.size() && hull[seg + 1] <= k) ++seg;
    const std::size_t a = hull[seg];
    if (a == k || seg + 1 == hull.size()) {
      out[k] = alpha[a];
      continue;
    }
    const std::size_t b = hull[seg + 1];
    const double w = static_cast<double>(k - a) / static_cast<double>(b - a);
    out[k] = (1.0 - w) * alpha[a] + w * alpha[b];
  }
  return out;
}

ConvexDecaySequence convex_minorant(const DecaySequence& seq, std::size_t horizon) {
  if (horizon < 2) throw InvalidInput("minorant horizon must be >= 2");
  if (!(seq(1) > 0.0)) throw InvalidInput("minorant needs alpha_1 > 0");
  ConvexDecaySequence out{seq, horizon, chord_horizon_for(seq, horizon), {}};
  std::vector<double> alpha(out.chord_horizon);
  for (std::size_t j = 1; j <= out.chord_horizon; ++j) alpha[j - 1] = seq(j);
  out.values = lower_hull_values(alpha, horizon);
  out.values[0] = alpha[0];
  return out;
}

bool check_convexity(std::span<const double> values) {
  if (values.size() < 3) throw InvalidInput("convexity check needs at least 3 values");
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double second = values[i + 1] - 2.0 * values[i] + values[i - 1];
    if (second < -kSequenceTolerance) return false;
  }
  return true;
}

bool check_slope_monotonicity(std::span<const double> values, std::size_t i, std::size_t j,
                              std::size_t m, std::size_t n) {
  if (!(j > i && n > m && i <= m && j <= n && i >= 1 && n <= values.size())) {
    throw InvalidInput("slope check needs j > i, n > m, i <= m, j <= n within the list");
  }
  const double left = (values[i - 1] - values[j - 1]) / static_cast<double>(j - i);
  const double right = (values[m - 1] - values[n - 1]) / static_cast<double>(n - m);
  return left >= right - kSequenceTolerance;
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::controlled: return "controlled";
    case Variant::twosum: return "twosum";
    case Variant::nocotype: return "nocotype";
    case Variant::type: return "type";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "controlled") return Variant::controlled;
  if (name == "twosum") return Variant::twosum;
  if (name == "nocotype") return Variant::nocotype;
  if (name == "type") return Variant::type;
  throw InvalidInput("unknown construction '" + std::string(name) + "'");
}

double type_exponent(double t, double r) {
  const double inv_t = std::isinf(t) ? 0.0 : 1.0 / t;
  if (!(r >= 1.0 && r <= std::min(2.0, t))) {
    throw InvalidInput("(t,r) inadmissible: need 1 <= r <= min(2,t)");
  }
  const double gap = 1.0 / r - inv_t;
  if (!(gap < 0.5)) throw InvalidInput("(t,r) inadmissible: need 1/r - 1/t < 1/2");
  return 1.0 / (0.5 - gap);
}

std::size_t BlockIndexPlan::prefix(std::size_t k) const {
  std::size_t s = 0;
  for (std::size_t i = 1; i < k && i <= indices.size(); ++i) s += indices[i - 1];
  return s;
}

std::size_t BlockIndexPlan::block_of(std::size_t m) const {
  for (std::size_t k = 1; k <= indices.size(); ++k) {
    if (m > n(k - 1) && m <= n(k)) return k;
  }
  return 0;
}

namespace {

// Smallest j >= from with seq(j) <= bound, or throws past the cap.
std::size_t first_at_most(const DecaySequence& seq, std::size_t from, double bound, std::size_t cap) {
  if (seq(from) <= bound) return from;
  std::size_t lo = from;
  std::size_t step = 1;
  std::size_t hi = from;
  while (seq(hi) > bound) {
    if (hi >= cap) {
      throw ResourceLimit("block index scan exceeded the cap of " + std::to_string(cap));
    }
    lo = hi;
    hi = std::min(cap, from + step);
    step *= 2;
  }
  while (lo + 1 < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (seq(mid) <= bound) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

BlockIndexPlan select_block_indices(const DecaySequence& seq, Variant variant, std::size_t blocks,
                                    std::size_t scan_cap) {
  if (blocks == 0) throw InvalidInput("block count must be >= 1");
  BlockIndexPlan plan;
  plan.variant = variant;
  std::size_t prev = 0;
  for (std::size_t k = 1; k <= blocks; ++k) {
    const std::size_t growth = 5 * (prev + 1) + 1;  // n_k > 5(n_{k-1}+1)
    const std::size_t anchor = variant == Variant::controlled ? prev + 1 : 5 * (prev + 1);
    const double bound = seq(anchor) / 5.0;
    const std::size_t nk = first_at_most(seq, growth, bound, scan_cap);
    plan.indices.push_back(nk);
    prev = nk;
  }
  return plan;
}

std::vector<double> beta_table(const DecaySequence& seq, const BlockIndexPlan& plan, std::size_t k) {
  if (k == 0 || k > plan.block_count()) throw InvalidInput("block index out of range");
  const std::size_t nk = plan.n(k);
  const std::size_t prev = plan.n(k - 1);
  const std::size_t shift = 2 * prev;
  std::vector<double> beta(nk);
  switch (plan.variant) {
    case Variant::controlled: {
      const double cap = seq(prev + 1);
      for (std::size_t j = 1; j <= nk; ++j) beta[j - 1] = std::min(cap, seq(j));
      return beta;
    }
    case Variant::twosum:
      for (std::size_t j = 1; j <= nk; ++j) {
        const double a = seq(j + shift);
        const double b = seq(j + shift + 1);
        const double d = a * a - b * b;
        if (d < -kSequenceTolerance) throw InvalidInput("twosum table needs a nonincreasing input");
        beta[j - 1] = std::sqrt(std::max(0.0, d));
      }
      break;
    case Variant::nocotype:
      for (std::size_t j = 1; j <= nk; ++j) {
        const double d = seq(j + shift) - seq(j + shift + 1);
        if (d < -kSequenceTolerance) throw InvalidInput("nocotype table needs a nonincreasing input");
        beta[j - 1] = std::max(0.0, d);
      }
      break;
    case Variant::type: {
      if (!plan.q) throw InvalidInput("type plan lacks the exponent q");
      const double q = *plan.q;
      for (std::size_t j = 1; j <= nk; ++j) {
        const double d = std::pow(seq(j + shift), q) - std::pow(seq(j + shift + 1), q);
        if (d < -kSequenceTolerance) throw InvalidInput("type table needs a nonincreasing input");
        beta[j - 1] = std::pow(std::max(0.0, d), 1.0 / q);
      }
      break;
    }
  }
  // Convexity of the input is what makes these tables monotone.
  const double slack = kSequenceTolerance * std::max(1.0, beta.empty() ? 0.0 : beta.front());
  for (std::size_t j = 1; j < beta.size(); ++j) {
    if (beta[j] > beta[j - 1] + slack) {
      throw InvalidInput("beta table of block " + std::to_string(k) + " increases at j=" +
                         std::to_string(j + 1) + " (input not convex)");
    }
  }
  return beta;
}

std::size_t threshold_index(const DecaySequence& seq, const BlockIndexPlan& plan, std::size_t k) {
  const std::size_t nk = plan.n(k);
  const std::size_t shift = 2 * plan.n(k - 1);
  const double floor = 1.1 * seq(nk + shift + 1);
  for (std::size_t m = nk; m >= 1; --m) {
    if (seq(m + shift) >= floor) return m;
  }
  return 0;
}

}  // namespace snum
