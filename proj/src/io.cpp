#include "snum/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "snum/error.hpp"

namespace snum {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json norm_json(Norm p) {
  switch (p) {
    case Norm::one: return 1;
    case Norm::two: return 2;
    case Norm::inf: return "inf";
  }
  return nullptr;
}

Norm norm_from_json(const Json& j, const std::string& field) {
  if (j.is_number_integer()) {
    const auto v = j.get<long long>();
    if (v == 1) return Norm::one;
    if (v == 2) return Norm::two;
  } else if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return Norm::inf;
  }
  throw ParseError("field '" + field + "' must be 1, 2 or \"inf\"");
}

Json to_json(const TaggedMatrix& m) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j) row.push_back(m.entries(i, j));
    entries.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"p_dom", norm_json(m.domain.p)},
              {"p_cod", norm_json(m.codomain.p)},
              {"entries", std::move(entries)}};
}

namespace {

const Json& require(const Json& j, const std::string& field) {
  if (!j.is_object() || !j.contains(field)) throw ParseError("missing field '" + field + "'");
  return j.at(field);
}

std::size_t positive_size(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw ParseError("field '" + field + "' must be a positive integer");
  }
  return j.get<std::size_t>();
}

}  // namespace

TaggedMatrix matrix_from_json(const Json& j) {
  const auto rows = positive_size(require(j, "rows"), "rows");
  const auto cols = positive_size(require(j, "cols"), "cols");
  const Norm p_dom = norm_from_json(require(j, "p_dom"), "p_dom");
  const Norm p_cod = norm_from_json(require(j, "p_cod"), "p_cod");
  const auto& entries = require(j, "entries");
  if (!entries.is_array() || entries.size() != rows) {
    throw ParseError("field 'entries' must be an array of " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = entries[i];
    if (!row.is_array() || row.size() != cols) {
      throw ParseError("field 'entries[" + std::to_string(i) + "]' must hold " + std::to_string(cols) + " numbers");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!row[k].is_number()) {
        throw ParseError("field 'entries[" + std::to_string(i) + "][" + std::to_string(k) + "]' is not a number");
      }
      const double v = row[k].get<double>();
      if (!std::isfinite(v)) throw ParseError("field 'entries' holds a non-finite value");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v;
    }
  }
  return TaggedMatrix(std::move(m), p_dom, p_cod);
}

TaggedMatrix load_matrix(const std::string& path) {
  Json doc;
  try {
    doc = Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw ParseError("matrix file '" + path + "' is not valid JSON: " + e.what());
  }
  return matrix_from_json(doc);
}

Json to_json(const BlockIndexPlan& plan) {
  Json j{{"variant", to_string(plan.variant)}, {"indices", plan.indices}};
  if (plan.q) j["qExponent"] = *plan.q;
  if (plan.t) j["t"] = *plan.t;
  if (plan.r) j["r"] = *plan.r;
  return j;
}

Json to_json(const BlockOperator& op) {
  Json blocks = Json::array();
  for (const auto& b : op.blocks) {
    blocks.push_back(Json{{"p_dom", norm_json(b.domain.p)}, {"p_cod", norm_json(b.codomain.p)}, {"diagonal", b.diagonal}});
  }
  Json j{{"variant", to_string(op.variant)},
         {"instantiation", Json::array({op.instantiation.domain, op.instantiation.codomain})},
         {"indices", op.plan.indices}};
  if (op.plan.q) j["qExponent"] = *op.plan.q;
  if (op.plan.t) j["t"] = *op.plan.t;
  if (op.plan.r) j["r"] = *op.plan.r;
  j["blocks"] = std::move(blocks);
  j["constants"] = Json{{"C", op.constants.C}, {"C1", op.constants.C1}};
  j["sequence"] = op.sequence_spec;
  j["minorant_horizon"] = op.minorant_horizon;
  j["chord_horizon"] = op.chord_horizon;
  j["tail_anchor"] = op.tail_anchor;
  return j;
}

Json to_json(const SNumberReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back(Json{{"m", r.m}, {"lower", r.lower}, {"upper", r.upper}, {"exact", r.exact}});
  }
  return Json{{"scale", to_string(report.scale)}, {"perIndex", std::move(rows)}};
}

Json to_json(const OracleResult& result) {
  Json witness = Json::array();
  for (Eigen::Index i = 0; i < result.witness_matrix.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < result.witness_matrix.cols(); ++j) row.push_back(result.witness_matrix(i, j));
    witness.push_back(std::move(row));
  }
  return Json{{"lower", result.lower},
              {"upper", result.upper},
              {"exact", result.exact},
              {"witness", result.witness},
              {"witness_matrix", std::move(witness)},
              {"restartsUsed", result.restarts_used},
              {"converged", result.converged}};
}

Json to_json(const Pi2Bound& bound) {
  return Json{{"lower", bound.lower}, {"canonical", bound.canonical}, {"sampled", bound.sampled}};
}

Json to_json(const TheoremCheckReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back(Json{{"m", r.m},
                        {"claimedLower", r.claimed_lower},
                        {"certifiedLower", r.certified_lower},
                        {"certifiedUpper", r.certified_upper},
                        {"claimedUpper", r.claimed_upper},
                        {"pass", r.pass}});
  }
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"worst_margin", c.worst_margin}, {"worst_m", c.worst_m}});
  }
  Json constants = Json::object();
  for (const auto& [k, v] : report.constants) constants[k] = v;
  return Json{{"theorem", report.theorem},
              {"instantiation", Json::array({report.instantiation.domain, report.instantiation.codomain})},
              {"sequence", report.sequence_spec},
              {"plan", Json{{"indices", report.indices},
                            {"thresholds", report.thresholds},
                            {"lookahead_index", report.lookahead_index}}},
              {"claim_form", report.claim_form},
              {"certification", report.certification},
              {"minorant_horizon", report.minorant_horizon},
              {"chord_horizon", report.chord_horizon},
              {"constantsUsed", std::move(constants)},
              {"tolerance", report.tolerance},
              {"checks", std::move(checks)},
              {"perIndex", std::move(rows)},
              {"overallPass", report.overall_pass}};
}

Json to_json(const PropOptimalReport& report) {
  Json curve = Json::array();
  for (const auto& r : report.curve) {
    curve.push_back(Json{{"k", r.k}, {"sqrt_k_x", r.x_scaled}, {"sqrt_k_y", r.y_scaled}, {"k_h", r.h_scaled}});
  }
  return Json{{"theorem", "prop-optimal"},
              {"sequence", report.sequence_spec},
              {"plan", Json{{"indices", report.indices}}},
              {"k_max", report.k_max},
              {"epsilon", report.epsilon},
              {"kg_constant", report.kg},
              {"k0", report.k0 ? Json(*report.k0) : Json(nullptr)},
              {"monotone_beyond_k0", report.monotone_beyond_k0},
              {"diagnostic", report.diagnostic},
              {"curve", std::move(curve)},
              {"overallPass", report.pass}};
}

Json to_json(const PropSecondReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back(Json{{"dim", r.dim},
                        {"norm", r.norm},
                        {"second_row_norm", r.second_row},
                        {"c2_upper", r.c2_upper},
                        {"gap", r.gap},
                        {"resamples", r.resamples},
                        {"pass", r.pass}});
  }
  return Json{{"theorem", "prop-second"},
              {"max_dim", report.max_dim},
              {"trials", report.trials},
              {"gap_min", report.gap_min},
              {"delta", report.delta},
              {"seed", report.seed},
              {"min_gap", report.min_gap},
              {"perTrial", std::move(rows)},
              {"overallPass", report.pass}};
}

Json to_json(const PerturbedProjection& result) {
  return Json{{"rank", result.rank},
              {"restricted_norm", result.restricted_norm},
              {"p_norm", result.p_norm},
              {"distance", result.distance},
              {"bound", result.bound},
              {"idempotence_residual", result.idempotence_residual},
              {"kernel_residual", result.kernel_residual},
              {"range_residual", result.range_residual},
              {"auerbach_pairing_error", result.basis.pairing_error},
              {"auerbach_norm_error", result.basis.norm_error}};
}

std::string minorant_csv(const DecaySequence& seq, const ConvexDecaySequence& minorant) {
  std::ostringstream os;
  os << "k,alpha_k,beta_k,floor_k\n";
  for (std::size_t k = 1; k <= minorant.horizon; ++k) {
    const double floor = std::min(seq(k) / 2.0, seq(2 * k - 1));
    os << k << ',' << format_double(seq(k)) << ',' << format_double(minorant(k)) << ',' << format_double(floor)
       << '\n';
  }
  return os.str();
}

std::string snumber_csv(const SNumberReport& report) {
  std::ostringstream os;
  os << "m,scale,lower,upper,exact\n";
  for (const auto& r : report.rows) {
    os << r.m << ',' << to_string(report.scale) << ',' << format_double(r.lower) << ',' << format_double(r.upper)
       << ',' << (r.exact ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string report_csv(const TheoremCheckReport& report) {
  std::ostringstream os;
  os << "m,claimed_lower,certified_lower,certified_upper,claimed_upper,pass\n";
  for (const auto& r : report.rows) {
    os << r.m << ',' << format_double(r.claimed_lower) << ',' << format_double(r.certified_lower) << ','
       << format_double(r.certified_upper) << ',' << format_double(r.claimed_upper) << ','
       << (r.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string report_csv(const PropOptimalReport& report) {
  std::ostringstream os;
  os << "k,sqrt_k_x,sqrt_k_y,k_h\n";
  for (const auto& r : report.curve) {
    os << r.k << ',' << format_double(r.x_scaled) << ',' << format_double(r.y_scaled) << ','
       << format_double(r.h_scaled) << '\n';
  }
  return os.str();
}

std::string report_csv(const PropSecondReport& report) {
  std::ostringstream os;
  os << "trial,dim,norm,second_row_norm,c2_upper,gap,pass\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    os << i + 1 << ',' << r.dim << ',' << format_double(r.norm) << ',' << format_double(r.second_row) << ','
       << format_double(r.c2_upper) << ',' << format_double(r.gap) << ',' << (r.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string plot_data(const TheoremCheckReport& report) {
  std::ostringstream os;
  os << "# m claimed_lower certified_lower certified_upper claimed_upper\n";
  for (const auto& r : report.rows) {
    os << r.m << ' ' << format_double(r.claimed_lower) << ' ' << format_double(r.certified_lower) << ' '
       << format_double(r.certified_upper) << ' ' << format_double(r.claimed_upper) << '\n';
  }
  return os.str();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

void write_json(const std::string& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

void emit_report(const TheoremCheckReport& report, const Json& provenance, const ReportPaths& paths) {
  if (report.rows.empty()) throw InvalidInput("refusing to emit a report without rows");
  if (paths.json) {
    Json doc = to_json(report);
    doc["provenance"] = provenance;
    write_json(*paths.json, doc);
  }
  if (paths.csv) write_text(*paths.csv, report_csv(report));
  if (paths.plot) write_text(*paths.plot, plot_data(report));
}

}  // namespace snum
