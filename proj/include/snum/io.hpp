#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "snum/operators.hpp"
#include "snum/oracle.hpp"
#include "snum/snumbers.hpp"
#include "snum/verify.hpp"

namespace snum {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

// Shortest round-trip decimal form; identical across runs.
std::string format_double(double v);

Json norm_json(Norm p);
Norm norm_from_json(const Json& j, const std::string& field);

Json to_json(const TaggedMatrix& m);
TaggedMatrix matrix_from_json(const Json& j);
TaggedMatrix load_matrix(const std::string& path);

Json to_json(const BlockIndexPlan& plan);
Json to_json(const BlockOperator& op);
Json to_json(const SNumberReport& report);
Json to_json(const OracleResult& result);
Json to_json(const Pi2Bound& bound);
Json to_json(const TheoremCheckReport& report);
Json to_json(const PropOptimalReport& report);
Json to_json(const PropSecondReport& report);
Json to_json(const PerturbedProjection& result);

std::string minorant_csv(const DecaySequence& seq, const ConvexDecaySequence& minorant);
std::string snumber_csv(const SNumberReport& report);
std::string report_csv(const TheoremCheckReport& report);
std::string report_csv(const PropOptimalReport& report);
std::string report_csv(const PropSecondReport& report);
// Whitespace-separated columns: m claimed_lower certified_lower certified_upper claimed_upper.
std::string plot_data(const TheoremCheckReport& report);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const Json& doc);

struct ReportPaths {
  std::optional<std::string> json;
  std::optional<std::string> csv;
  std::optional<std::string> plot;
};

// Writes the requested report files; an empty report is rejected.
void emit_report(const TheoremCheckReport& report, const Json& provenance, const ReportPaths& paths);

}  // namespace snum
